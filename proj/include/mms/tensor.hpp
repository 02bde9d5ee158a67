#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mms {

using Shape = std::vector<int64_t>;

int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

struct TensorImpl {
  Shape shape;
  std::vector<float> data;
  std::vector<float> grad;  // empty until first accumulation
  bool requires_grad = false;
  bool is_leaf = true;
};

/// Dense row-major f32 tensor. Value-semantics handle over shared storage;
/// ops produce new tensors and never mutate inputs (grad buffers excepted).
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, float value, bool requires_grad = false);
  static Tensor from_data(Shape shape, std::vector<float> data, bool requires_grad = false);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  int64_t dim() const { return static_cast<int64_t>(impl_->shape.size()); }
  int64_t numel() const { return static_cast<int64_t>(impl_->data.size()); }
  int64_t size(int64_t i) const;

  std::span<const float> data() const { return impl_->data; }
  /// Direct write access. Only init/IO code should touch this; tensors that
  /// already participate in a graph are treated as immutable.
  std::span<float> mutable_data() { return impl_->data; }

  bool requires_grad() const { return impl_->requires_grad; }
  bool is_leaf() const { return impl_->is_leaf; }
  bool has_grad() const { return !impl_->grad.empty(); }
  std::span<const float> grad() const { return impl_->grad; }
  std::span<float> grad_buffer();     // allocates zeros on first use
  void accumulate_grad(std::span<const float> g);
  void zero_grad();

  /// Value of a single-element tensor.
  float item() const;

  /// Same storage, detached from autodiff (requires_grad = false leaf).
  Tensor detach() const;

  const std::shared_ptr<TensorImpl>& impl() const { return impl_; }
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<TensorImpl> impl_;
};

}  // namespace mms
