#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mms/tensor.hpp"

namespace mms {

/// One recorded differentiable op: the output it produced and a closure that
/// routes the output's gradient into the inputs' grad buffers.
struct TapeNode {
  std::shared_ptr<TensorImpl> output;
  std::function<void()> backward;
};

/// Ordered record of executed differentiable operations. Execution order is a
/// topological order of the graph, so backward() replays nodes strictly in
/// reverse. Gradients accumulate additively: a tensor consumed by k ops
/// receives the sum of k contributions.
class Tape {
 public:
  /// Tape currently recording on this thread (nullptr if none).
  static Tape* active();

  void record(std::shared_ptr<TensorImpl> output, std::function<void()> backward);

  /// Populates grad on every requires_grad tensor reachable from loss.
  /// Leaf gradients accumulate across repeated calls without zeroing.
  void backward(const Tensor& loss);

  size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  friend class TapeScope;
  std::vector<TapeNode> nodes_;
};

/// RAII: makes a fresh tape active on this thread for the scope's lifetime.
class TapeScope {
 public:
  TapeScope();
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;
  Tape& tape() { return tape_; }

 private:
  Tape tape_;
  Tape* prev_;
};

/// RAII: disables recording (and requires_grad propagation) in the scope.
class NoGradScope {
 public:
  NoGradScope();
  ~NoGradScope();
  NoGradScope(const NoGradScope&) = delete;
  NoGradScope& operator=(const NoGradScope&) = delete;
};

/// True when a tape is active and grad mode is on.
bool grad_enabled();

}  // namespace mms
