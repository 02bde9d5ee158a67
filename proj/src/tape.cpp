#include "mms/tape.hpp"

#include "mms/error.hpp"

namespace mms {

namespace {
thread_local Tape* g_active_tape = nullptr;
thread_local int g_no_grad_depth = 0;
}  // namespace

Tape* Tape::active() {
  return g_no_grad_depth > 0 ? nullptr : g_active_tape;
}

void Tape::record(std::shared_ptr<TensorImpl> output, std::function<void()> backward) {
  nodes_.push_back(TapeNode{std::move(output), std::move(backward)});
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.numel() != 1) {
    throw ShapeError("backward() requires a scalar loss, got " +
                     (loss.defined() ? shape_str(loss.shape()) : std::string("<undefined>")));
  }
  bool on_tape = false;
  for (const auto& node : nodes_) {
    if (node.output == loss.impl()) {
      on_tape = true;
      break;
    }
  }
  if (!on_tape) throw ShapeError("backward() loss is not an output recorded on this tape");

  // Intermediate grads are scratch state of this replay; leaf grads persist
  // so repeated backward calls accumulate.
  for (auto& node : nodes_) node.output->grad.clear();
  loss.impl()->grad.assign(1, 1.0f);

  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    if (it->output->grad.empty()) continue;  // nothing flowed into this op
    it->backward();
  }
}

TapeScope::TapeScope() : prev_(g_active_tape) { g_active_tape = &tape_; }
TapeScope::~TapeScope() { g_active_tape = prev_; }

NoGradScope::NoGradScope() { ++g_no_grad_depth; }
NoGradScope::~NoGradScope() { --g_no_grad_depth; }

bool grad_enabled() { return Tape::active() != nullptr; }

}  // namespace mms
