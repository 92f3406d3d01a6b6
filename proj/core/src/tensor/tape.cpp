#include "otc/tensor/tape.hpp"

#include <algorithm>

#include "otc/error.hpp"

namespace otc {

Var Tape::variable(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, {}, true});
  return {this, nodes_.size() - 1};
}

Var Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, {}, false});
  return {this, nodes_.size() - 1};
}

Var Tape::record(Matrix value, std::vector<std::size_t> inputs, BackwardFn backward) {
  const bool needs = std::any_of(inputs.begin(), inputs.end(),
                                 [this](std::size_t i) { return nodes_[i].requires_grad; });
  Node node{std::move(value), {}, std::move(inputs), {}, needs};
  if (needs) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return {this, nodes_.size() - 1};
}

Matrix& Tape::grad(std::size_t node) {
  Node& n = nodes_[node];
  if (!n.grad.same_shape(n.value)) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::backward(Var output) {
  if (&output.tape() != this) throw ContractError("backward: value belongs to another tape");
  if (!output.value().is_scalar()) {
    throw ContractError("backward: output must be 1×1, got " + output.value().shape_string());
  }
  for (auto& n : nodes_) n.grad = Matrix();
  grad(output.id())(0, 0) = 1.0;
  for (std::size_t i = output.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.backward || n.grad.empty()) continue;
    n.backward(*this, i);
  }
}

}  // namespace otc
