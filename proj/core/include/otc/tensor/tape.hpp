#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "otc/tensor/matrix.hpp"

namespace otc {

class Tape;

/// Handle to a matrix value recorded on a Tape. Cheap to copy; valid for the
/// lifetime of the owning tape.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }

  const Matrix& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

  /// Gradient from the most recent backward sweep; zeros if the value was
  /// not reached.
  const Matrix& grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Record of one forward evaluation. Nodes are appended in evaluation order,
/// which is a topological order, so the reverse sweep simply walks the record
/// backwards. A tape is built fresh for every forward pass.
class Tape {
 public:
  /// Propagates the gradient of `node` into the gradients of its inputs.
  using BackwardFn = std::function<void(Tape& tape, std::size_t node)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf whose gradient is tracked.
  Var variable(Matrix value);
  /// Leaf treated as a constant.
  Var constant(Matrix value);
  /// Result of an operation on previously recorded inputs. The backward
  /// function is dropped if no input requires a gradient.
  Var record(Matrix value, std::vector<std::size_t> inputs, BackwardFn backward);

  /// Reverse sweep from a 1×1 output. Clears gradients left by earlier sweeps.
  void backward(Var output);

  const Matrix& value(std::size_t node) const { return nodes_[node].value; }
  bool requires_grad(std::size_t node) const { return nodes_[node].requires_grad; }
  /// Gradient buffer, materialized as zeros on first access.
  Matrix& grad(std::size_t node);
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
  };

  std::vector<Node> nodes_;
};

inline const Matrix& Var::value() const { return tape_->value(id_); }
inline const Matrix& Var::grad() const { return tape_->grad(id_); }

}  // namespace otc
