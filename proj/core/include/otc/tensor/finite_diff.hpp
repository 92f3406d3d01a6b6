#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "otc/tensor/tape.hpp"

namespace otc {

/// Builds a scalar output on `tape` from leaf variables bound to `params`.
using ScalarFunction = std::function<Var(Tape& tape, std::span<const Var> params)>;

struct GradientCheck {
  double max_relative_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_entry = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Analytic gradients of `f` at `params` via a reverse sweep.
std::vector<Matrix> analytic_gradient(const ScalarFunction& f, std::span<const Matrix> params);

/// Evaluates `f` without recording gradients.
double evaluate(const ScalarFunction& f, std::span<const Matrix> params);

/// Compares the reverse-mode gradient against central differences with step
/// h. The error of one entry is |analytic − numeric| / max(1, |analytic|).
/// Throws NumericalError when f is not finite at a probe point.
GradientCheck finite_diff_check(const ScalarFunction& f, std::span<const Matrix> params,
                                double h = 1e-5);

}  // namespace otc
