#include "otc/tensor/finite_diff.hpp"

#include <cmath>
#include <string>

#include "otc/error.hpp"

namespace otc {
namespace {

Var run(const ScalarFunction& f, Tape& tape, std::span<const Matrix> params, bool track) {
  std::vector<Var> leaves;
  leaves.reserve(params.size());
  for (const Matrix& p : params) leaves.push_back(track ? tape.variable(p) : tape.constant(p));
  Var out = f(tape, leaves);
  if (!out.value().is_scalar()) {
    throw ContractError("finite_diff_check: function must return a 1×1 value, got " +
                        out.value().shape_string());
  }
  if (!std::isfinite(out.value()[0])) {
    throw NumericalError("finite_diff_check: function value is not finite");
  }
  return out;
}

}  // namespace

std::vector<Matrix> analytic_gradient(const ScalarFunction& f, std::span<const Matrix> params) {
  Tape tape;
  Var out = run(f, tape, params, true);
  tape.backward(out);
  std::vector<Matrix> grads;
  grads.reserve(params.size());
  // Leaves occupy the first params.size() slots of the tape.
  for (std::size_t i = 0; i < params.size(); ++i) grads.push_back(tape.grad(i));
  return grads;
}

double evaluate(const ScalarFunction& f, std::span<const Matrix> params) {
  Tape tape;
  return run(f, tape, params, false).value()[0];
}

GradientCheck finite_diff_check(const ScalarFunction& f, std::span<const Matrix> params,
                                double h) {
  if (!(h > 0.0)) throw ContractError("finite_diff_check: step must be positive");
  const std::vector<Matrix> grads = analytic_gradient(f, params);
  std::vector<Matrix> probe(params.begin(), params.end());
  GradientCheck result;
  for (std::size_t p = 0; p < probe.size(); ++p) {
    for (std::size_t e = 0; e < probe[p].size(); ++e) {
      const double saved = probe[p][e];
      probe[p][e] = saved + h;
      const double plus = evaluate(f, probe);
      probe[p][e] = saved - h;
      const double minus = evaluate(f, probe);
      probe[p][e] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      const double analytic = grads[p][e];
      const double err = std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
      if (err > result.max_relative_error || (p == 0 && e == 0)) {
        result = {err, p, e, analytic, numeric};
      }
    }
  }
  return result;
}

}  // namespace otc
