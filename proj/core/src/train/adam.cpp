#include "otc/train/adam.hpp"

#include <cmath>
#include <string>

#include "otc/error.hpp"

namespace otc {

AdamState make_adam_state(std::span<const Matrix* const> params, double lr) {
  AdamState state;
  state.lr = lr;
  for (const Matrix* p : params) {
    state.first_moment.emplace_back(p->rows(), p->cols());
    state.second_moment.emplace_back(p->rows(), p->cols());
  }
  return state;
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw ContractError("adam_step: " + std::to_string(params.size()) + " parameters, " +
                        std::to_string(grads.size()) + " gradients, " +
                        std::to_string(state.first_moment.size()) + " moment slots");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(grads[i]) || !params[i]->same_shape(state.first_moment[i])) {
      throw ContractError("adam_step: parameter " + std::to_string(i) + " has shape " +
                          params[i]->shape_string() + " but gradient " + grads[i].shape_string());
    }
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    Matrix& m = state.first_moment[i];
    Matrix& v = state.second_moment[i];
    const Matrix& g = grads[i];
    for (std::size_t e = 0; e < p.size(); ++e) {
      m[e] = state.beta1 * m[e] + (1.0 - state.beta1) * g[e];
      v[e] = state.beta2 * v[e] + (1.0 - state.beta2) * g[e] * g[e];
      const double m_hat = m[e] / c1;
      const double v_hat = v[e] / c2;
      p[e] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

double learning_rate_at(int epoch, double base, double decay, int every) {
  if (epoch < 0 || every < 1) throw ContractError("learning_rate_at: invalid epoch schedule");
  return base * std::pow(decay, static_cast<double>(epoch / every));
}

}  // namespace otc
