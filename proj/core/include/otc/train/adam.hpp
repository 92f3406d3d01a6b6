#pragma once

#include <span>
#include <vector>

#include "otc/tensor/matrix.hpp"

namespace otc {

struct AdamState {
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  long step = 0;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(std::span<const Matrix* const> params, double lr);

/// One bias-corrected Adam update using state.lr. Throws ContractError on a
/// shape mismatch.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix> grads, AdamState& state);

/// base · decay^⌊epoch / every⌋ for a zero-based epoch index.
double learning_rate_at(int epoch, double base, double decay = 0.5, int every = 50);

}  // namespace otc
