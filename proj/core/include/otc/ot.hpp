#pragma once

#include <cstddef>
#include <functional>

#include "otc/tensor/tape.hpp"

namespace otc {

/// Entropic transport between n source atoms and m target atoms.
struct TransportProblem {
  Var cost;        // n×m, nonnegative
  Matrix source;   // n×1 marginal a
  Matrix target;   // m×1 marginal b
  double gamma = 1.0;
  int steps = 5;   // Sinkhorn rounds; one round updates u then v
};

struct TransportPlan {
  Var plan;  // diag(u)·K·diag(v)
  Var u;
  Var v;
  Var kernel;
};

/// Called after every Sinkhorn round with the current plan diag(u)·K·diag(v).
using SinkhornObserver = std::function<void(int step, const Matrix& plan)>;

/// Uniform n×1 probability vector.
Matrix uniform_marginal(std::size_t n);

/// M_ij = ‖x_i − y_j‖₂^p. For p = 2 the squared distance is used directly.
Var cost_matrix(Var features, Var coarse_features, double p = 2.0);

/// K = max(exp(−M/γ), kDivEpsilon).
Var gibbs_kernel(Var cost, double gamma);

/// Exactly `steps` rounds of u ← a ⊘ (Kv), v ← b ⊘ (Kᵀu) from v⁰ = 1.
/// When some M_ij/γ is large enough for exp(−M_ij/γ) to hit the kernel floor,
/// the same rounds run on log u and log v instead; `u` and `v` may then
/// overflow while the plan stays exact. Throws NumericalError when a
/// denominator falls below kDivEpsilon.
TransportPlan sinkhorn_k_steps(const TransportProblem& problem,
                               const SinkhornObserver& observer = {});

/// E(P) = −Σ P_ij (log P_ij − 1). Requires P > 0.
Var entropy(Var plan);

/// W = ⟨P, M⟩ − γ E(P) at the k-step plan.
Var ot_distance(const TransportProblem& problem);

struct ExactTransport {
  Matrix plan;
  double cost = 0.0;
};

/// Unregularized optimum of ⟨P, M⟩ over the transport polytope, solved exactly
/// by successive shortest paths. Intended for verification on small problems
/// (n·m ≤ 64); larger ones throw ContractError.
ExactTransport lp_exact_ot(const Matrix& cost, const Matrix& source, const Matrix& target);

}  // namespace otc
