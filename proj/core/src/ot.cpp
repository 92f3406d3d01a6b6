#include "otc/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "otc/error.hpp"
#include "otc/tensor/ops.hpp"

namespace otc {
namespace {

constexpr double kMarginalTolerance = 1e-12;
// Costs with M/γ above −log(kDivEpsilon) would reach the kernel floor.
const double kLogDomainThreshold = -std::log(kDivEpsilon);

void validate_marginal(const Matrix& mass, std::size_t expected, const char* name) {
  if (mass.rows() != expected || mass.cols() != 1) {
    throw DimensionError(std::string("transport marginal ") + name + " has shape " +
                         mass.shape_string() + ", expected (" + std::to_string(expected) + "×1)");
  }
  double total = 0.0;
  for (double w : mass.values()) {
    if (!(w > 0.0)) throw ContractError(std::string("transport marginal ") + name + " must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > kMarginalTolerance) {
    throw ContractError(std::string("transport marginal ") + name + " sums to " +
                        std::to_string(total) + ", not 1");
  }
}

void validate(const TransportProblem& problem) {
  const Matrix& m = problem.cost.value();
  validate_marginal(problem.source, m.rows(), "a");
  validate_marginal(problem.target, m.cols(), "b");
  if (!(problem.gamma > 0.0)) throw ContractError("transport regularization gamma must be positive");
  if (problem.steps < 1) throw ContractError("Sinkhorn step count must be at least 1");
  for (double c : m.values()) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("transport cost must be finite and nonnegative");
  }
}

void check_denominator(const Matrix& d, int step, const char* which) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > kDivEpsilon)) {
      throw NumericalError("Sinkhorn round " + std::to_string(step) + ": " + which + "[" +
                           std::to_string(i) + "] = " + std::to_string(d[i]) +
                           " underflowed; use a larger gamma or rescale the cost");
    }
  }
}


Matrix scaled_plan(const Matrix& u, const Matrix& kernel, const Matrix& v) {
  Matrix p = kernel;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) p(i, j) *= u(i, 0) * v(j, 0);
  return p;
}

// x + c·1ᵀ for an n×1 column c.
Var add_column_broadcast(Var x, Var c) {
  return add(x, matmul(c, x.tape().constant(Matrix::ones(1, x.cols()))));
}

// x + 1·rᵀ for an m×1 column r.
Var add_row_broadcast(Var x, Var r) { return add_row(x, transpose(r)); }

// log Σ_j exp(x_ij) per row, shifted by the row maximum.
Var row_logsumexp(Var x) {
  Matrix shift(x.rows(), 1);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto row = x.value().row_span(i);
    shift(i, 0) = *std::max_element(row.begin(), row.end());
  }
  Var s = x.tape().constant(shift);
  return add(s, log(row_sum(exp(add_column_broadcast(x, scale(s, -1.0))))));
}

// The same iterates as the scaling form, carried as log-scalings φ = log u and
// ψ = log v so that no kernel entry is clamped.
TransportPlan log_domain_sinkhorn(const TransportProblem& problem, TransportPlan out,
                                  const SinkhornObserver& observer) {
  Tape& tape = problem.cost.tape();
  Var x = scale(problem.cost, -1.0 / problem.gamma);
  Var xt = transpose(x);
  Var log_a = log(tape.constant(problem.source));
  Var log_b = log(tape.constant(problem.target));
  Var phi;
  Var psi = tape.constant(Matrix(problem.cost.cols(), 1));
  for (int step = 1; step <= problem.steps; ++step) {
    phi = sub(log_a, row_logsumexp(add_row_broadcast(x, psi)));
    psi = sub(log_b, row_logsumexp(add_row_broadcast(xt, phi)));
    if (observer) {
      observer(step, exp(add_row_broadcast(add_column_broadcast(x, phi), psi)).value());
    }
  }
  out.u = exp(phi);
  out.v = exp(psi);
  out.plan = clamp_min(exp(add_row_broadcast(add_column_broadcast(x, phi), psi)),
                       std::numeric_limits<double>::min());
  return out;
}

}  // namespace

Matrix uniform_marginal(std::size_t n) {
  if (n == 0) throw ContractError("uniform_marginal: empty support");
  return Matrix(n, 1, 1.0 / static_cast<double>(n));
}

Var cost_matrix(Var features, Var coarse_features, double p) {
  if (!(p > 0.0)) throw ContractError("cost_matrix: power must be positive");
  Var squared = pairwise_squared_distance(features, coarse_features);
  if (p == 2.0) return squared;
  return power(squared, p / 2.0);
}

Var gibbs_kernel(Var cost, double gamma) {
  if (!(gamma > 0.0)) throw ContractError("gibbs_kernel: gamma must be positive");
  return clamp_min(exp(scale(cost, -1.0 / gamma)), kDivEpsilon);
}

TransportPlan sinkhorn_k_steps(const TransportProblem& problem, const SinkhornObserver& observer) {
  validate(problem);
  TransportPlan out;
  out.kernel = gibbs_kernel(problem.cost, problem.gamma);
  const double largest = *std::max_element(problem.cost.value().values().begin(),
                                           problem.cost.value().values().end());
  if (largest / problem.gamma > kLogDomainThreshold) return log_domain_sinkhorn(problem, out, observer);

  Tape& tape = problem.cost.tape();
  Var kernel_t = transpose(out.kernel);
  Var a = tape.constant(problem.source);
  Var b = tape.constant(problem.target);
  out.v = tape.constant(Matrix::ones(problem.cost.cols(), 1));
  for (int step = 1; step <= problem.steps; ++step) {
    Var kv = matmul(out.kernel, out.v);
    check_denominator(kv.value(), step, "Kv");
    out.u = div(a, kv);
    Var ktu = matmul(kernel_t, out.u);
    check_denominator(ktu.value(), step, "Kᵀu");
    out.v = div(b, ktu);
    if (observer) observer(step, scaled_plan(out.u.value(), out.kernel.value(), out.v.value()));
  }
  out.plan = mul(out.kernel, matmul(out.u, transpose(out.v)));
  return out;
}

Var entropy(Var plan) {
  return scale(sum(mul(plan, add_constant(log(plan), -1.0))), -1.0);
}

Var ot_distance(const TransportProblem& problem) {
  const TransportPlan plan = sinkhorn_k_steps(problem);
  return sub(inner_product(plan.plan, problem.cost), scale(entropy(plan.plan), problem.gamma));
}

ExactTransport lp_exact_ot(const Matrix& cost, const Matrix& source, const Matrix& target) {
  const std::size_t n = cost.rows(), m = cost.cols();
  if (n * m > 64) {
    throw ContractError("lp_exact_ot: instance " + cost.shape_string() +
                        " exceeds the 64-cell verification limit");
  }
  if (source.size() != n || target.size() != m) {
    throw DimensionError("lp_exact_ot: marginals do not match cost " + cost.shape_string());
  }

  // Residual network: s → rows (cap a_i), rows → cols (cap ∞, cost M_ij),
  // cols → t (cap b_j). Successive shortest paths with Bellman–Ford since
  // reverse arcs carry negative cost.
  const std::size_t s = n + m, t = n + m + 1, nodes = n + m + 2;
  struct Arc {
    std::size_t to;
    std::size_t rev;
    double cap;
    double cost;
  };
  std::vector<std::vector<Arc>> g(nodes);
  auto add_arc = [&g](std::size_t u, std::size_t v, double cap, double c) {
    g[u].push_back({v, g[v].size(), cap, c});
    g[v].push_back({u, g[u].size() - 1, 0.0, -c});
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) add_arc(s, i, source[i], 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) add_arc(i, n + j, kInf, cost(i, j));
  for (std::size_t j = 0; j < m; ++j) add_arc(n + j, t, target[j], 0.0);

  double remaining = 0.0;
  for (double w : source.values()) remaining += w;
  constexpr double kFlowEps = 1e-15;
  while (remaining > kFlowEps) {
    std::vector<double> dist(nodes, kInf);
    std::vector<std::size_t> prev_node(nodes, nodes), prev_arc(nodes, 0);
    dist[s] = 0.0;
    for (std::size_t round = 0; round + 1 < nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (dist[u] == kInf) continue;
        for (std::size_t e = 0; e < g[u].size(); ++e) {
          const Arc& arc = g[u][e];
          if (arc.cap <= kFlowEps) continue;
          if (dist[u] + arc.cost < dist[arc.to] - 1e-15) {
            dist[arc.to] = dist[u] + arc.cost;
            prev_node[arc.to] = u;
            prev_arc[arc.to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[t] == kInf) break;
    double push = remaining;
    for (std::size_t v = t; v != s; v = prev_node[v]) push = std::min(push, g[prev_node[v]][prev_arc[v]].cap);
    for (std::size_t v = t; v != s; v = prev_node[v]) {
      Arc& arc = g[prev_node[v]][prev_arc[v]];
      arc.cap -= push;
      g[v][arc.rev].cap += push;
    }
    remaining -= push;
  }

  ExactTransport result;
  result.plan = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Arc& arc : g[i]) {
      if (arc.to >= n && arc.to < n + m) {
        // Flow on a forward arc equals the capacity of its reverse arc.
        const double flow = g[arc.to][arc.rev].cap;
        result.plan(i, arc.to - n) = flow;
        result.cost += flow * cost(i, arc.to - n);
      }
    }
  }
  return result;
}

}  // namespace otc
