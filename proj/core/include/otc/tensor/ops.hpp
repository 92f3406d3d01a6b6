#pragma once

#include <cstddef>
#include <span>

#include "otc/tensor/tape.hpp"

namespace otc {

/// Guard for divisions: denominators with |x| ≤ kDivEpsilon are rejected.
inline constexpr double kDivEpsilon = 1e-30;
/// Rows whose sum is ≤ kRowEpsilon are left at zero by row_normalize_l1.
inline constexpr double kRowEpsilon = 1e-12;

// Linear algebra.
Var matmul(Var a, Var b);
Var transpose(Var a);
/// Rows of `a` in the given order.
Var select_rows(Var a, std::span<const std::size_t> rows);
/// Columns of `a` in the given order.
Var select_columns(Var a, std::span<const std::size_t> cols);

// Entrywise binary operations; operands must have equal shapes.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
/// Throws DomainError when some |b_ij| ≤ kDivEpsilon.
Var div(Var a, Var b);

// Entrywise unary operations.
Var scale(Var a, double factor);
Var add_constant(Var a, double c);
Var exp(Var a);
/// Throws DomainError on a non-positive entry.
Var log(Var a);
Var sigmoid(Var a);
Var square(Var a);
Var relu(Var a);
/// max(a, floor) entrywise; the gradient is zero where the floor is active.
Var clamp_min(Var a, double floor);
/// a^exponent for a ≥ 0.
Var power(Var a, double exponent);

/// 1×c row broadcast over every row of `a`.
Var add_row(Var a, Var row);

/// Divides each row by its sum; rows summing to ≤ kRowEpsilon stay zero.
/// Entries must be nonnegative.
Var row_normalize_l1(Var a);

// Reductions.
/// 1×1 sum of all entries.
Var sum(Var a);
/// r×1 vector of row sums.
Var row_sum(Var a);
/// 1×c vector of column means.
Var column_mean(Var a);
/// 1×c vector of column maxima; the subgradient goes to the first row
/// attaining the maximum.
Var column_max(Var a);
/// 1×1 Frobenius inner product ⟨a, b⟩.
Var inner_product(Var a, Var b);

/// n×m matrix of squared Euclidean distances between rows of x (n×d) and
/// rows of y (m×d).
Var pairwise_squared_distance(Var x, Var y);

/// Mean negative log-likelihood of integer class labels under row-wise
/// softmax of the logits.
Var softmax_cross_entropy(Var logits, std::span<const int> labels);

}  // namespace otc
