#include "otc/tensor/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "otc/error.hpp"

namespace otc {
namespace {

Tape& same_tape(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw ContractError("operands recorded on different tapes");
  return a.tape();
}

void require_same_shape(const char* op, Var a, Var b) {
  if (!a.value().same_shape(b.value())) {
    throw DimensionError(std::string(op) + ": shape mismatch " + a.value().shape_string() +
                         " vs " + b.value().shape_string());
  }
}

void require_nonempty(const char* op, Var a) {
  if (a.value().empty()) throw DomainError(std::string(op) + ": empty operand");
}

std::string index_string(const Matrix& m, std::size_t flat) {
  return "(" + std::to_string(flat / m.cols()) + "," + std::to_string(flat % m.cols()) + ")";
}

// Records an entrywise unary op y = f(x) with dy/dx computed from (x, y).
template <typename F, typename DF>
Var unary(Var a, F f, DF df) {
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {ia}, [ia, df](Tape& t, std::size_t self) {
    if (!t.requires_grad(ia)) return;
    const Matrix& g = t.grad(self);
    const Matrix& xv = t.value(ia);
    const Matrix& yv = t.value(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * df(xv[i], yv[i]);
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: cannot multiply " + a.value().shape_string() + " by " +
                         b.value().shape_string());
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(multiply(a.value(), b.value()), {ia, ib}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (tp.requires_grad(ia)) multiply_nt_add(g, tp.value(ib), tp.grad(ia));
    if (tp.requires_grad(ib)) multiply_tn_add(tp.value(ia), g, tp.grad(ib));
  });
}

Var transpose(Var a) {
  const std::size_t ia = a.id();
  return a.tape().record(transposed(a.value()), {ia}, [ia](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) ga(j, i) += g(i, j);
  });
}

Var select_rows(Var a, std::span<const std::size_t> rows) {
  const Matrix& x = a.value();
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  Matrix y(idx.size(), x.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] >= x.rows()) {
      throw IndexError("select_rows: row " + std::to_string(idx[r]) + " out of range for " +
                       x.shape_string());
    }
    std::copy_n(x.row_span(idx[r]).begin(), x.cols(), y.row_span(r).begin());
  }
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {ia}, [ia, idx](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < g.cols(); ++c) ga(idx[r], c) += g(r, c);
  });
}

Var select_columns(Var a, std::span<const std::size_t> cols) {
  const Matrix& x = a.value();
  std::vector<std::size_t> idx(cols.begin(), cols.end());
  Matrix y(x.rows(), idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) {
    if (idx[c] >= x.cols()) {
      throw IndexError("select_columns: column " + std::to_string(idx[c]) +
                       " out of range for " + x.shape_string());
    }
    for (std::size_t r = 0; r < x.rows(); ++r) y(r, c) = x(r, idx[c]);
  }
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {ia}, [ia, idx](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t r = 0; r < g.rows(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) ga(r, idx[c]) += g(r, c);
  });
}

Var add(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape("add", a, b);
  Matrix y = a.value();
  axpy(1.0, b.value(), y);
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(y), {ia, ib}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (tp.requires_grad(ia)) axpy(1.0, g, tp.grad(ia));
    if (tp.requires_grad(ib)) axpy(1.0, g, tp.grad(ib));
  });
}

Var sub(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape("sub", a, b);
  Matrix y = a.value();
  axpy(-1.0, b.value(), y);
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(y), {ia, ib}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (tp.requires_grad(ia)) axpy(1.0, g, tp.grad(ia));
    if (tp.requires_grad(ib)) axpy(-1.0, g, tp.grad(ib));
  });
}

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape("mul", a, b);
  const Matrix& x = a.value();
  const Matrix& z = b.value();
  Matrix y(x.rows(), x.cols());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] * z[i];
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(y), {ia, ib}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (tp.requires_grad(ia)) {
      const Matrix& zv = tp.value(ib);
      Matrix& ga = tp.grad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * zv[i];
    }
    if (tp.requires_grad(ib)) {
      const Matrix& xv = tp.value(ia);
      Matrix& gb = tp.grad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * xv[i];
    }
  });
}

Var div(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape("div", a, b);
  const Matrix& x = a.value();
  const Matrix& z = b.value();
  Matrix y(x.rows(), x.cols());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(std::abs(z[i]) > kDivEpsilon)) {
      throw DomainError("div: denominator " + std::to_string(z[i]) + " at " +
                        index_string(z, i) + " is too close to zero");
    }
    y[i] = x[i] / z[i];
  }
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(std::move(y), {ia, ib}, [ia, ib](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    const Matrix& zv = tp.value(ib);
    if (tp.requires_grad(ia)) {
      Matrix& ga = tp.grad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] / zv[i];
    }
    if (tp.requires_grad(ib)) {
      const Matrix& yv = tp.value(self);
      Matrix& gb = tp.grad(ib);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i] * yv[i] / zv[i];
    }
  });
}

Var scale(Var a, double factor) {
  return unary(
      a, [factor](double x) { return factor * x; }, [factor](double, double) { return factor; });
}

Var add_constant(Var a, double c) {
  return unary(
      a, [c](double x) { return x + c; }, [](double, double) { return 1.0; });
}

Var exp(Var a) {
  return unary(
      a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var log(Var a) {
  const Matrix& x = a.value();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) {
      throw DomainError("log: non-positive entry " + std::to_string(x[i]) + " at " +
                        index_string(x, i));
    }
  }
  return unary(
      a, [](double v) { return std::log(v); }, [](double v, double) { return 1.0 / v; });
}

Var sigmoid(Var a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var square(Var a) {
  return unary(
      a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var relu(Var a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var clamp_min(Var a, double floor) {
  return unary(
      a, [floor](double x) { return x > floor ? x : floor; },
      [floor](double x, double) { return x > floor ? 1.0 : 0.0; });
}

Var power(Var a, double exponent) {
  const Matrix& x = a.value();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) {
      throw DomainError("power: negative entry " + std::to_string(x[i]) + " at " +
                        index_string(x, i));
    }
  }
  return unary(
      a, [exponent](double v) { return std::pow(v, exponent); },
      [exponent](double v, double) {
        if (v == 0.0) return exponent > 1.0 ? 0.0 : (exponent == 1.0 ? 1.0 : 0.0);
        return exponent * std::pow(v, exponent - 1.0);
      });
}

Var add_row(Var a, Var row) {
  Tape& t = same_tape(a, row);
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw DimensionError("add_row: cannot broadcast " + row.value().shape_string() + " over " +
                         a.value().shape_string());
  }
  Matrix y = a.value();
  const Matrix& r = row.value();
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) += r(0, j);
  const std::size_t ia = a.id(), ir = row.id();
  return t.record(std::move(y), {ia, ir}, [ia, ir](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    if (tp.requires_grad(ia)) axpy(1.0, g, tp.grad(ia));
    if (tp.requires_grad(ir)) {
      Matrix& gr = tp.grad(ir);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) gr(0, j) += g(i, j);
    }
  });
}

Var row_normalize_l1(Var a) {
  const Matrix& x = a.value();
  Matrix y(x.rows(), x.cols());
  std::vector<double> sums(x.rows(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (x(i, j) < 0.0) {
        throw DomainError("row_normalize_l1: negative entry " + std::to_string(x(i, j)) +
                          " at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      sums[i] += x(i, j);
    }
    if (sums[i] > kRowEpsilon) {
      for (std::size_t j = 0; j < x.cols(); ++j) y(i, j) = x(i, j) / sums[i];
    }
  }
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {ia}, [ia, sums](Tape& t, std::size_t self) {
    // y = x / s  ⇒  dx_j = (g_j − ⟨g, y⟩) / s
    const Matrix& g = t.grad(self);
    const Matrix& yv = t.value(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      if (!(sums[i] > kRowEpsilon)) continue;
      double gy = 0.0;
      for (std::size_t j = 0; j < g.cols(); ++j) gy += g(i, j) * yv(i, j);
      for (std::size_t j = 0; j < g.cols(); ++j) ga(i, j) += (g(i, j) - gy) / sums[i];
    }
  });
}

Var sum(Var a) {
  require_nonempty("sum", a);
  double s = 0.0;
  for (double v : a.value().values()) s += v;
  const std::size_t ia = a.id();
  return a.tape().record(Matrix(1, 1, s), {ia}, [ia](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    for (double& v : t.grad(ia).values()) v += g;
  });
}

Var row_sum(Var a) {
  require_nonempty("row_sum", a);
  const Matrix& x = a.value();
  Matrix y(x.rows(), 1);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) y(i, 0) += x(i, j);
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {ia}, [ia](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (std::size_t j = 0; j < ga.cols(); ++j) ga(i, j) += g(i, 0);
  });
}

Var column_mean(Var a) {
  require_nonempty("column_mean", a);
  const Matrix& x = a.value();
  const double inv = 1.0 / static_cast<double>(x.rows());
  Matrix y(1, x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) y(0, j) += x(i, j);
  for (double& v : y.values()) v *= inv;
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {ia}, [ia, inv](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (std::size_t j = 0; j < ga.cols(); ++j) ga(i, j) += g(0, j) * inv;
  });
}

Var column_max(Var a) {
  require_nonempty("column_max", a);
  const Matrix& x = a.value();
  Matrix y(1, x.cols());
  std::vector<std::size_t> argmax(x.cols(), 0);
  for (std::size_t j = 0; j < x.cols(); ++j) {
    y(0, j) = x(0, j);
    for (std::size_t i = 1; i < x.rows(); ++i) {
      if (x(i, j) > y(0, j)) {
        y(0, j) = x(i, j);
        argmax[j] = i;
      }
    }
  }
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {ia}, [ia, argmax](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t j = 0; j < argmax.size(); ++j) ga(argmax[j], j) += g(0, j);
  });
}

Var inner_product(Var a, Var b) {
  Tape& t = same_tape(a, b);
  require_same_shape("inner_product", a, b);
  require_nonempty("inner_product", a);
  const Matrix& x = a.value();
  const Matrix& z = b.value();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * z[i];
  const std::size_t ia = a.id(), ib = b.id();
  return t.record(Matrix(1, 1, s), {ia, ib}, [ia, ib](Tape& tp, std::size_t self) {
    const double g = tp.grad(self)[0];
    if (tp.requires_grad(ia)) axpy(g, tp.value(ib), tp.grad(ia));
    if (tp.requires_grad(ib)) axpy(g, tp.value(ia), tp.grad(ib));
  });
}

Var pairwise_squared_distance(Var x, Var y) {
  Tape& t = same_tape(x, y);
  if (x.cols() != y.cols()) {
    throw DimensionError("pairwise_squared_distance: feature dimensions differ, " +
                         x.value().shape_string() + " vs " + y.value().shape_string());
  }
  const Matrix& xv = x.value();
  const Matrix& yv = y.value();
  const std::size_t n = xv.rows(), m = yv.rows(), d = xv.cols();
  Matrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = xv(i, k) - yv(j, k);
        acc += diff * diff;
      }
      out(i, j) = acc;
    }
  }
  const std::size_t ix = x.id(), iy = y.id();
  return t.record(std::move(out), {ix, iy}, [ix, iy](Tape& tp, std::size_t self) {
    const Matrix& g = tp.grad(self);
    const Matrix& xv = tp.value(ix);
    const Matrix& yv = tp.value(iy);
    Matrix* gx = tp.requires_grad(ix) ? &tp.grad(ix) : nullptr;
    Matrix* gy = tp.requires_grad(iy) ? &tp.grad(iy) : nullptr;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) {
        const double w = 2.0 * g(i, j);
        if (w == 0.0) continue;
        for (std::size_t k = 0; k < xv.cols(); ++k) {
          const double diff = w * (xv(i, k) - yv(j, k));
          if (gx) (*gx)(i, k) += diff;
          if (gy) (*gy)(j, k) -= diff;
        }
      }
    }
  });
}

Var softmax_cross_entropy(Var logits, std::span<const int> labels) {
  const Matrix& z = logits.value();
  if (labels.size() != z.rows()) {
    throw DimensionError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                         " labels for logits " + z.shape_string());
  }
  require_nonempty("softmax_cross_entropy", logits);
  Matrix probs(z.rows(), z.cols());
  double loss = 0.0;
  std::vector<int> lab(labels.begin(), labels.end());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    if (lab[i] < 0 || static_cast<std::size_t>(lab[i]) >= z.cols()) {
      throw IndexError("softmax_cross_entropy: label " + std::to_string(lab[i]) +
                       " out of range for " + std::to_string(z.cols()) + " classes");
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.cols(); ++j) mx = std::max(mx, z(i, j));
    double denom = 0.0;
    for (std::size_t j = 0; j < z.cols(); ++j) {
      probs(i, j) = std::exp(z(i, j) - mx);
      denom += probs(i, j);
    }
    for (std::size_t j = 0; j < z.cols(); ++j) probs(i, j) /= denom;
    loss -= z(i, lab[i]) - mx - std::log(denom);
  }
  const double inv = 1.0 / static_cast<double>(z.rows());
  const std::size_t il = logits.id();
  return logits.tape().record(
      Matrix(1, 1, loss * inv), {il},
      [il, inv, lab = std::move(lab), probs = std::move(probs)](Tape& t, std::size_t self) {
        const double g = t.grad(self)[0] * inv;
        Matrix& gl = t.grad(il);
        for (std::size_t i = 0; i < probs.rows(); ++i) {
          for (std::size_t j = 0; j < probs.cols(); ++j) gl(i, j) += g * probs(i, j);
          gl(i, static_cast<std::size_t>(lab[i])) -= g;
        }
      });
}

}  // namespace otc
