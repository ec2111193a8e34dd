#include "rill/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rill/autodiff/kernels.hpp"
#include "rill/errors.hpp"

namespace rill::ad {
namespace {

struct Broadcast {
  std::size_t rows, cols;
  bool a_scalar, b_scalar;
};

Broadcast broadcast_shape(const Matrix& a, const Matrix& b) {
  if (a.same_shape(b)) return {a.rows(), a.cols(), false, false};
  if (a.is_scalar()) return {b.rows(), b.cols(), true, false};
  if (b.is_scalar()) return {a.rows(), a.cols(), false, true};
  throw ShapeError("elementwise op on mismatched shapes (" + std::to_string(a.rows()) + "x" +
                   std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                   std::to_string(b.cols()) + ")");
}

// f(x, y) forward; da/db give the local partials.
template <class F, class DA, class DB>
Var binary(const Var& a, const Var& b, F f, DA da, DB db) {
  const Matrix& av = a.value();
  const Matrix& bv = b.value();
  const Broadcast bc = broadcast_shape(av, bv);
  Matrix out(bc.rows, bc.cols);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = f(av[bc.a_scalar ? 0 : k], bv[bc.b_scalar ? 0 : k]);
  }
  return a.tape().record(std::move(out), {a.id(), b.id()}, [bc, da, db](BackwardContext& ctx) {
    const Matrix& x = ctx.input(0);
    const Matrix& y = ctx.input(1);
    const Matrix& up = ctx.upstream();
    if (ctx.wants(0)) {
      Matrix& g = ctx.grad(0);
      for (std::size_t k = 0; k < up.size(); ++k) {
        const double xv = x[bc.a_scalar ? 0 : k];
        const double yv = y[bc.b_scalar ? 0 : k];
        g[bc.a_scalar ? 0 : k] += up[k] * da(xv, yv);
      }
    }
    if (ctx.wants(1)) {
      Matrix& g = ctx.grad(1);
      for (std::size_t k = 0; k < up.size(); ++k) {
        const double xv = x[bc.a_scalar ? 0 : k];
        const double yv = y[bc.b_scalar ? 0 : k];
        g[bc.b_scalar ? 0 : k] += up[k] * db(xv, yv);
      }
    }
  });
}

// f(x) forward; df(x, fx) gives the local derivative.
template <class F, class DF>
Var unary(const Var& a, F f, DF df) {
  const Matrix& av = a.value();
  Matrix out(av.rows(), av.cols());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = f(av[k]);
  return a.tape().record(std::move(out), {a.id()}, [df](BackwardContext& ctx) {
    const Matrix& x = ctx.input(0);
    const Matrix& fx = ctx.value();
    const Matrix& up = ctx.upstream();
    Matrix& g = ctx.grad(0);
    for (std::size_t k = 0; k < up.size(); ++k) g[k] += up[k] * df(x[k], fx[k]);
  });
}

double min_abs_diff(const Matrix& a, const Matrix& b) {
  const Broadcast bc = broadcast_shape(a, b);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < bc.rows * bc.cols; ++k) {
    m = std::min(m, std::abs(a[bc.a_scalar ? 0 : k] - b[bc.b_scalar ? 0 : k]));
  }
  return m;
}

}  // namespace

Var add(const Var& a, const Var& b) {
  return binary(
      a, b, [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Var sub(const Var& a, const Var& b) {
  return binary(
      a, b, [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Var mul(const Var& a, const Var& b) {
  return binary(
      a, b, [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Var div(const Var& a, const Var& b) {
  const Matrix& bv = b.value();
  if (std::any_of(bv.data().begin(), bv.data().end(), [](double v) { return v == 0.0; })) {
    throw DomainError("division by zero");
  }
  return binary(
      a, b, [](double x, double y) { return x / y; }, [](double, double y) { return 1.0 / y; },
      [](double x, double y) { return -x / (y * y); });
}

Var neg(const Var& a) {
  return unary(a, [](double x) { return -x; }, [](double, double) { return -1.0; });
}

Var ln(const Var& a) {
  const Matrix& av = a.value();
  if (std::any_of(av.data().begin(), av.data().end(), [](double v) { return v <= 0.0; })) {
    throw DomainError("log of a non-positive value");
  }
  return unary(a, [](double x) { return std::log(x); }, [](double x, double) { return 1.0 / x; });
}

Var log2(const Var& a) {
  const Matrix& av = a.value();
  if (std::any_of(av.data().begin(), av.data().end(), [](double v) { return v <= 0.0; })) {
    throw DomainError("log of a non-positive value");
  }
  return unary(
      a, [](double x) { return std::log2(x); },
      [](double x, double) { return 1.0 / (x * std::numbers::ln2); });
}

Var exp(const Var& a) {
  return unary(a, [](double x) { return std::exp(x); }, [](double, double fx) { return fx; });
}

Var min(const Var& a, const Var& b) {
  a.tape().note_kink_margin(min_abs_diff(a.value(), b.value()));
  return binary(
      a, b, [](double x, double y) { return x <= y ? x : y; },
      [](double x, double y) { return x <= y ? 1.0 : 0.0; },
      [](double x, double y) { return x <= y ? 0.0 : 1.0; });
}

Var max(const Var& a, const Var& b) {
  a.tape().note_kink_margin(min_abs_diff(a.value(), b.value()));
  return binary(
      a, b, [](double x, double y) { return x >= y ? x : y; },
      [](double x, double y) { return x >= y ? 1.0 : 0.0; },
      [](double x, double y) { return x >= y ? 0.0 : 1.0; });
}

Var relu(const Var& a) {
  const Matrix& av = a.value();
  double margin = std::numeric_limits<double>::infinity();
  for (double v : av.data()) margin = std::min(margin, std::abs(v));
  a.tape().note_kink_margin(margin);
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var affine(const Var& a, double scale, double shift) {
  return unary(
      a, [=](double x) { return scale * x + shift; }, [=](double, double) { return scale; });
}

Var one_minus(const Var& a) { return affine(a, -1.0, 1.0); }

Var square(const Var& a) {
  return unary(a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var matmul(const Var& a, const Var& b) {
  Matrix out = kernels::matmul(a.value(), b.value());
  return a.tape().record(std::move(out), {a.id(), b.id()}, [](BackwardContext& ctx) {
    if (ctx.wants(0)) ctx.grad(0) += kernels::matmul_nt(ctx.upstream(), ctx.input(1));
    if (ctx.wants(1)) ctx.grad(1) += kernels::matmul_tn(ctx.input(0), ctx.upstream());
  });
}

Var add_row_bias(const Var& x, const Var& bias) {
  const Matrix& xv = x.value();
  const Matrix& bv = bias.value();
  if (bv.rows() != 1 || bv.cols() != xv.cols()) throw ShapeError("bias must be 1 x cols");
  Matrix out = xv;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += bv[c];
  }
  return x.tape().record(std::move(out), {x.id(), bias.id()}, [](BackwardContext& ctx) {
    const Matrix& up = ctx.upstream();
    if (ctx.wants(0)) ctx.grad(0) += up;
    if (ctx.wants(1)) {
      Matrix& g = ctx.grad(1);
      for (std::size_t r = 0; r < up.rows(); ++r) {
        const auto row = up.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) g[c] += row[c];
      }
    }
  });
}

Var softmax_rows(const Var& logits) {
  Matrix out = kernels::softmax_rows(logits.value());
  return logits.tape().record(std::move(out), {logits.id()}, [](BackwardContext& ctx) {
    const Matrix& p = ctx.value();
    const Matrix& up = ctx.upstream();
    Matrix& g = ctx.grad(0);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      const auto pr = p.row(r);
      const auto ur = up.row(r);
      double dot = 0.0;
      for (std::size_t c = 0; c < pr.size(); ++c) dot += pr[c] * ur[c];
      auto gr = g.row(r);
      for (std::size_t c = 0; c < pr.size(); ++c) gr[c] += pr[c] * (ur[c] - dot);
    }
  });
}

Var cross_entropy_rows(const Var& logits, std::span<const int> labels) {
  const Matrix& z = logits.value();
  if (labels.size() != z.rows()) throw ShapeError("one label per logits row required");
  std::size_t counted = 0;
  for (int l : labels) {
    if (l >= static_cast<int>(z.cols())) throw ShapeError("label out of range");
    if (l >= 0) ++counted;
  }
  if (counted == 0) return logits.tape().constant(0.0);

  Matrix p = kernels::softmax_rows(z);
  double total = 0.0;
  for (std::size_t r = 0; r < z.rows(); ++r) {
    if (labels[r] < 0) continue;
    const auto zr = z.row(r);
    const double mx = *std::max_element(zr.begin(), zr.end());
    double s = 0.0;
    for (double v : zr) s += std::exp(v - mx);
    total += -(zr[labels[r]] - mx - std::log(s));
  }
  const double inv = 1.0 / static_cast<double>(counted);
  std::vector<int> lab(labels.begin(), labels.end());
  return logits.tape().record(
      Matrix::scalar(total * inv), {logits.id()},
      [p = std::move(p), lab = std::move(lab), inv](BackwardContext& ctx) {
        const double up = ctx.upstream().item() * inv;
        Matrix& g = ctx.grad(0);
        for (std::size_t r = 0; r < p.rows(); ++r) {
          if (lab[r] < 0) continue;
          auto gr = g.row(r);
          const auto pr = p.row(r);
          for (std::size_t c = 0; c < pr.size(); ++c) gr[c] += up * pr[c];
          gr[lab[r]] -= up;
        }
      });
}

Var sum(const Var& a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  return a.tape().record(Matrix::scalar(s), {a.id()}, [](BackwardContext& ctx) {
    const double up = ctx.upstream().item();
    Matrix& g = ctx.grad(0);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += up;
  });
}

Var mean(const Var& a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw ShapeError("mean of an empty matrix");
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const double inv = 1.0 / static_cast<double>(n);
  return a.tape().record(Matrix::scalar(s * inv), {a.id()}, [inv](BackwardContext& ctx) {
    const double up = ctx.upstream().item() * inv;
    Matrix& g = ctx.grad(0);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += up;
  });
}

Var slice_rows(const Var& a, std::size_t begin, std::size_t count) {
  const Matrix& av = a.value();
  if (begin + count > av.rows()) throw ShapeError("row slice out of range");
  Matrix out(count, av.cols());
  std::copy_n(av.data().begin() + static_cast<std::ptrdiff_t>(begin * av.cols()),
              count * av.cols(), out.data().begin());
  return a.tape().record(std::move(out), {a.id()}, [begin](BackwardContext& ctx) {
    const Matrix& up = ctx.upstream();
    Matrix& g = ctx.grad(0);
    const std::size_t off = begin * g.cols();
    for (std::size_t k = 0; k < up.size(); ++k) g[off + k] += up[k];
  });
}

Var column(const Var& a, std::size_t col) {
  const Matrix& av = a.value();
  if (col >= av.cols()) throw ShapeError("column index out of range");
  Matrix out(av.rows(), 1);
  for (std::size_t r = 0; r < av.rows(); ++r) out[r] = av(r, col);
  return a.tape().record(std::move(out), {a.id()}, [col](BackwardContext& ctx) {
    const Matrix& up = ctx.upstream();
    Matrix& g = ctx.grad(0);
    for (std::size_t r = 0; r < up.rows(); ++r) g(r, col) += up[r];
  });
}

Var indicator_gate(const Matrix& cond, double threshold, const Var& payload, GateMode mode) {
  const Matrix& pv = payload.value();
  const bool scalar_cond = cond.is_scalar();
  if (!scalar_cond && !cond.same_shape(pv)) throw ShapeError("gate condition shape mismatch");
  std::vector<char> open(pv.size());
  Matrix out(pv.rows(), pv.cols());
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pv.size(); ++k) {
    const double c = cond[scalar_cond ? 0 : k];
    if (!std::isfinite(c)) throw DomainError("non-finite gate condition");
    margin = std::min(margin, std::abs(c - threshold));
    open[k] = mode == GateMode::Greater ? (c > threshold) : (c <= threshold);
    out[k] = open[k] ? pv[k] : 0.0;
  }
  payload.tape().note_kink_margin(margin);
  return payload.tape().record(std::move(out), {payload.id()},
                               [open = std::move(open)](BackwardContext& ctx) {
                                 const Matrix& up = ctx.upstream();
                                 Matrix& g = ctx.grad(0);
                                 for (std::size_t k = 0; k < up.size(); ++k) {
                                   if (open[k]) g[k] += up[k];
                                 }
                               });
}

Var indicator_gate(double cond, double threshold, const Var& payload, GateMode mode) {
  return indicator_gate(Matrix::scalar(cond), threshold, payload, mode);
}

Var map(const Var& a, const std::function<double(double)>& f,
        const std::function<double(double)>& df) {
  return unary(a, f, [df](double x, double) { return df(x); });
}

Var mean_of(std::span<const Var> xs) {
  if (xs.empty()) throw ShapeError("mean over an empty set");
  if (xs.size() == 1) return xs[0];
  Var acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
  // Divide rather than multiply by 1/n: a sum of values <= 1 divided by n
  // never rounds above 1.
  const double n = static_cast<double>(xs.size());
  return unary(acc, [n](double x) { return x / n; }, [n](double, double) { return 1.0 / n; });
}

Var min_of(std::span<const Var> xs) {
  if (xs.empty()) throw ShapeError("min over an empty set");
  Var acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = min(acc, xs[i]);
  return acc;
}

Var record(OpKind kind, std::span<const Var> in) {
  auto need = [&](std::size_t n) {
    if (in.size() != n) throw ShapeError("wrong number of inputs for op kind");
  };
  switch (kind) {
    case OpKind::Add: need(2); return add(in[0], in[1]);
    case OpKind::Sub: need(2); return sub(in[0], in[1]);
    case OpKind::Mul: need(2); return mul(in[0], in[1]);
    case OpKind::Div: need(2); return div(in[0], in[1]);
    case OpKind::Min: need(2); return min(in[0], in[1]);
    case OpKind::Max: need(2); return max(in[0], in[1]);
    case OpKind::MatMul: need(2); return matmul(in[0], in[1]);
    case OpKind::Neg: need(1); return neg(in[0]);
    case OpKind::Log2: need(1); return log2(in[0]);
    case OpKind::Ln: need(1); return ln(in[0]);
    case OpKind::Exp: need(1); return exp(in[0]);
    case OpKind::Relu: need(1); return relu(in[0]);
    case OpKind::SoftmaxRow: need(1); return softmax_rows(in[0]);
    case OpKind::Mean: need(1); return mean(in[0]);
    case OpKind::Sum: need(1); return sum(in[0]);
  }
  throw ShapeError("unknown op kind");
}

}  // namespace rill::ad
