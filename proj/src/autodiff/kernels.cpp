#include "rill/autodiff/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "rill/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rill::kernels {
namespace {

constexpr std::size_t kParallelWork = 1 << 15;

void check_mm(const Matrix& a, const Matrix& b, Matrix& c, std::size_t m, std::size_t k1,
              std::size_t k2, std::size_t n) {
  (void)a;
  (void)b;
  if (k1 != k2) throw ShapeError("matmul inner dimensions differ");
  if (c.rows() != m || c.cols() != n) c = Matrix(m, n);
}

// One output row of A*B. The k-outer/j-inner order keeps access contiguous
// and fixes the summation order per element.
inline void mm_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
  auto out = c.row(i);
  std::fill(out.begin(), out.end(), 0.0);
  const auto arow = a.row(i);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const double aik = arow[k];
    if (aik == 0.0) continue;
    const auto brow = b.row(k);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += aik * brow[j];
  }
}

// Row i of A^T*B, i.e. column i of A against B.
inline void mm_tn_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
  auto out = c.row(i);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double aki = a(k, i);
    if (aki == 0.0) continue;
    const auto brow = b.row(k);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += aki * brow[j];
  }
}

inline void mm_nt_row(const Matrix& a, const Matrix& b, Matrix& c, std::size_t i) {
  const auto arow = a.row(i);
  for (std::size_t j = 0; j < b.rows(); ++j) {
    const auto brow = b.row(j);
    double acc = 0.0;
    for (std::size_t k = 0; k < arow.size(); ++k) acc += arow[k] * brow[k];
    c(i, j) = acc;
  }
}

inline void softmax_row(const Matrix& in, Matrix& out, std::size_t i) {
  const auto x = in.row(i);
  auto y = out.row(i);
  const double mx = *std::max_element(x.begin(), x.end());
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    y[j] = std::exp(x[j] - mx);
    total += y[j];
  }
  for (double& v : y) v /= total;
}

}  // namespace

void matmul_serial(const Matrix& a, const Matrix& b, Matrix& c) {
  check_mm(a, b, c, a.rows(), a.cols(), b.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) mm_row(a, b, c, i);
}

void matmul_parallel(const Matrix& a, const Matrix& b, Matrix& c) {
  check_mm(a, b, c, a.rows(), a.cols(), b.rows(), b.cols());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) mm_row(a, b, c, static_cast<std::size_t>(i));
}

void matmul_tn_serial(const Matrix& a, const Matrix& b, Matrix& c) {
  check_mm(a, b, c, a.cols(), a.rows(), b.rows(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) mm_tn_row(a, b, c, i);
}

void matmul_tn_parallel(const Matrix& a, const Matrix& b, Matrix& c) {
  check_mm(a, b, c, a.cols(), a.rows(), b.rows(), b.cols());
  const auto rows = static_cast<std::ptrdiff_t>(a.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) mm_tn_row(a, b, c, static_cast<std::size_t>(i));
}

void matmul_nt_serial(const Matrix& a, const Matrix& b, Matrix& c) {
  check_mm(a, b, c, a.rows(), a.cols(), b.cols(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) mm_nt_row(a, b, c, i);
}

void matmul_nt_parallel(const Matrix& a, const Matrix& b, Matrix& c) {
  check_mm(a, b, c, a.rows(), a.cols(), b.cols(), b.rows());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) mm_nt_row(a, b, c, static_cast<std::size_t>(i));
}

void softmax_rows_serial(const Matrix& logits, Matrix& out) {
  if (!out.same_shape(logits)) out = Matrix(logits.rows(), logits.cols());
  if (logits.cols() == 0) return;
  for (std::size_t i = 0; i < logits.rows(); ++i) softmax_row(logits, out, i);
}

void softmax_rows_parallel(const Matrix& logits, Matrix& out) {
  if (!out.same_shape(logits)) out = Matrix(logits.rows(), logits.cols());
  if (logits.cols() == 0) return;
  const auto rows = static_cast<std::ptrdiff_t>(logits.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) softmax_row(logits, out, static_cast<std::size_t>(i));
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  if (a.rows() * a.cols() * b.cols() >= kParallelWork) {
    matmul_parallel(a, b, c);
  } else {
    matmul_serial(a, b, c);
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  Matrix c(a.cols(), b.cols());
  if (a.rows() * a.cols() * b.cols() >= kParallelWork) {
    matmul_tn_parallel(a, b, c);
  } else {
    matmul_tn_serial(a, b, c);
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.rows());
  if (a.rows() * a.cols() * b.rows() >= kParallelWork) {
    matmul_nt_parallel(a, b, c);
  } else {
    matmul_nt_serial(a, b, c);
  }
  return c;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  if (logits.size() >= kParallelWork) {
    softmax_rows_parallel(logits, out);
  } else {
    softmax_rows_serial(logits, out);
  }
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace rill::kernels
