#pragma once

#include "rill/autodiff/matrix.hpp"

// Dense kernels used by the tape. Every kernel has a serial reference
// and an OpenMP version. Both compute each output element with the same
// summation order, so their results are bitwise identical at any thread
// count; the serial versions exist for testing and benchmarking.
namespace rill::kernels {

// C = A * B
void matmul_serial(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_parallel(const Matrix& a, const Matrix& b, Matrix& c);

// C = A^T * B
void matmul_tn_serial(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_tn_parallel(const Matrix& a, const Matrix& b, Matrix& c);

// C = A * B^T
void matmul_nt_serial(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_nt_parallel(const Matrix& a, const Matrix& b, Matrix& c);

// Row-wise numerically stable softmax.
void softmax_rows_serial(const Matrix& logits, Matrix& out);
void softmax_rows_parallel(const Matrix& logits, Matrix& out);

// Dispatchers: pick the parallel kernel when the work is large enough.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix softmax_rows(const Matrix& logits);

/// Number of threads the parallel kernels would use (1 without OpenMP).
int max_threads();

}  // namespace rill::kernels
