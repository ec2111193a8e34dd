// Serial reference vs OpenMP kernels. Prints one line per (kernel, size)
// with the best-of-N wall time of each and whether the outputs match bitwise.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "rill/autodiff/kernels.hpp"

using namespace rill;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.data()) v = n(rng);
  return m;
}

double best_ms(const std::function<void()>& f, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, std::size_t n, const std::function<void(Matrix&)>& serial,
         const std::function<void(Matrix&)>& parallel, std::size_t out_r, std::size_t out_c) {
  Matrix a(out_r, out_c), b(out_r, out_c);
  const int reps = n >= 512 ? 3 : 10;
  const double ts = best_ms([&] { serial(a); }, reps);
  const double tp = best_ms([&] { parallel(b); }, reps);
  std::printf("%-12s %6zu %12.3f %12.3f %8.2fx %s\n", name, n, ts, tp, ts / tp, a == b ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::mt19937_64 rng(7);
  std::printf("threads: %d\n", kernels::max_threads());
  std::printf("%-12s %6s %12s %12s %9s %s\n", "kernel", "n", "serial_ms", "parallel_ms", "speedup", "check");
  for (std::size_t n : {64, 128, 256, 512}) {
    const Matrix a = random_matrix(n, n, rng), b = random_matrix(n, n, rng);
    row("matmul", n, [&](Matrix& c) { kernels::matmul_serial(a, b, c); },
        [&](Matrix& c) { kernels::matmul_parallel(a, b, c); }, n, n);
    row("matmul_tn", n, [&](Matrix& c) { kernels::matmul_tn_serial(a, b, c); },
        [&](Matrix& c) { kernels::matmul_tn_parallel(a, b, c); }, n, n);
    row("matmul_nt", n, [&](Matrix& c) { kernels::matmul_nt_serial(a, b, c); },
        [&](Matrix& c) { kernels::matmul_nt_parallel(a, b, c); }, n, n);
    const Matrix logits = random_matrix(64 * n, 10, rng);
    row("softmax", 64 * n, [&](Matrix& c) { kernels::softmax_rows_serial(logits, c); },
        [&](Matrix& c) { kernels::softmax_rows_parallel(logits, c); }, 64 * n, 10);
  }
  return 0;
}
