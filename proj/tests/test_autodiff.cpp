#include <doctest.h>

#include <cmath>
#include <random>

#include "rill/autodiff/gradcheck.hpp"
#include "rill/autodiff/kernels.hpp"
#include "rill/autodiff/ops.hpp"
#include "rill/errors.hpp"

using namespace rill;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(r, c);
  for (double& v : m.data()) v = u(rng);
  return m;
}

}  // namespace

TEST_CASE("scalar ops: values and partials") {
  Tape t;
  Var x = t.leaf(0.3), y = t.leaf(0.6);
  Var p = ad::mul(x, y);
  CHECK(p.item() == doctest::Approx(0.18));
  Gradients g = t.backward(p);
  CHECK(g.scalar(x) == doctest::Approx(0.6));
  CHECK(g.scalar(y) == doctest::Approx(0.3));

  Var one = t.leaf(1.0);
  Var l = ad::ln(one);
  CHECK(l.item() == 0.0);
  CHECK(t.backward(l).scalar(one) == doctest::Approx(1.0));

  Var a = t.leaf(0.2), b = t.leaf(0.9);
  Var m = ad::min(a, b);
  CHECK(m.item() == 0.2);
  Gradients gm = t.backward(m);
  CHECK(gm.scalar(a) == 1.0);
  CHECK(gm.scalar(b) == 0.0);
}

TEST_CASE("min ties go to the left argument") {
  Tape t;
  Var a = t.leaf(0.5), b = t.leaf(0.5);
  Gradients g = t.backward(ad::min(a, b));
  CHECK(g.scalar(a) == 1.0);
  CHECK(g.scalar(b) == 0.0);
  Gradients h = t.backward(ad::max(a, b));
  CHECK(h.scalar(a) == 1.0);
  CHECK(h.scalar(b) == 0.0);
}

TEST_CASE("reichenbach gradient by hand") {
  Tape t;
  Var x = t.leaf(0.3), y = t.leaf(0.6);
  Var r = ad::add(ad::one_minus(x), ad::mul(x, y));
  CHECK(r.item() == doctest::Approx(0.88));
  Gradients g = t.backward(r);
  CHECK(g.scalar(x) == doctest::Approx(-0.4));
  CHECK(g.scalar(y) == doctest::Approx(0.3));
}

TEST_CASE("constant root has zero gradients") {
  Tape t;
  Var x = t.leaf(2.0);
  Var c = t.constant(3.0);
  Gradients g = t.backward(c);
  CHECK(g.scalar(x) == 0.0);
  CHECK_FALSE(c.requires_grad());
}

TEST_CASE("domain errors") {
  Tape t;
  CHECK_THROWS_AS(ad::ln(t.leaf(0.0)), DomainError);
  CHECK_THROWS_AS(ad::log2(t.leaf(-1.0)), DomainError);
  CHECK_THROWS_AS(ad::div(t.leaf(1.0), t.leaf(0.0)), DomainError);
  CHECK_THROWS_AS(t.leaf(std::nan("")), DomainError);
}

TEST_CASE("backward needs a scalar root") {
  Tape t;
  Var m = t.leaf(Matrix(2, 2, 1.0));
  CHECK_THROWS_AS(t.backward(m), ShapeError);
}

TEST_CASE("indicator gate") {
  Tape t;
  Var l = t.leaf(0.5);
  Var on = ad::indicator_gate(l.value(), 0.25, l, ad::GateMode::Greater);
  CHECK(on.item() == 0.5);
  CHECK(t.backward(on).scalar(l) == 1.0);

  Var s = t.leaf(0.1);
  Var off = ad::indicator_gate(s.value(), 0.25, s, ad::GateMode::Greater);
  CHECK(off.item() == 0.0);
  CHECK(t.backward(off).scalar(s) == 0.0);

  Var edge = t.leaf(0.25);
  CHECK(ad::indicator_gate(edge.value(), 0.25, edge, ad::GateMode::Greater).item() == 0.0);
  CHECK(ad::indicator_gate(edge.value(), 0.25, edge, ad::GateMode::LessEqual).item() == 0.25);
}

TEST_CASE("finite differences: reichenbach loss and constants") {
  auto loss = [](Tape&, std::span<const Var> v) {
    Var s = ad::add(ad::one_minus(v[0]), ad::mul(v[0], v[1]));
    return ad::one_minus(ad::log2(ad::affine(s, 1.0, 1.0)));
  };
  const double pt[] = {0.3, 0.6};
  CHECK(ad::finite_difference_check(loss, pt, 1e-5) < 1e-6);

  auto constant = [](Tape& t, std::span<const Var>) { return t.constant(4.0); };
  CHECK(ad::finite_difference_check(constant, pt, 1e-5) == 0.0);
}

TEST_CASE("finite differences: random smooth expressions per op kind") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  using Build = std::function<Var(std::span<const Var>)>;
  const std::vector<Build> builders = {
      [](auto v) { return ad::add(v[0], v[1]); },
      [](auto v) { return ad::sub(v[0], v[1]); },
      [](auto v) { return ad::mul(v[0], v[1]); },
      [](auto v) { return ad::div(v[0], v[1]); },
      [](auto v) { return ad::neg(ad::mul(v[0], v[0])); },
      [](auto v) { return ad::log2(ad::add(v[0], v[1])); },
      [](auto v) { return ad::ln(v[0]); },
      [](auto v) { return ad::exp(ad::mul(v[0], v[1])); },
      [](auto v) { return ad::square(ad::affine(v[0], 2.0, -0.3)); },
      [](auto v) { return ad::mul(ad::exp(v[0]), ad::ln(ad::affine(v[1], 1.0, 1.0))); },
  };
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Build& b = builders[static_cast<std::size_t>(i) % builders.size()];
    const double pt[] = {u(rng), u(rng)};
    worst = std::max(worst, ad::finite_difference_check([&](Tape&, std::span<const Var> v) { return b(v); }, pt, 1e-6));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("finite differences: matrix ops and MLP cross-entropy") {
  std::mt19937_64 rng(11);
  std::vector<Matrix> pt = {random_matrix(5, 4, rng), random_matrix(4, 6, rng), random_matrix(1, 6, rng),
                            random_matrix(6, 3, rng)};
  const std::vector<int> labels = {0, 2, 1, -1, 2};
  auto f = [&](Tape&, std::span<const Var> v) {
    Var h = ad::relu(ad::add_row_bias(ad::matmul(v[0], v[1]), v[2]));
    Var logits = ad::matmul(h, v[3]);
    return ad::add(ad::cross_entropy_rows(logits, labels), ad::mean(ad::softmax_rows(logits)));
  };
  ad::GradCheckReport rep = ad::finite_difference_check(f, pt, 1e-5);
  CHECK(rep.max_rel_error < 1e-4);
}

TEST_CASE("gradcheck jitters away from kinks") {
  auto f = [](Tape&, std::span<const Var> v) { return ad::relu(v[0]); };
  ad::GradCheckReport rep = ad::finite_difference_check(f, {Matrix::scalar(0.0)}, 1e-5);
  CHECK(rep.resamples > 0);
  CHECK(rep.max_rel_error < 1e-6);
}

TEST_CASE("linearity over independent subgraphs") {
  Tape t;
  Var a = t.leaf(0.4), b = t.leaf(0.7);
  Var fa = ad::mul(a, a), fb = ad::exp(b);
  Gradients ga = t.backward(fa), gb = t.backward(fb), gs = t.backward(ad::add(fa, fb));
  CHECK(gs.scalar(a) == ga.scalar(a));
  CHECK(gs.scalar(b) == gb.scalar(b));
}

TEST_CASE("tape replay is bit-identical") {
  auto run = [] {
    Tape t;
    Var x = t.leaf(Matrix{{0.1, 0.2}, {0.3, 0.4}});
    Var y = ad::sum(ad::softmax_rows(ad::matmul(x, x)));
    Gradients g = t.backward(y);
    return std::pair{y.item(), g.of(x)};
  };
  auto r1 = run(), r2 = run();
  CHECK(r1.first == r2.first);
  CHECK(r1.second == r2.second);
}

TEST_CASE("cross entropy ignores unlabelled rows") {
  Tape t;
  Var logits = t.leaf(Matrix{{0.0, 0.0}, {5.0, -5.0}});
  const std::vector<int> none = {-1, -1};
  CHECK(ad::cross_entropy_rows(logits, none).item() == 0.0);
  const std::vector<int> first = {0, -1};
  CHECK(ad::cross_entropy_rows(logits, first).item() == doctest::Approx(std::log(2.0)));
}

TEST_CASE("serial and parallel kernels agree bitwise") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 7u, 64u, 130u}) {
    Matrix a = random_matrix(n, n + 3, rng), b = random_matrix(n + 3, n, rng);
    Matrix c1, c2;
    kernels::matmul_serial(a, b, c1);
    kernels::matmul_parallel(a, b, c2);
    CHECK(c1 == c2);
    Matrix d1, d2;
    kernels::matmul_tn_serial(a, a, d1);
    kernels::matmul_tn_parallel(a, a, d2);
    CHECK(d1 == d2);
    kernels::matmul_nt_serial(a, a, d1);
    kernels::matmul_nt_parallel(a, a, d2);
    CHECK(d1 == d2);
    Matrix s1, s2;
    kernels::softmax_rows_serial(a, s1);
    kernels::softmax_rows_parallel(a, s2);
    CHECK(s1 == s2);
  }
}

TEST_CASE("matmul against naive triple loop") {
  std::mt19937_64 rng(5);
  Matrix a = random_matrix(9, 4, rng), b = random_matrix(4, 6, rng);
  Matrix c = kernels::matmul(a, b);
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      CHECK(c(i, j) == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("softmax rows sum to one") {
  std::mt19937_64 rng(9);
  Matrix s = kernels::softmax_rows(random_matrix(20, 10, rng, -50.0, 50.0));
  for (std::size_t r = 0; r < s.rows(); ++r) {
    double total = 0.0;
    for (double v : s.row(r)) total += v;
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}
