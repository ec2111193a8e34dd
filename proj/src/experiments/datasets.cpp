#include "rill/experiments/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rill/errors.hpp"
#include "rill/logic/parser.hpp"

namespace rill::experiments {

double linear_probe_accuracy(const Matrix& x, const std::vector<int>& labels, int classes) {
  const std::size_t n = x.rows(), d = x.cols(), k = static_cast<std::size_t>(classes);
  Matrix w(d + 1, k);
  std::vector<double> p(k);
  for (int iter = 0; iter < 500; ++iter) {
    Matrix grad(d + 1, k);
    for (std::size_t i = 0; i < n; ++i) {
      double mx = -1e300;
      for (std::size_t c = 0; c < k; ++c) {
        double z = w(d, c);
        for (std::size_t j = 0; j < d; ++j) z += x(i, j) * w(j, c);
        p[c] = z;
        mx = std::max(mx, z);
      }
      double total = 0.0;
      for (double& v : p) total += (v = std::exp(v - mx));
      for (std::size_t c = 0; c < k; ++c) {
        const double err = p[c] / total - (static_cast<int>(c) == labels[i] ? 1.0 : 0.0);
        for (std::size_t j = 0; j < d; ++j) grad(j, c) += err * x(i, j);
        grad(d, c) += err;
      }
    }
    for (std::size_t t = 0; t < w.size(); ++t) w[t] -= 0.5 * grad[t] / static_cast<double>(n);
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double best_z = -1e300;
    for (std::size_t c = 0; c < k; ++c) {
      double z = w(d, c);
      for (std::size_t j = 0; j < d; ++j) z += x(i, j) * w(j, c);
      if (z > best_z) best_z = z, best = c;
    }
    if (static_cast<int>(best) == labels[i]) ++correct;
  }
  return n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0;
}

FourClusterData gen_four_cluster(const FourClusterSpec& spec, std::uint64_t seed) {
  if (spec.n_per_cluster == 0) throw ConfigError("clusters need at least one point");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
  if (spec.spread < 0.0) throw ConfigError("spread must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::size_t n = 4 * spec.n_per_cluster;
  Matrix x(n, 2);
  std::vector<int> cluster(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i / spec.n_per_cluster;
    cluster[i] = static_cast<int>(c);
    x(i, 0) = spec.centers[c][0] + spec.spread * noise(rng);
    x(i, 1) = spec.centers[c][1] + spec.spread * noise(rng);
  }
  if (linear_probe_accuracy(x, cluster, 4) < 0.99) {
    throw SeparabilityError("clusters are not linearly separable at spread " + std::to_string(spec.spread));
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));

  FourClusterData d;
  d.train_x = Matrix(n_train, 2);
  d.test_x = Matrix(n - n_train, 2);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    const bool train = r < n_train;
    Matrix& dst = train ? d.train_x : d.test_x;
    const std::size_t row = train ? r : r - n_train;
    dst(row, 0) = x(i, 0);
    dst(row, 1) = x(i, 1);
    (train ? d.train_shape : d.test_shape).push_back(cluster[i]);
    (train ? d.train_colour : d.test_colour).push_back(cluster[i]);
  }
  return d;
}

Matrix blob_centers(const BlobSpec& spec) {
  if (spec.classes < 2 || spec.dim == 0) throw ConfigError("blobs need at least two classes and one dimension");
  Matrix c(spec.classes, spec.dim);
  for (std::size_t k = 0; k < spec.classes; ++k) {
    const double sign = (k / spec.dim) % 2 == 0 ? 1.0 : -1.0;
    c(k, k % spec.dim) = sign * spec.margin;
  }
  return c;
}

LabelledSet sample_blobs(const BlobSpec& spec, const std::vector<int>& labels, std::uint64_t seed) {
  const Matrix centers = blob_centers(spec);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  LabelledSet out{Matrix(labels.size(), spec.dim), labels};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    if (labels[i] < 0 || c >= spec.classes) throw ConfigError("blob label out of range");
    for (std::size_t j = 0; j < spec.dim; ++j) out.features(i, j) = centers(c, j) + spec.spread * noise(rng);
  }
  return out;
}

LabelledSet gen_blobs(const BlobSpec& spec, std::size_t per_class, std::uint64_t seed) {
  std::vector<int> labels;
  for (std::size_t c = 0; c < spec.classes; ++c) labels.insert(labels.end(), per_class, static_cast<int>(c));
  return sample_blobs(spec, labels, seed);
}

std::string digit_predicate(int slot, int digit) {
  return "D" + std::to_string(slot + 1) + "_" + std::to_string(digit);
}

std::array<int, 2> addition_result(int a, int b) { return {(a + b) / 10, (a + b) % 10}; }

logic::KnowledgeBase addition_kb() {
  std::ostringstream text;
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) {
      const auto [c, u] = addition_result(a, b);
      text << "forall x1, x2, x3, x4: " << digit_predicate(0, a) << "(x1) & " << digit_predicate(1, b) << "(x2) -> "
           << digit_predicate(2, c) << "(x3) & " << digit_predicate(3, u) << "(x4)\n";
    }
  }
  return logic::parse_kb(text.str());
}

namespace {

std::vector<std::array<int, 4>> draw_equations(std::size_t n_groups, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> digit(0, 9);
  std::vector<std::array<int, 4>> eq(n_groups);
  for (auto& e : eq) {
    const int a = digit(rng), b = digit(rng);
    const auto [c, u] = addition_result(a, b);
    e = {a, b, c, u};
  }
  return eq;
}

}  // namespace

AdditionGroups gen_addition_groups(const LabelledSet& pool, std::size_t n_groups, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(10);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.labels[i] < 0 || pool.labels[i] > 9) throw ConfigError("addition pool labels must be digits");
    by_class[static_cast<std::size_t>(pool.labels[i])].push_back(i);
  }
  for (int c = 0; c < 10; ++c) {
    if (by_class[static_cast<std::size_t>(c)].size() < 4) {
      throw InsufficientDataError("digit " + std::to_string(c) + " has fewer than 4 instances");
    }
  }
  std::mt19937_64 rng(seed);
  for (auto& v : by_class) std::shuffle(v.begin(), v.end(), rng);
  std::vector<std::size_t> cursor(10, 0);
  const auto eqs = draw_equations(n_groups, rng);

  AdditionGroups out;
  out.instances.features = Matrix(4 * n_groups, pool.features.cols());
  std::size_t row = 0;
  for (const auto& e : eqs) {
    std::array<std::size_t, 4> g{};
    for (int k = 0; k < 4; ++k) {
      const auto d = static_cast<std::size_t>(e[static_cast<std::size_t>(k)]);
      auto& pos = cursor[d];
      if (pos == by_class[d].size()) {
        std::shuffle(by_class[d].begin(), by_class[d].end(), rng);
        pos = 0;
      }
      const std::size_t src = by_class[d][pos++];
      std::copy(pool.features.row(src).begin(), pool.features.row(src).end(), out.instances.features.row(row).begin());
      out.instances.labels.push_back(static_cast<int>(d));
      g[static_cast<std::size_t>(k)] = row++;
    }
    out.groups.push_back(g);
  }
  return out;
}

AdditionGroups gen_addition_groups(const BlobSpec& blobs, std::size_t n_groups, std::uint64_t seed) {
  if (blobs.classes != 10) throw ConfigError("the addition task needs 10 digit classes");
  std::mt19937_64 rng(seed);
  const auto eqs = draw_equations(n_groups, rng);
  std::vector<int> labels;
  AdditionGroups out;
  for (std::size_t g = 0; g < eqs.size(); ++g) {
    std::array<std::size_t, 4> idx{};
    for (std::size_t k = 0; k < 4; ++k) {
      idx[k] = labels.size();
      labels.push_back(eqs[g][k]);
    }
    out.groups.push_back(idx);
  }
  out.instances = sample_blobs(blobs, labels, rng());
  return out;
}

std::vector<std::size_t> stratified_pick(const std::vector<int>& labels, int classes, std::size_t per_class,
                                         std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0 && labels[i] < classes) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> out;
  for (auto& v : by_class) {
    std::shuffle(v.begin(), v.end(), rng);
    out.insert(out.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(per_class, v.size())));
  }
  std::sort(out.begin(), out.end());
  return out;
}

HierarchySet gen_hierarchy(const HierarchySpec& spec, std::size_t per_class, std::uint64_t seed) {
  if (spec.super_classes < 2 || spec.sub_classes < 1 || spec.dim == 0) {
    throw ConfigError("hierarchy needs at least two super-classes, one sub-class and one dimension");
  }
  const std::size_t classes = spec.super_classes * spec.sub_classes;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  HierarchySet out{Matrix(classes * per_class, spec.dim), {}, {}};
  std::size_t row = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    const std::size_t k = c / spec.sub_classes, m = c % spec.sub_classes;
    for (std::size_t i = 0; i < per_class; ++i, ++row) {
      for (std::size_t j = 0; j < spec.dim; ++j) out.features(row, j) = spec.spread * noise(rng);
      out.features(row, k % spec.dim) += spec.super_margin;
      out.features(row, (spec.super_classes + m) % spec.dim) += spec.sub_margin;
      // Sub-classes of one super-class differ in a second, super-specific direction too.
      out.features(row, (spec.super_classes + spec.sub_classes + k) % spec.dim) +=
          spec.sub_margin * (static_cast<double>(m) - 0.5 * static_cast<double>(spec.sub_classes - 1));
      out.sub.push_back(static_cast<int>(c));
      out.super.push_back(static_cast<int>(k));
    }
  }
  return out;
}

logic::KnowledgeBase hierarchy_kb(const HierarchySpec& spec) {
  std::ostringstream text;
  const std::size_t classes = spec.super_classes * spec.sub_classes;
  for (std::size_t c = 0; c < classes; ++c) {
    text << "forall x: C_" << c << "(x) -> SC_" << c / spec.sub_classes << "(x)\n";
  }
  for (std::size_t k = 0; k < spec.super_classes; ++k) {
    text << "forall x: SC_" << k << "(x) -> ";
    for (std::size_t m = 0; m < spec.sub_classes; ++m) {
      text << (m ? " | " : "") << "C_" << k * spec.sub_classes + m << "(x)";
    }
    text << '\n';
  }
  return logic::parse_kb(text.str());
}

}  // namespace rill::experiments
