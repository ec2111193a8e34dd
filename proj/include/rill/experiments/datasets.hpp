#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rill/autodiff/matrix.hpp"
#include "rill/logic/formula.hpp"

namespace rill::experiments {

/// Instances with one class label each.
struct LabelledSet {
  Matrix features;
  std::vector<int> labels;
  std::size_t size() const { return labels.size(); }
};

inline const std::array<std::string, 4> kColours = {"Blue", "Green", "Red", "Gray"};
inline const std::array<std::string, 4> kShapes = {"Circle", "Square", "Triangle", "Star"};

/// Cluster k carries colour kColours[k] and shape kShapes[k]
/// (Blue-Circle, Green-Square, Red-Triangle, Gray-Star).
struct FourClusterSpec {
  std::array<std::array<double, 2>, 4> centers = {{{-2.0, -2.0}, {2.0, -2.0}, {-2.0, 2.0}, {2.0, 2.0}}};
  double spread = 0.35;
  std::size_t n_per_cluster = 200;
  double train_fraction = 0.25;
};

struct FourClusterData {
  Matrix train_x;
  std::vector<int> train_shape;
  std::vector<int> train_colour;  // ground truth; only the warm-up may read it
  Matrix test_x;
  std::vector<int> test_shape;
  std::vector<int> test_colour;
};

/// Gaussian clusters, shuffled, split by train_fraction. Throws
/// SeparabilityError if a softmax-regression probe on all labels scores
/// below 0.99, and ConfigError for a non-positive size or a fraction
/// outside (0, 1).
FourClusterData gen_four_cluster(const FourClusterSpec& spec, std::uint64_t seed);

/// Training accuracy of multinomial logistic regression (full-batch
/// gradient descent) on the given labels.
double linear_probe_accuracy(const Matrix& x, const std::vector<int>& labels, int classes);

/// `classes` isotropic Gaussians in R^dim; class c is centred at
/// margin * e_c (wrapping over dimensions when classes > dim, with the
/// sign flipped on the second lap).
struct BlobSpec {
  std::size_t classes = 10;
  std::size_t dim = 16;
  double margin = 3.0;
  double spread = 1.0;
};
Matrix blob_centers(const BlobSpec& spec);
/// `labels` says which class each generated row is drawn from.
LabelledSet sample_blobs(const BlobSpec& spec, const std::vector<int>& labels, std::uint64_t seed);
LabelledSet gen_blobs(const BlobSpec& spec, std::size_t per_class, std::uint64_t seed);

/// Equation groups over a base pool of digit instances.
struct AdditionGroups {
  LabelledSet instances;                          // every slot instance, row per instance
  std::vector<std::array<std::size_t, 4>> groups;  // rows of (a, b, carry, units)
};

/// Predicate for slot k (0-based) and digit d: "D<k+1>_<d>".
std::string digit_predicate(int slot, int digit);

/// The carry and units digit of a + b.
std::array<int, 2> addition_result(int a, int b);

/// One rule per ordered pair (a, b):
///   forall x1, x2, x3, x4: D1_a(x1) & D2_b(x2) -> D3_c(x3) & D4_u(x4)
logic::KnowledgeBase addition_kb();

/// `n_groups` equations with a, b uniform over 0..9. Each slot draws an
/// unused instance of the needed digit from `pool` (with replacement once a
/// class is exhausted). Throws InsufficientDataError if some digit has
/// fewer than 4 instances.
AdditionGroups gen_addition_groups(const LabelledSet& pool, std::size_t n_groups, std::uint64_t seed);

/// Same, drawing fresh blob samples for every slot.
AdditionGroups gen_addition_groups(const BlobSpec& blobs, std::size_t n_groups, std::uint64_t seed);

/// Picks `per_class` indices of each class, seeded; classes with fewer
/// instances contribute all they have.
std::vector<std::size_t> stratified_pick(const std::vector<int>& labels, int classes, std::size_t per_class,
                                         std::uint64_t seed);

/// Two-level taxonomy: K super-classes with M sub-classes each. The
/// sub-class c = k * M + m sits at super_margin * e_k + sub_margin * e_(K+m)
/// (dimensions wrap).
struct HierarchySpec {
  std::size_t super_classes = 5;
  std::size_t sub_classes = 4;
  std::size_t dim = 16;
  double super_margin = 4.0;
  double sub_margin = 1.5;
  double spread = 1.0;
};

struct HierarchySet {
  Matrix features;
  std::vector<int> sub;
  std::vector<int> super;
};

HierarchySet gen_hierarchy(const HierarchySpec& spec, std::size_t per_class, std::uint64_t seed);

/// C_c(x) -> SC_k(x) for every sub-class, and
/// SC_k(x) -> C_(kM)(x) | ... | C_(kM+M-1)(x) for every super-class.
logic::KnowledgeBase hierarchy_kb(const HierarchySpec& spec);

}  // namespace rill::experiments
