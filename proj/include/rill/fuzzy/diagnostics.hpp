#pragma once

#include <ostream>
#include <utility>
#include <vector>

#include "rill/fuzzy/operator.hpp"

// Numeric checks of the bias-related properties of an implication
// likelihood. Partial derivatives come from the autodiff tape, evaluated on
// a grid with x at cell centres ((i + 0.5) / n) and y offset by a quarter
// cell ((j + 0.25) / n) so that no grid point sits on the diagonal x == y.
namespace rill::fuzzy {

struct PartialDerivatives {
  double value, d_dx, d_dy;
};

PartialDerivatives partials(const FuzzyOperator& op, double x, double y);

struct ConfidenceMonotonicReport {
  /// Both clauses hold strictly at every checked grid point.
  bool strict = true;
  /// Grid points (x, y) where one of the clauses fails.
  std::vector<std::pair<double, double>> violating_points;
};

/// Checks, for the given delta in (0, 1]:
///  - dI/dx < 0 for every y < delta (I decreasing in the premise), and
///  - dI/dy > 0 for every x > 1 - delta (I increasing in the consequent).
/// `grid` must be >= 10.
ConfidenceMonotonicReport check_confidence_monotonic(const FuzzyOperator& op, double delta,
                                                     int grid);

struct ImplicationBiasReport {
  /// Largest delta = k / grid such that dI/dx < 0 at every grid point in (0, delta)^2.
  double max_strict_delta = 0.0;
  /// (delta, fraction of grid points in (0, delta)^2 with dI/dx < 0), k = 1..grid.
  std::vector<std::pair<double, double>> biased_fraction;

  double fraction_at(double delta) const;
};

ImplicationBiasReport check_implication_biased(const FuzzyOperator& op, int grid);

struct ScanRow {
  double x, y, value, d_dx, d_dy;
};

/// Full grid scan of I and its partials.
std::vector<ScanRow> operator_scan(const FuzzyOperator& op, int grid);

/// CSV with header x,y,I,dI_dx,dI_dy.
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

}  // namespace rill::fuzzy
