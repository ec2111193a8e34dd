#include "rill/fuzzy/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "rill/errors.hpp"

namespace rill::fuzzy {
namespace {

double grid_x(int i, int n) { return (i + 0.5) / n; }
double grid_y(int j, int n) { return (j + 0.25) / n; }

void require_grid(int grid) {
  if (grid < 10) throw ConfigError("grid resolution must be at least 10");
}

}  // namespace

PartialDerivatives partials(const FuzzyOperator& op, double x, double y) {
  Tape tape;
  const Var vx = tape.leaf(x);
  const Var vy = tape.leaf(y);
  const Var out = implication_likelihood(op, vx, vy);
  const Gradients g = tape.backward(out);
  return {out.item(), g.scalar(vx), g.scalar(vy)};
}

ConfidenceMonotonicReport check_confidence_monotonic(const FuzzyOperator& op, double delta,
                                                     int grid) {
  require_grid(grid);
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  ConfidenceMonotonicReport report;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double x = grid_x(i, grid), y = grid_y(j, grid);
      const bool premise_clause = y < delta;
      const bool consequent_clause = x > 1.0 - delta;
      if (!premise_clause && !consequent_clause) continue;
      const PartialDerivatives p = partials(op, x, y);
      const bool ok = (!premise_clause || p.d_dx < 0.0) && (!consequent_clause || p.d_dy > 0.0);
      if (!ok) {
        report.strict = false;
        report.violating_points.emplace_back(x, y);
      }
    }
  }
  return report;
}

double ImplicationBiasReport::fraction_at(double delta) const {
  double best = 0.0;
  for (const auto& [d, f] : biased_fraction) {
    if (d <= delta + 1e-12) best = f;
  }
  return best;
}

ImplicationBiasReport check_implication_biased(const FuzzyOperator& op, int grid) {
  require_grid(grid);
  const auto n = static_cast<std::size_t>(grid);
  // prefix[i][j] = number of biased points with x index < i and y index < j.
  std::vector<std::vector<int>> prefix(n + 1, std::vector<int>(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const PartialDerivatives p = partials(op, grid_x(int(i), grid), grid_y(int(j), grid));
      const int biased = p.d_dx < 0.0 ? 1 : 0;
      prefix[i + 1][j + 1] = biased + prefix[i][j + 1] + prefix[i + 1][j] - prefix[i][j];
    }
  }

  ImplicationBiasReport report;
  bool strict_so_far = true;
  for (std::size_t k = 1; k <= n; ++k) {
    const double delta = static_cast<double>(k) / grid;
    // Points strictly inside (0, delta)^2: x = (i+0.5)/n < k/n  <=>  i < k, same for y.
    const int count = prefix[k][k];
    const double total = static_cast<double>(k * k);
    report.biased_fraction.emplace_back(delta, count / total);
    if (strict_so_far && count == static_cast<int>(k * k)) {
      report.max_strict_delta = delta;
    } else {
      strict_so_far = false;
    }
  }
  return report;
}

std::vector<ScanRow> operator_scan(const FuzzyOperator& op, int grid) {
  require_grid(grid);
  std::vector<ScanRow> rows;
  rows.reserve(static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double x = grid_x(i, grid), y = grid_y(j, grid);
      const PartialDerivatives p = partials(op, x, y);
      rows.push_back({x, y, p.value, p.d_dx, p.d_dy});
    }
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "x,y,I,dI_dx,dI_dy\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.x << ',' << r.y << ',' << r.value << ',' << r.d_dx << ',' << r.d_dy << '\n';
  }
}

}  // namespace rill::fuzzy
