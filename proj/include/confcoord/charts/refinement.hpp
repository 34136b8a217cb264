#pragma once

#include "confcoord/charts/chart.hpp"
#include "confcoord/charts/gauge.hpp"

#include <vector>

namespace confcoord::charts {

struct RefinementLevel {
    double epsilon;
    int resolution;
};

/// (ε, N) = (0.2, 17), (0.1, 33), (0.05, 65): ε halves and h/ε halves.
std::vector<RefinementLevel> default_refinement();

struct RefinementRow {
    double epsilon = 0.0;
    double h = 0.0;
    double jacobian_error = 0.0;
    GaugeResiduals residuals;
    int shrink_count = 0;
    int iterations = 0;
};

struct RefinementStudy {
    std::vector<RefinementRow> rows;
    /// Log-log slopes against h.
    double slope_r1 = 0.0;
    double slope_r3 = 0.0;
    double slope_r4 = 0.0;
    double slope_jacobian = 0.0;
};

/// Builds a chart per level (boundary chart when `boundary`), pulls back and
/// evaluates the gauge residuals.
RefinementStudy chart_refinement(const MetricSpec& g, const Point& p, bool boundary,
                                 const std::vector<RefinementLevel>& levels = default_refinement(),
                                 const elliptic::SolverOptions& solver = ChartParams{}.solver);

} // namespace confcoord::charts
