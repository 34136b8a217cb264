#include "confcoord/charts/refinement.hpp"

#include "confcoord/fit.hpp"

namespace confcoord::charts {

std::vector<RefinementLevel> default_refinement() { return {{0.2, 17}, {0.1, 33}, {0.05, 65}}; }

RefinementStudy chart_refinement(const MetricSpec& g, const Point& p, bool boundary,
                                 const std::vector<RefinementLevel>& levels, const elliptic::SolverOptions& solver)
{
    RefinementStudy study;
    std::vector<double> h, r1, r3, r4, dz;
    for (const auto& level : levels) {
        ChartParams params;
        params.epsilon = level.epsilon;
        params.resolution = level.resolution;
        params.solver = solver;
        ChartResult cr = boundary ? build_boundary_chart(g, p, params) : build_interior_chart(g, p, params);
        RefinementRow row;
        row.epsilon = cr.epsilon;
        row.h = cr.h;
        row.jacobian_error = cr.center_jacobian_error();
        row.residuals = gauge_residuals(cr, pullback_metric(cr));
        row.shrink_count = cr.shrink_count;
        row.iterations = cr.report.iterations;
        study.rows.push_back(row);
        h.push_back(row.h);
        r1.push_back(row.residuals.r1);
        r3.push_back(row.residuals.r3);
        r4.push_back(row.residuals.r4);
        dz.push_back(row.jacobian_error);
    }
    // Residuals at rounding level carry no slope information.
    auto slope = [&](const std::vector<double>& y) {
        for (double v : y)
            if (!(v > 0.0))
                return 0.0;
        return loglog_slope(h, y);
    };
    study.slope_r1 = slope(r1);
    study.slope_r3 = slope(r3);
    study.slope_r4 = slope(r4);
    study.slope_jacobian = slope(dz);
    return study;
}

} // namespace confcoord::charts
