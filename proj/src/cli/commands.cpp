#include "common.hpp"
#include "confcoord/charts/chart.hpp"
#include "confcoord/charts/gauge.hpp"
#include "confcoord/charts/refinement.hpp"
#include "confcoord/conformalmaps/config.hpp"
#include "confcoord/conformalmaps/mobius.hpp"
#include "confcoord/errors.hpp"
#include "confcoord/fit.hpp"
#include "confcoord/lorentz/wave_chart.hpp"
#include "confcoord/probes/probes.hpp"
#include "confcoord/tensorcalc/expression.hpp"

#include <algorithm>
#include <cmath>

namespace confcoord::cli {

using jets::Point;
using tensorcalc::ScalarFn;
using detail::chart_params;
using detail::point_key;
using detail::scenario_metric;
using detail::Stopwatch;
using detail::stream_seed;

namespace {

const char* kGaugeAnchor = "Gamma_a(g~) = 2 d_a log f";
const char* kNormalizedAnchor = "Gamma_a(g^) = 2 d_a log(|g~|^{(n-2)/(4n)} f)";
const char* kDiscreteAnchor = "Delta_{f^{p-2} g} Z^k = 0";
const char* kStepAnchor = "g^ab d_a Gamma_b - (n-2)/(2(n-1)) R - 1/2 Gamma^a Gamma_a = 0";

void add_gauge_checks(Report& r, const charts::GaugeResiduals& gr, const Config& c, double ms)
{
    const double gauge = c.positive("tolerance.gauge", 0.1);
    r.checks.push_back(make_check("gauge-r1", kGaugeAnchor, gr.r1, Relation::AtMost, gauge, ms));
    r.checks.push_back(make_check("gauge-r2", kDiscreteAnchor, gr.r2, Relation::AtMost,
                                  c.positive("tolerance.discrete", 1e-8), ms));
    r.checks.push_back(make_check("gauge-r3", kNormalizedAnchor, gr.r3, Relation::AtMost, gauge, ms));
    r.checks.push_back(make_check("gauge-r4", kStepAnchor, gr.r4, Relation::AtMost, gauge, ms));
}

Table chart_table(const charts::ChartResult& cr, const charts::GaugeResiduals& gr)
{
    return {"chart",
            {"epsilon", "h", "shrink_count", "iterations", "solver_residual", "dz_error", "r1", "r2", "r3", "r4",
             "band_nodes"},
            {{cr.epsilon, cr.h, double(cr.shrink_count), double(cr.report.iterations), cr.report.residual,
              cr.center_jacobian_error(), gr.r1, gr.r2, gr.r3, gr.r4, double(gr.band_nodes)}}};
}

double positive_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    bool ok = x.size() >= 2 && std::all_of(y.begin(), y.end(), [](double v) { return v > 0.0; });
    return ok ? loglog_slope(x, y) : std::nan("");
}

Eigen::MatrixXd sym_pair(int n, int a, int b)
{
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(a, b) = h(b, a) = 1.0;
    return h;
}

Eigen::MatrixXd diag_pair(int n, int a, int b)
{
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(a, a) = 1.0;
    h(b, b) = -1.0;
    return h;
}

std::string harmonic_expression(int n)
{
    return n == 3 ? "x1*x2 + 0.5*(x1^2 - x3^2) + x3 + 1" : "x1*x2 + 0.5*(x1^2 - x3^2) + x3*x4 + 1";
}

} // namespace

Report run_chart(const Scenario& s)
{
    const Config& c = s.config;
    auto g = scenario_metric(s);
    Point p = point_key(c, "chart.center", g.dim());
    auto params = chart_params(s);
    bool normalize = c.flag("chart.normalize", false);
    Report r;
    Stopwatch sw;
    auto cr = charts::build_interior_chart(g, p, params, normalize);
    double build = sw.ms();
    r.checks.push_back(make_check("dz-center", normalize ? "DZ(p) = A with g(p) = A^T A" : "DZ(p) = I",
                                  cr.center_jacobian_error(), Relation::AtMost, c.positive("tolerance.dz", 1e-8),
                                  build));
    r.checks.push_back(make_check("solver-residual", "L_g f = 0, Delta_{f^{p-2} g} u^k = 0", cr.report.residual,
                                  Relation::AtMost, params.solver.tolerance, build));
    sw.reset();
    auto gr = charts::gauge_residuals(cr, charts::pullback_metric(cr));
    add_gauge_checks(r, gr, c, sw.ms());
    r.tables.push_back(chart_table(cr, gr));
    return r;
}

Report run_boundary_chart(const Scenario& s)
{
    const Config& c = s.config;
    auto g = scenario_metric(s);
    const int n = g.dim();
    Point p = point_key(c, "chart.center", n);
    auto params = chart_params(s);
    Report r;
    Stopwatch sw;
    auto cr = charts::build_boundary_chart(g, p, params);
    double build = sw.ms();
    double normal = 0.0, tangential = 0.0;
    for (std::size_t i = 0; i < cr.grid.size(); ++i) {
        if (cr.grid.multi(i)[n - 1] != 0)
            continue;
        Point x = cr.grid.point(i);
        normal = std::max(normal, std::abs(cr.z[n - 1][i]));
        for (int k = 0; k + 1 < n; ++k)
            tangential = std::max(tangential, std::abs(cr.z[k][i] - (x[k] - p[k])));
    }
    const double factor = c.positive("tolerance.face_factor", 10.0);
    r.checks.push_back(make_check("face-normal", "Z^n = 0 on Gamma", normal, Relation::AtMost, 0.0, build));
    r.checks.push_back(make_check("face-tangential", "Z^k = x^k - p^k on Gamma", tangential, Relation::AtMost,
                                  factor * params.solver.tolerance, build));
    r.checks.push_back(make_check("dz-center", "DZ(p) = I", cr.center_jacobian_error(), Relation::AtMost,
                                  c.positive("tolerance.dz", 1e-8), build));
    r.checks.push_back(make_check("solver-residual", "L_g f = 0, Delta_{f^{p-2} g} u^k = 0", cr.report.residual,
                                  Relation::AtMost, params.solver.tolerance, build));
    sw.reset();
    auto gr = charts::gauge_residuals(cr, charts::pullback_metric(cr));
    add_gauge_checks(r, gr, c, sw.ms());
    r.tables.push_back(chart_table(cr, gr));
    return r;
}

Report run_converge(const Scenario& s)
{
    const Config& c = s.config;
    auto g = scenario_metric(s);
    Point p = point_key(c, "chart.center", g.dim());
    bool boundary = c.flag("chart.boundary", false);
    auto eps = c.numbers("converge.epsilons", {0.2, 0.1, 0.05});
    auto res = c.integers("converge.resolutions", {17, 33, 65});
    if (eps.size() != res.size() || eps.size() < 2)
        throw ConfigError(c.source() +
                          ": converge.epsilons and converge.resolutions need the same length of at least 2");
    std::vector<charts::RefinementLevel> levels;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || res[i] < elliptic::kMinResolution || res[i] % 2 == 0)
            throw ConfigError(c.where("converge.epsilons") + ": level " + std::to_string(i) +
                              " needs epsilon > 0 and an odd resolution >= " +
                              std::to_string(elliptic::kMinResolution));
        levels.push_back({eps[i], res[i]});
    }
    auto params = chart_params(s);
    Stopwatch sw;
    auto study = charts::chart_refinement(g, p, boundary, levels, params.solver);
    double ms = sw.ms();

    Table t{"refinement", {"epsilon", "h", "jacobian_error", "r1", "r2", "r3", "r4", "shrink_count", "iterations"}, {}};
    std::vector<double> es, dz;
    for (const auto& row : study.rows) {
        t.rows.push_back({row.epsilon, row.h, row.jacobian_error, row.residuals.r1, row.residuals.r2,
                          row.residuals.r3, row.residuals.r4, double(row.shrink_count), double(row.iterations)});
        es.push_back(row.epsilon);
        dz.push_back(row.jacobian_error);
    }
    const double slope = c.positive("tolerance.slope", 0.9);
    Report r;
    r.checks.push_back(make_check("r1-slope", "Gamma_a(g~) - 2 d_a log f = O(h)", study.slope_r1, Relation::AtLeast,
                                  slope, ms));
    r.checks.push_back(make_check("r3-slope", "Gamma_a(g^) - 2 d_a log(|g~|^{(n-2)/(4n)} f) = O(h)", study.slope_r3,
                                  Relation::AtLeast, slope, ms));
    r.checks.push_back(make_check("r4-slope", "g^ab d_a Gamma_b - (n-2)/(2(n-1)) R - 1/2 Gamma^a Gamma_a = O(h)",
                                  study.slope_r4, Relation::AtLeast, c.positive("tolerance.r4_slope", 0.7), ms));
    r.checks.push_back(make_check("jacobian-slope", "|dx^k - du_eps| < C eps", positive_slope(es, dz),
                                  Relation::AtLeast, c.positive("tolerance.jacobian_slope", 0.9), ms));
    r.tables.push_back(std::move(t));
    return r;
}

Report run_lorentz(const Scenario& s)
{
    const Config& c = s.config;
    auto g = scenario_metric(s);
    const int n = g.dim();
    Point center = point_key(c, "slab.center", n);
    const double half = c.positive("slab.half_width", 0.5);
    const double duration = c.positive("slab.duration", 0.125);
    const double ratio = c.positive("slab.ratio", lorentz::kMaxStepRatio);
    const int resolution = static_cast<int>(c.integer("slab.resolution", 33));
    std::vector<int> refine;
    if (c.text("slab.refine", "") != "none")
        refine = c.integers("slab.refine", {17, 33, 65});

    Report r;
    Stopwatch sw;
    auto slab = lorentz::SlabChart::make(n, center, half, resolution, duration, ratio);
    auto cr = lorentz::build_wave_chart(g, slab);
    double ms = sw.ms();
    r.checks.push_back(make_check("dz-surface", "DZ|_S = I", cr.dz_error, Relation::AtMost,
                                  c.positive("tolerance.dz", 1e-8), ms));
    r.checks.push_back(make_check("gauge-residual", "Gamma_a(g~) = 2 d_a log f", cr.gauge_residual, Relation::AtMost,
                                  c.positive("tolerance.gauge", 0.1), ms));
    if (c.require("metric") == "minkowski") {
        double dev = cr.dz_error;
        for (int m = 0; m <= cr.slab.steps; ++m)
            for (std::size_t i = 0; i < cr.slab.space.size(); ++i) {
                if (!cr.f.in_guard(m, i))
                    continue;
                Point x = cr.slab.point(m, i);
                for (int k = 0; k < n; ++k)
                    dev = std::max(dev, std::abs(cr.z(k, m, i) - (x[k] - cr.center[k])));
            }
        r.checks.push_back(make_check("minkowski-exact", "Z^k = x^k - p^k and DZ|_S = I for the flat slab", dev,
                                      Relation::AtMost, c.positive("tolerance.exact", 1e-12), ms));
    }
    r.tables.push_back({"surface",
                        {"h", "dt", "steps", "halvings", "max_speed", "min_f", "dz_error", "dz_error_one_sided",
                         "gauge_residual", "gauge_nodes"},
                        {{cr.slab.h(), cr.slab.dt, double(cr.slab.steps), double(cr.halvings), cr.max_speed,
                          cr.min_f, cr.dz_error, cr.dz_error_one_sided, cr.gauge_residual,
                          double(cr.gauge_nodes)}}});
    if (!refine.empty()) {
        if (refine.size() < 2)
            throw ConfigError(c.where("slab.refine") + ": refinement needs at least two resolutions");
        sw.reset();
        auto study = lorentz::wave_refinement(g, center, half, duration, refine, ratio);
        double rms = sw.ms();
        double dz = 0.0;
        Table t{"wave-refinement", {"h", "dt", "gauge_residual", "dz_error", "dz_error_one_sided"}, {}};
        for (const auto& row : study.rows) {
            t.rows.push_back({row.h, row.dt, row.gauge_residual, row.dz_error, row.dz_error_one_sided});
            dz = std::max(dz, row.dz_error);
        }
        r.checks.push_back(make_check("gauge-slope", "Gamma_a(g~) - 2 d_a log f = O(h) on the slab", study.slope,
                                      Relation::AtLeast, c.positive("tolerance.wave_slope", 0.8), rms));
        r.checks.push_back(make_check("dz-surface-refined", "DZ|_S = I", dz, Relation::AtMost,
                                      c.positive("tolerance.dz", 1e-8), rms));
        r.tables.push_back(std::move(t));
    }
    return r;
}

Report run_probe(const Scenario& s)
{
    const Config& c = s.config;
    const double k = c.positive("probe.k", 8.0);
    const double eps = c.positive("probe.epsilon", 1e-4);
    const double symbol_tol = c.positive("tolerance.symbol", 1e-5);
    const double doubling_tol = c.positive("tolerance.doubling", 1e-4);
    Report r;
    Stopwatch sw;

    const Eigen::VectorXd xi4 = Eigen::VectorXd::Unit(4, 0);
    double bach_err = 0.0, bach_dbl = 0.0;
    Table bach{"bach-symbol", {"direction", "k", "ratio", "expected_ratio", "relative_error"}, {}};
    int dir = 0;
    for (const auto& h : {sym_pair(4, 1, 2), diag_pair(4, 1, 2)}) {
        auto a = probes::tt_symbol_probe_bach(xi4, h, k, eps);
        auto b = probes::tt_symbol_probe_bach(xi4, h, 2.0 * k, eps);
        bach_err = std::max(bach_err, a.relative_error);
        bach_dbl = std::max(bach_dbl, std::abs(a.ratio - b.ratio) / std::abs(a.ratio));
        bach.rows.push_back({double(dir), k, a.ratio, -0.5, a.relative_error});
        bach.rows.push_back({double(dir), 2.0 * k, b.ratio, -0.5, b.relative_error});
        ++dir;
    }
    double ms = sw.ms();
    r.checks.push_back(make_check("bach-tt-symbol", "sigma(B)(xi) h = -1/2 |xi|^4 h for TT h", bach_err,
                                  Relation::AtMost, symbol_tol, ms));
    r.checks.push_back(make_check("bach-k-doubling", "sigma(B)(xi) h independent of k", bach_dbl, Relation::AtMost,
                                  doubling_tol, ms));
    r.tables.push_back(std::move(bach));

    sw.reset();
    const Eigen::VectorXd xi3 = Eigen::VectorXd::Unit(3, 0);
    double cot_err = 0.0, cot_dbl = 0.0;
    for (const auto& h : {sym_pair(3, 1, 2), diag_pair(3, 1, 2)}) {
        auto a = probes::tt_symbol_probe_cotton(xi3, h, k, eps);
        auto b = probes::tt_symbol_probe_cotton(xi3, h, 2.0 * k, eps);
        cot_err = std::max(cot_err, a.relative_error);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < a.measured.size(); ++i) {
            diff = std::max(diff, std::abs(a.measured[i] - b.measured[i]));
            scale = std::max(scale, std::abs(a.measured[i]));
        }
        cot_dbl = std::max(cot_dbl, diff / scale);
    }
    ms = sw.ms();
    r.checks.push_back(make_check("cotton-tt-symbol",
                                  "sigma(C)(xi) h = -1/(2(n-2)) |xi|^2 (xi_a h_bc - xi_b h_ac) for TT h", cot_err,
                                  Relation::AtMost, symbol_tol, ms));
    r.checks.push_back(make_check("cotton-k-doubling", "sigma(C)(xi) h independent of k", cot_dbl, Relation::AtMost,
                                  doubling_tol, ms));

    sw.reset();
    double phase = std::abs(probes::laplacian_phase_self_test(k) - probes::derivative_phase(2));
    r.checks.push_back(make_check("laplacian-phase", "d^2/dx^2 sin(kx) = -k^2 sin(kx)", phase, Relation::AtMost,
                                  c.positive("tolerance.phase", 1e-12), sw.ms()));

    auto family = probes::ricci_family();
    family.frequencies = c.numbers("probe.frequencies", family.frequencies);
    const double lead_tol = c.positive("tolerance.leading_slope", 0.1);
    const double rem_tol = c.positive("tolerance.remainder_slope", 0.2);
    for (auto target : {probes::ProbeTarget::RicciRemainder, probes::ProbeTarget::ScalarLinearization}) {
        sw.reset();
        auto fp = probes::frequency_probe(target, family);
        ms = sw.ms();
        bool ricci = target == probes::ProbeTarget::RicciRemainder;
        std::string name = ricci ? "ricci" : "scalar";
        r.checks.push_back(make_check(name + "-leading-slope",
                                      ricci ? "|leading Ricci part| ~ k for h sin(k x^1)/k"
                                            : "|linearized R| ~ k for h sin(k x^1)/k",
                                      std::abs(fp.leading_slope - 1.0), Relation::AtMost, lead_tol, ms));
        r.checks.push_back(make_check(name + "-remainder-slope",
                                      ricci ? "Ricci remainder bounded in k" : "R minus linearization bounded in k",
                                      fp.remainder_slope, Relation::AtMost, rem_tol, ms));
        Table t{name + "-frequency", {"k", "epsilon", "leading", "remainder"}, {}};
        for (const auto& row : fp.rows)
            t.rows.push_back({row.k, row.epsilon, row.leading, row.remainder});
        r.tables.push_back(std::move(t));
    }

    const auto samples = static_cast<std::size_t>(c.integer("probe.samples", 100));
    if (samples < 1)
        throw ConfigError(c.where("probe.samples") + ": needs at least one sample");
    for (int n : {3, 4}) {
        sw.reset();
        Rng rng(stream_seed(s.seed, 300 + n));
        auto inj = probes::cotton_injectivity(n, samples, rng);
        r.checks.push_back(make_check("cotton-injectivity-n" + std::to_string(n),
                                      "h -> xi_a h_bc - (1/n) xi_a tr(h) delta_bc - xi_b h_ac is injective",
                                      inj.min_singular_value, Relation::AtLeast,
                                      c.positive("tolerance.injectivity", 1e-3), sw.ms()));
    }
    return r;
}

Report run_mobius(const Scenario& s)
{
    const Config& c = s.config;
    const int n = static_cast<int>(c.integer("mobius.dim", 3));
    if (n < 3 || n > 4)
        throw ConfigError(c.where("mobius.dim") + ": dimension must be 3 or 4");
    std::vector<conformalmaps::MobiusMap> maps;
    Rng rng(stream_seed(s.seed, 400));
    if (c.has("mobius.map")) {
        nlohmann::json spec;
        try {
            spec = nlohmann::json::parse(c.require("mobius.map"));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(c.where("mobius.map") + ": " + e.what());
        }
        if (!spec.contains("dim"))
            spec["dim"] = n;
        maps.push_back(conformalmaps::mobius_from_json(spec));
        if (maps.back().dim() != n)
            throw ConfigError(c.where("mobius.map") + ": map dimension differs from mobius.dim");
    } else {
        const long count = c.integer("mobius.maps", 10);
        const long steps = c.integer("mobius.steps", 4);
        if (count < 1 || steps < 1)
            throw ConfigError(c.source() + ": mobius.maps and mobius.steps must be positive");
        bool inversion = c.flag("mobius.inversion", true);
        for (long m = 0; m < count; ++m)
            maps.push_back(conformalmaps::MobiusMap::random(n, rng, static_cast<int>(steps), inversion));
    }
    const auto points = static_cast<std::size_t>(c.integer("mobius.points", 50));
    if (points < 1)
        throw ConfigError(c.where("mobius.points") + ": needs at least one point");

    auto u = tensorcalc::parse_scalar_expression(harmonic_expression(n), n);
    std::vector<ScalarFn> coords;
    for (int a = 1; a <= n; ++a)
        coords.push_back(tensorcalc::parse_scalar_expression("x" + std::to_string(a), n));
    ScalarFn one = tensorcalc::parse_scalar_expression("1", n);

    Stopwatch sw;
    double defect = 0.0, kelvin = 0.0, pull = 0.0, quotient = 0.0;
    std::size_t skipped = 0, used = 0;
    for (const auto& map : maps) {
        std::vector<Point> good;
        for (const auto& x : conformalmaps::annulus_points(rng, n, 0.5, 2.0, points)) {
            try {
                auto v = conformalmaps::mobius_eval(map, x);
                defect = std::max(defect, conformalmaps::conformality_defect(v));
                kelvin = std::max(kelvin, std::abs(conformalmaps::kelvin_pullback_residual(map, u, x)));
                good.push_back(x);
            } catch (const SingularityError&) {
                ++skipped;
            }
        }
        used += good.size();
        if (good.empty())
            continue;
        auto pc = conformalmaps::pullback_chart_check(map, coords, one, good);
        pull = std::max({pull, pc.numerator, pc.denominator});
        quotient = std::max(quotient, pc.quotient);
    }
    double ms = sw.ms();
    Report r;
    r.checks.push_back(make_check("conformality-defect", "DF^T DF = c I", defect, Relation::AtMost,
                                  c.positive("tolerance.defect", 1e-12), ms));
    r.checks.push_back(make_check("kelvin-pullback", "L_delta(c^{(n-2)/4} F^*u) = 0 for harmonic u", kelvin,
                                  Relation::AtMost, c.positive("tolerance.kelvin", 1e-10), ms));
    const double ptol = c.positive("tolerance.pullback", 1e-10);
    r.checks.push_back(make_check("pullback-chart", "L_delta(c^{(n-2)/4} F^*u_k) = 0 and L_delta(c^{(n-2)/4} F^*v) = 0",
                                  pull, Relation::AtMost, ptol, ms));
    r.checks.push_back(make_check("pullback-quotient", "F^*(u_k / v) = (c^{(n-2)/4} F^*u_k) / (c^{(n-2)/4} F^*v)",
                                  quotient, Relation::AtMost, ptol, ms));
    r.tables.push_back({"mobius", {"maps", "points", "skipped"}, {{double(maps.size()), double(used), double(skipped)}}});
    return r;
}

} // namespace confcoord::cli
