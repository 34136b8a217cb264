#include "confcoord/cli/scenario.hpp"

#include "common.hpp"
#include "confcoord/elliptic/grid.hpp"
#include "confcoord/errors.hpp"
#include "confcoord/tensorcalc/zoo.hpp"

#include <algorithm>

namespace confcoord::cli {

namespace {

const std::vector<std::string> kMetricKeys = {"metric", "metric.dim", "metric.seed", "metric.amplitude",
                                              "metric.factor"};
const std::vector<std::string> kSolverKeys = {"solver.tolerance", "solver.max_iterations", "solver.max_shrinks"};

std::vector<std::string> join(std::initializer_list<std::vector<std::string>> parts)
{
    std::vector<std::string> out = {"command", "seed"};
    for (const auto& p : parts)
        out.insert(out.end(), p.begin(), p.end());
    return out;
}

std::vector<std::string> known_keys(const std::string& command)
{
    if (command == "identities")
        return join({{"tolerance.identity", "tolerance.yamabe_flat", "tolerance.bach_forms", "tolerance.kelvin",
                      "tolerance.isothermal", "tolerance.route", "tolerance.algebraic"}});
    if (command == "chart")
        return join({kMetricKeys, kSolverKeys,
                     {"chart.center", "chart.epsilon", "chart.resolution", "chart.normalize", "tolerance.dz",
                      "tolerance.gauge", "tolerance.discrete"}});
    if (command == "boundary-chart")
        return join({kMetricKeys, kSolverKeys,
                     {"chart.center", "chart.epsilon", "chart.resolution", "tolerance.dz", "tolerance.gauge",
                      "tolerance.discrete", "tolerance.face_factor"}});
    if (command == "converge")
        return join({kMetricKeys, kSolverKeys,
                     {"chart.center", "chart.boundary", "converge.epsilons", "converge.resolutions",
                      "tolerance.slope", "tolerance.r4_slope", "tolerance.jacobian_slope"}});
    if (command == "lorentz")
        return join({kMetricKeys,
                     {"slab.center", "slab.half_width", "slab.resolution", "slab.duration", "slab.ratio",
                      "slab.refine", "tolerance.dz", "tolerance.gauge", "tolerance.wave_slope", "tolerance.exact"}});
    if (command == "probe")
        return join({{"probe.k", "probe.epsilon", "probe.frequencies", "probe.samples", "tolerance.symbol",
                      "tolerance.doubling", "tolerance.leading_slope", "tolerance.remainder_slope",
                      "tolerance.injectivity", "tolerance.phase"}});
    if (command == "mobius")
        return join({{"mobius.dim", "mobius.map", "mobius.maps", "mobius.steps", "mobius.points",
                      "mobius.inversion", "tolerance.defect", "tolerance.kelvin", "tolerance.pullback"}});
    return join({});
}

bool needs_metric(const std::string& command)
{
    return command == "chart" || command == "boundary-chart" || command == "converge" || command == "lorentz";
}

} // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = {"identities", "chart",  "boundary-chart", "converge",
                                                   "lorentz",    "probe",  "mobius",         "report"};
    return names;
}

Scenario make_scenario(Config config, std::optional<std::uint64_t> seed)
{
    Scenario s;
    s.command = config.require("command");
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), s.command) == names.end())
        throw ConfigError(config.where("command") + ": unknown command `" + s.command + "`");
    config.reject_unknown(known_keys(s.command));
    s.seed = seed ? *seed : config.seed("seed", 1);
    for (const auto& [key, entry] : config.entries())
        if (key.rfind("tolerance.", 0) == 0)
            config.positive(key, 1.0);
    s.config = std::move(config);
    if (needs_metric(s.command)) {
        s.config.require("metric");
        auto g = detail::scenario_metric(s);
        bool lorentz = s.command == "lorentz";
        if ((g.signature() == tensorcalc::Signature::Lorentzian) != lorentz)
            throw ConfigError(s.config.where("metric") + ": command `" + s.command + "` needs a " +
                              (lorentz ? "Lorentzian" : "Riemannian") + " metric");
    }
    return s;
}

Scenario child_scenario(const Scenario& parent, const std::string& command,
                        const std::vector<std::pair<std::string, std::string>>& keys)
{
    Config c;
    c.set("command", command);
    for (const auto& [k, v] : keys)
        c.set(k, v);
    Scenario s = make_scenario(std::move(c), parent.seed);
    s.log = parent.log;
    return s;
}

Report run_scenario(const Scenario& s)
{
    Report r;
    if (s.command == "identities")
        r = run_identities(s);
    else if (s.command == "chart")
        r = run_chart(s);
    else if (s.command == "boundary-chart")
        r = run_boundary_chart(s);
    else if (s.command == "converge")
        r = run_converge(s);
    else if (s.command == "lorentz")
        r = run_lorentz(s);
    else if (s.command == "probe")
        r = run_probe(s);
    else if (s.command == "mobius")
        r = run_mobius(s);
    else
        r = run_full_report(s);
    r.command = s.command;
    r.scenario.clear();
    for (const auto& [k, e] : s.config.entries())
        if (k != "seed")
            r.scenario.emplace_back(k, e.value);
    r.scenario.emplace_back("seed", std::to_string(s.seed));
    std::sort(r.scenario.begin(), r.scenario.end());
    return r;
}

Report run_full_report(const Scenario& s)
{
    using Keys = std::vector<std::pair<std::string, std::string>>;
    const std::string cf = "conformally-flat";
    const std::string factor = "(1+0.3*x1)^4";
    const std::string p = "0.1,-0.2,0.05";
    struct Part {
        std::string prefix;
        std::string command;
        Keys keys;
    };
    const std::vector<Part> parts = {
        {"identities", "identities", {}},
        {"chart-flat", "chart", {{"metric", "flat"}, {"chart.resolution", "33"}}},
        {"boundary-chart-flat", "boundary-chart", {{"metric", "flat"}, {"chart.resolution", "33"}}},
        {"boundary-chart-conformally-flat",
         "boundary-chart",
         {{"metric", cf}, {"metric.factor", factor}, {"chart.center", p}, {"tolerance.dz", "0.1"}}},
        {"converge-conformally-flat", "converge", {{"metric", cf}, {"metric.factor", factor}, {"chart.center", p}}},
        {"converge-sphere", "converge", {{"metric", "sphere-stereographic"}, {"chart.center", p}}},
        {"converge-conformally-flat-boundary",
         "converge",
         {{"metric", cf}, {"metric.factor", factor}, {"chart.center", p}, {"chart.boundary", "true"}}},
        {"converge-sphere-boundary",
         "converge",
         {{"metric", "sphere-stereographic"}, {"chart.center", p}, {"chart.boundary", "true"}}},
        {"lorentz-minkowski", "lorentz", {{"metric", "minkowski"}, {"slab.refine", "none"}}},
        {"lorentz-perturbed", "lorentz", {{"metric", "perturbed-minkowski"}, {"metric.seed", "1"}}},
        {"probe", "probe", {}},
        {"mobius", "mobius", {}},
    };
    Report r;
    for (const auto& part : parts) {
        s.note("report: " + part.prefix);
        r.absorb(run_scenario(child_scenario(s, part.command, part.keys)), part.prefix);
    }
    return r;
}

namespace detail {

tensorcalc::MetricSpec scenario_metric(const Scenario& s)
{
    const Config& c = s.config;
    tensorcalc::MetricRequest req;
    req.kind = c.require("metric");
    req.dim = static_cast<int>(c.integer("metric.dim", 3));
    req.seed = c.seed("metric.seed", 1);
    req.amplitude = c.has("metric.amplitude") ? c.positive("metric.amplitude", 1.0) : -1.0;
    req.expression = c.text("metric.factor", "");
    try {
        return tensorcalc::make_metric(req);
    } catch (const ConfigError& e) {
        throw ConfigError(c.where("metric") + ": " + e.what());
    } catch (const Error& e) {
        throw ConfigError(c.where("metric") + ": " + e.what());
    }
}

jets::Point point_key(const Config& c, const std::string& key, int n)
{
    jets::Point p{};
    if (!c.has(key))
        return p;
    auto v = c.numbers(key, {});
    if (static_cast<int>(v.size()) != n)
        throw ConfigError(c.where(key) + ": expected " + std::to_string(n) + " coordinates");
    for (int a = 0; a < n; ++a)
        p[a] = v[a];
    return p;
}

elliptic::ChartParams chart_params(const Scenario& s)
{
    const Config& c = s.config;
    elliptic::ChartParams p;
    p.epsilon = c.positive("chart.epsilon", p.epsilon);
    p.resolution = static_cast<int>(c.integer("chart.resolution", p.resolution));
    p.solver.tolerance = c.positive("solver.tolerance", p.solver.tolerance);
    p.solver.max_iterations = static_cast<int>(c.integer("solver.max_iterations", p.solver.max_iterations));
    p.max_shrinks = static_cast<int>(c.integer("solver.max_shrinks", p.max_shrinks));
    if (p.resolution < elliptic::kMinResolution || p.resolution % 2 == 0)
        throw ConfigError(c.where("chart.resolution") + ": resolution must be odd and at least " +
                          std::to_string(elliptic::kMinResolution));
    if (p.solver.max_iterations < 1 || p.max_shrinks < 0)
        throw ConfigError(s.config.source() + ": solver limits must be positive");
    return p;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + stream + 1;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

} // namespace confcoord::cli
