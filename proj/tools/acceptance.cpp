#include "confcoord/cli/scenario.hpp"
#include "confcoord/errors.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

namespace {

using confcoord::cli::Check;
using confcoord::cli::Report;

struct Criterion {
    int id;
    std::string title;
    std::vector<std::string> checks;
    double budget_s; ///< 0 for no runtime bound
};

const std::vector<Criterion>& criteria()
{
    static const std::vector<Criterion> list = {
        {1,
         "conformal Laplacian covariance",
         {"identities/conformal-laplacian-covariance-n3", "identities/conformal-laplacian-covariance-n4"},
         5},
        {2, "Yamabe scaling", {"identities/yamabe-scaling", "identities/yamabe-harmonic-flat"}, 5},
        {3, "two Bach forms agree", {"identities/bach-two-forms"}, 20},
        {4, "conformal weights", {"identities/weyl-weight", "identities/cotton-weight", "identities/bach-weight"}, 30},
        {5,
         "interior chart construction",
         {"chart-flat/dz-center", "converge-conformally-flat/r1-slope", "converge-sphere/r1-slope"},
         180},
        {6,
         "boundary chart",
         {"boundary-chart-flat/face-normal", "boundary-chart-flat/face-tangential",
          "boundary-chart-conformally-flat/face-normal", "boundary-chart-conformally-flat/face-tangential",
          "converge-conformally-flat-boundary/r1-slope", "converge-sphere-boundary/r1-slope"},
         120},
        {7, "gradient convergence at the center", {"converge-conformally-flat/jacobian-slope"}, 120},
        {8, "stepping-stone residual", {"converge-conformally-flat/r4-slope", "converge-sphere/r4-slope"}, 60},
        {9, "Bach principal symbol", {"probe/bach-tt-symbol", "probe/bach-k-doubling"}, 10},
        {10, "Cotton symbol", {"probe/cotton-tt-symbol"}, 10},
        {11,
         "Kelvin transform",
         {"identities/kelvin-inversion-n3", "identities/kelvin-inversion-n4", "identities/kelvin-mobius",
          "mobius/kelvin-pullback"},
         5},
        {12, "isothermal gauge", {"identities/isothermal-gauge"}, 5},
        {13,
         "Lorentzian chart",
         {"lorentz-minkowski/minkowski-exact", "lorentz-perturbed/dz-surface", "lorentz-perturbed/dz-surface-refined",
          "lorentz-perturbed/gauge-slope"},
         60},
    };
    return list;
}

const Check* find_check(const Report& r, const std::string& name)
{
    for (const auto& c : r.checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

std::string prefix_of(const std::string& name) { return name.substr(0, name.find('/')); }

std::string short_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Report full_suite(std::uint64_t seed, bool verbose)
{
    confcoord::cli::Config c;
    c.set("command", "report");
    auto s = confcoord::cli::make_scenario(c, seed);
    if (verbose)
        s.log = [](const std::string& m) { std::cerr << "[acceptance] " << m << "\n"; };
    return confcoord::cli::run_scenario(s);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria 1-14 with one pass/fail line each"};
    std::uint64_t seed = 1;
    bool verbose = false;
    std::string out_dir;
    app.add_option("--seed", seed, "Suite seed");
    app.add_option("--out", out_dir, "Write the first run's report.json here");
    app.add_flag("--verbose", verbose, "Progress messages on stderr");
    CLI11_PARSE(app, argc, argv);

    Report first;
    try {
        first = full_suite(seed, verbose);
    } catch (const std::exception& e) {
        std::cerr << "suite aborted: " << e.what() << "\n";
        return 3;
    }

    bool all = true;
    // Computations already charged to an earlier criterion: (section, runtime).
    std::set<std::pair<std::string, double>> charged;
    for (const auto& cr : criteria()) {
        bool pass = true;
        std::ostringstream detail;
        std::set<std::pair<std::string, double>> mine;
        for (const auto& name : cr.checks) {
            const Check* c = find_check(first, name);
            if (!c) {
                pass = false;
                detail << " " << name << " missing;";
                continue;
            }
            pass = pass && c->pass;
            detail << " " << name << " " << short_number(c->measured)
                   << (c->relation == confcoord::cli::Relation::AtMost ? "<=" : ">=") << short_number(c->tolerance)
                   << (c->pass ? "" : " FAIL") << ";";
            mine.insert({prefix_of(name), c->runtime_ms});
        }
        double seconds = 0.0;
        for (const auto& m : mine)
            if (charged.insert(m).second)
                seconds += m.second / 1000.0;
        bool in_budget = cr.budget_s <= 0 || seconds <= cr.budget_s;
        pass = pass && in_budget;
        all = all && pass;
        std::printf("criterion %2d %s  %s |%s runtime %.1f s (budget %.0f s)%s\n", cr.id, pass ? "PASS" : "FAIL",
                    cr.title.c_str(), detail.str().c_str(), seconds, cr.budget_s, in_budget ? "" : " over budget");
        std::fflush(stdout);
    }

    auto fp = confcoord::cli::current_fingerprint();
    if (!out_dir.empty()) {
        try {
            confcoord::cli::write_report(first, fp, out_dir, {confcoord::cli::Format::Json});
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return 4;
        }
    }

    bool same = false;
    std::string note;
    try {
        Report second = full_suite(seed, verbose);
        std::string a = confcoord::cli::report_body(first).dump();
        std::string b = confcoord::cli::report_body(second).dump();
        same = a == b;
        note = std::to_string(a.size()) + " body bytes" + (same ? " identical" : " differ");
    } catch (const std::exception& e) {
        note = std::string("second run aborted: ") + e.what();
    }
    all = all && same;
    std::printf("criterion 14 %s  determinism | two full-suite runs with seed %llu: %s\n", same ? "PASS" : "FAIL",
                static_cast<unsigned long long>(seed), note.c_str());
    return all ? 0 : 1;
}
