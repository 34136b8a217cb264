#include "confcoord/cli/scenario.hpp"
#include "confcoord/errors.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

enum ExitCode { kPass = 0, kChecksFailed = 1, kConfig = 2, kRuntime = 3, kIo = 4 };

void print_summary(const confcoord::cli::Report& report)
{
    for (const auto& c : report.checks)
        std::printf("%-4s %-52s %-3s measured %.6g tolerance %.3g\n", c.pass ? "ok" : "FAIL", c.name.c_str(),
                    c.relation == confcoord::cli::Relation::AtMost ? "<=" : ">=", c.measured, c.tolerance);
    std::size_t failed = 0;
    for (const auto& c : report.checks)
        failed += c.pass ? 0 : 1;
    std::printf("%s: %zu checks, %zu failed\n", report.command.c_str(), report.checks.size(), failed);
}

} // namespace

int main(int argc, char** argv)
{
    using namespace confcoord;
    CLI::App app{"Conformal harmonic and conformal wave coordinate workbench"};
    std::string config_path, out_dir, formats = "json";
    std::uint64_t seed = 0;
    bool verbose = false;
    app.add_option("--config", config_path, "Scenario file (key = value lines)")->required();
    app.add_option("--out", out_dir, "Directory for report files; summary only when absent");
    app.add_option("--format", formats, "Report formats: json, csv or json,csv");
    auto* seed_opt = app.add_option("--seed", seed, "Seed overriding the scenario's seed key");
    app.add_flag("--verbose", verbose, "Progress messages on stderr");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kConfig;
    }

    cli::Scenario scenario;
    std::vector<cli::Format> fmts;
    try {
        fmts = cli::parse_formats(formats);
        std::optional<std::uint64_t> override;
        if (seed_opt->count() > 0)
            override = seed;
        scenario = cli::make_scenario(cli::Config::load(config_path), override);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    }
    if (verbose)
        scenario.log = [](const std::string& m) { std::cerr << "[confcoord] " << m << "\n"; };

    cli::Report report;
    try {
        report = cli::run_scenario(scenario);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "runtime error in `" << scenario.command << "`: " << e.what() << "\n";
        return kRuntime;
    }

    print_summary(report);
    if (!out_dir.empty()) {
        try {
            for (const auto& p : cli::write_report(report, cli::current_fingerprint(), out_dir, fmts))
                if (verbose)
                    std::cerr << "[confcoord] wrote " << p.string() << "\n";
        } catch (const IoError& e) {
            std::cerr << "io error: " << e.what() << "\n";
            return kIo;
        }
    }
    return report.passed() ? kPass : kChecksFailed;
}
