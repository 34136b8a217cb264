#pragma once

#include "confcoord/cli/config.hpp"
#include "confcoord/cli/report.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace confcoord::cli {

/// A validated config: command, seed and the remaining keys.
struct Scenario {
    std::string command;
    Config config;
    std::uint64_t seed = 1;
    /// Progress sink; empty when quiet.
    std::function<void(const std::string&)> log;

    void note(const std::string& message) const
    {
        if (log)
            log(message);
    }
};

const std::vector<std::string>& command_names();

/// Checks the command, the key set for that command, tolerance values and
/// metric references. `seed` overrides the config's `seed` key. Throws
/// ConfigError.
Scenario make_scenario(Config config, std::optional<std::uint64_t> seed = {});

/// Runs the command. Check failures are recorded in the report; solver and
/// construction failures propagate as exceptions.
Report run_scenario(const Scenario& scenario);

/// Per-command entry points used by run_scenario.
Report run_identities(const Scenario& s);
Report run_chart(const Scenario& s);
Report run_boundary_chart(const Scenario& s);
Report run_converge(const Scenario& s);
Report run_lorentz(const Scenario& s);
Report run_probe(const Scenario& s);
Report run_mobius(const Scenario& s);
/// The full suite: every other command on its reference scenarios.
Report run_full_report(const Scenario& s);

/// Sub-scenario sharing the parent's seed and log.
Scenario child_scenario(const Scenario& parent, const std::string& command,
                        const std::vector<std::pair<std::string, std::string>>& keys);

} // namespace confcoord::cli
