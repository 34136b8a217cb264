#pragma once

#include "confcoord/cli/scenario.hpp"
#include "confcoord/elliptic/prescribed.hpp"
#include "confcoord/tensorcalc/metric.hpp"

#include <chrono>
#include <string>

namespace confcoord::cli::detail {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }
    void reset() { start_ = std::chrono::steady_clock::now(); }

private:
    std::chrono::steady_clock::time_point start_;
};

/// The zoo metric named by `metric` and its `metric.*` parameters.
tensorcalc::MetricSpec scenario_metric(const Scenario& s);
/// Comma-separated coordinates of length n; zero when absent.
jets::Point point_key(const Config& c, const std::string& key, int n);
elliptic::ChartParams chart_params(const Scenario& s);

/// Seeds derived from the scenario seed for independent sample streams.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace confcoord::cli::detail
