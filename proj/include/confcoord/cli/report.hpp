#pragma once

#include "json.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace confcoord::cli {

inline constexpr const char* kReportSchema = "confcoord-report/1";

enum class Relation { AtMost, AtLeast };

/// One pass/fail record. `anchor` is the identity or property checked, as a
/// formula string.
struct Check {
    std::string name;
    std::string anchor;
    double measured = 0.0;
    Relation relation = Relation::AtMost;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_ms = 0.0;
};

/// Builds a check; NaN measurements fail.
Check make_check(std::string name, std::string anchor, double measured, Relation relation, double tolerance,
                 double runtime_ms = 0.0);

/// Column table written alongside the checks (refinement and frequency sweeps).
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string command;
    /// Effective scenario keys, sorted.
    std::vector<std::pair<std::string, std::string>> scenario;
    std::vector<Check> checks;
    std::vector<Table> tables;

    /// Conjunction of every pass flag (true for an empty report).
    bool passed() const;
    /// Appends another report's checks and tables under `prefix/`.
    void absorb(const Report& other, const std::string& prefix);
};

/// Host, compiler, thread cap and UTC timestamp.
struct Fingerprint {
    std::string timestamp;
    std::string host;
    std::string compiler;
    std::string build_type;
    int threads = 1;
};

Fingerprint current_fingerprint();

/// Everything that depends only on (config, seed).
nlohmann::ordered_json report_body(const Report& report);
/// Timestamp, host data and per-check runtimes. Checks produced by one
/// computation share its runtime.
nlohmann::ordered_json report_header(const Report& report, const Fingerprint& fp);
/// {"schema", "header", "body"}.
std::string report_json(const Report& report, const Fingerprint& fp);
/// One row per check.
std::string report_csv(const Report& report);
std::string table_csv(const Table& table);

enum class Format { Json, Csv };
/// Parses "json", "csv" or "json,csv". Throws ConfigError otherwise.
std::vector<Format> parse_formats(const std::string& text);

/// Writes report.json and/or report.csv plus one <table>.csv per table into
/// dir, creating it. Throws IoError on failure. Returns the written paths.
std::vector<std::filesystem::path> write_report(const Report& report, const Fingerprint& fp,
                                                const std::filesystem::path& dir, const std::vector<Format>& formats);

} // namespace confcoord::cli
