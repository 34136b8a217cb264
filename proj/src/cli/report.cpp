#include "confcoord/cli/report.hpp"

#include "confcoord/errors.hpp"
#include "confcoord/parallel.hpp"

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace confcoord::cli {

namespace {

const char* relation_name(Relation r) { return r == Relation::AtMost ? "<=" : ">="; }

std::string number_text(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

nlohmann::ordered_json number_json(double v)
{
    if (std::isfinite(v))
        return v;
    return number_text(v);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string file_stem(const std::string& name)
{
    std::string out = name;
    for (char& c : out)
        if (c == '/' || c == ' ')
            c = '_';
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out)
        throw IoError("write to " + path.string() + " failed");
}

} // namespace

Check make_check(std::string name, std::string anchor, double measured, Relation relation, double tolerance,
                 double runtime_ms)
{
    Check c{std::move(name), std::move(anchor), measured, relation, tolerance, false, runtime_ms};
    c.pass = relation == Relation::AtMost ? measured <= tolerance : measured >= tolerance;
    return c;
}

bool Report::passed() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

void Report::absorb(const Report& other, const std::string& prefix)
{
    for (Check c : other.checks) {
        c.name = prefix + "/" + c.name;
        checks.push_back(std::move(c));
    }
    for (Table t : other.tables) {
        t.name = prefix + "/" + t.name;
        tables.push_back(std::move(t));
    }
}

Fingerprint current_fingerprint()
{
    Fingerprint fp;
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    fp.timestamp = buf;
    char host[256] = {};
    if (gethostname(host, sizeof host - 1) == 0)
        fp.host = host;
#if defined(__clang__)
    fp.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
    fp.compiler = "gcc " __VERSION__;
#else
    fp.compiler = "unknown";
#endif
#ifdef NDEBUG
    fp.build_type = "release";
#else
    fp.build_type = "debug";
#endif
    fp.threads = thread_count();
    return fp;
}

nlohmann::ordered_json report_body(const Report& report)
{
    nlohmann::ordered_json body;
    body["command"] = report.command;
    nlohmann::ordered_json scenario = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.scenario)
        scenario[k] = v;
    body["scenario"] = scenario;
    body["status"] = report.passed() ? "pass" : "fail";
    std::size_t failed = 0;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        failed += c.pass ? 0 : 1;
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["anchor"] = c.anchor;
        j["measured"] = number_json(c.measured);
        j["relation"] = relation_name(c.relation);
        j["tolerance"] = number_json(c.tolerance);
        j["pass"] = c.pass;
        checks.push_back(std::move(j));
    }
    body["check_count"] = report.checks.size();
    body["failed_count"] = failed;
    body["checks"] = std::move(checks);
    nlohmann::ordered_json tables = nlohmann::ordered_json::array();
    for (const auto& t : report.tables) {
        nlohmann::ordered_json j;
        j["name"] = t.name;
        j["columns"] = t.columns;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : t.rows) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (double v : r)
                row.push_back(number_json(v));
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        tables.push_back(std::move(j));
    }
    body["tables"] = std::move(tables);
    return body;
}

nlohmann::ordered_json report_header(const Report& report, const Fingerprint& fp)
{
    nlohmann::ordered_json h;
    h["timestamp"] = fp.timestamp;
    h["host"] = fp.host;
    h["compiler"] = fp.compiler;
    h["build_type"] = fp.build_type;
    h["threads"] = fp.threads;
    nlohmann::ordered_json timings = nlohmann::ordered_json::array();
    for (const auto& c : report.checks)
        timings.push_back({{"name", c.name}, {"runtime_ms", c.runtime_ms}});
    h["timings"] = std::move(timings);
    return h;
}

std::string report_json(const Report& report, const Fingerprint& fp)
{
    nlohmann::ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["header"] = report_header(report, fp);
    doc["body"] = report_body(report);
    return doc.dump(2) + "\n";
}

std::string report_csv(const Report& report)
{
    std::ostringstream out;
    out << "name,anchor,measured,relation,tolerance,pass\n";
    for (const auto& c : report.checks)
        out << csv_field(c.name) << ',' << csv_field(c.anchor) << ',' << number_text(c.measured) << ','
            << relation_name(c.relation) << ',' << number_text(c.tolerance) << ',' << (c.pass ? "true" : "false")
            << '\n';
    return out.str();
}

std::string table_csv(const Table& table)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << csv_field(table.columns[i]);
    out << '\n';
    for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << number_text(r[i]);
        out << '\n';
    }
    return out.str();
}

std::vector<Format> parse_formats(const std::string& text)
{
    std::vector<Format> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Format f;
        if (item == "json")
            f = Format::Json;
        else if (item == "csv")
            f = Format::Csv;
        else
            throw ConfigError("unknown report format `" + item + "` (expected json or csv)");
        bool seen = false;
        for (Format g : out)
            seen = seen || g == f;
        if (!seen)
            out.push_back(f);
    }
    if (out.empty())
        throw ConfigError("no report format given");
    return out;
}

std::vector<std::filesystem::path> write_report(const Report& report, const Fingerprint& fp,
                                                const std::filesystem::path& dir, const std::vector<Format>& formats)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    for (Format f : formats) {
        if (f == Format::Json) {
            written.push_back(dir / "report.json");
            write_file(written.back(), report_json(report, fp));
        } else {
            written.push_back(dir / "report.csv");
            write_file(written.back(), report_csv(report));
            for (const auto& t : report.tables) {
                written.push_back(dir / (file_stem(t.name) + ".csv"));
                write_file(written.back(), table_csv(t));
            }
        }
    }
    return written;
}

} // namespace confcoord::cli
