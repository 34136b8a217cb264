#include "confcoord/cli/config.hpp"
#include "confcoord/cli/report.hpp"
#include "confcoord/cli/scenario.hpp"
#include "confcoord/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace confcoord;
using namespace confcoord::cli;

namespace {

Scenario scenario(const std::string& text, std::optional<std::uint64_t> seed = {})
{
    return make_scenario(Config::parse(text), seed);
}

std::size_t count_lines(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Config, ParsesKeysCommentsAndLists)
{
    auto c = Config::parse("# scenario\ncommand = chart   # trailing\n\nchart.center = 0.1, -0.2,0.05\n"
                           "metric.factor = (1+0.3*x1)^4\nchart.normalize = true\nchart.resolution = 17\n");
    EXPECT_EQ(c.require("command"), "chart");
    EXPECT_EQ(c.text("metric.factor", ""), "(1+0.3*x1)^4");
    EXPECT_TRUE(c.flag("chart.normalize", false));
    EXPECT_EQ(c.integer("chart.resolution", 0), 17);
    auto v = c.numbers("chart.center", {});
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[1], -0.2);
    EXPECT_EQ(c.number("missing", 2.5), 2.5);
    EXPECT_EQ(c.where("chart.center"), "<config>:4: chart.center");
}

TEST(Config, MalformedInputNamesTheLine)
{
    try {
        Config::parse("command = chart\nmetric flat\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
    }
    EXPECT_THROW(Config::parse("a = 1\na = 2\n"), ConfigError);
    EXPECT_THROW(Config::parse("Bad.Key = 1\n"), ConfigError);
    EXPECT_THROW(Config::parse("key =\n"), ConfigError);
    EXPECT_THROW(Config::parse("a..b = 1\n"), ConfigError);
}

TEST(Config, TypedAccessorsRejectBadValues)
{
    auto c = Config::parse("n = 1.5x\ni = 3.2\nb = maybe\nl = 1,two\np = -1\ns = -3\n");
    EXPECT_THROW(c.number("n", 0), ConfigError);
    EXPECT_THROW(c.integer("i", 0), ConfigError);
    EXPECT_THROW(c.flag("b", false), ConfigError);
    EXPECT_THROW(c.numbers("l", {}), ConfigError);
    EXPECT_THROW(c.positive("p", 1), ConfigError);
    EXPECT_THROW(c.seed("s", 1), ConfigError);
    EXPECT_THROW(c.require("absent"), ConfigError);
}

TEST(Config, UnknownKeysAndWildcards)
{
    auto c = Config::parse("command = probe\nprobe.k = 8\nextra.thing = 1\n");
    EXPECT_NO_THROW(c.reject_unknown({"command", "probe.*", "extra.*"}));
    EXPECT_THROW(c.reject_unknown({"command", "probe.k"}), ConfigError);
}

TEST(Config, MissingFileIsConfigError)
{
    EXPECT_THROW(Config::load("/nonexistent/scenario.cfg"), ConfigError);
}

TEST(Scenario, ValidatesCommandKeysAndMetric)
{
    EXPECT_THROW(scenario("metric = flat\n"), ConfigError);
    EXPECT_THROW(scenario("command = launch\n"), ConfigError);
    EXPECT_THROW(scenario("command = chart\n"), ConfigError);
    EXPECT_THROW(scenario("command = chart\nmetric = klein-bottle\n"), ConfigError);
    EXPECT_THROW(scenario("command = chart\nmetric = flat\nchart.colour = red\n"), ConfigError);
    EXPECT_THROW(scenario("command = chart\nmetric = flat\ntolerance.dz = 0\n"), ConfigError);
    EXPECT_THROW(scenario("command = chart\nmetric = minkowski\n"), ConfigError);
    EXPECT_THROW(scenario("command = lorentz\nmetric = flat\n"), ConfigError);
    EXPECT_THROW(scenario("command = chart\nmetric = conformally-flat\n"), ConfigError);
    EXPECT_NO_THROW(scenario("command = chart\nmetric = sphere-stereographic\nmetric.dim = 4\n"));
}

TEST(Scenario, SeedOverride)
{
    EXPECT_EQ(scenario("command = probe\nseed = 7\n").seed, 7u);
    EXPECT_EQ(scenario("command = probe\nseed = 7\n", 9).seed, 9u);
    EXPECT_EQ(scenario("command = probe\n").seed, 1u);
}

TEST(Report, EmptyReportIsValidJson)
{
    Report r;
    r.command = "identities";
    EXPECT_TRUE(r.passed());
    auto doc = nlohmann::json::parse(report_json(r, current_fingerprint()));
    EXPECT_EQ(doc["schema"], kReportSchema);
    EXPECT_EQ(doc["body"]["checks"].size(), 0u);
    EXPECT_EQ(doc["body"]["check_count"], 0);
    EXPECT_EQ(doc["body"]["status"], "pass");
    EXPECT_TRUE(doc["header"].contains("timestamp"));
    EXPECT_FALSE(doc["body"].contains("timestamp"));
}

TEST(Report, ChecksAndStatus)
{
    EXPECT_TRUE(make_check("a", "", 1e-12, Relation::AtMost, 1e-10).pass);
    EXPECT_FALSE(make_check("a", "", 1e-9, Relation::AtMost, 1e-10).pass);
    EXPECT_TRUE(make_check("a", "", 1.0, Relation::AtLeast, 0.9).pass);
    EXPECT_FALSE(make_check("a", "", std::nan(""), Relation::AtMost, 1.0).pass);
    EXPECT_FALSE(make_check("a", "", std::nan(""), Relation::AtLeast, 1.0).pass);
    Report r;
    r.checks.push_back(make_check("ok", "", 0.0, Relation::AtMost, 1.0));
    r.checks.push_back(make_check("bad", "", 2.0, Relation::AtMost, 1.0));
    EXPECT_FALSE(r.passed());
    auto body = report_body(r);
    EXPECT_EQ(body["status"], "fail");
    EXPECT_EQ(body["failed_count"], 1);
}

TEST(Report, NonFiniteValuesStayValidJson)
{
    Report r;
    r.checks.push_back(make_check("x", "", std::nan(""), Relation::AtLeast, 0.9));
    r.tables.push_back({"t", {"a"}, {{INFINITY}}});
    auto doc = nlohmann::json::parse(report_json(r, current_fingerprint()));
    EXPECT_EQ(doc["body"]["checks"][0]["measured"], "nan");
    EXPECT_EQ(doc["body"]["tables"][0]["rows"][0][0], "inf");
}

TEST(Report, CsvQuotesAndRowCount)
{
    Report r;
    r.checks.push_back(make_check("a", "x, y \"z\"", 0.5, Relation::AtMost, 1.0));
    std::string csv = report_csv(r);
    EXPECT_EQ(count_lines(csv), 2u);
    EXPECT_NE(csv.find("\"x, y \"\"z\"\"\""), std::string::npos);
    EXPECT_NE(csv.find(",0.5,<=,1,true"), std::string::npos);
}

TEST(Report, FormatsParse)
{
    EXPECT_EQ(parse_formats("json").size(), 1u);
    EXPECT_EQ(parse_formats("json,csv").size(), 2u);
    EXPECT_EQ(parse_formats("csv,csv").size(), 1u);
    EXPECT_THROW(parse_formats("xml"), ConfigError);
    EXPECT_THROW(parse_formats(""), ConfigError);
}

TEST(Report, WritesFilesAndReportsIoErrors)
{
    auto dir = std::filesystem::temp_directory_path() / "confcoord_test_cli_out";
    std::filesystem::remove_all(dir);
    Report r;
    r.checks.push_back(make_check("a", "", 0.5, Relation::AtMost, 1.0));
    r.tables.push_back({"sec/rows", {"k", "v"}, {{1, 2}, {3, 4}}});
    auto files = write_report(r, current_fingerprint(), dir, {Format::Json, Format::Csv});
    ASSERT_EQ(files.size(), 3u);
    for (const auto& f : files)
        EXPECT_TRUE(std::filesystem::exists(f));
    EXPECT_EQ(read_file(dir / "sec_rows.csv"), "k,v\n1,2\n3,4\n");
    std::filesystem::remove_all(dir);

    auto blocker = std::filesystem::temp_directory_path() / "confcoord_test_cli_file";
    std::ofstream(blocker) << "x";
    EXPECT_THROW(write_report(r, current_fingerprint(), blocker / "sub", {Format::Json}), IoError);
    std::filesystem::remove(blocker);
}

TEST(Scenarios, IdentitiesPassAndAreDeterministic)
{
    auto a = run_scenario(scenario("command = identities\n"));
    std::size_t passing = 0;
    for (const auto& c : a.checks)
        passing += c.pass ? 1 : 0;
    EXPECT_GE(passing, 12u);
    EXPECT_TRUE(a.passed());
    EXPECT_EQ(count_lines(report_csv(a)), a.checks.size() + 1);

    auto b = run_scenario(scenario("command = identities\n"));
    EXPECT_EQ(report_body(a).dump(), report_body(b).dump());
    auto c = run_scenario(scenario("command = identities\n", 2));
    EXPECT_NE(report_body(a).dump(), report_body(c).dump());
}

TEST(Scenarios, FlatChartCenterJacobian)
{
    auto r = run_scenario(scenario("command = chart\nmetric = flat\nchart.resolution = 33\n"));
    ASSERT_FALSE(r.checks.empty());
    EXPECT_EQ(r.checks[0].name, "dz-center");
    EXPECT_LE(r.checks[0].measured, 1e-8);
    EXPECT_TRUE(r.passed());
    ASSERT_EQ(r.tables.size(), 1u);
}

TEST(Scenarios, FlatBoundaryChartFace)
{
    auto r = run_scenario(scenario("command = boundary-chart\nmetric = flat\nchart.resolution = 17\n"));
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.checks[0].name, "face-normal");
    EXPECT_EQ(r.checks[0].measured, 0.0);
}

TEST(Scenarios, MobiusFromJsonMap)
{
    auto r = run_scenario(scenario("command = mobius\nmobius.points = 20\n"
                                   "mobius.map = {\"steps\": [{\"translate\": [3, 0, 0]}, {\"invert\": true}, "
                                   "{\"dilate\": 2}]}\n"));
    EXPECT_TRUE(r.passed());
    EXPECT_THROW(run_scenario(scenario("command = mobius\nmobius.map = {bad json\n")), ConfigError);
    EXPECT_THROW(run_scenario(scenario("command = mobius\nmobius.dim = 5\n")), ConfigError);
}

TEST(Scenarios, FailuresAreRecordedNotThrown)
{
    auto r = run_scenario(scenario("command = probe\n"));
    EXPECT_FALSE(r.passed());
    bool found = false;
    for (const auto& c : r.checks)
        if (c.name == "bach-tt-symbol") {
            found = true;
            EXPECT_FALSE(c.pass);
        } else {
            EXPECT_TRUE(c.pass) << c.name;
        }
    EXPECT_TRUE(found);
}

TEST(Scenarios, ScenarioEchoIsSortedWithSeed)
{
    auto r = run_scenario(scenario("command = probe\nprobe.k = 8\n", 5));
    ASSERT_FALSE(r.scenario.empty());
    EXPECT_TRUE(std::is_sorted(r.scenario.begin(), r.scenario.end()));
    bool seed = false;
    for (const auto& [k, v] : r.scenario)
        seed = seed || (k == "seed" && v == "5");
    EXPECT_TRUE(seed);
}
