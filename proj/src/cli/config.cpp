#include "confcoord/cli/config.hpp"

#include "confcoord/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace confcoord::cli {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& key)
{
    if (key.empty() || key.front() == '.' || key.back() == '.')
        return false;
    for (char c : key)
        if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
              c == '_' || c == '-'))
            return false;
    return key.find("..") == std::string::npos;
}

std::string strip_comment(const std::string& line)
{
    for (std::size_t i = 0; i < line.size(); ++i)
        if (line[i] == '#' && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t'))
            return line.substr(0, i);
    return line;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

} // namespace

Config Config::parse(const std::string& text, const std::string& source)
{
    Config cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string body = trim(strip_comment(raw));
        if (body.empty())
            continue;
        auto eq = body.find('=');
        std::string at = source + ":" + std::to_string(line);
        if (eq == std::string::npos)
            throw ConfigError(at + ": expected `key = value`");
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        if (!valid_key(key))
            throw ConfigError(at + ": invalid key `" + key + "`");
        if (value.empty())
            throw ConfigError(at + ": key `" + key + "` has no value");
        if (cfg.has(key))
            throw ConfigError(at + ": duplicate key `" + key + "` (first on line " +
                              std::to_string(cfg.entries_[key].line) + ")");
        cfg.entries_[key] = {value, line};
    }
    return cfg;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::string Config::where(const std::string& key) const
{
    auto it = entries_.find(key);
    if (it == entries_.end() || it->second.line == 0)
        return source_ + ": " + key;
    return source_ + ":" + std::to_string(it->second.line) + ": " + key;
}

const std::string& Config::require(const std::string& key) const
{
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(source_ + ": missing required key `" + key + "`");
    return it->second.value;
}

std::string Config::text(const std::string& key, const std::string& fallback) const
{
    return has(key) ? require(key) : fallback;
}

double Config::number(const std::string& key, double fallback) const
{
    if (!has(key))
        return fallback;
    const std::string& v = require(key);
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(where(key) + ": expected a number, got `" + v + "`");
    }
}

double Config::positive(const std::string& key, double fallback) const
{
    double d = number(key, fallback);
    if (!(d > 0.0))
        throw ConfigError(where(key) + ": value must be > 0");
    return d;
}

long Config::integer(const std::string& key, long fallback) const
{
    if (!has(key))
        return fallback;
    const std::string& v = require(key);
    long out = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw ConfigError(where(key) + ": expected an integer, got `" + v + "`");
    return out;
}

std::uint64_t Config::seed(const std::string& key, std::uint64_t fallback) const
{
    if (!has(key))
        return fallback;
    const std::string& v = require(key);
    std::uint64_t out = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw ConfigError(where(key) + ": expected a non-negative integer seed, got `" + v + "`");
    return out;
}

bool Config::flag(const std::string& key, bool fallback) const
{
    if (!has(key))
        return fallback;
    const std::string& v = require(key);
    if (v == "true" || v == "yes" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "0")
        return false;
    throw ConfigError(where(key) + ": expected true or false, got `" + v + "`");
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const
{
    if (!has(key))
        return fallback;
    std::vector<double> out;
    for (const auto& item : split_list(require(key))) {
        try {
            std::size_t used = 0;
            double d = std::stod(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            out.push_back(d);
        } catch (const std::exception&) {
            throw ConfigError(where(key) + ": expected a comma-separated list of numbers");
        }
    }
    return out;
}

std::vector<int> Config::integers(const std::string& key, const std::vector<int>& fallback) const
{
    if (!has(key))
        return fallback;
    std::vector<int> out;
    for (const auto& item : split_list(require(key))) {
        int v = 0;
        auto r = std::from_chars(item.data(), item.data() + item.size(), v);
        if (r.ec != std::errc() || r.ptr != item.data() + item.size())
            throw ConfigError(where(key) + ": expected a comma-separated list of integers");
        out.push_back(v);
    }
    return out;
}

void Config::reject_unknown(const std::vector<std::string>& known) const
{
    for (const auto& [key, entry] : entries_) {
        bool ok = std::any_of(known.begin(), known.end(), [&](const std::string& k) {
            if (!k.empty() && k.back() == '*')
                return key.compare(0, k.size() - 1, k, 0, k.size() - 1) == 0;
            return key == k;
        });
        if (!ok)
            throw ConfigError(where(key) + ": unknown key");
    }
}

} // namespace confcoord::cli
