#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace confcoord::cli {

/// Flat `key = value` text with dotted section keys. `#` starts a comment
/// when it begins a line or follows whitespace. Keys are case sensitive.
class Config {
public:
    struct Entry {
        std::string value;
        int line = 0; ///< 0 for values set programmatically
    };

    /// Throws ConfigError naming the line on malformed or duplicate keys.
    static Config parse(const std::string& text, const std::string& source = "<config>");
    /// Throws ConfigError when the file cannot be read.
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }
    const std::map<std::string, Entry>& entries() const { return entries_; }
    const std::string& source() const { return source_; }

    /// Throws ConfigError when the key is missing.
    const std::string& require(const std::string& key) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key, double fallback) const;
    /// A number > 0, else ConfigError.
    double positive(const std::string& key, double fallback) const;
    long integer(const std::string& key, long fallback) const;
    std::uint64_t seed(const std::string& key, std::uint64_t fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    /// Comma-separated list.
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> integers(const std::string& key, const std::vector<int>& fallback) const;

    /// ConfigError for the first key outside `known`. A trailing `*` in a
    /// known entry matches any suffix.
    void reject_unknown(const std::vector<std::string>& known) const;

    /// "source:line: key" for messages.
    std::string where(const std::string& key) const;

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

} // namespace confcoord::cli
