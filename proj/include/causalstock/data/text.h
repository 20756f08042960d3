#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace causalstock::data {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
// Whole-string parse; leading '+' allowed.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long& out);

// Plain-text `key = value` file; '#' starts a comment. Keys keep file order
// for reproducible snapshots.
class KeyValueFile {
public:
    static KeyValueFile parse(std::string_view text, const std::string& origin);
    static KeyValueFile load(const std::filesystem::path& path);

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    void set(const std::string& key, const std::string& value);

    // ConfigError naming the first key not in `allowed`.
    void require_known(const std::vector<std::string>& allowed) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    std::string to_string() const;
    const std::string& origin() const { return origin_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::string origin_;
};

}  // namespace causalstock::data
