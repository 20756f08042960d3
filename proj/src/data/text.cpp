#include "causalstock/data/text.h"

#include "causalstock/error.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace causalstock::data {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
        if (k == s.size() || s[k] == sep) {
            out.emplace_back(s.substr(start, k - start));
            start = k + 1;
        }
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_int(std::string_view s, long& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

KeyValueFile KeyValueFile::parse(std::string_view text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        if (kv.has(key)) throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        kv.entries_.emplace_back(key, trim(t.substr(eq + 1)));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

bool KeyValueFile::has(const std::string& key) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == key; });
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string KeyValueFile::require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ConfigError(origin_ + ": missing required key '" + key + "'");
    return *v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    double out = 0;
    if (!parse_double(*v, out)) throw ConfigError(origin_ + ": key '" + key + "' is not a number: '" + *v + "'");
    return out;
}

long KeyValueFile::get_int(const std::string& key, long fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    long out = 0;
    if (!parse_int(*v, out)) throw ConfigError(origin_ + ": key '" + key + "' is not an integer: '" + *v + "'");
    return out;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    const std::string l = to_lower(*v);
    if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
    if (l == "false" || l == "0" || l == "no" || l == "off") return false;
    throw ConfigError(origin_ + ": key '" + key + "' is not a boolean: '" + *v + "'");
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

void KeyValueFile::require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [k, v] : entries_) {
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
            throw ConfigError(origin_ + ": unknown key '" + k + "'");
        }
    }
}

std::string KeyValueFile::to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

}  // namespace causalstock::data
