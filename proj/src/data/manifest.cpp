#include "causalstock/data/manifest.h"

#include "causalstock/error.h"

#include <algorithm>

namespace causalstock::data {

namespace {

std::filesystem::path under(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

Manifest Manifest::parse(const KeyValueFile& kv, const std::filesystem::path& base_dir) {
    static const std::vector<std::string> known = {
        "symbols",   "price_dir",  "price_format", "adj_close",  "news",           "scores",         "market_values",
        "valid_start", "test_start", "label_mode", "rise_threshold", "fall_threshold", "calendar"};
    for (const auto& [k, v] : kv.entries()) {
        if (k.rfind("price.", 0) == 0) continue;
        if (std::find(known.begin(), known.end(), k) == known.end()) {
            throw ConfigError(kv.origin() + ": unknown manifest key '" + k + "'");
        }
    }

    Manifest m;
    m.base_dir = base_dir;
    m.source = kv;
    for (const auto& s : split(kv.require("symbols"), ',')) {
        const std::string sym = trim(s);
        if (!sym.empty()) m.symbols.push_back(sym);
    }
    if (m.symbols.empty()) throw ConfigError(kv.origin() + ": no symbols listed");

    const auto price_dir = under(base_dir, kv.get("price_dir").value_or("prices"));
    for (const auto& sym : m.symbols) {
        if (auto p = kv.get("price." + sym)) {
            m.price_files[sym] = under(base_dir, *p);
        } else {
            m.price_files[sym] = price_dir / (sym + ".csv");
        }
    }

    const std::string fmt = to_lower(kv.get("price_format").value_or("auto"));
    if (fmt == "raw") {
        m.price_format = PriceFormat::Raw;
    } else if (fmt == "acl18") {
        m.price_format = PriceFormat::Acl18;
    } else if (fmt != "auto") {
        throw ConfigError(kv.origin() + ": price_format must be auto, raw or acl18");
    }

    const std::string adj = to_lower(kv.get("adj_close").value_or("close"));
    if (adj == "close") {
        m.adj_close = AdjCloseMode::EqualClose;
    } else if (adj == "movement") {
        m.adj_close = AdjCloseMode::FromMovement;
    } else {
        throw ConfigError(kv.origin() + ": adj_close must be close or movement");
    }

    if (auto n = kv.get("news")) m.news_file = under(base_dir, *n);
    if (auto s = kv.get("scores")) m.scores_file = under(base_dir, *s);
    if (auto s = kv.get("market_values")) m.market_values_file = under(base_dir, *s);

    try {
        m.splits.valid_start = parse_date(kv.require("valid_start"));
        m.splits.test_start = parse_date(kv.require("test_start"));
    } catch (const DataError& e) {
        throw ConfigError(kv.origin() + ": " + e.what());
    }
    if (!(m.splits.valid_start < m.splits.test_start)) {
        throw ConfigError(kv.origin() + ": valid_start must precede test_start");
    }

    const std::string mode = to_lower(kv.get("label_mode").value_or("strict"));
    if (mode == "strict") {
        m.label_mode = LabelMode::strict();
    } else if (mode == "threshold") {
        m.label_mode = LabelMode::threshold(kv.get_double("fall_threshold", -0.005), kv.get_double("rise_threshold", 0.0055));
        if (!(m.label_mode.fall_threshold < m.label_mode.rise_threshold)) {
            throw ConfigError(kv.origin() + ": fall_threshold must be below rise_threshold");
        }
    } else {
        throw ConfigError(kv.origin() + ": label_mode must be strict or threshold");
    }

    const std::string cal = to_lower(kv.get("calendar").value_or("intersection"));
    if (cal == "intersection") {
        m.calendar = CalendarPolicy::Intersection;
    } else if (cal == "union_ffill") {
        m.calendar = CalendarPolicy::UnionForwardFill;
    } else if (cal == "union_drop") {
        m.calendar = CalendarPolicy::UnionDrop;
    } else {
        throw ConfigError(kv.origin() + ": calendar must be intersection, union_ffill or union_drop");
    }
    return m;
}

Manifest Manifest::load(const std::filesystem::path& path) {
    const auto file = resolve(path);
    if (!std::filesystem::is_regular_file(file)) throw DataError("no dataset manifest at " + file.string());
    return parse(KeyValueFile::load(file), file.parent_path());
}

std::filesystem::path Manifest::resolve(const std::filesystem::path& file_or_dir) {
    if (std::filesystem::is_directory(file_or_dir)) return file_or_dir / "manifest.txt";
    return file_or_dir;
}

std::vector<PriceSeries> load_all_prices(const Manifest& m, std::vector<std::string>* warnings) {
    std::vector<PriceSeries> out;
    for (const auto& sym : m.symbols) {
        PriceLoadReport report;
        out.push_back(load_prices(m.price_files.at(sym), sym, m.price_format, m.adj_close, &report));
        if (warnings) warnings->insert(warnings->end(), report.warnings.begin(), report.warnings.end());
    }
    return out;
}

}  // namespace causalstock::data
