#include "causalstock/train/dataset.h"

#include "causalstock/error.h"
#include "causalstock/news/cache.h"
#include "causalstock/news/scorer.h"

#include <fmt/format.h>

namespace causalstock::train {

std::vector<data::ScoredNews> attach_scores(const data::Manifest& m, std::vector<std::string>* warnings) {
    std::vector<data::ScoredNews> out;
    if (!m.news_file) return out;
    if (!m.scores_file) throw DataError("manifest lists news but no score cache; run score-news first");
    data::NewsLoadReport report;
    const auto items = data::load_news(*m.news_file, &report);
    if (warnings) warnings->insert(warnings->end(), report.warnings.begin(), report.warnings.end());
    const auto cache = news::import_scores(*m.scores_file, news::kPromptVersion);
    std::vector<std::string> missing;
    for (const auto& item : items) {
        const std::string key = news::item_key(item);
        const auto hit = cache.find(key);
        if (!hit) {
            missing.push_back(key);
            continue;
        }
        out.push_back({item.symbol, item.published, hit->scores});
    }
    if (!missing.empty()) {
        std::string msg = fmt::format("{} news item(s) have no cached score; run score-news first:", missing.size());
        for (std::size_t k = 0; k < std::min<std::size_t>(missing.size(), 10); ++k) msg += "\n  " + missing[k];
        throw DataError(msg);
    }
    return out;
}

Dataset load_dataset(const std::filesystem::path& manifest_or_dir, std::size_t lags, std::size_t max_news,
                     bool use_news) {
    Dataset ds;
    ds.manifest = data::Manifest::load(data::Manifest::resolve(manifest_or_dir));
    const auto series = data::load_all_prices(ds.manifest, &ds.warnings);
    ds.panel = data::align(series, ds.manifest.calendar, ds.manifest.label_mode);
    if (use_news) ds.news = attach_scores(ds.manifest, &ds.warnings);
    const data::NewsByDay buckets = data::bucket_news(ds.panel, ds.news);
    auto windows = data::build_windows(ds.panel, use_news ? &buckets : nullptr, lags, max_news);
    ds.splits = data::chronological_split(std::move(windows), ds.manifest.splits);
    ds.warnings.insert(ds.warnings.end(), ds.splits.warnings.begin(), ds.splits.warnings.end());
    ds.normalizer = data::fit_normalizer(ds.panel, ds.manifest.splits.valid_start);
    return ds;
}

}  // namespace causalstock::train
