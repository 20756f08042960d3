#pragma once

#include "causalstock/data/manifest.h"
#include "causalstock/data/panel.h"

#include <filesystem>
#include <string>
#include <vector>

namespace causalstock::train {

// Everything training and prediction need from a dataset directory.
struct Dataset {
    data::Manifest manifest;
    data::AlignedPanel panel;
    std::vector<data::ScoredNews> news;
    data::Normalizer normalizer;
    data::Splits splits;
    std::vector<std::string> warnings;

    const std::vector<std::string>& symbols() const { return panel.symbols; }
};

// Loads prices, aligns them, attaches cached news scores when `use_news`
// (every news item must be in the score cache) and splits by date.
Dataset load_dataset(const std::filesystem::path& manifest_or_dir, std::size_t lags, std::size_t max_news,
                     bool use_news);

// News items joined with their cached scores. DataError lists the first
// missing keys.
std::vector<data::ScoredNews> attach_scores(const data::Manifest& m, std::vector<std::string>* warnings);

}  // namespace causalstock::train
