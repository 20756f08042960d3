#pragma once

#include "causalstock/news/score.h"

#include <string_view>

namespace causalstock::news {

// Finds the five "<Label>: <number>" fields anywhere in the response,
// case-insensitively, and clamps each into its range. Throws ParseError
// (carrying the raw text) when a label is missing or its value is not
// numeric. Never fails in any other way, whatever the input bytes.
NewsScore parse_scores(std::string_view response);

}  // namespace causalstock::news
