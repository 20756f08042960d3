#include "causalstock/news/parser.h"

#include "causalstock/error.h"

#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>

namespace causalstock::news {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_filler(char c) { return c == ' ' || c == '\t' || c == '*' || c == '_' || c == '"' || c == '\''; }

enum class Lookup { Missing, NonNumeric, Found };

struct Field {
    Lookup state = Lookup::Missing;
    double value = 0.0;
};

Field find_field(std::string_view text, std::string_view label) {
    Field field;
    for (std::size_t pos = 0; pos + label.size() <= text.size(); ++pos) {
        bool match = true;
        for (std::size_t k = 0; k < label.size(); ++k) {
            if (lower(text[pos + k]) != label[k]) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        if (pos > 0 && is_alpha(text[pos - 1])) continue;
        std::size_t p = pos + label.size();
        if (p < text.size() && is_alpha(text[p])) {
            // Allow "Correlation score:" but not "Correlations".
            constexpr std::string_view score = " score";
            std::size_t q = p;
            while (q < text.size() && is_filler(text[q])) ++q;
            bool is_score = q + 5 <= text.size();
            for (std::size_t k = 0; is_score && k < 5; ++k) is_score = lower(text[q + k]) == score[k + 1];
            if (!is_score) continue;
            p = q + 5;
        }
        while (p < text.size() && is_filler(text[p])) ++p;
        if (p < text.size() && is_alpha(text[p])) {
            std::size_t q = p;
            while (q < text.size() && is_alpha(text[q])) ++q;
            std::string word;
            for (std::size_t k = p; k < q; ++k) word += lower(text[k]);
            if (word != "score") continue;
            p = q;
            while (p < text.size() && is_filler(text[p])) ++p;
        }
        if (p >= text.size() || (text[p] != ':' && text[p] != '=')) continue;
        ++p;
        while (p < text.size() && is_filler(text[p])) ++p;
        if (p < text.size() && text[p] == '+') ++p;
        double v = 0.0;
        const char* first = text.data() + p;
        const char* last = text.data() + text.size();
        auto res = std::from_chars(first, last, v);
        if (res.ec == std::errc() && res.ptr != first && std::isfinite(v)) {
            field.state = Lookup::Found;
            field.value = v;
            return field;
        }
        field.state = Lookup::NonNumeric;
    }
    return field;
}

}  // namespace

NewsScore parse_scores(std::string_view response) {
    constexpr std::array<std::string_view, 5> labels = {"correlation", "sentiment", "importance", "impact", "duration"};
    std::array<double, 5> values{};
    std::string missing;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const Field f = find_field(response, labels[k]);
        if (f.state == Lookup::NonNumeric) {
            throw ParseError("non-numeric value for '" + std::string(labels[k]) + "'", std::string(response));
        }
        if (f.state == Lookup::Missing) {
            missing += missing.empty() ? "" : ", ";
            missing += labels[k];
        }
        values[k] = f.value;
    }
    if (!missing.empty()) {
        throw ParseError("fewer than five score labels found (missing: " + missing + ")", std::string(response));
    }
    return NewsScore::from_array(values).clamped();
}

}  // namespace causalstock::news
