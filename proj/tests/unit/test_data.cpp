#include "causalstock/data/date.h"
#include "causalstock/data/labels.h"
#include "causalstock/data/manifest.h"
#include "causalstock/data/news_items.h"
#include "causalstock/data/panel.h"
#include "causalstock/data/prices.h"
#include "causalstock/data/text.h"
#include "causalstock/error.h"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace causalstock;
using namespace causalstock::data;

namespace {

PriceSeries series(const std::string& sym, const std::vector<std::string>& dates, double start = 100.0,
                   double step = 1.0) {
    PriceSeries s;
    s.symbol = sym;
    double p = start;
    for (const auto& d : dates) {
        PriceRecord r;
        r.date = parse_date(d);
        r.adj_close = r.close = r.open = p;
        r.high = p + 1;
        r.low = p - 1;
        r.volume = 1000;
        s.records.push_back(r);
        p += step;
    }
    return s;
}

std::vector<std::string> business_days(int n) {
    std::vector<std::string> out;
    auto d = std::chrono::sys_days(parse_date("2015-01-05"));
    while (static_cast<int>(out.size()) < n) {
        const std::chrono::weekday wd(d);
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) out.push_back(format_date(d));
        d += std::chrono::days(1);
    }
    return out;
}

}  // namespace

TEST(Date, ParseAndFormat) {
    EXPECT_EQ(format_date(parse_date("2015-10-01")), "2015-10-01");
    EXPECT_THROW(parse_date("2015-13-01"), DataError);
    EXPECT_THROW(parse_date("2015/10/01"), DataError);
    EXPECT_THROW(parse_date("2015-02-30"), DataError);
}

TEST(Date, TimestampsWithOffsets) {
    const auto a = parse_timestamp("2015-10-01T09:30:00-05:00");
    const auto b = parse_timestamp("2015-10-01T14:30:00Z");
    EXPECT_EQ(a, b);
    EXPECT_EQ(format_timestamp(a), "2015-10-01T14:30:00Z");
    EXPECT_EQ(utc_date(parse_timestamp("2015-10-01T23:30:00-05:00")), parse_date("2015-10-02"));
}

TEST(Prices, RawRowMapsFields) {
    std::istringstream in("date,adj_close,high,low,open,close,volume\n2015-10-01,111.0,112.5,109.0,110.0,111.2,1000000\n");
    const auto s = parse_prices(in, "AAPL", std::nullopt);
    ASSERT_EQ(s.records.size(), 1u);
    EXPECT_EQ(s.records[0].adj_close, 111.0);
    EXPECT_EQ(s.records[0].open, 110.0);
    EXPECT_EQ(s.records[0].volume, 1000000.0);
}

TEST(Prices, MovementLayoutRowMapsFields) {
    // movement, open, high, low, close, volume
    std::istringstream in("date,movement_pct,open,high,low,close,volume\n2015-10-01,0.012,110.0,112.5,109.0,111.2,1000000\n");
    const auto s = parse_prices(in, "AAPL", std::nullopt);
    ASSERT_EQ(s.records.size(), 1u);
    EXPECT_EQ(s.records[0].open, 110.0);
    EXPECT_EQ(s.records[0].high, 112.5);
    EXPECT_EQ(s.records[0].close, 111.2);
    EXPECT_EQ(s.records[0].adj_close, 111.2);
}

TEST(Prices, DuplicatedDateNamesTheDate) {
    std::istringstream in("date,adj_close,high,low,open,close,volume\n"
                          "2015-10-01,1,2,0.5,1,1,10\n2015-10-01,1,2,0.5,1,1,10\n");
    try {
        parse_prices(in, "X", std::nullopt);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("2015-10-01"), std::string::npos);
    }
}

TEST(Prices, EmptyFileWarns) {
    std::istringstream in("");
    PriceLoadReport rep;
    const auto s = parse_prices(in, "X", std::nullopt, AdjCloseMode::EqualClose, &rep);
    EXPECT_TRUE(s.records.empty());
    EXPECT_EQ(rep.warnings.size(), 1u);
}

TEST(Prices, MalformedRowsListLineNumbers) {
    std::istringstream in("date,adj_close,high,low,open,close,volume\n"
                          "2015-10-01,1,2,0.5,1,1,10\n2015-10-02,abc,2,0.5,1,1,10\n2015-10-05,1,0.1,0.5,1,1,10\n");
    try {
        parse_prices(in, "X", std::nullopt);
        FAIL();
    } catch (const DataError& e) {
        const std::string w = e.what();
        EXPECT_NE(w.find("line 3"), std::string::npos);
        EXPECT_NE(w.find("line 4"), std::string::npos);
    }
}

TEST(Prices, DescendingFilesAreReversed) {
    std::istringstream in("date,adj_close,high,low,open,close,volume\n"
                          "2015-10-02,2,3,1,2,2,10\n2015-10-01,1,2,0.5,1,1,10\n");
    const auto s = parse_prices(in, "X", std::nullopt);
    EXPECT_EQ(s.records.front().date, parse_date("2015-10-01"));
}

TEST(Prices, UnknownHeaderIsDataError) {
    std::istringstream in("when,price\n2015-10-01,1\n");
    EXPECT_THROW(parse_prices(in, "X", std::nullopt), DataError);
}

TEST(Labels, StrictAndThreshold) {
    EXPECT_EQ(movement_label(100, 101, LabelMode::strict()), Movement::Rise);
    EXPECT_EQ(movement_label(100, 100, LabelMode::strict()), Movement::Fall);
    const auto th = LabelMode::threshold(-0.005, 0.0055);
    // 100 -> 100.2 is +0.2%, inside the dead zone.
    EXPECT_EQ(movement_label(100, 100.2, th), Movement::Skip);
    EXPECT_EQ(movement_label(100, 100.6, th), Movement::Rise);
    EXPECT_EQ(movement_label(100, 99.4, th), Movement::Fall);
    EXPECT_THROW(movement_label(0, 1, th), DataError);
}

TEST(Windows, CountsMatchEnumeration) {
    auto p6 = align({series("A", business_days(6))}, CalendarPolicy::Intersection, LabelMode::strict());
    const auto w6 = build_windows(p6, nullptr, 5, 10);
    ASSERT_EQ(w6.size(), 1u);
    EXPECT_EQ(w6[0].target, p6.dates[5]);

    auto p100 = align({series("A", business_days(100)), series("B", business_days(100))}, CalendarPolicy::Intersection,
                      LabelMode::strict());
    EXPECT_EQ(build_windows(p100, nullptr, 5, 10).size(), 95u);
    EXPECT_THROW(build_windows(p100, nullptr, 0, 10), ConfigError);
}

TEST(Windows, LagOrderMostRecentFirst) {
    auto p = align({series("A", business_days(8), 100, 1)}, CalendarPolicy::Intersection, LabelMode::strict());
    const auto w = build_windows(p, nullptr, 3, 10);
    const auto& first = w.front();
    // target is day 3; lag 0 is day 2 with adj_close 102.
    EXPECT_EQ(first.price(0, 0)[0], 102.0);
    EXPECT_EQ(first.price(0, 2)[0], 100.0);
}

TEST(Windows, DropPolicySkipsGap) {
    auto days = business_days(12);
    auto gappy = days;
    gappy.erase(gappy.begin() + 2);  // day 3 missing
    auto p = align({series("A", days), series("B", gappy)}, CalendarPolicy::UnionDrop, LabelMode::strict());
    const auto ws = build_windows(p, nullptr, 2, 10);
    const auto missing = parse_date(days[2]);
    for (const auto& w : ws) {
        for (std::size_t k = 1; k <= 2; ++k) {
            EXPECT_NE(p.dates[w.target_index - k], missing);
        }
        EXPECT_NE(w.target, missing);
    }
    EXPECT_EQ(ws.size(), 12u - 2u - 3u);

    auto ff = align({series("A", days), series("B", gappy)}, CalendarPolicy::UnionForwardFill, LabelMode::strict());
    EXPECT_EQ(build_windows(ff, nullptr, 2, 10).size(), 10u);
    auto inter = align({series("A", days), series("B", gappy)}, CalendarPolicy::Intersection, LabelMode::strict());
    EXPECT_EQ(inter.days(), 11u);
}

TEST(Windows, NewsBucketsKeepMostRecentItems) {
    auto p = align({series("A", business_days(6))}, CalendarPolicy::Intersection, LabelMode::strict());
    std::vector<ScoredNews> items;
    for (int k = 0; k < 4; ++k) {
        ScoredNews n;
        n.symbol = "A";
        n.published = parse_timestamp(format_date(p.dates[3]) + "T1" + std::to_string(k) + ":00:00Z");
        n.score.sentiment = 0.1 * k;
        items.push_back(n);
    }
    const auto buckets = bucket_news(p, items);
    const auto ws = build_windows(p, &buckets, 2, 2);
    // window targeting day 4 has day 3 at lag 0
    const auto& w = ws[2];
    ASSERT_EQ(w.target, p.dates[4]);
    ASSERT_EQ(w.news_at(0, 0).size(), 2u);
    EXPECT_DOUBLE_EQ(w.news_at(0, 0)[0].sentiment, 0.2);
    EXPECT_DOUBLE_EQ(w.news_at(0, 0)[1].sentiment, 0.3);
}

TEST(Split, PartitionAndBoundaries) {
    const auto days = business_days(100);
    auto p = align({series("A", days)}, CalendarPolicy::Intersection, LabelMode::strict());
    auto ws = build_windows(p, nullptr, 5, 10);
    ASSERT_EQ(ws.size(), 95u);
    // 70 / 10 / 15 by target index
    SplitDates sd{parse_date(days[75]), parse_date(days[85])};
    const auto s = chronological_split(ws, sd);
    EXPECT_EQ(s.train.size(), 70u);
    EXPECT_EQ(s.valid.size(), 10u);
    EXPECT_EQ(s.test.size(), 15u);
    // the first validation window still reaches back into the training period
    EXPECT_LT(p.dates[s.valid.front().target_index - 1], sd.valid_start);

    const auto all_train = chronological_split(ws, {parse_date("2030-01-01"), parse_date("2030-02-01")});
    EXPECT_TRUE(all_train.test.empty());
    EXPECT_FALSE(all_train.warnings.empty());
    EXPECT_THROW(chronological_split(ws, {sd.test_start, sd.valid_start}), ConfigError);
}

TEST(Normalizer, UsesTrainingDaysOnly) {
    const auto days = business_days(10);
    auto p = align({series("A", days, 100, 1)}, CalendarPolicy::Intersection, LabelMode::strict());
    const auto n = fit_normalizer(p, parse_date(days[4]));
    EXPECT_DOUBLE_EQ(n.mean[0], 101.5);
    const auto back = Normalizer::from_json(n.to_json());
    EXPECT_EQ(back.mean, n.mean);
    EXPECT_EQ(back.stddev, n.stddev);
}

TEST(News, ParsesAndSkipsEmptyText) {
    std::istringstream in(R"({"symbol":"AAPL","timestamp":"2015-10-01T14:30:00Z","text":"hello"}
{"symbol":"AAPL","timestamp":"2015-10-01T15:30:00Z","text":"   "}
)");
    NewsLoadReport rep;
    const auto items = parse_news(in, &rep);
    ASSERT_EQ(items.size(), 1u);
    EXPECT_EQ(items[0].text, "hello");
    EXPECT_EQ(rep.warnings.size(), 1u);
    std::istringstream bad("{\"symbol\":\"A\"}\nnot json\n");
    try {
        parse_news(bad);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
    }
}

TEST(Text, KeyValueFile) {
    const auto kv = KeyValueFile::parse("a = 1\n# comment\nb = x y  # trailing\n", "t");
    EXPECT_EQ(kv.require("a"), "1");
    EXPECT_EQ(kv.get("b").value(), "x y");
    EXPECT_THROW(kv.require("zzz"), ConfigError);
    EXPECT_THROW(kv.require_known({"a"}), ConfigError);
}

TEST(Manifest, ParsesAndResolvesPaths) {
    const auto dir = std::filesystem::temp_directory_path() / "cs_manifest_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "manifest.txt") << "symbols = A, B\nvalid_start = 2015-02-01\ntest_start = 2015-03-01\n"
                                           "price.B = other/b.csv\nlabel_mode = threshold\n"
                                           "rise_threshold = 0.0055\nfall_threshold = -0.005\n";
    const auto m = Manifest::load(dir);
    EXPECT_EQ(m.symbols, (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(m.price_files.at("A"), dir / "prices" / "A.csv");
    EXPECT_EQ(m.price_files.at("B"), dir / "other" / "b.csv");
    EXPECT_EQ(m.label_mode.kind, LabelMode::Kind::Threshold);
    std::ofstream(dir / "bad.txt") << "symbols = A\nvalid_start = 2015-02-01\ntest_start = 2015-03-01\nbogus = 1\n";
    EXPECT_THROW(Manifest::load(dir / "bad.txt"), ConfigError);
    EXPECT_THROW(Manifest::load(dir / "missing.txt"), DataError);
    std::filesystem::remove_all(dir);
}
