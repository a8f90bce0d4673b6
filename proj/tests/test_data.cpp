#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "wvg/data.hpp"
#include "wvg/welfare.hpp"

using namespace wvg;

namespace {

WeightTable parse(const std::string& text) {
    std::istringstream in(text);
    return read_weights(in, "inline");
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("wvg_data_" + std::to_string(::getpid()) + "_" + name);
}

} // namespace

TEST(Builtin, ElectoralCollege) {
    const Game g = builtin_ec();
    EXPECT_EQ(g.size(), 51u);
    EXPECT_EQ(g.total_weight(), 538.0);
    EXPECT_EQ(g.weights().squaredNorm(), 10366.0);
    EXPECT_FALSE(g.has_dictator());
    std::map<double, int> classes;
    for (double w : g.weights()) ++classes[w];
    // EV multiset of the 2012–2020 apportionment
    const std::map<double, int> expected{{3, 8}, {4, 5}, {5, 3},  {6, 6},  {7, 3},  {8, 2},  {9, 3},
                                         {10, 4}, {11, 4}, {12, 1}, {13, 1}, {14, 1}, {15, 1}, {16, 2},
                                         {18, 1}, {20, 2}, {29, 2}, {38, 1}, {55, 1}};
    EXPECT_EQ(classes, expected);
    EXPECT_EQ(g.group(*g.index_of("California")).weight, 55.0);
    EXPECT_EQ(g.group(*g.index_of("Wyoming")).weight, 3.0);
    EXPECT_EQ(ec_table().source, kEcTag);
}

TEST(Builtin, FloridaNewYorkWyoming) {
    const Game g = builtin_fl_ny_wy();
    EXPECT_EQ(g.weights(), Eigen::Vector3d(29, 29, 3));
    EXPECT_EQ(g.populations(), Eigen::Vector3d(15047, 13684, 422));
    EXPECT_FALSE(g.has_dictator());
    EXPECT_EQ(fl_ny_wy_table().total_population(), 15047.0 + 13684.0 + 422.0);
}

TEST(WeightFile, RoundTrip) {
    for (const Game& g : {builtin_ec(), builtin_fl_ny_wy()}) {
        const auto path = temp_file("roundtrip.csv");
        save_weights(g, path.string());
        EXPECT_EQ(load_weights(path.string()), g);
        std::filesystem::remove(path);
    }
}

TEST(WeightFile, QuotedNamesRoundTrip) {
    const Game g({{"Smith, John", 2.5, {}}, {"say \"hi\"", 1.0, {}}, {"x\ny", 3.0, {}}});
    std::ostringstream out;
    write_weights(g, out);
    std::istringstream in(out.str());
    EXPECT_EQ(read_weights(in, "mem").game(), g);
}

TEST(WeightFile, Parsing) {
    const auto t = parse("\xEF\xBB\xBFname,weight\r\nA,3\r\n\r\nB,2.5\r\n");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[1].weight, 2.5);
    EXPECT_FALSE(t.game().has_populations());
    const auto p = parse("name,weight,population\nA,3,10\nB,1,2\n");
    EXPECT_EQ(p.game().populations(), Eigen::Vector2d(10, 2));
}

TEST(WeightFile, ValidationErrors) {
    try {
        parse("name,weight\nA,3\nB,0\n");
        FAIL() << "weight 0 accepted";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3 (B)"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse("name,weight\nA,3\nA,2\n"), ConfigError);
    EXPECT_THROW(parse("name,weight,population\nA,3,-1\n"), ConfigError);
    EXPECT_THROW(parse("name,weight\n"), ConfigError);
}

TEST(WeightFile, ParseErrors) {
    try {
        parse("name,weight\nA,3\nB,two\n");
        FAIL() << "bad number accepted";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("label,votes\nA,3\n"), ParseError);
    EXPECT_THROW(parse("name,weight\nA,3,4\n"), ParseError);
    EXPECT_THROW(parse("name,weight\n\"A,3\n"), ParseError);
    EXPECT_THROW(load_weights("/nonexistent/weights.csv"), UsageError);
}

TEST(WeightFile, MissingPopulationsFailPopularVote) {
    const Game g = parse("name,weight\nA,3\nB,2\nC,2\n").game();
    EXPECT_THROW(gp_profile(g, GpScheme::Popular), ConfigError);
    EXPECT_NO_THROW(gp_profile(g, GpScheme::Equalizing));
}

TEST(Csv, Quoting) {
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
    EXPECT_EQ(split_csv_record("\"a,b\",c,\"d\"\"e\"", 1), (std::vector<std::string>{"a,b", "c", "d\"e"}));
    EXPECT_EQ(format_decimal(0.1), "0.10000000000000001");
    EXPECT_EQ(format_decimal(3.0), "3");
}
