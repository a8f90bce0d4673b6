#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wvg/core.hpp"

namespace wvg {

/// Rows of (name, weight, optional population) with the place they came from.
struct WeightTable {
    std::vector<GroupSpec> rows;
    std::string source;

    Game game() const { return Game(rows); }
    double total_weight() const;
    /// Sum of populations over rows that have one.
    double total_population() const;
};

/// Tag of the built-in Electoral College table (identical EV multiset for
/// the 2012, 2016 and 2020 apportionments).
inline constexpr const char* kEcTag = "ec-2012-2020 apportionment";

WeightTable ec_table();
WeightTable fl_ny_wy_table();

/// 50 states and DC, total weight 538.
Game builtin_ec();
/// Florida, New York, Wyoming with populations in thousands.
Game builtin_fl_ny_wy();

/// Comma-separated text with header `name,weight[,population]`.
/// Malformed text raises ParseError; invalid rows raise ConfigError naming the row.
WeightTable read_weights(std::istream& in, const std::string& source);
WeightTable load_weight_table(const std::string& path);
Game load_weights(const std::string& path);

void write_weights(const Game& game, std::ostream& out);
void save_weights(const Game& game, const std::string& path);

/// RFC 4180 style field splitting and quoting.
std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_number);
std::string csv_field(const std::string& text);
std::string format_decimal(double value, int precision = 17);

} // namespace wvg
