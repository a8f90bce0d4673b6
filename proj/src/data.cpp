#include "wvg/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace wvg {

namespace {

struct StateRow {
    const char* name;
    double votes;
};

// Electoral votes, 2012-2020 apportionment.
constexpr StateRow kStates[] = {
    {"Alabama", 9},         {"Alaska", 3},          {"Arizona", 11},       {"Arkansas", 6},
    {"California", 55},     {"Colorado", 9},        {"Connecticut", 7},    {"Delaware", 3},
    {"District of Columbia", 3},                    {"Florida", 29},       {"Georgia", 16},
    {"Hawaii", 4},          {"Idaho", 4},           {"Illinois", 20},      {"Indiana", 11},
    {"Iowa", 6},            {"Kansas", 6},          {"Kentucky", 8},       {"Louisiana", 8},
    {"Maine", 4},           {"Maryland", 10},       {"Massachusetts", 11}, {"Michigan", 16},
    {"Minnesota", 10},      {"Mississippi", 6},     {"Missouri", 10},      {"Montana", 3},
    {"Nebraska", 5},        {"Nevada", 6},          {"New Hampshire", 4},  {"New Jersey", 14},
    {"New Mexico", 5},      {"New York", 29},       {"North Carolina", 15},{"North Dakota", 3},
    {"Ohio", 18},           {"Oklahoma", 7},        {"Oregon", 7},         {"Pennsylvania", 20},
    {"Rhode Island", 4},    {"South Carolina", 9},  {"South Dakota", 3},   {"Tennessee", 11},
    {"Texas", 38},          {"Utah", 6},            {"Vermont", 3},        {"Virginia", 13},
    {"Washington", 12},     {"West Virginia", 5},   {"Wisconsin", 10},     {"Wyoming", 3},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const char* what, std::size_t line) {
    const std::string t = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
        throw ParseError(std::string("cannot read ") + what + " '" + field + "'", line);
    return v;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

double WeightTable::total_weight() const {
    double t = 0.0;
    for (const auto& r : rows) t += r.weight;
    return t;
}

double WeightTable::total_population() const {
    double t = 0.0;
    for (const auto& r : rows)
        if (r.population) t += *r.population;
    return t;
}

WeightTable ec_table() {
    WeightTable t;
    t.source = kEcTag;
    for (const auto& s : kStates) t.rows.push_back({s.name, s.votes, std::nullopt});
    return t;
}

WeightTable fl_ny_wy_table() {
    WeightTable t;
    t.source = "fl-ny-wy 2020";
    t.rows = {{"Florida", 29, 15047.0}, {"New York", 29, 13684.0}, {"Wyoming", 3, 422.0}};
    return t;
}

Game builtin_ec() { return ec_table().game(); }
Game builtin_fl_ny_wy() { return fl_ny_wy_table().game(); }

std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_number) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false, was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    cur += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!trim(cur).empty() || was_quoted) throw ParseError("stray quote inside a field", line_number);
            cur.clear();
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
            was_quoted = false;
        } else {
            if (was_quoted && c != ' ' && c != '\t') throw ParseError("text after closing quote", line_number);
            cur += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_number);
    fields.push_back(cur);
    return fields;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_decimal(double value, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << value;
    return os.str();
}

WeightTable read_weights(std::istream& in, const std::string& source) {
    WeightTable table;
    table.source = source;
    std::string line;
    std::size_t number = 0;
    bool have_header = false, has_population = false;
    std::unordered_map<std::string, std::size_t> seen;

    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        // A quoted field may span lines.
        const std::size_t start = number;
        std::string more;
        while (std::count(line.begin(), line.end(), '"') % 2 == 1 && std::getline(in, more)) {
            ++number;
            if (!more.empty() && more.back() == '\r') more.pop_back();
            line += '\n';
            line += more;
        }
        auto fields = split_csv_record(line, start);
        if (!have_header) {
            for (auto& f : fields) f = lower(trim(f));
            if (fields.size() < 2 || fields[0] != "name" || fields[1] != "weight" ||
                (fields.size() == 3 && fields[2] != "population") || fields.size() > 3)
                throw ParseError("expected header 'name,weight[,population]'", number);
            has_population = fields.size() == 3;
            have_header = true;
            continue;
        }
        const std::size_t expected = has_population ? 3 : 2;
        if (fields.size() != expected)
            throw ParseError("expected " + std::to_string(expected) + " fields, found " + std::to_string(fields.size()),
                             number);
        GroupSpec g;
        g.name = trim(fields[0]);
        if (g.name.empty()) throw ParseError("empty group name", number);
        g.weight = parse_number(fields[1], "weight", number);
        if (!(g.weight > 0.0))
            throw ConfigError("line " + std::to_string(number) + " (" + g.name + "): weight must be positive");
        if (has_population && !trim(fields[2]).empty()) {
            g.population = parse_number(fields[2], "population", number);
            if (!(*g.population > 0.0))
                throw ConfigError("line " + std::to_string(number) + " (" + g.name + "): population must be positive");
        }
        if (const auto [it, fresh] = seen.emplace(g.name, number); !fresh)
            throw ConfigError("line " + std::to_string(number) + " (" + g.name + "): duplicate of line " +
                              std::to_string(it->second));
        table.rows.push_back(std::move(g));
    }
    if (!have_header) throw ParseError("missing header row", number + 1);
    if (table.rows.empty()) throw ConfigError(source + ": no groups listed");
    return table;
}

WeightTable load_weight_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open weight file '" + path + "'");
    return read_weights(in, path);
}

Game load_weights(const std::string& path) { return load_weight_table(path).game(); }

void write_weights(const Game& game, std::ostream& out) {
    const bool pop = std::any_of(game.groups().begin(), game.groups().end(),
                                 [](const GroupSpec& g) { return g.population.has_value(); });
    out << (pop ? "name,weight,population\n" : "name,weight\n");
    for (const auto& g : game.groups()) {
        out << csv_field(g.name) << ',' << format_decimal(g.weight);
        if (pop) {
            out << ',';
            if (g.population) out << format_decimal(*g.population);
        }
        out << '\n';
    }
}

void save_weights(const Game& game, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write weight file '" + path + "'");
    write_weights(game, out);
}

} // namespace wvg
