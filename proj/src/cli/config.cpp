#include "epscope/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "epscope/error.hpp"

namespace epscope {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw Error(Errc::config, "line " + std::to_string(line) + ": " + msg);
}

double plain_number(std::string_view text, bool& ok) {
    text = trim(text);
    double v = 0.0;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    ok = ec == std::errc{} && ptr == text.data() + text.size() && !text.empty();
    return v;
}

std::size_t parse_count(std::string_view text, std::string_view field) {
    text = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw Error(Errc::config, std::string(field) + ": expected an integer, got '" + std::string(text) + "'");
    if (v < 0) throw Error(Errc::config, std::string(field) + ": must be non-negative");
    return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text, std::string_view field) {
    text = trim(text);
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw Error(Errc::config, std::string(field) + ": expected true or false");
}

std::pair<std::size_t, std::size_t> parse_index_pair(std::string_view text, std::string_view field) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
        throw Error(Errc::config, std::string(field) + ": expected 'i,j'");
    const std::size_t i = parse_count(text.substr(0, comma), field);
    const std::size_t j = parse_count(text.substr(comma + 1), field);
    if (i == 0 || j == 0) throw Error(Errc::config, std::string(field) + ": indices are 1-based");
    return {i - 1, j - 1};
}

struct LevelDraft {
    std::optional<double> intercept, slope, gamma_half;
    std::size_t line = 0;
};

} // namespace

double parse_number(std::string_view text, std::string_view field) {
    text = trim(text);
    bool ok = false;
    double v = 0.0;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        bool ok_num = false, ok_den = false;
        const double num = plain_number(text.substr(0, slash), ok_num);
        const double den = plain_number(text.substr(slash + 1), ok_den);
        ok = ok_num && ok_den && den != 0.0;
        v = ok ? num / den : 0.0;
    } else {
        v = plain_number(text, ok);
    }
    if (!ok || !std::isfinite(v))
        throw Error(Errc::config, std::string(field) + ": invalid number '" + std::string(text) + "'");
    return v;
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::vector<LevelDraft> levels;
    std::optional<double> omega_all;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> entries;
    SweepGrid grid;
    bool grid_seen = false;
    std::set<std::string> grid_keys;
    SearchBlock search;
    bool search_seen = false;
    std::set<std::string> search_keys;

    std::string block;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed block header");
            block = std::string(trim(line.substr(1, line.size() - 2)));
            if (block == "level") {
                levels.emplace_back();
                levels.back().line = line_no;
            } else if (block == "grid") {
                if (grid_seen) fail(line_no, "duplicate [grid] block");
                grid_seen = true;
            } else if (block == "search") {
                if (search_seen) fail(line_no, "duplicate [search] block");
                search_seen = true;
            } else if (block != "coupling" && block != "output") {
                fail(line_no, "unknown block [" + block + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const std::string field = block + "." + key;

        try {
            if (block.empty()) {
                fail(line_no, "key '" + key + "' outside of a block");
            } else if (block == "level") {
                auto& lv = levels.back();
                if (key == "intercept") lv.intercept = parse_number(value, field);
                else if (key == "slope") lv.slope = parse_number(value, field);
                else if (key == "gamma_half") lv.gamma_half = parse_number(value, field);
                else fail(line_no, "unknown key " + field);
            } else if (block == "coupling") {
                if (key == "omega") {
                    omega_all = parse_number(value, field);
                } else if (key.find(',') != std::string::npos) {
                    const auto ij = parse_index_pair(key, field);
                    const double v = parse_number(value, field);
                    if (ij.first == ij.second && v != 0.0)
                        fail(line_no, "coupling." + key + ": diagonal coupling must be 0");
                    const auto mirrored = std::make_pair(ij.second, ij.first);
                    if (auto it = entries.find(mirrored); it != entries.end() && it->second.first != v)
                        fail(line_no, "coupling." + key + ": not symmetric with entry on line " +
                                          std::to_string(it->second.second));
                    entries[ij] = {v, line_no};
                } else {
                    fail(line_no, "unknown key " + field);
                }
            } else if (block == "grid") {
                if (!grid_keys.insert(key).second) fail(line_no, "duplicate key " + field);
                if (key == "a_min") grid.a_min = parse_number(value, field);
                else if (key == "a_max") grid.a_max = parse_number(value, field);
                else if (key == "steps") grid.steps = parse_count(value, field);
                else if (key == "adaptive") grid.adaptive = parse_bool(value, field);
                else if (key == "min_step") grid.min_step = parse_number(value, field);
                else if (key == "pin") {
                    std::string_view rest = value;
                    while (!rest.empty()) {
                        const auto c = rest.find(',');
                        grid.pinned.push_back(parse_number(rest.substr(0, c), field));
                        rest = c == std::string_view::npos ? std::string_view{} : rest.substr(c + 1);
                    }
                } else fail(line_no, "unknown key " + field);
            } else if (block == "output") {
                if (key == "csv") cfg.output.csv = std::string(value);
                else if (key == "svg") cfg.output.svg = std::string(value);
                else if (key == "tolerance") {
                    const double tol = parse_number(value, field);
                    if (!(tol > 0.0)) fail(line_no, field + " must be > 0");
                    cfg.output.tolerance = tol;
                } else fail(line_no, "unknown key " + field);
            } else if (block == "search") {
                if (!search_keys.insert(key).second) fail(line_no, "duplicate key " + field);
                if (key == "a_min") search.box.a_lo = parse_number(value, field);
                else if (key == "a_max") search.box.a_hi = parse_number(value, field);
                else if (key == "scale_min") search.box.s_lo = parse_number(value, field);
                else if (key == "scale_max") search.box.s_hi = parse_number(value, field);
                else if (key == "coupling") search.coupling = parse_index_pair(value, field);
                else fail(line_no, "unknown key " + field);
            }
        } catch (const Error& e) {
            if (e.detail().starts_with("line ")) throw;
            fail(line_no, e.detail());
        }
    }

    const std::size_t n = levels.size();
    if (n < 2) throw Error(Errc::config, "level: need at least two [level] blocks");
    cfg.model.levels.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& d = levels[k];
        const std::string where = "level " + std::to_string(k + 1) + " (line " + std::to_string(d.line) + ")";
        if (!d.intercept) throw Error(Errc::config, where + ": missing level.intercept");
        if (!d.slope) throw Error(Errc::config, where + ": missing level.slope");
        const double gh = d.gamma_half.value_or(0.0);
        if (gh < 0.0) throw Error(Errc::config, where + ": level.gamma_half must be >= 0");
        cfg.model.levels[k] = LevelSpec{EnergyLaw{*d.intercept, *d.slope}, 2.0 * gh};
    }
    cfg.model.coupling = RealMatrix(n);
    if (omega_all)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                if (k != l) cfg.model.coupling(k, l) = *omega_all;
    for (const auto& [ij, v] : entries) {
        if (ij.first >= n || ij.second >= n)
            throw Error(Errc::config, "line " + std::to_string(v.second) + ": coupling index out of range");
        cfg.model.coupling(ij.first, ij.second) = v.first;
        cfg.model.coupling(ij.second, ij.first) = v.first;
    }
    try {
        validate(cfg.model);
    } catch (const Error& e) {
        throw Error(Errc::config, e.detail());
    }

    if (grid_seen) {
        for (const char* required : {"a_min", "a_max", "steps"})
            if (!grid_keys.count(required)) throw Error(Errc::config, std::string("grid.") + required + ": missing");
        validate(grid);
        cfg.grid = grid;
    }
    if (search_seen) {
        for (const char* required : {"a_min", "a_max", "scale_min", "scale_max"})
            if (!search_keys.count(required))
                throw Error(Errc::config, std::string("search.") + required + ": missing");
        if (!(search.box.a_lo < search.box.a_hi)) throw Error(Errc::config, "search: need a_min < a_max");
        if (!(search.box.s_lo < search.box.s_hi)) throw Error(Errc::config, "search: need scale_min < scale_max");
        if (search.coupling && (search.coupling->first >= n || search.coupling->second >= n ||
                                search.coupling->first == search.coupling->second))
            throw Error(Errc::config, "search.coupling: entry out of range");
        cfg.search = search;
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::config, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

double effective_tolerance(const OutputBlock& output) {
    if (output.tolerance) return *output.tolerance;
    if (const char* env = std::getenv("EPSCOPE_TOLERANCE")) {
        const double v = parse_number(env, "EPSCOPE_TOLERANCE");
        if (!(v > 0.0)) throw Error(Errc::config, "EPSCOPE_TOLERANCE must be > 0");
        return v;
    }
    return kDefaultTolerance;
}

} // namespace epscope
