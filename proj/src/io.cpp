#include "ccr/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ccr {

using nlohmann::json;

namespace {

int line_of_offset(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of "key", or 1.
int line_of_key(const std::string& text, const std::string& key) {
    auto pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

// Lines on which the elements of a top-level array start.
std::vector<int> element_lines(const std::string& text) {
    std::vector<int> lines;
    int depth = 0;
    int line = 1;
    bool in_string = false;
    bool escaped = false;
    bool expect = false;
    for (char c : text) {
        if (c == '\n') ++line;
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (expect && !std::isspace(static_cast<unsigned char>(c))) {
            lines.push_back(line);
            expect = false;
        }
        switch (c) {
            case '"': in_string = true; break;
            case '[':
            case '{':
                if (++depth == 1 && c == '[') expect = true;
                break;
            case ']':
            case '}': --depth; break;
            case ',':
                if (depth == 1) expect = true;
                break;
            default: break;
        }
    }
    return lines;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw InputError(source + ":" + std::to_string(line) + ": " + msg);
}

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(source, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
}

double number(const json& obj, const char* key, const std::string& source, int line) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(source, line, std::string("missing key '") + key + "'");
    if (!it->is_number()) fail(source, line, std::string("'") + key + "' must be a number");
    return it->get<double>();
}

int integer(const json& obj, const char* key, const std::string& source, int line) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(source, line, std::string("missing key '") + key + "'");
    if (!it->is_number_integer()) fail(source, line, std::string("'") + key + "' must be an integer");
    return it->get<int>();
}

std::string text_field(const json& obj, const char* key, const std::string& source, int line) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(source, line, std::string("missing key '") + key + "'");
    if (!it->is_string()) fail(source, line, std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

json curve_json(const DiscountCurve& c) {
    if (c.is_flat()) return json{{"flat_rate", c.flat_rate()}};
    return json{{"tenors", c.tenors()}, {"dfs", c.dfs()}};
}

DiscountCurve curve_from(const json& j, const std::string& source, int line) {
    if (!j.is_object()) fail(source, line, "curve must be an object");
    if (j.size() == 1 && j.contains("flat_rate")) return DiscountCurve::flat(number(j, "flat_rate", source, line));
    if (j.size() == 2 && j.contains("tenors") && j.contains("dfs")) {
        try {
            return DiscountCurve::table(j["tenors"].get<std::vector<double>>(), j["dfs"].get<std::vector<double>>());
        } catch (const json::exception& e) {
            fail(source, line, std::string("curve table: ") + e.what());
        } catch (const std::invalid_argument& e) {
            fail(source, line, e.what());
        }
    }
    fail(source, line, "curve must be {\"flat_rate\": r} or {\"tenors\": [...], \"dfs\": [...]}");
}

}  // namespace

// ---------------------------------------------------------------- model

std::string model_to_json(const ModelParams& p) {
    json j = {{"a_d", p.a_d},         {"a_f", p.a_f},         {"sigma_d", p.sigma_d},
              {"sigma_f", p.sigma_f}, {"sigma_X", p.sigma_X}, {"mu_X", p.mu_X},
              {"rho_df", p.rho_df},   {"rho_dX", p.rho_dX},   {"rho_fX", p.rho_fX},
              {"X0", p.X0},           {"curve_d", curve_json(p.curve_d)}, {"curve_f", curve_json(p.curve_f)}};
    return j.dump(2) + "\n";
}

ModelParams model_from_json(const std::string& text, const std::string& source) {
    static const std::set<std::string> keys = {"a_d",    "a_f",    "sigma_d", "sigma_f", "sigma_X", "mu_X",
                                               "rho_df", "rho_dX", "rho_fX",  "X0",      "curve_d", "curve_f"};
    json j = parse_json(text, source);
    if (!j.is_object()) fail(source, 1, "model file must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!keys.count(it.key())) fail(source, line_of_key(text, it.key()), "unknown key '" + it.key() + "'");

    ModelParams p;
    auto num = [&](const char* k) { return number(j, k, source, line_of_key(text, k)); };
    p.a_d = num("a_d");
    p.a_f = num("a_f");
    p.sigma_d = num("sigma_d");
    p.sigma_f = num("sigma_f");
    p.sigma_X = num("sigma_X");
    p.mu_X = num("mu_X");
    p.rho_df = num("rho_df");
    p.rho_dX = num("rho_dX");
    p.rho_fX = num("rho_fX");
    p.X0 = num("X0");
    for (const char* k : {"curve_d", "curve_f"})
        if (!j.contains(k)) fail(source, 1, std::string("missing key '") + k + "'");
    p.curve_d = curve_from(j["curve_d"], source, line_of_key(text, "curve_d"));
    p.curve_f = curve_from(j["curve_f"], source, line_of_key(text, "curve_f"));
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail(source, 1, e.what());
    }
    return p;
}

// ---------------------------------------------------------------- portfolio

std::string portfolio_to_json(const Portfolio& pf) {
    json arr = json::array();
    for (const Trade& t : pf.trades) {
        const TradeTerms& k = t.terms;
        json o;
        o["id"] = t.id;
        o["kind"] = std::string(to_string(k.kind));
        if (k.kind == TradeKind::fx_forward || k.kind == TradeKind::ccs)
            o["currencies"] = {"domestic", "foreign"};
        else
            o["currency"] = std::string(to_string(k.currency));
        o["notional"] = k.notional;
        o["fixed_rate"] = k.fixed_rate;
        if (k.kind == TradeKind::ccs) o["foreign_fixed_rate"] = k.foreign_fixed_rate;
        if (k.kind == TradeKind::fx_forward || k.kind == TradeKind::ccs) o["fx_rate"] = k.fx_rate;
        o["start"] = k.start;
        o["maturity"] = k.maturity;
        o["frequency"] = std::string(to_string(k.frequency));
        o["netting_set"] = t.netting_set;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

Portfolio portfolio_from_json(const std::string& text, const std::string& source) {
    json j = parse_json(text, source);
    if (!j.is_array()) fail(source, 1, "portfolio file must be a JSON array of trades");
    const std::vector<int> lines = element_lines(text);

    Portfolio pf;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const int line = i < lines.size() ? lines[i] : 1;
        const json& o = j[i];
        if (!o.is_object()) fail(source, line, "trade must be an object");
        try {
            TradeTerms k;
            std::string id = text_field(o, "id", source, line);
            if (!ids.insert(id).second) fail(source, line, "duplicate trade id '" + id + "'");
            k.kind = parse_trade_kind(text_field(o, "kind", source, line));
            const bool two_ccy = k.kind == TradeKind::fx_forward || k.kind == TradeKind::ccs;
            if (two_ccy) {
                if (o.contains("currency")) fail(source, line, "two-currency trade takes 'currencies', not 'currency'");
                auto c = o.find("currencies");
                if (c == o.end() || *c != json({"domestic", "foreign"}))
                    fail(source, line, "'currencies' must be [\"domestic\", \"foreign\"]");
                k.currency = Currency::foreign;
            } else {
                k.currency = parse_currency(text_field(o, "currency", source, line));
            }
            k.notional = number(o, "notional", source, line);
            k.fixed_rate = number(o, "fixed_rate", source, line);
            if (k.kind == TradeKind::ccs) k.foreign_fixed_rate = number(o, "foreign_fixed_rate", source, line);
            if (two_ccy) k.fx_rate = number(o, "fx_rate", source, line);
            k.start = number(o, "start", source, line);
            k.maturity = number(o, "maturity", source, line);
            k.frequency = parse_frequency(text_field(o, "frequency", source, line));
            std::string ns = text_field(o, "netting_set", source, line);
            pf.trades.push_back(build_trade(std::move(id), k, std::move(ns)));
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            fail(source, line, e.what());
        }
    }
    return pf;
}

// ---------------------------------------------------------------- settings

std::string settings_to_json(const RunSettings& s) {
    json j = {{"K", s.cos.K},         {"J", s.cos.J},         {"J_mom", s.cos.J_mom},
              {"TOL", s.cos.tol},     {"L", s.cos.L},         {"alpha", s.cos.alpha},
              {"filter_p", s.cos.filter_p}, {"dates", s.dates}};
    return j.dump(2) + "\n";
}

RunSettings settings_from_json(const std::string& text, const std::string& source) {
    static const std::set<std::string> keys = {"K", "J", "J_mom", "TOL", "L", "alpha", "filter_p", "dates"};
    json j = parse_json(text, source);
    if (!j.is_object()) fail(source, 1, "settings file must be a JSON object");
    RunSettings s;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const int line = line_of_key(text, k);
        if (!keys.count(k)) fail(source, line, "unknown key '" + k + "'");
        if (k == "K") s.cos.K = integer(j, "K", source, line);
        if (k == "J") s.cos.J = integer(j, "J", source, line);
        if (k == "J_mom") s.cos.J_mom = integer(j, "J_mom", source, line);
        if (k == "TOL") s.cos.tol = number(j, "TOL", source, line);
        if (k == "L") s.cos.L = number(j, "L", source, line);
        if (k == "alpha") s.cos.alpha = number(j, "alpha", source, line);
        if (k == "filter_p") s.cos.filter_p = integer(j, "filter_p", source, line);
        if (k == "dates") s.dates = integer(j, "dates", source, line);
    }
    try {
        s.cos.validate();
    } catch (const std::invalid_argument& e) {
        fail(source, 1, e.what());
    }
    if (s.dates < 1) fail(source, line_of_key(text, "dates"), "dates must be >= 1");
    return s;
}

// ---------------------------------------------------------------- files

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ":0: cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------- results

std::string format_number(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kResultsHeader << '\n';
    for (const ResultRow& r : rows)
        os << format_number(r.t) << ',' << r.level << ',' << format_number(r.pfe) << ',' << format_number(r.ee)
           << ',' << format_number(r.dEE_dxd) << ',' << format_number(r.dEE_dxf) << ',' << format_number(r.dEE_dX)
           << ',' << format_number(r.cpu_seconds) << ',' << r.method << '\n';
}

std::vector<ResultRow> read_results_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::vector<ResultRow> rows;
    auto field = [&](const std::string& s) {
        if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail(source, lineno, "bad number '" + s + "'");
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != kResultsHeader) fail(source, 1, "unexpected header, want " + std::string(kResultsHeader));
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cols.push_back(c);
        if (!line.empty() && line.back() == ',') cols.emplace_back();
        if (cols.size() != 9) fail(source, lineno, "expected 9 columns, got " + std::to_string(cols.size()));
        ResultRow r;
        r.t = field(cols[0]);
        r.level = cols[1];
        r.pfe = field(cols[2]);
        r.ee = field(cols[3]);
        r.dEE_dxd = field(cols[4]);
        r.dEE_dxf = field(cols[5]);
        r.dEE_dX = field(cols[6]);
        r.cpu_seconds = field(cols[7]);
        r.method = cols[8];
        rows.push_back(std::move(r));
    }
    if (lineno == 0) fail(source, 1, "empty results file");
    return rows;
}

}  // namespace ccr
