#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccr/cos_engine.hpp"
#include "ccr/model.hpp"
#include "ccr/portfolio.hpp"

namespace ccr {

/// Input file rejected. what() starts with "<file>:<line>: ".
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string model_to_json(const ModelParams& p);
ModelParams model_from_json(const std::string& text, const std::string& source = "<model>");

/// Trades are written by their terms; legs are rebuilt on load.
std::string portfolio_to_json(const Portfolio& pf);
Portfolio portfolio_from_json(const std::string& text, const std::string& source = "<portfolio>");

struct RunSettings {
    CosSettings cos;
    int dates = 20;
};

std::string settings_to_json(const RunSettings& s);
RunSettings settings_from_json(const std::string& text, const std::string& source = "<settings>");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// One line of a results file. Unset metrics are NaN and written empty.
struct ResultRow {
    double t = 0.0;
    std::string level;
    double pfe = 0.0;
    double ee = 0.0;
    double dEE_dxd = 0.0;
    double dEE_dxf = 0.0;
    double dEE_dX = 0.0;
    double cpu_seconds = 0.0;
    std::string method;
};

inline constexpr const char* kResultsHeader = "t,level,pfe,ee,dEE_dxd,dEE_dxf,dEE_dX,cpu_seconds,method";

/// Shortest round-trip decimal form; NaN becomes the empty string.
std::string format_number(double v);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(const std::string& text, const std::string& source = "<results>");

/// FNV-1a over the bytes; used to pin input files in run manifests.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace ccr
