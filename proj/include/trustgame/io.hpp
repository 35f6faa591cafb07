#pragma once

#include "trustgame/experiment.hpp"
#include "trustgame/oracle.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace trustgame::io {

using nlohmann::json;

/// Locale-independent, 17 significant digits; parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Shortest round-trip form of a fraction, always with a decimal point: 0.0, 0.1, 1.0.
std::string fraction_label(double fraction);

json policy_to_json(const TrusteePolicy& policy);
TrusteePolicy policy_from_json(const json& j);

/// Fully resolved configuration; `window` is the convergence window used for the report.
json config_to_json(const ExperimentConfig& config, std::int64_t window);
ExperimentConfig config_from_json(const json& j);

json curves_to_json(const FrequencyCurves& curves);
FrequencyCurves curves_from_json(const json& j);

json report_to_json(const ConvergenceReport& report, const ActionGrid& grid);
json verdict_to_json(const OracleVerdict& verdict, const ActionGrid& grid);

/// `# key=value` lines, one per leaf of a flat-or-nested JSON object.
void write_comment_header(std::ostream& out, const json& config);

/// Header `trial,arm_0.0,...,arm_1.0`, then one row per checkpoint. Lines
/// starting with '#' before the header carry the configuration.
void write_curves_csv(std::ostream& out, const FrequencyCurves& curves, const json& config);
FrequencyCurves read_curves_csv(std::istream& in);

void write_report_csv(std::ostream& out, const ConvergenceReport& report, const ActionGrid& grid,
                      const json& config);

}  // namespace trustgame::io
