#include "trustgame/io.hpp"

#include "trustgame/errors.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace trustgame::io {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        fields.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return fields;
}

void flatten(std::ostream& out, const json& node, const std::string& prefix) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items())
            flatten(out, value, prefix.empty() ? key : prefix + "." + key);
        return;
    }
    out << "# " << prefix << '=' << (node.is_string() ? node.get<std::string>() : node.dump()) << '\n';
}

std::vector<double> fractions_of(const std::vector<int>& arms, const ActionGrid& grid) {
    std::vector<double> out;
    for (int arm : arms) out.push_back(grid.fraction(arm));
    return out;
}

std::string join_arms(const std::vector<int>& arms) {
    std::string out;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(arms[i]);
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

std::string fraction_label(double fraction) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, fraction);
    std::string label(buf, res.ptr);
    if (label.find_first_of(".e") == std::string::npos) label += ".0";
    return label;
}

json policy_to_json(const TrusteePolicy& policy) {
    if (const auto* law = std::get_if<PowerLawPolicy>(&policy))
        return {{"type", "power_law"}, {"alpha0", law->alpha0}, {"m", law->m}, {"p0", law->p0}, {"n", law->n}};
    json table = json::array();
    for (const auto& entry : std::get<TabulatedPolicy>(policy).table)
        table.push_back({{"alpha", entry.alpha}, {"p", entry.p}});
    return {{"type", "tabulated"}, {"table", table}};
}

TrusteePolicy policy_from_json(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "power_law")
        return PowerLawPolicy{j.at("alpha0").get<double>(), j.at("m").get<int>(),
                              j.at("p0").get<double>(), j.at("n").get<int>()};
    if (type == "tabulated") {
        TabulatedPolicy tab;
        for (const auto& entry : j.at("table"))
            tab.table.push_back({entry.at("alpha").get<double>(), entry.at("p").get<double>()});
        return tab;
    }
    throw ValidationError("policy", "unknown policy type '" + type + "'");
}

json config_to_json(const ExperimentConfig& config, std::int64_t window) {
    return {{"T", config.params.endowment},
            {"K", config.params.multiplier},
            {"policy", policy_to_json(config.policy)},
            {"grid", config.grid.count()},
            {"trials", config.trials},
            {"agents", config.agents},
            {"seed", config.base_seed},
            {"record_every", config.record_every},
            {"window", window}};
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    config.params = {j.at("T").get<double>(), j.at("K").get<double>()};
    config.policy = policy_from_json(j.at("policy"));
    config.grid = ActionGrid(j.at("grid").get<int>());
    config.trials = j.at("trials").get<std::int64_t>();
    config.agents = j.at("agents").get<int>();
    config.base_seed = j.at("seed").get<std::uint64_t>();
    config.record_every = j.at("record_every").get<std::int64_t>();
    return config;
}

json curves_to_json(const FrequencyCurves& curves) {
    json labels = json::array();
    json fractions = json::array();
    for (Eigen::Index k = 0; k < curves.fractions.size(); ++k) {
        labels.push_back("arm_" + fraction_label(curves.fractions(k)));
        fractions.push_back(curves.fractions(k));
    }
    json rows = json::array();
    for (Eigen::Index r = 0; r < curves.mean_freq.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < curves.mean_freq.cols(); ++c) row.push_back(curves.mean_freq(r, c));
        rows.push_back(std::move(row));
    }
    return {{"arms", labels}, {"fractions", fractions}, {"checkpoints", curves.checkpoints}, {"mean_freq", rows}};
}

FrequencyCurves curves_from_json(const json& j) {
    FrequencyCurves curves;
    curves.checkpoints = j.at("checkpoints").get<std::vector<std::int64_t>>();
    const auto fractions = j.at("fractions").get<std::vector<double>>();
    curves.fractions = Eigen::Map<const Eigen::ArrayXd>(fractions.data(), static_cast<Eigen::Index>(fractions.size()));
    const auto& rows = j.at("mean_freq");
    curves.mean_freq.resize(static_cast<Eigen::Index>(rows.size()), curves.fractions.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != fractions.size()) throw std::invalid_argument("curves: ragged mean_freq row");
        for (std::size_t c = 0; c < fractions.size(); ++c)
            curves.mean_freq(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
    }
    if (curves.checkpoints.size() != rows.size()) throw std::invalid_argument("curves: checkpoint count mismatch");
    return curves;
}

json verdict_to_json(const OracleVerdict& verdict, const ActionGrid& grid) {
    json objective = json::array();
    for (Eigen::Index k = 0; k < verdict.objective_values.size(); ++k)
        objective.push_back({{"arm", k},
                             {"fraction", grid.fraction(static_cast<int>(k))},
                             {"objective", verdict.objective_values(k)},
                             {"optimal", verdict.is_optimal(static_cast<int>(k))}});
    return {{"classification", std::string(to_string(verdict.classification))},
            {"optimal_set", verdict.optimal_set},
            {"optimal_fractions", fractions_of(verdict.optimal_set, grid)},
            {"objective", objective}};
}

json report_to_json(const ConvergenceReport& report, const ActionGrid& grid) {
    json agents = json::array();
    for (const auto& a : report.agents)
        agents.push_back({{"agent", a.agent_index},
                          {"seed", a.seed},
                          {"modal_arm", a.modal_arm},
                          {"modal_fraction", grid.fraction(a.modal_arm)},
                          {"oracle_share", a.oracle_share},
                          {"match", a.match}});
    return {{"window", report.window},
            {"classification", std::string(to_string(report.classification))},
            {"optimal_set", report.optimal_set},
            {"optimal_fractions", fractions_of(report.optimal_set, grid)},
            {"agents", agents},
            {"aggregate",
             {{"modal_arm", report.modal_arm},
              {"modal_fraction", grid.fraction(report.modal_arm)},
              {"oracle_share", report.oracle_share},
              {"agents_matched", report.agents_matched},
              {"match", report.match}}}};
}

void write_comment_header(std::ostream& out, const json& config) { flatten(out, config, ""); }

void write_curves_csv(std::ostream& out, const FrequencyCurves& curves, const json& config) {
    write_comment_header(out, config);
    out << "trial";
    for (Eigen::Index k = 0; k < curves.fractions.size(); ++k) out << ",arm_" << fraction_label(curves.fractions(k));
    out << '\n';
    for (Eigen::Index r = 0; r < curves.mean_freq.rows(); ++r) {
        out << curves.checkpoints[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < curves.mean_freq.cols(); ++c) out << ',' << format_double(curves.mean_freq(r, c));
        out << '\n';
    }
}

FrequencyCurves read_curves_csv(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        header = split(line, ',');
        break;
    }
    if (header.size() < 2 || header.front() != "trial") throw std::invalid_argument("curves csv: missing header");

    FrequencyCurves curves;
    const auto arms = static_cast<Eigen::Index>(header.size() - 1);
    curves.fractions.resize(arms);
    for (Eigen::Index k = 0; k < arms; ++k) {
        const auto& label = header[static_cast<std::size_t>(k) + 1];
        if (label.rfind("arm_", 0) != 0) throw std::invalid_argument("curves csv: bad column '" + label + "'");
        curves.fractions(k) = parse_double(std::string_view(label).substr(4));
    }

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != header.size()) throw std::invalid_argument("curves csv: ragged row");
        std::int64_t trial = 0;
        const auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), trial);
        if (res.ec != std::errc{}) throw std::invalid_argument("curves csv: bad trial '" + fields[0] + "'");
        curves.checkpoints.push_back(trial);
        std::vector<double> row;
        for (std::size_t c = 1; c < fields.size(); ++c) row.push_back(parse_double(fields[c]));
        rows.push_back(std::move(row));
    }
    curves.mean_freq.resize(static_cast<Eigen::Index>(rows.size()), arms);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (Eigen::Index c = 0; c < arms; ++c)
            curves.mean_freq(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    return curves;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report, const ActionGrid& grid,
                      const json& config) {
    write_comment_header(out, config);
    out << "# classification=" << to_string(report.classification) << '\n';
    out << "# optimal_set=" << join_arms(report.optimal_set) << '\n';
    out << "agent,seed,modal_arm,modal_fraction,oracle_share,match\n";
    for (const auto& a : report.agents)
        out << a.agent_index << ',' << a.seed << ',' << a.modal_arm << ',' << fraction_label(grid.fraction(a.modal_arm))
            << ',' << format_double(a.oracle_share) << ',' << (a.match ? "true" : "false") << '\n';
    out << "all,," << report.modal_arm << ',' << fraction_label(grid.fraction(report.modal_arm)) << ','
        << format_double(report.oracle_share) << ',' << (report.match ? "true" : "false") << '\n';
}

}  // namespace trustgame::io
