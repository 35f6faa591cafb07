#include "trustgame/cli.hpp"

#include "trustgame/errors.hpp"
#include "trustgame/experiment.hpp"
#include "trustgame/io.hpp"
#include "trustgame/oracle.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace trustgame::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GameOptions {
    double endowment = 1.0;
    double multiplier = 3.0;
    double alpha0 = 1.0;
    double p0 = 0.5;
    int m = 0;
    int n = 0;
    int grid = 11;
    std::string table_path;
};

struct RunOptions {
    std::int64_t trials = 20000;
    int agents = 10;
    std::uint64_t seed = 42;
    std::int64_t record_every = 10;
    std::optional<std::int64_t> window;
    unsigned threads = 0;
};

struct OutputOptions {
    std::string out;
    std::string format = "csv";
};

void add_game_options(CLI::App& cmd, GameOptions& g) {
    cmd.add_option("--T", g.endowment, "Endowment T")->capture_default_str();
    cmd.add_option("--K", g.multiplier, "Multiplier K applied to the transfer")->capture_default_str();
    cmd.add_option("--alpha0", g.alpha0, "Return fraction scale, alpha(r) = alpha0 r^m")->capture_default_str();
    cmd.add_option("--p0", g.p0, "Return probability scale, p(r) = p0 r^n")->capture_default_str();
    cmd.add_option("--m", g.m, "Exponent of the return fraction")->capture_default_str();
    cmd.add_option("--n", g.n, "Exponent of the return probability")->capture_default_str();
    cmd.add_option("--grid", g.grid, "Number of transfer fractions (arms)")->capture_default_str();
    cmd.add_option("--table", g.table_path,
                   "CSV of alpha,p per grid point; replaces the power-law policy");
}

void add_run_options(CLI::App& cmd, RunOptions& r) {
    cmd.add_option("--trials", r.trials, "Trials per agent (N)")->capture_default_str();
    cmd.add_option("--agents", r.agents, "Independent agents")->capture_default_str();
    cmd.add_option("--seed", r.seed, "Base seed")->capture_default_str();
    cmd.add_option("--window", r.window, "Final-trial window of the convergence report (default min(2000, trials))");
    cmd.add_option("--threads", r.threads, "Worker threads, 0 = all cores")->capture_default_str();
}

void add_output_options(CLI::App& cmd, OutputOptions& o, const std::string& default_format) {
    o.format = default_format;
    cmd.add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

TabulatedPolicy read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read table '" + path + "'");
    TabulatedPolicy tab;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("table", "table rows must be 'alpha,p'");
        try {
            tab.table.push_back({io::parse_double(line.substr(0, comma)), io::parse_double(line.substr(comma + 1))});
        } catch (const std::invalid_argument&) {
            if (tab.table.empty()) continue;  // header
            throw ValidationError("table", "bad table row '" + line + "'");
        }
    }
    return tab;
}

TrusteePolicy resolve_policy(const GameOptions& g) {
    if (!g.table_path.empty()) return read_table(g.table_path);
    return PowerLawPolicy{g.alpha0, g.m, g.p0, g.n};
}

ActionGrid resolve_grid(const GameOptions& g, const TrusteePolicy& policy) {
    if (const auto* tab = std::get_if<TabulatedPolicy>(&policy)) {
        if (tab->table.size() < 2) throw ValidationError("table", "tabulated policy needs at least two grid points");
        return ActionGrid(static_cast<int>(tab->table.size()));
    }
    return ActionGrid(g.grid);
}

std::int64_t resolve_window(const RunOptions& r) {
    if (!r.window) return std::min<std::int64_t>(2000, r.trials);
    if (*r.window < 1) throw ValidationError("window", "window must be at least 1");
    if (*r.window > r.trials) throw ValidationError("window", "window must not exceed trials");
    return *r.window;
}

/// Writes through a sibling temp file so a failed run never leaves a half-written output.
void write_file(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
        file << contents;
        file.flush();
        if (!file) throw IoError("failed writing '" + path.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into '" + path.string() + "'");
    }
}

void emit(const OutputOptions& o, const std::string& contents, std::ostream& out) {
    if (o.out.empty() || o.out == "-")
        out << contents;
    else
        write_file(o.out, contents);
}

std::string arm_list(const std::vector<int>& arms, const ActionGrid& grid, bool fractions) {
    std::string text;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (i) text += ';';
        text += fractions ? io::fraction_label(grid.fraction(arms[i])) : std::to_string(arms[i]);
    }
    return text;
}

json game_json(const GameParams& params, const TrusteePolicy& policy, const ActionGrid& grid) {
    return {{"T", params.endowment}, {"K", params.multiplier}, {"policy", io::policy_to_json(policy)}, {"grid", grid.count()}};
}

int cmd_oracle(const GameOptions& g, const OutputOptions& o, std::ostream& out) {
    const auto policy = resolve_policy(g);
    const auto grid = resolve_grid(g, policy);
    const GameParams params{g.endowment, g.multiplier};
    make_game(params, policy, grid);
    const auto verdict = grid_argmax(policy, params.multiplier, grid);
    const auto config = game_json(params, policy, grid);

    std::ostringstream text;
    if (o.format == "json") {
        json doc{{"config", config}, {"verdict", io::verdict_to_json(verdict, grid)}};
        if (const auto* law = std::get_if<PowerLawPolicy>(&policy))
            doc["verdict"]["product"] = trust_product(*law, params.multiplier);
        text << doc.dump(2) << '\n';
    } else {
        io::write_comment_header(text, config);
        text << "# classification=" << to_string(verdict.classification) << '\n';
        if (const auto* law = std::get_if<PowerLawPolicy>(&policy))
            text << "# product=" << io::format_double(trust_product(*law, params.multiplier)) << '\n';
        text << "# optimal_set=" << arm_list(verdict.optimal_set, grid, false) << '\n';
        text << "# optimal_fractions=" << arm_list(verdict.optimal_set, grid, true) << '\n';
        text << "arm,fraction,objective,optimal\n";
        for (int k = 0; k < grid.count(); ++k)
            text << k << ',' << io::fraction_label(grid.fraction(k)) << ','
                 << io::format_double(verdict.objective_values(k)) << ','
                 << (verdict.is_optimal(k) ? "true" : "false") << '\n';
    }
    emit(o, text.str(), out);
    return kExitOk;
}

int cmd_simulate(const GameOptions& g, const RunOptions& r, const OutputOptions& o, std::ostream& out) {
    if (o.out.empty() || o.out == "-") throw ValidationError("out", "simulate requires --out FILE");
    ExperimentConfig config;
    config.params = {g.endowment, g.multiplier};
    config.policy = resolve_policy(g);
    config.grid = resolve_grid(g, config.policy);
    config.trials = r.trials;
    config.agents = r.agents;
    config.base_seed = r.seed;
    config.record_every = r.record_every;
    config.validate();
    const auto window = resolve_window(r);

    const auto runs = run_agents(config, r.threads);
    const auto curves = frequency_curves(runs, checkpoints(config.trials, config.record_every));
    const auto verdict = grid_argmax(config.policy, config.params.multiplier, config.grid);
    const auto report = convergence_report(runs, verdict, window);
    const auto echo = io::config_to_json(config, window);

    if (o.format == "json") {
        json doc{{"config", echo},
                 {"curves", io::curves_to_json(curves)},
                 {"report", io::report_to_json(report, config.grid)}};
        write_file(o.out, doc.dump() + "\n");
    } else {
        std::ostringstream curves_text, report_text;
        io::write_curves_csv(curves_text, curves, echo);
        io::write_report_csv(report_text, report, config.grid, echo);
        fs::path report_path = o.out;
        report_path.replace_extension(".report" + fs::path(o.out).extension().string());
        write_file(o.out, curves_text.str());
        write_file(report_path, report_text.str());
    }

    out << "modal final arm: r=" << io::fraction_label(config.grid.fraction(report.modal_arm)) << " (index "
        << report.modal_arm << "); oracle: " << to_string(report.classification) << " r*={"
        << arm_list(report.optimal_set, config.grid, true) << "}; match: " << (report.match ? "yes" : "no") << " ("
        << report.agents_matched << '/' << config.agents << " agents)\n";
    return kExitOk;
}

struct SweepOptions {
    std::string alpha0 = "1";
    std::string p0 = "0.5";
    std::string multiplier = "3";
    std::string m = "0";
    std::string n = "0";
    bool simulate = false;
};

std::vector<int> integer_values(const std::string& text, const std::string& field) {
    std::vector<int> out;
    for (double v : parse_value_list(text, field)) {
        if (v < 0 || v != std::floor(v)) throw ValidationError(field, field + " must be a non-negative integer");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

int cmd_sweep(const SweepOptions& s, const GameOptions& g, const RunOptions& r, const OutputOptions& o,
              std::ostream& out) {
    const auto alphas = parse_value_list(s.alpha0, "alpha0");
    const auto ps = parse_value_list(s.p0, "p0");
    const auto ks = parse_value_list(s.multiplier, "K");
    const auto ms = integer_values(s.m, "m");
    const auto ns = integer_values(s.n, "n");
    const ActionGrid grid(g.grid);
    const auto window = resolve_window(r);

    json shared{{"T", g.endowment}, {"grid", grid.count()}, {"simulate", s.simulate}};
    if (s.simulate)
        shared.update({{"trials", r.trials}, {"agents", r.agents}, {"seed", r.seed}, {"window", window}});

    json rows = json::array();
    std::ostringstream csv;
    io::write_comment_header(csv, shared);
    csv << "alpha0,p0,K,m,n,product,classification,oracle_arms,oracle_fractions";
    if (s.simulate) csv << ",modal_arm,modal_fraction,agents_matched,match";
    csv << '\n';

    for (double alpha0 : alphas)
        for (double p0 : ps)
            for (double k : ks)
                for (int m : ms)
                    for (int n : ns) {
                        const PowerLawPolicy law{alpha0, m, p0, n};
                        const GameParams params{g.endowment, k};
                        make_game(params, law, grid);
                        const auto verdict = grid_argmax(law, k, grid);
                        const double product = trust_product(law, k);
                        json row{{"alpha0", alpha0}, {"p0", p0}, {"K", k}, {"m", m}, {"n", n},
                                 {"product", product},
                                 {"classification", std::string(to_string(verdict.classification))},
                                 {"oracle_arms", verdict.optimal_set}};
                        csv << io::format_double(alpha0) << ',' << io::format_double(p0) << ','
                            << io::format_double(k) << ',' << m << ',' << n << ',' << io::format_double(product)
                            << ',' << to_string(verdict.classification) << ','
                            << arm_list(verdict.optimal_set, grid, false) << ','
                            << arm_list(verdict.optimal_set, grid, true);
                        if (s.simulate) {
                            ExperimentConfig config;
                            config.params = params;
                            config.policy = law;
                            config.grid = grid;
                            config.trials = r.trials;
                            config.agents = r.agents;
                            config.base_seed = r.seed;
                            const auto report = convergence_report(run_agents(config, r.threads), verdict, window);
                            row["modal_arm"] = report.modal_arm;
                            row["agents_matched"] = report.agents_matched;
                            row["match"] = report.match;
                            csv << ',' << report.modal_arm << ','
                                << io::fraction_label(grid.fraction(report.modal_arm)) << ','
                                << report.agents_matched << ',' << (report.match ? "true" : "false");
                        }
                        csv << '\n';
                        rows.push_back(std::move(row));
                    }

    if (o.format == "json")
        emit(o, json{{"config", shared}, {"rows", rows}}.dump(2) + "\n", out);
    else
        emit(o, csv.str(), out);
    return kExitOk;
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text, const std::string& field) {
    std::vector<double> values;
    std::stringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) {
        if (item.empty()) continue;
        try {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                values.push_back(io::parse_double(item));
                continue;
            }
            const auto colon2 = item.find(':', colon + 1);
            if (colon2 == std::string::npos)
                throw ValidationError(field, field + " range must be start:stop:step");
            const double start = io::parse_double(item.substr(0, colon));
            const double stop = io::parse_double(item.substr(colon + 1, colon2 - colon - 1));
            const double step = io::parse_double(item.substr(colon2 + 1));
            if (!(step > 0.0)) throw ValidationError(field, field + " range step must be positive");
            if (stop < start) continue;
            const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
            for (std::int64_t i = 0; i < count; ++i)
                values.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
        } catch (const std::invalid_argument& e) {
            if (dynamic_cast<const ValidationError*>(&e)) throw;
            throw ValidationError(field, field + ": " + e.what());
        }
    }
    if (values.empty()) throw ValidationError(field, field + " range is empty");
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trust game simulator: Thompson-sampling trustor against a stochastic trustee"};
    app.require_subcommand(1);

    GameOptions oracle_game;
    OutputOptions oracle_out;
    auto* oracle = app.add_subcommand("oracle", "Optimal transfer fraction and trust regime of one game");
    add_game_options(*oracle, oracle_game);
    add_output_options(*oracle, oracle_out, "csv");
    oracle->add_option("--out", oracle_out.out, "Output file (default stdout)");

    GameOptions sim_game;
    RunOptions sim_run;
    OutputOptions sim_out;
    auto* simulate = app.add_subcommand("simulate", "Run a batch of learning trustors and write frequency curves");
    add_game_options(*simulate, sim_game);
    add_run_options(*simulate, sim_run);
    simulate->add_option("--record-every", sim_run.record_every, "Checkpoint stride of the curves")
        ->capture_default_str();
    add_output_options(*simulate, sim_out, "csv");
    simulate->add_option("--out", sim_out.out, "Curve file; the csv report goes next to it as <stem>.report.csv")
        ->required();

    GameOptions sweep_game;
    RunOptions sweep_run;
    OutputOptions sweep_out;
    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Oracle (and optionally simulation) over parameter grids");
    sweep->add_option("--alpha0", sweep_opts.alpha0, "Values or start:stop:step ranges")->capture_default_str();
    sweep->add_option("--p0", sweep_opts.p0, "Values or ranges")->capture_default_str();
    sweep->add_option("--K", sweep_opts.multiplier, "Values or ranges")->capture_default_str();
    sweep->add_option("--m", sweep_opts.m, "Integer values or ranges")->capture_default_str();
    sweep->add_option("--n", sweep_opts.n, "Integer values or ranges")->capture_default_str();
    sweep->add_option("--T", sweep_game.endowment, "Endowment T")->capture_default_str();
    sweep->add_option("--grid", sweep_game.grid, "Number of arms")->capture_default_str();
    sweep->add_flag("--simulate", sweep_opts.simulate, "Also run agents and report the empirical modal arm");
    add_run_options(*sweep, sweep_run);
    add_output_options(*sweep, sweep_out, "csv");
    sweep->add_option("--out", sweep_out.out, "Output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        if (oracle->parsed()) return cmd_oracle(oracle_game, oracle_out, out);
        if (simulate->parsed()) return cmd_simulate(sim_game, sim_run, sim_out, out);
        return cmd_sweep(sweep_opts, sweep_game, sweep_run, sweep_out, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace trustgame::cli
