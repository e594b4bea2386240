// Copyright 2026 The ghzkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <CLI11.hpp>
#include <unistd.h>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ghz/game.hpp"
#include "ghz/json.hpp"
#include "ghz/lhv.hpp"
#include "ghz/logic.hpp"
#include "ghz/play.hpp"
#include "ghz/teleport.hpp"
#include "ghz/tsvf.hpp"

namespace ghz::cli {

namespace {

constexpr double kSigmaBound = 4.0;

void require_format(Format f, std::initializer_list<Format> allowed, const char* command) {
    for (auto a : allowed)
        if (a == f) return;
    throw InvalidInput(std::string("output format not supported by '") + command + "'");
}

AnswerTriple parse_triple(const std::vector<std::string>& signs, const char* what) {
    if (signs.size() != 3) throw InvalidInput(std::string(what) + " needs exactly 3 signs");
    return {parse_sign(signs[0]), parse_sign(signs[1]), parse_sign(signs[2])};
}

struct Reference {
    double expected;
    double sigma;
    double deviation;  // in sigmas; 0 when sigma == 0 and the match is exact
    bool within;
};

Reference reference(double expected, double observed, std::uint64_t n) {
    double sigma = binomial_sigma(expected, n);
    double diff = std::abs(observed - expected);
    double dev = sigma > 0 ? diff / sigma : (diff == 0 ? 0.0 : std::numeric_limits<double>::infinity());
    return {expected, sigma, dev, dev <= kSigmaBound};
}

Json to_json(const Reference& r) {
    return Json{{"expected_win_rate", r.expected},
                {"standard_error_bound", r.sigma},
                {"deviation_sigma", r.deviation},
                {"within_4_sigma", r.within}};
}

void write_reference(std::ostream& out, const Reference& r, std::uint64_t trials) {
    out << "reference:     " << r.expected << " (n = " << trials << ", sigma = " << r.sigma << ", deviation "
        << r.deviation << " sigma, " << (r.within ? "within" : "OUTSIDE") << " 4 sigma)\n";
}

void write_experiment_text(std::ostream& out, const ExperimentReport& r) {
    out << "strategy:      " << r.strategy << '\n';
    out << "trials:        " << r.trials << '\n';
    out << "master seed:   " << r.master_seed << '\n';
    out << "wins:          " << r.wins << '\n';
    out << "win rate:      " << r.win_rate << " (standard error " << r.standard_error << ")\n";
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& p = r.per_pattern[k];
        out << "  " << to_string(kAllPatterns[k]) << ": " << p.wins << "/" << p.trials << " = " << p.win_rate() << '\n';
    }
    out << "triple detections: " << r.detection_counts[3] << " (rate " << r.triple_detection_rate << ")\n";
}

void write_experiment_csv(std::ostream& out, const ExperimentReport& r) {
    out << "pattern,trials,wins,win_rate\n";
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& p = r.per_pattern[k];
        out << to_string(kAllPatterns[k]) << ',' << p.trials << ',' << p.wins << ',' << p.win_rate() << '\n';
    }
    out << "ALL," << r.trials << ',' << r.wins << ',' << r.win_rate << '\n';
}

}  // namespace

void RunConfig::validate() const {
    if (trials < 1) throw InvalidInput("--trials must be at least 1");
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("--eta must lie in [0, 1]");
}

Format parse_format(const std::string& name) {
    if (name == "text") return Format::Text;
    if (name == "json") return Format::Json;
    if (name == "jsonl") return Format::Jsonl;
    if (name == "csv") return Format::Csv;
    throw InvalidInput("unknown format '" + name + "' (expected text, json, jsonl or csv)");
}

void cmd_game(const RunConfig& cfg, const std::string& strategy, const std::vector<std::string>& table,
              std::ostream& out) {
    cfg.validate();
    if (!table.empty() && strategy != "classical-table") throw InvalidInput("--table only applies to classical-table");

    RunOptions options;
    if (cfg.format == Format::Jsonl) {
        options.on_trial = [&out](const TrialRecord& r) { out << to_json(r).dump() << '\n'; };
    }

    if (strategy == "lhv") {
        auto r = lhv_statistics(cfg.trials, cfg.seed, LhvStrategy(), options);
        auto ref = reference(0.5, r.triple_detection_rate, cfg.trials);
        switch (cfg.format) {
            case Format::Jsonl: return;
            case Format::Csv: write_experiment_csv(out, r.experiment); return;
            case Format::Json: {
                Json j = to_json(r);
                j["reference"] = {{"expected_triple_detection_rate", 0.5},
                                  {"standard_error_bound", ref.sigma},
                                  {"deviation_sigma", ref.deviation},
                                  {"within_4_sigma", ref.within}};
                out << j.dump(2) << '\n';
                return;
            }
            case Format::Text:
                write_experiment_text(out, r.experiment);
                out << "conditional win rate (triple detection): " << r.conditional_win_rate << '\n';
                out << "single detections: " << r.single_detections << ", null detections: " << r.null_detections
                    << '\n';
                out << "triple-detection reference: 0.5 (n = " << cfg.trials << ", sigma = " << ref.sigma
                    << ", deviation " << ref.deviation << " sigma, " << (ref.within ? "within" : "OUTSIDE")
                    << " 4 sigma)\n";
                return;
        }
        return;
    }

    StrategyPtr base;
    double expected;
    if (strategy == "quantum") {
        base = quantum_strategy();
        expected = theoretical_win_rate(cfg.eta);
    } else if (strategy == "classical-best") {
        base = classical_best_strategy();
        expected = scan_deterministic().best_rate;
    } else if (strategy == "classical-table") {
        if (table.size() != 6) throw InvalidInput("classical-table needs --table with 6 signs (X_A Y_A X_B Y_B X_C Y_C)");
        DeterministicTable t;
        for (std::size_t k = 0; k < 6; ++k) t.entries[k] = parse_sign(table[k]);
        base = std::make_shared<DeterministicStrategy>(t);
        expected = expected_win_rate(t);
    } else if (strategy == "random") {
        base = std::make_shared<RandomStrategy>();
        expected = 0.5;
    } else {
        throw InvalidInput("unknown strategy '" + strategy +
                           "' (expected quantum, classical-best, classical-table, lhv or random)");
    }
    auto strat = apply_detection(base, EfficiencyModel::uniform(cfg.eta));
    auto r = run_experiment(*strat, cfg.trials, cfg.seed, options);
    auto ref = reference(expected, r.win_rate, cfg.trials);
    switch (cfg.format) {
        case Format::Jsonl: return;
        case Format::Csv: write_experiment_csv(out, r); return;
        case Format::Json: {
            Json j = to_json(r);
            j["eta"] = cfg.eta;
            j["reference"] = to_json(ref);
            out << j.dump(2) << '\n';
            return;
        }
        case Format::Text:
            write_experiment_text(out, r);
            out << "eta:           " << cfg.eta << '\n';
            write_reference(out, ref, cfg.trials);
            return;
    }
}

void cmd_sweep(const RunConfig& cfg, const std::vector<double>& grid, std::ostream& out) {
    cfg.validate();
    require_format(cfg.format, {Format::Text, Format::Csv, Format::Json}, "sweep");
    if (grid.empty()) throw InvalidInput("sweep grid must not be empty");
    for (double e : grid)
        if (!(e >= 0.0 && e <= 1.0)) throw InvalidInput("sweep grid values must lie in [0, 1]");

    struct Row {
        double eta, empirical, theoretical, sigma;
        bool within;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto strat = apply_detection(quantum_strategy(), EfficiencyModel::uniform(grid[i]));
        auto r = run_experiment(*strat, cfg.trials, derive_seed(cfg.seed, i));
        auto ref = reference(theoretical_win_rate(grid[i]), r.win_rate, cfg.trials);
        rows.push_back({grid[i], r.win_rate, ref.expected, ref.sigma, ref.within});
    }
    if (cfg.format == Format::Json) {
        Json j = Json::array();
        for (const auto& r : rows) {
            j.push_back({{"eta", r.eta},
                         {"empirical", r.empirical},
                         {"theoretical", r.theoretical},
                         {"standard_error_bound", r.sigma},
                         {"within_4_sigma", r.within}});
        }
        out << Json{{"trials_per_point", cfg.trials}, {"master_seed", cfg.seed}, {"rows", j}}.dump(2) << '\n';
        return;
    }
    std::ostringstream buf;
    buf << std::setprecision(10);
    if (cfg.format == Format::Csv) {
        buf << "eta,empirical,theoretical,std_error,within_4sigma\n";
        for (const auto& r : rows) {
            buf << r.eta << ',' << r.empirical << ',' << r.theoretical << ',' << r.sigma << ','
                << (r.within ? "true" : "false") << '\n';
        }
    } else {
        buf << "trials per point: " << cfg.trials << ", master seed " << cfg.seed << '\n';
        buf << std::left << std::setw(12) << "eta" << std::setw(14) << "empirical" << std::setw(14) << "theoretical"
            << std::setw(14) << "std_error" << "within 4 sigma\n";
        for (const auto& r : rows) {
            buf << std::setw(12) << r.eta << std::setw(14) << r.empirical << std::setw(14) << r.theoretical
                << std::setw(14) << r.sigma << (r.within ? "yes" : "NO") << '\n';
        }
    }
    out << buf.str();
}

void cmd_prove(const RunConfig& cfg, const std::string& which, const std::vector<std::string>& signs,
               std::ostream& out) {
    require_format(cfg.format, {Format::Text, Format::Json}, "prove");
    ParitySystem system;
    if (which == "classical") {
        if (!signs.empty()) throw InvalidInput("'prove classical' takes no signs");
        system = build_classical_game_system();
    } else if (which == "stapp") {
        system = build_stapp_system(parse_triple(signs, "'prove stapp'"));
    } else {
        throw InvalidInput("unknown proof '" + which + "' (expected classical or stapp)");
    }
    auto enumerated = solve_enumerate(system);
    auto eliminated = solve_gf2(system);
    auto drops = drop_one_analysis(system);

    if (cfg.format == Format::Json) {
        Json d = Json::array();
        for (std::size_t c = 0; c < drops.size(); ++c) {
            Json entry = to_json(system.without_constraint(c), drops[c]);
            entry["dropped"] = c;
            d.push_back(entry);
        }
        out << Json{{"system", to_json(system)},
                    {"gf2_rank", gf2_rank(system)},
                    {"enumeration", to_json(system, enumerated)},
                    {"elimination", to_json(system, eliminated)},
                    {"drop_one", d}}
                       .dump(2)
            << '\n';
        return;
    }
    out << format_proof(system, eliminated);
    out << "GF(2) rank of the left-hand sides: " << gf2_rank(system) << '\n';
    out << "Exhaustive enumeration verdict: " << (is_sat(enumerated) ? "SAT" : "UNSAT") << '\n';
    out << "Drop-one analysis:\n";
    for (std::size_t c = 0; c < drops.size(); ++c) {
        out << "  without [" << c << "]: " << (is_sat(drops[c]) ? "SAT" : "UNSAT");
        if (const auto* sat = std::get_if<Sat>(&drops[c])) {
            out << "  witness";
            for (std::size_t v = 0; v < system.num_variables(); ++v) {
                out << ' ' << system.variables()[v] << '=' << to_string(sat->assignment[v]);
            }
        }
        out << '\n';
    }
}

void cmd_teleport(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    TeleportRunOptions options;
    options.eta = cfg.eta;
    if (cfg.format == Format::Jsonl) {
        options.on_trial = [&out](const TeleportTrialRecord& r) { out << to_json(r).dump() << '\n'; };
    }
    auto records = run_trials(cfg.trials, cfg.seed, options);
    auto s = summarize(records);
    switch (cfg.format) {
        case Format::Jsonl: return;
        case Format::Json: {
            Json j = to_json(s);
            j["master_seed"] = cfg.seed;
            j["eta"] = cfg.eta;
            j["expected_nine_fold_detection_rate"] = nine_fold_detection_rate(cfg.eta);
            out << j.dump(2) << '\n';
            return;
        }
        case Format::Csv:
            out << "pattern,trials,corrected_success_rate,raw_success_rate\n";
            for (std::size_t k = 0; k < 4; ++k) {
                const auto& p = s.per_pattern[k];
                out << to_string(kAllPatterns[k]) << ',' << p.trials << ',' << p.corrected_rate() << ','
                    << p.raw_rate() << '\n';
            }
            return;
        case Format::Text: {
            const auto& rule = correction_rule();
            out << "trials:              " << s.trials << " (master seed " << cfg.seed << ")\n";
            out << "corrected success:   " << s.corrected_rate << '\n';
            auto ref = reference(0.5, s.raw_rate, s.trials);
            out << "raw success:         " << s.raw_rate << " (reference 0.5, sigma " << ref.sigma << ", deviation "
                << ref.deviation << " sigma)\n";
            for (std::size_t k = 0; k < 4; ++k) {
                const auto& p = s.per_pattern[k];
                out << "  " << to_string(kAllPatterns[k]) << ": corrected " << p.corrected_rate() << ", raw "
                    << p.raw_rate() << " over " << p.trials << '\n';
            }
            out << "Bell-triple histogram: 64 cells, max deviation " << s.max_bell_cell_deviation() << " sigma\n";
            out << "correction rule (flip on X / flip on Y):\n";
            for (auto b : kAllBellIndices) {
                out << "  " << std::left << std::setw(10) << to_string(b) << (rule.flips(b, Question::X) ? "flip" : "keep")
                    << " / " << (rule.flips(b, Question::Y) ? "flip" : "keep") << '\n';
            }
            if (cfg.eta < 1.0) {
                out << "nine-fold coincidences: " << s.all_detected << " (expected rate "
                    << nine_fold_detection_rate(cfg.eta) << ")\n";
            }
            return;
        }
    }
}

void cmd_elements(const RunConfig& cfg, const std::vector<std::string>& signs, std::ostream& out) {
    require_format(cfg.format, {Format::Text, Format::Json}, "elements");
    auto x = parse_triple(signs, "'elements'");
    if (product(x) != Sign::Minus) {
        throw InvalidInput("final sigma_x outcomes must multiply to -1 (other triples never occur for GHZ)");
    }
    auto ens = ghz_x_ensemble(x);
    auto cond = conditionals_check(ens.pre(), cfg.seed);
    auto rep = product_rule_report(ens);
    if (cfg.format == Format::Json) {
        out << Json{{"post", signs_json(x)}, {"conditionals", to_json(cond)}, {"product_rule", to_json(rep)}}.dump(2)
            << '\n';
        return;
    }
    out << format_product_rule(cond, ens, rep);
}

int cmd_play(std::uint64_t seed, bool require_tty, std::istream& in, std::ostream& out, std::ostream& err) {
    if (require_tty && !isatty(STDIN_FILENO)) {
        err << "play needs an interactive terminal (pass --stdin to read answers from a pipe)\n";
        return 1;
    }
    PlaySession session(seed);
    out << "You are player A on a quantum team. Each round you see only your own question.\n"
           "Type 'm' to measure your particle, '+1' or '-1' to answer freely, 'q' to quit.\n";
    std::string line;
    while (true) {
        Question q = session.begin_round();
        out << "\nRound " << session.rounds_played() + 1 << ": your question is " << question_name(q) << "\n> "
            << std::flush;
        bool done = false;
        std::optional<PlayResult> result;
        while (!result) {
            if (!std::getline(in, line)) {
                done = true;
                break;
            }
            if (line == "q" || line == "quit") {
                done = true;
                break;
            }
            try {
                if (line == "m" || line == "measure") {
                    Sign s = session.measure();
                    out << "your particle says " << to_string(s) << '\n';
                    result = session.submit_measured();
                } else {
                    result = session.submit_free(parse_sign(line));
                }
            } catch (const InvalidInput&) {
                out << "enter m, +1, -1 or q\n> " << std::flush;
            }
        }
        if (done) break;
        out << "questions " << to_string(result->pattern) << ", answers " << to_string(result->answers[0]) << ' '
            << to_string(result->answers[1]) << ' ' << to_string(result->answers[2]) << " -> "
            << (result->win ? "WIN" : "LOSS") << '\n';
    }
    out << '\n' << session.summary();
    return 0;
}

namespace {

/// Opens --out or falls back to the given stream.
class Output {
   public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InvalidInput("cannot open output file '" + path + "'");
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

   private:
    std::ofstream file_;
    std::ostream* stream_;
};

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"ghzkit: GHZ game simulations and proofs"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string format = "text";
    auto add_common = [&](CLI::App* sub, bool statistical) {
        if (statistical) {
            sub->add_option("--trials", cfg.trials, "number of trials")->capture_default_str();
            sub->add_option("--eta", cfg.eta, "detector efficiency in [0, 1]")->capture_default_str();
        }
        sub->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
        sub->add_option("--format", format, "text, json, jsonl or csv")->capture_default_str();
        sub->add_option("--out", cfg.out, "output file (default: standard output)");
    };

    std::string strategy = "quantum";
    std::vector<std::string> table;
    auto* game = app.add_subcommand("game", "play the game with a strategy");
    add_common(game, true);
    game->add_option("--strategy", strategy, "quantum, classical-best, classical-table, lhv or random")
        ->capture_default_str();
    game->add_option("--table", table, "six signs X_A Y_A X_B Y_B X_C Y_C for classical-table")->expected(6);

    std::vector<double> grid{0.0, 0.5, 0.7937, 0.9, 1.0};
    auto* sweep = app.add_subcommand("sweep", "win rate of the quantum team across detector efficiencies");
    add_common(sweep, true);
    sweep->add_option("--grid", grid, "comma-separated efficiencies")->delimiter(',');

    std::string which;
    std::vector<std::string> signs;
    auto* prove = app.add_subcommand("prove", "parity impossibility proofs");
    add_common(prove, false);
    prove->add_option("system", which, "classical or stapp")->required();
    prove->add_option("signs", signs, "actual sigma_x outcomes for stapp");

    auto* teleport = app.add_subcommand("teleport", "entanglement-swapping variant");
    add_common(teleport, true);

    auto* elements = app.add_subcommand("elements", "pre/post-selected elements of reality");
    add_common(elements, false);
    elements->add_option("signs", signs, "final sigma_x outcomes at A, B, C")->expected(3)->required();

    bool from_stdin = false;
    auto* play = app.add_subcommand("play", "interactive game as player A");
    play->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    play->add_flag("--stdin", from_stdin, "read answers from standard input even when it is not a terminal");

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        cfg.format = parse_format(format);
        if (play->parsed()) return cmd_play(cfg.seed, !from_stdin, in, out, err);
        Output sink(cfg.out, out);
        if (game->parsed()) cmd_game(cfg, strategy, table, sink.get());
        if (sweep->parsed()) cmd_sweep(cfg, grid, sink.get());
        if (prove->parsed()) cmd_prove(cfg, which, signs, sink.get());
        if (teleport->parsed()) cmd_teleport(cfg, sink.get());
        if (elements->parsed()) cmd_elements(cfg, signs, sink.get());
        return 0;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace ghz::cli
