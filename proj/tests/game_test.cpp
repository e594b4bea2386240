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

#include "ghz/game.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ghz;

namespace {

constexpr Sign P = Sign::Plus;
constexpr Sign M = Sign::Minus;

// Independent evaluation: answers as +-1 integers, questions spelled out.
int oracle_wins(unsigned table_index) {
    int e[6];
    for (int k = 0; k < 6; ++k) e[k] = ((table_index >> (5 - k)) & 1u) ? -1 : 1;
    const int xa = e[0], ya = e[1], xb = e[2], yb = e[3], xc = e[4], yc = e[5];
    return (xa * xb * xc == -1) + (xa * yb * yc == 1) + (ya * xb * yc == 1) + (ya * yb * xc == 1);
}

}  // namespace

TEST(game, wins_examples) {
    EXPECT_TRUE(wins(QuestionPattern::XXX, {P, P, M}));
    EXPECT_TRUE(wins(QuestionPattern::XYY, {P, P, P}));
    EXPECT_FALSE(wins(QuestionPattern::XXX, {P, P, P}));
    EXPECT_FALSE(wins(QuestionPattern::YYX, {P, P, M}));
}

TEST(game, patterns) {
    EXPECT_EQ(questions(QuestionPattern::XXX), (std::array{Question::X, Question::X, Question::X}));
    EXPECT_EQ(questions(QuestionPattern::YXY), (std::array{Question::Y, Question::X, Question::Y}));
    for (auto p : kAllPatterns) {
        EXPECT_EQ(parse_pattern(to_string(p)), p);
        int x = 0;
        for (auto q : questions(p)) x += q == Question::X;
        EXPECT_TRUE(x == 3 || x == 1);
    }
    EXPECT_FALSE(parse_pattern("YYY").has_value());
}

TEST(game, draw_pattern_uniform) {
    RandomSource rnd(2024);
    const int n = 100000;
    std::array<int, 4> counts{};
    for (int i = 0; i < n; ++i) ++counts[static_cast<int>(draw_pattern(rnd))];
    double sigma = binomial_sigma(0.25, n);
    for (int c : counts) EXPECT_LE(std::abs(c / double(n) - 0.25), 4 * sigma);

    RandomSource a(9), b(9);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(draw_pattern(a), draw_pattern(b));
}

TEST(game, play_deterministic_examples) {
    DeterministicTable all_plus;
    EXPECT_EQ(play_deterministic(all_plus, QuestionPattern::XXX), (AnswerTriple{P, P, P}));
    EXPECT_FALSE(wins(QuestionPattern::XXX, play_deterministic(all_plus, QuestionPattern::XXX)));
    EXPECT_TRUE(wins(QuestionPattern::XYY, play_deterministic(all_plus, QuestionPattern::XYY)));

    DeterministicTable xc_minus{{P, P, P, P, M, P}};
    EXPECT_EQ(play_deterministic(xc_minus, QuestionPattern::XXX), (AnswerTriple{P, P, M}));
    EXPECT_TRUE(wins(QuestionPattern::XXX, play_deterministic(xc_minus, QuestionPattern::XXX)));
}

TEST(game, table_indexing) {
    for (unsigned i = 0; i < 64; ++i) EXPECT_EQ(DeterministicTable::from_index(i).index(), i);
    EXPECT_EQ(DeterministicTable::from_index(0), DeterministicTable{});
    EXPECT_EQ(DeterministicTable::from_index(1).entries[5], M);
    EXPECT_EQ(DeterministicTable::from_index(32).entries[0], M);
    EXPECT_THROW(DeterministicTable::from_index(64), InvalidInput);
}

TEST(game, scan_deterministic) {
    auto scan = scan_deterministic();
    EXPECT_DOUBLE_EQ(scan.best_rate, 0.75);
    ASSERT_EQ(scan.histogram.size(), 2u);
    EXPECT_EQ(scan.histogram.at(0.75), 32);
    EXPECT_EQ(scan.histogram.at(0.25), 32);
    EXPECT_EQ(scan.maximizers.size(), 32u);
    for (std::size_t i = 1; i < scan.maximizers.size(); ++i)
        EXPECT_LT(scan.maximizers[i - 1].index(), scan.maximizers[i].index());

    int best = 0;
    for (unsigned i = 0; i < 64; ++i) {
        int w = oracle_wins(i);
        best = std::max(best, w);
        EXPECT_DOUBLE_EQ(expected_win_rate(DeterministicTable::from_index(i)), w / 4.0) << i;
        EXPECT_EQ(w % 2, 1) << "parity forces an odd number of satisfied constraints";
    }
    EXPECT_EQ(best, 3);
}

TEST(game, mixtures_never_beat_three_quarters) {
    std::mt19937_64 gen(12345);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_int_distribution<int> sparse(1, 64);
    double best = 0;
    for (int t = 0; t < 1000; ++t) {
        std::array<double, 64> w{};
        int support = sparse(gen);
        for (int k = 0; k < support; ++k) w[gen() % 64] += expo(gen);
        TableMixtureStrategy mix(w);
        best = std::max(best, mix.expected_win_rate());
        EXPECT_LE(mix.expected_win_rate(), 0.75 + 1e-12);
    }
    EXPECT_GT(best, 0.5);
}

TEST(game, mixture_empirical_matches_expectation) {
    std::array<double, 64> w{};
    w[0] = 3;   // all +1: 0.75
    w[48] = 1;  // X_A = Y_A = -1: 0.25
    TableMixtureStrategy mix(w);
    EXPECT_NEAR(mix.expected_win_rate(), 0.625, 1e-12);
    auto r = run_experiment(mix, 100000, 3);
    EXPECT_LE(std::abs(r.win_rate - 0.625), 4 * binomial_sigma(0.625, r.trials));
    EXPECT_THROW(TableMixtureStrategy(std::array<double, 64>{}), InvalidInput);
}

TEST(game, quantum_always_wins) {
    auto q = quantum_strategy();
    auto r = run_experiment(*q, 10000, 77);
    EXPECT_EQ(r.wins, r.trials);
    EXPECT_EQ(r.win_rate, 1.0);
    EXPECT_EQ(r.strategy, "quantum");
    EXPECT_EQ(r.detection_counts[3], r.trials);
}

TEST(game, quantum_wins_each_pattern) {
    auto q = quantum_strategy();
    for (auto p : kAllPatterns) {
        PatternWeights w{};
        w[static_cast<std::size_t>(p)] = 1;
        RunOptions opt;
        opt.pattern_weights = w;
        opt.on_trial = [&](const TrialRecord& rec) {
            EXPECT_EQ(rec.pattern, p);
            if (p == QuestionPattern::XXX) {
                EXPECT_EQ(product(rec.answers), M);
            }
        };
        auto r = run_experiment(*q, 10000, 100 + static_cast<int>(p), opt);
        EXPECT_EQ(r.per_pattern[static_cast<std::size_t>(p)].trials, 10000u);
        EXPECT_EQ(r.wins, 10000u);
    }
}

TEST(game, quantum_single_player_marginal_is_pattern_independent) {
    auto q = quantum_strategy();
    std::array<int, 4> plus{}, total{};
    RunOptions opt;
    opt.on_trial = [&](const TrialRecord& rec) {
        auto k = static_cast<std::size_t>(rec.pattern);
        ++total[k];
        plus[k] += rec.answers[0] == P;
    };
    run_experiment(*q, 100000, 5, opt);
    for (int k = 0; k < 4; ++k) {
        double f = plus[k] / double(total[k]);
        EXPECT_LE(std::abs(f - 0.5), 4 * binomial_sigma(0.5, total[k])) << k;
    }
}

TEST(game, best_deterministic_rate) {
    auto best = classical_best_strategy();
    auto r = run_experiment(*best, 100000, 8);
    EXPECT_LE(std::abs(r.win_rate - 0.75), 4 * binomial_sigma(0.75, r.trials));
}

TEST(game, random_strategy_half) {
    RandomStrategy rs;
    auto r = run_experiment(rs, 100000, 6);
    EXPECT_LE(std::abs(r.win_rate - 0.5), 4 * binomial_sigma(0.5, r.trials));
}

TEST(game, theoretical_win_rate) {
    EXPECT_DOUBLE_EQ(theoretical_win_rate(1.0), 1.0);
    EXPECT_DOUBLE_EQ(theoretical_win_rate(0.0), 0.5);
    EXPECT_NEAR(theoretical_win_rate(std::cbrt(0.5)), 0.75, 1e-12);
    EXPECT_NEAR(theoretical_win_rate(threshold_efficiency()), 0.75, 1e-12);
    EXPECT_NEAR(threshold_efficiency(), 0.7937, 1e-4);
    EXPECT_NEAR(theoretical_win_rate(0.9), 0.8645, 1e-12);
    EXPECT_NEAR(theoretical_win_rate(0.7), 0.6715, 1e-12);
    EXPECT_THROW(theoretical_win_rate(-0.01), InvalidInput);
    EXPECT_THROW(theoretical_win_rate(1.01), InvalidInput);
    EXPECT_THROW(theoretical_win_rate(std::nan("")), InvalidInput);
}

TEST(game, theoretical_win_rate_strictly_increasing) {
    double prev = theoretical_win_rate(0.0);
    for (int i = 1; i <= 1000; ++i) {
        double cur = theoretical_win_rate(i / 1000.0);
        EXPECT_GT(cur, prev);
        prev = cur;
    }
}

TEST(game, detection_identity_at_full_efficiency) {
    auto q = quantum_strategy();
    auto wrapped = apply_detection(q, EfficiencyModel::uniform(1.0));
    std::vector<TrialRecord> a, b;
    RunOptions oa, ob;
    oa.on_trial = [&](const TrialRecord& r) { a.push_back(r); };
    ob.on_trial = [&](const TrialRecord& r) { b.push_back(r); };
    run_experiment(*q, 2000, 31, oa);
    run_experiment(*wrapped, 2000, 31, ob);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].pattern, b[i].pattern);
        EXPECT_EQ(a[i].answers, b[i].answers);
        EXPECT_EQ(a[i].detections, b[i].detections);
        EXPECT_EQ(a[i].win, b[i].win);
        EXPECT_EQ(a[i].seed, b[i].seed);
    }
}

TEST(game, detection_zero_efficiency_is_random) {
    auto r = run_experiment(*apply_detection(quantum_strategy(), EfficiencyModel::uniform(0.0)), 100000, 12);
    EXPECT_LE(std::abs(r.win_rate - 0.5), 4 * binomial_sigma(0.5, r.trials));
    EXPECT_EQ(r.detection_counts[0], r.trials);
    EXPECT_EQ(r.triple_detection_rate, 0.0);
}

TEST(game, detection_matches_formula) {
    for (double eta : {0.7, 0.9}) {
        auto r = run_experiment(*apply_detection(quantum_strategy(), EfficiencyModel::uniform(eta)), 100000, 40);
        double expected = theoretical_win_rate(eta);
        EXPECT_LE(std::abs(r.win_rate - expected), 4 * binomial_sigma(expected, r.trials)) << eta;
        double triple = eta * eta * eta;
        EXPECT_LE(std::abs(r.triple_detection_rate - triple), 4 * binomial_sigma(triple, r.trials));
        // Every all-detected trial is a win.
        EXPECT_EQ(r.triple_detection_wins, r.detection_counts[3]);
    }
}

TEST(game, detection_leaves_tables_alone) {
    auto best = classical_best_strategy();
    EXPECT_EQ(apply_detection(best, EfficiencyModel::uniform(0.3)), best);
    EXPECT_THROW(apply_detection(quantum_strategy(), EfficiencyModel::uniform(1.5)), InvalidInput);
    EXPECT_THROW(DetectionStrategy(nullptr, EfficiencyModel::uniform(1.0)), InvalidInput);
}

TEST(game, empirical_rate_nondecreasing_in_eta) {
    const std::uint64_t n = 40000;
    double prev = 0;
    for (double eta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        auto r = run_experiment(*apply_detection(quantum_strategy(), EfficiencyModel::uniform(eta)), n, 55);
        double tol = 4 * std::sqrt(2.0) * binomial_sigma(0.5, n);
        EXPECT_GE(r.win_rate, prev - tol) << eta;
        prev = r.win_rate;
    }
}

TEST(game, report_invariants_and_determinism) {
    auto s = apply_detection(quantum_strategy(), EfficiencyModel::uniform(0.8));
    auto a = run_experiment(*s, 5000, 99);
    auto b = run_experiment(*s, 5000, 99);
    EXPECT_EQ(a.wins, b.wins);
    EXPECT_EQ(a.detection_counts, b.detection_counts);
    EXPECT_DOUBLE_EQ(a.win_rate, static_cast<double>(a.wins) / a.trials);
    std::uint64_t sum = 0, pattern_wins = 0;
    for (const auto& pp : a.per_pattern) {
        sum += pp.trials;
        pattern_wins += pp.wins;
    }
    EXPECT_EQ(sum, a.trials);
    EXPECT_EQ(pattern_wins, a.wins);
    EXPECT_EQ(a.master_seed, 99u);

    RunOptions opt;
    opt.on_trial = [](const TrialRecord& r) { EXPECT_EQ(r.win, wins(r.pattern, r.answers)); };
    run_experiment(*s, 2000, 7, opt);

    EXPECT_THROW(run_experiment(*s, 0, 1), InvalidInput);
}

TEST(game, trial_outcome_independent_of_execution_order) {
    auto s = apply_detection(quantum_strategy(), EfficiencyModel::uniform(0.6));
    std::vector<TrialRecord> forward;
    RunOptions opt;
    opt.on_trial = [&](const TrialRecord& r) { forward.push_back(r); };
    run_experiment(*s, 500, 21, opt);
    for (std::uint64_t i = 500; i-- > 0;) {
        auto rec = play_trial(*s, i, trial_seed(21, i));
        EXPECT_EQ(rec.answers, forward[i].answers);
        EXPECT_EQ(rec.detections, forward[i].detections);
    }
}

namespace {

class SpyPlayer final : public Player {
   public:
    SpyPlayer(std::vector<Question>& log) : log_(log) {}
    PlayerReply respond(Question q, RandomSource&) override {
        log_.push_back(q);
        return {Sign::Plus, true};
    }

   private:
    std::vector<Question>& log_;
};

class SpyStrategy final : public Strategy {
   public:
    mutable std::array<std::vector<Question>, 3> logs;
    std::string name() const override { return "spy"; }
    Team setup(RandomSource&) const override {
        Team t;
        for (std::size_t p = 0; p < 3; ++p) t[p] = std::make_unique<SpyPlayer>(logs[p]);
        return t;
    }
};

}  // namespace

TEST(game, each_player_sees_only_its_question) {
    SpyStrategy spy;
    std::vector<QuestionPattern> patterns;
    RunOptions opt;
    opt.on_trial = [&](const TrialRecord& r) { patterns.push_back(r.pattern); };
    run_experiment(spy, 300, 4, opt);
    for (std::size_t p = 0; p < 3; ++p) {
        ASSERT_EQ(spy.logs[p].size(), patterns.size());
        for (std::size_t i = 0; i < patterns.size(); ++i) EXPECT_EQ(spy.logs[p][i], questions(patterns[i])[p]);
    }
}

TEST(game, strategy_names) {
    EXPECT_EQ(classical_best_strategy()->name(), "classical-best");
    EXPECT_EQ(DeterministicStrategy(DeterministicTable{}).name(), "classical-table");
    EXPECT_EQ(quantum_strategy()->name(), "quantum");
    EXPECT_EQ(apply_detection(quantum_strategy(), EfficiencyModel::uniform(0.5))->name(), "quantum");
}
