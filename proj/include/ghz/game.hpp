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

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghz/qsim.hpp"
#include "ghz/random.hpp"
#include "ghz/sign.hpp"

namespace ghz {

enum class Question { X, Y };

inline PauliAxis to_axis(Question q) { return q == Question::X ? PauliAxis::X : PauliAxis::Y; }
inline char question_name(Question q) { return q == Question::X ? 'X' : 'Y'; }

/// The four legal referee choices: all three players get X, or exactly one does.
enum class QuestionPattern { XXX = 0, XYY = 1, YXY = 2, YYX = 3 };

inline constexpr std::array<QuestionPattern, 4> kAllPatterns{QuestionPattern::XXX, QuestionPattern::XYY,
                                                             QuestionPattern::YXY, QuestionPattern::YYX};

inline constexpr std::size_t kPlayers = 3;
inline constexpr std::array<char, kPlayers> kPlayerNames{'A', 'B', 'C'};

inline std::array<Question, kPlayers> questions(QuestionPattern p) {
    using Q = Question;
    switch (p) {
        case QuestionPattern::XXX: return {Q::X, Q::X, Q::X};
        case QuestionPattern::XYY: return {Q::X, Q::Y, Q::Y};
        case QuestionPattern::YXY: return {Q::Y, Q::X, Q::Y};
        case QuestionPattern::YYX: return {Q::Y, Q::Y, Q::X};
    }
    throw InternalError("bad question pattern");
}

/// Required product of the three answers.
inline Sign target_product(QuestionPattern p) { return p == QuestionPattern::XXX ? Sign::Minus : Sign::Plus; }

inline std::string to_string(QuestionPattern p) {
    auto q = questions(p);
    return {question_name(q[0]), question_name(q[1]), question_name(q[2])};
}

inline std::optional<QuestionPattern> parse_pattern(std::string_view text) {
    for (auto p : kAllPatterns)
        if (to_string(p) == text) return p;
    return std::nullopt;
}

using AnswerTriple = std::array<Sign, kPlayers>;

inline Sign product(const AnswerTriple& a) { return a[0] * a[1] * a[2]; }

/// Referee predicate.
inline bool wins(QuestionPattern pattern, const AnswerTriple& answers) {
    return product(answers) == target_product(pattern);
}

using PatternWeights = std::array<double, 4>;
inline constexpr PatternWeights kUniformPatterns{0.25, 0.25, 0.25, 0.25};

inline QuestionPattern draw_pattern(RandomSource& rnd, const PatternWeights& weights = kUniformPatterns) {
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0) || !std::isfinite(w)) throw InvalidInput("pattern weights must be finite and non-negative");
        total += w;
    }
    if (!(total > 0)) throw InvalidInput("pattern weights must not all be zero");
    double u = rnd.uniform() * total;
    double acc = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        acc += weights[k];
        if (u < acc && weights[k] > 0) return kAllPatterns[k];
    }
    for (std::size_t k = 4; k-- > 0;)
        if (weights[k] > 0) return kAllPatterns[k];
    return QuestionPattern::XXX;
}

// ---------------------------------------------------------------------------
// Deterministic strategies

/// Pre-agreed answers (X_A, Y_A, X_B, Y_B, X_C, Y_C).
struct DeterministicTable {
    std::array<Sign, 2 * kPlayers> entries{Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus};

    Sign answer(std::size_t player, Question q) const { return entries.at(2 * player + (q == Question::Y ? 1 : 0)); }

    /// Tables are ordered lexicographically over the entry list with +1 before
    /// -1; index() is the position in that order (X_A is the high bit).
    static DeterministicTable from_index(unsigned index) {
        if (index >= 64) throw InvalidInput("table index out of range");
        DeterministicTable t;
        for (std::size_t k = 0; k < 6; ++k) t.entries[k] = sign_from_bit((index >> (5 - k)) & 1u);
        return t;
    }

    unsigned index() const {
        unsigned i = 0;
        for (auto e : entries) i = (i << 1) | bit(e);
        return i;
    }

    std::string to_string() const {
        std::string out;
        for (auto e : entries) {
            if (!out.empty()) out += ' ';
            out += ghz::to_string(e);
        }
        return out;
    }

    friend bool operator==(const DeterministicTable&, const DeterministicTable&) = default;
};

inline AnswerTriple play_deterministic(const DeterministicTable& table, QuestionPattern pattern) {
    auto q = questions(pattern);
    return {table.answer(0, q[0]), table.answer(1, q[1]), table.answer(2, q[2])};
}

inline double expected_win_rate(const DeterministicTable& table, const PatternWeights& weights = kUniformPatterns) {
    double total = 0, won = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        total += weights[k];
        if (wins(kAllPatterns[k], play_deterministic(table, kAllPatterns[k]))) won += weights[k];
    }
    return won / total;
}

struct ScanResult {
    double best_rate = 0;
    /// Maximizers in index() order.
    std::vector<DeterministicTable> maximizers;
    /// Expected win rate -> number of tables.
    std::map<double, int> histogram;
};

/// Exhaustive evaluation of all 64 deterministic tables.
inline ScanResult scan_deterministic(const PatternWeights& weights = kUniformPatterns) {
    ScanResult r;
    for (unsigned i = 0; i < 64; ++i) {
        auto t = DeterministicTable::from_index(i);
        double rate = expected_win_rate(t, weights);
        ++r.histogram[rate];
        if (rate > r.best_rate) {
            r.best_rate = rate;
            r.maximizers.clear();
        }
        if (rate == r.best_rate) r.maximizers.push_back(t);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Strategy interface

struct PlayerReply {
    Sign answer = Sign::Plus;
    bool detected = true;
};

/// One isolated player. It sees only its own question and its own random stream.
class Player {
   public:
    virtual ~Player() = default;
    virtual PlayerReply respond(Question question, RandomSource& rnd) = 0;
};

using Team = std::array<std::unique_ptr<Player>, kPlayers>;

class Strategy {
   public:
    virtual ~Strategy() = default;
    virtual std::string name() const = 0;
    /// Pre-game preparation. `shared` is randomness the team may agree on
    /// before separating; after setup the players only share what the
    /// returned handles captured.
    virtual Team setup(RandomSource& shared) const = 0;
};

using StrategyPtr = std::shared_ptr<const Strategy>;

namespace detail {

class TablePlayer final : public Player {
   public:
    TablePlayer(DeterministicTable table, std::size_t player) : table_(table), player_(player) {}
    PlayerReply respond(Question q, RandomSource&) override { return {table_.answer(player_, q)}; }

   private:
    DeterministicTable table_;
    std::size_t player_;
};

class RandomPlayer final : public Player {
   public:
    PlayerReply respond(Question, RandomSource& rnd) override { return {rnd.fair_sign()}; }
};

/// Holds one site of a GHZ state that all three players share. Measurement
/// collapses the shared state; no question is ever exchanged.
class QuantumPlayer final : public Player {
   public:
    QuantumPlayer(std::shared_ptr<StateVector> state, SiteIndex site) : state_(std::move(state)), site_(site) {}
    PlayerReply respond(Question q, RandomSource& rnd) override {
        auto m = measure_pauli(*state_, site_, to_axis(q), rnd);
        *state_ = std::move(m.collapsed);
        return {m.outcome};
    }

   private:
    std::shared_ptr<StateVector> state_;
    SiteIndex site_;
};

}  // namespace detail

class DeterministicStrategy final : public Strategy {
   public:
    explicit DeterministicStrategy(DeterministicTable table, std::string name = "classical-table")
        : table_(table), name_(std::move(name)) {}
    std::string name() const override { return name_; }
    Team setup(RandomSource&) const override {
        Team team;
        for (std::size_t p = 0; p < kPlayers; ++p) team[p] = std::make_unique<detail::TablePlayer>(table_, p);
        return team;
    }
    const DeterministicTable& table() const { return table_; }

   private:
    DeterministicTable table_;
    std::string name_;
};

/// Every player answers an independent fair sign.
class RandomStrategy final : public Strategy {
   public:
    std::string name() const override { return "random"; }
    Team setup(RandomSource&) const override {
        Team team;
        for (auto& p : team) p = std::make_unique<detail::RandomPlayer>();
        return team;
    }
};

/// Shared randomness over deterministic tables: setup picks table i with
/// probability weights[i] and hands it to all three players.
class TableMixtureStrategy final : public Strategy {
   public:
    explicit TableMixtureStrategy(std::array<double, 64> weights) : weights_(weights) {
        double total = 0;
        for (double w : weights_) {
            if (!(w >= 0)) throw InvalidInput("mixture weights must be non-negative");
            total += w;
        }
        if (!(total > 0)) throw InvalidInput("mixture weights must not all be zero");
        for (double& w : weights_) w /= total;
    }
    std::string name() const override { return "classical-mixture"; }
    Team setup(RandomSource& shared) const override {
        double u = shared.uniform(), acc = 0;
        unsigned pick = 63;
        for (unsigned i = 0; i < 64; ++i) {
            acc += weights_[i];
            if (u < acc && weights_[i] > 0) {
                pick = i;
                break;
            }
        }
        return DeterministicStrategy(DeterministicTable::from_index(pick)).setup(shared);
    }
    double expected_win_rate(const PatternWeights& pw = kUniformPatterns) const {
        double r = 0;
        for (unsigned i = 0; i < 64; ++i) r += weights_[i] * ghz::expected_win_rate(DeterministicTable::from_index(i), pw);
        return r;
    }
    const std::array<double, 64>& weights() const { return weights_; }

   private:
    std::array<double, 64> weights_;
};

/// Each player measures sigma_x or sigma_y on its share of a fresh GHZ state.
class QuantumStrategy final : public Strategy {
   public:
    std::string name() const override { return "quantum"; }
    Team setup(RandomSource&) const override {
        auto state = std::make_shared<StateVector>(make_ghz());
        Team team;
        for (std::size_t p = 0; p < kPlayers; ++p) team[p] = std::make_unique<detail::QuantumPlayer>(state, p);
        return team;
    }
};

inline StrategyPtr quantum_strategy() { return std::make_shared<QuantumStrategy>(); }

/// Best deterministic table (first maximizer of the exhaustive scan).
inline StrategyPtr classical_best_strategy() {
    auto t = scan_deterministic().maximizers.front();
    return std::make_shared<DeterministicStrategy>(t, "classical-best");
}

// ---------------------------------------------------------------------------
// Imperfect detection

enum class FillRule { RandomSign };

struct EfficiencyModel {
    std::array<double, kPlayers> eta{1.0, 1.0, 1.0};
    FillRule fill_rule = FillRule::RandomSign;

    static EfficiencyModel uniform(double eta) { return {{eta, eta, eta}, FillRule::RandomSign}; }

    void validate() const {
        for (double e : eta) {
            if (!(e >= 0.0 && e <= 1.0)) throw InvalidInput("detector efficiency must lie in [0, 1]");
        }
    }
};

namespace detail {

/// Consumes no extra randomness when eta == 1, so a perfect detector is an
/// exact identity on the wrapped player's behavior.
class LossyPlayer final : public Player {
   public:
    LossyPlayer(std::unique_ptr<Player> inner, double eta) : inner_(std::move(inner)), eta_(eta) {}
    PlayerReply respond(Question q, RandomSource& rnd) override {
        PlayerReply reply = inner_->respond(q, rnd);
        if (eta_ >= 1.0) return reply;
        if (!rnd.bernoulli(eta_)) return {rnd.fair_sign(), false};
        return reply;
    }

   private:
    std::unique_ptr<Player> inner_;
    double eta_;
};

}  // namespace detail

class DetectionStrategy final : public Strategy {
   public:
    DetectionStrategy(StrategyPtr inner, EfficiencyModel model) : inner_(std::move(inner)), model_(model) {
        if (!inner_) throw InvalidInput("null strategy");
        model_.validate();
    }
    std::string name() const override { return inner_->name(); }
    Team setup(RandomSource& shared) const override {
        Team team = inner_->setup(shared);
        for (std::size_t p = 0; p < kPlayers; ++p) {
            team[p] = std::make_unique<detail::LossyPlayer>(std::move(team[p]), model_.eta[p]);
        }
        return team;
    }
    const EfficiencyModel& model() const { return model_; }

   private:
    StrategyPtr inner_;
    EfficiencyModel model_;
};

/// Wraps a measuring strategy: an undetected player discards its measurement
/// and answers a fair random sign. Deterministic tables perform no
/// measurement and are returned unchanged.
inline StrategyPtr apply_detection(StrategyPtr strategy, const EfficiencyModel& model) {
    model.validate();
    if (dynamic_cast<const DeterministicStrategy*>(strategy.get()) ||
        dynamic_cast<const TableMixtureStrategy*>(strategy.get())) {
        return strategy;
    }
    return std::make_shared<DetectionStrategy>(std::move(strategy), model);
}

/// Win probability of the quantum team with per-detector efficiency eta:
/// P(all detected) + (1 - P(all detected)) / 2 with P(all detected) = eta^3.
inline double theoretical_win_rate(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("detector efficiency must lie in [0, 1]");
    double all = eta * eta * eta;
    return all + 0.5 * (1.0 - all);
}

/// Efficiency at which the quantum team exactly matches the classical 3/4.
inline double threshold_efficiency() { return std::cbrt(0.5); }

// ---------------------------------------------------------------------------
// Experiment harness

struct TrialRecord {
    QuestionPattern pattern = QuestionPattern::XXX;
    AnswerTriple answers{};
    std::array<bool, kPlayers> detections{true, true, true};
    bool win = false;
    std::uint64_t trial_index = 0;
    std::uint64_t seed = 0;
};

struct PatternStats {
    std::uint64_t trials = 0;
    std::uint64_t wins = 0;
    double win_rate() const { return trials ? static_cast<double>(wins) / static_cast<double>(trials) : 0.0; }
};

struct ExperimentReport {
    std::string strategy;
    std::uint64_t trials = 0;
    std::uint64_t wins = 0;
    double win_rate = 0;
    /// sqrt(p(1-p)/n) of the empirical win rate.
    double standard_error = 0;
    std::array<PatternStats, 4> per_pattern{};
    /// detection_counts[k] = number of trials with exactly k detections.
    std::array<std::uint64_t, kPlayers + 1> detection_counts{};
    double triple_detection_rate = 0;
    std::uint64_t triple_detection_wins = 0;
    std::uint64_t master_seed = 0;
};

struct RunOptions {
    PatternWeights pattern_weights = kUniformPatterns;
    /// Optional per-trial sink, called in trial order.
    std::function<void(const TrialRecord&)> on_trial;
};

/// Random streams carved from a trial seed.
enum class Stream : std::uint64_t { Referee = 0, PlayerA = 1, PlayerB = 2, PlayerC = 3, Setup = 4 };

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return derive_seed(master_seed, trial_index);
}

inline RandomSource stream(std::uint64_t seed, Stream s) {
    return RandomSource(derive_seed(seed, static_cast<std::uint64_t>(s)));
}

/// Plays one round. Player p is handed only questions(pattern)[p].
inline TrialRecord play_trial(const Strategy& strategy, std::uint64_t trial_index, std::uint64_t seed,
                              const PatternWeights& weights = kUniformPatterns) {
    auto referee = stream(seed, Stream::Referee);
    auto shared = stream(seed, Stream::Setup);
    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.seed = seed;
    rec.pattern = draw_pattern(referee, weights);
    auto qs = questions(rec.pattern);
    Team team = strategy.setup(shared);
    for (std::size_t p = 0; p < kPlayers; ++p) {
        auto own = stream(seed, static_cast<Stream>(1 + p));
        PlayerReply reply = team[p]->respond(qs[p], own);
        rec.answers[p] = reply.answer;
        rec.detections[p] = reply.detected;
    }
    rec.win = wins(rec.pattern, rec.answers);
    return rec;
}

inline void accumulate(ExperimentReport& report, const TrialRecord& rec) {
    ++report.trials;
    auto& pp = report.per_pattern[static_cast<std::size_t>(rec.pattern)];
    ++pp.trials;
    int detected = 0;
    for (bool d : rec.detections) detected += d ? 1 : 0;
    ++report.detection_counts[static_cast<std::size_t>(detected)];
    if (rec.win) {
        ++report.wins;
        ++pp.wins;
        if (detected == static_cast<int>(kPlayers)) ++report.triple_detection_wins;
    }
}

inline void finalize(ExperimentReport& report) {
    double n = static_cast<double>(report.trials);
    report.win_rate = report.trials ? static_cast<double>(report.wins) / n : 0.0;
    report.standard_error = report.trials ? std::sqrt(report.win_rate * (1.0 - report.win_rate) / n) : 0.0;
    report.triple_detection_rate =
        report.trials ? static_cast<double>(report.detection_counts[kPlayers]) / n : 0.0;
}

inline ExperimentReport run_experiment(const Strategy& strategy, std::uint64_t trials, std::uint64_t master_seed,
                                       const RunOptions& options = {}) {
    if (trials < 1) throw InvalidInput("trials must be at least 1");
    ExperimentReport report;
    report.strategy = strategy.name();
    report.master_seed = master_seed;
    for (std::uint64_t i = 0; i < trials; ++i) {
        auto rec = play_trial(strategy, i, trial_seed(master_seed, i), options.pattern_weights);
        accumulate(report, rec);
        if (options.on_trial) options.on_trial(rec);
    }
    finalize(report);
    return report;
}

/// Binomial standard error sqrt(p(1-p)/n) for a reference probability p.
inline double binomial_sigma(double p, std::uint64_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace ghz
