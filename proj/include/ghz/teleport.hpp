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
#include <span>
#include <string>
#include <vector>

#include "ghz/game.hpp"
#include "ghz/qsim.hpp"

// Entanglement-swapping variant of the game. Each GHZ particle is Bell
// measured together with one half of a local singlet while the remote halves
// (which never met each other) answer the referee's questions. No correction
// is applied to the state; Bell-outcome-dependent sign flips are applied to
// the recorded outcomes afterwards.

namespace ghz {

namespace layout {
/// GHZ particles at A, B, C.
inline constexpr std::array<SiteIndex, kPlayers> kGhzSites{0, 1, 2};
/// Local singlet halves at A, B, C, paired with the GHZ sites for Bell measurements.
inline constexpr std::array<SiteIndex, kPlayers> kLocalSites{3, 4, 5};
/// Remote singlet halves at A', B', C'.
inline constexpr std::array<SiteIndex, kPlayers> kRemoteSites{6, 7, 8};
inline constexpr std::size_t kNumSites = 9;
}  // namespace layout

/// GHZ(0,1,2) ⊗ singlet(3,6) ⊗ singlet(4,7) ⊗ singlet(5,8).
inline StateVector build_setup() {
    auto s = make_singlet();
    auto raw = tensor_product(tensor_product(tensor_product(make_ghz(), s), s), s);
    // raw sites: 0-2 GHZ, (3,4) (5,6) (7,8) singlets.
    const std::array<SiteIndex, 9> new_position{0, 1, 2, 3, 6, 4, 7, 5, 8};
    return permute_sites(raw, new_position);
}

/// Whether the remote outcome must be sign-flipped to equal the outcome a
/// direct measurement of the source particle would have given.
class CorrectionRule {
   public:
    bool flips(BellIndex b, Question q) const { return flip_[static_cast<int>(b)][q == Question::Y ? 1 : 0]; }
    void set(BellIndex b, Question q, bool flip) { flip_[static_cast<int>(b)][q == Question::Y ? 1 : 0] = flip; }

    Sign correct(BellIndex b, Question q, Sign raw) const { return flips(b, q) ? -raw : raw; }

    int flip_count(Question q) const {
        int n = 0;
        for (auto b : kAllBellIndices) n += flips(b, q) ? 1 : 0;
        return n;
    }

   private:
    std::array<std::array<bool, 2>, 4> flip_{};
};

/// Derives the flip table from single-particle teleportation through a
/// singlet: for every Bell outcome and axis, the remote particle's expectation
/// must be exactly ± the source eigenvalue. Throws InternalError if any cell
/// is inconsistent or the two-flip/two-keep structure per axis fails.
inline CorrectionRule derive_correction_rule() {
    CorrectionRule rule;
    for (auto q : {Question::X, Question::Y}) {
        const auto axis = to_axis(q);
        const auto source_obs = ProductObservable::single(0, axis);
        const auto remote_obs = ProductObservable::single(2, axis);
        for (auto b : kAllBellIndices) {
            std::optional<bool> flip;
            for (auto s : {Sign::Plus, Sign::Minus}) {
                auto source = project_outcome(StateVector::basis_state(1, 0), source_obs, s);
                auto joint = tensor_product(*source.collapsed, make_singlet());
                auto after = project_bell_outcome(joint, 0, 1, b);
                if (!after.collapsed || std::abs(after.probability - 0.25) > kOperatorTol) {
                    throw InternalError("teleportation Bell outcome does not have probability 1/4");
                }
                double e = expectation_product(*after.collapsed, remote_obs);
                bool this_flip;
                if (std::abs(e - value(s)) < kOperatorTol) {
                    this_flip = false;
                } else if (std::abs(e + value(s)) < kOperatorTol) {
                    this_flip = true;
                } else {
                    throw InternalError(std::string("no consistent correction for ") + to_string(b) + " on axis " +
                                        question_name(q));
                }
                if (flip && *flip != this_flip) throw InternalError("correction depends on the teleported state");
                flip = this_flip;
            }
            rule.set(b, q, *flip);
        }
        if (rule.flip_count(q) != 2) throw InternalError("correction rule must flip exactly two Bell outcomes per axis");
    }
    return rule;
}

inline const CorrectionRule& correction_rule() {
    static const CorrectionRule rule = derive_correction_rule();
    return rule;
}

using BellTriple = std::array<BellIndex, kPlayers>;

inline std::size_t bell_triple_index(const BellTriple& t) {
    return static_cast<std::size_t>(t[0]) * 16 + static_cast<std::size_t>(t[1]) * 4 + static_cast<std::size_t>(t[2]);
}

inline BellTriple bell_triple_from_index(std::size_t i) {
    return {static_cast<BellIndex>(i / 16 % 4), static_cast<BellIndex>(i / 4 % 4), static_cast<BellIndex>(i % 4)};
}

struct TeleportTrialRecord {
    QuestionPattern pattern = QuestionPattern::XXX;
    BellTriple bell_outcomes{};
    AnswerTriple raw_outcomes{};
    AnswerTriple corrected_outcomes{};
    bool win = false;
    bool raw_win = false;
    /// All nine detectors fired (always true unless an efficiency model is applied).
    bool all_detected = true;
    std::uint64_t trial_index = 0;
    std::uint64_t seed = 0;
};

enum class MeasurementOrder { BellFirst, RemoteFirst };

inline const StateVector& setup_state() {
    static const StateVector state = build_setup();
    return state;
}

/// One run: three Bell measurements, three remote axis measurements, flips
/// applied to the record only.
inline TeleportTrialRecord run_trial(QuestionPattern pattern, RandomSource& rnd,
                                     MeasurementOrder order = MeasurementOrder::BellFirst) {
    TeleportTrialRecord rec;
    rec.pattern = pattern;
    StateVector state = setup_state();
    auto qs = questions(pattern);
    auto do_bell = [&] {
        for (std::size_t p = 0; p < kPlayers; ++p) {
            auto m = bell_measure(state, layout::kGhzSites[p], layout::kLocalSites[p], rnd);
            rec.bell_outcomes[p] = m.outcome;
            state = std::move(m.collapsed);
        }
    };
    auto do_remote = [&] {
        for (std::size_t p = 0; p < kPlayers; ++p) {
            auto m = measure_pauli(state, layout::kRemoteSites[p], to_axis(qs[p]), rnd);
            rec.raw_outcomes[p] = m.outcome;
            state = std::move(m.collapsed);
        }
    };
    if (order == MeasurementOrder::BellFirst) {
        do_bell();
        do_remote();
    } else {
        do_remote();
        do_bell();
    }
    const auto& rule = correction_rule();
    for (std::size_t p = 0; p < kPlayers; ++p) {
        rec.corrected_outcomes[p] = rule.correct(rec.bell_outcomes[p], qs[p], rec.raw_outcomes[p]);
    }
    rec.win = wins(pattern, rec.corrected_outcomes);
    rec.raw_win = wins(pattern, rec.raw_outcomes);
    return rec;
}

struct TeleportRunOptions {
    MeasurementOrder order = MeasurementOrder::BellFirst;
    /// Per-detector efficiency applied to all nine detection events.
    double eta = 1.0;
    PatternWeights pattern_weights = kUniformPatterns;
    std::function<void(const TeleportTrialRecord&)> on_trial;
};

/// Seeded batch; the pattern is drawn by the referee stream as in the game harness.
inline std::vector<TeleportTrialRecord> run_trials(std::uint64_t trials, std::uint64_t master_seed,
                                                   const TeleportRunOptions& options = {}) {
    if (trials < 1) throw InvalidInput("trials must be at least 1");
    if (!(options.eta >= 0.0 && options.eta <= 1.0)) throw InvalidInput("detector efficiency must lie in [0, 1]");
    std::vector<TeleportTrialRecord> out;
    out.reserve(trials);
    for (std::uint64_t i = 0; i < trials; ++i) {
        auto seed = trial_seed(master_seed, i);
        auto referee = stream(seed, Stream::Referee);
        auto quantum = stream(seed, Stream::Setup);
        auto rec = run_trial(draw_pattern(referee, options.pattern_weights), quantum, options.order);
        rec.trial_index = i;
        rec.seed = seed;
        if (options.eta < 1.0) {
            auto detectors = stream(seed, Stream::PlayerA);
            for (int d = 0; d < 9; ++d) rec.all_detected = detectors.bernoulli(options.eta) && rec.all_detected;
        }
        if (options.on_trial) options.on_trial(rec);
        out.push_back(rec);
    }
    return out;
}

/// Probability that all nine particles are detected.
inline double nine_fold_detection_rate(double eta) { return std::pow(eta, 9); }

struct TeleportPatternStats {
    std::uint64_t trials = 0;
    std::uint64_t corrected_wins = 0;
    std::uint64_t raw_wins = 0;
    double corrected_rate() const { return trials ? double(corrected_wins) / double(trials) : 0.0; }
    double raw_rate() const { return trials ? double(raw_wins) / double(trials) : 0.0; }
};

struct TeleportSummary {
    std::uint64_t trials = 0;
    std::uint64_t corrected_wins = 0;
    std::uint64_t raw_wins = 0;
    std::uint64_t all_detected = 0;
    double corrected_rate = 0;
    double raw_rate = 0;
    std::array<TeleportPatternStats, 4> per_pattern{};
    /// Indexed by bell_triple_index().
    std::array<std::uint64_t, 64> bell_histogram{};

    /// Largest |count - n/64| over the 64 cells, in binomial standard deviations.
    double max_bell_cell_deviation() const {
        double n = double(trials), p = 1.0 / 64.0;
        double sigma = std::sqrt(n * p * (1 - p));
        double worst = 0;
        for (auto c : bell_histogram) worst = std::max(worst, std::abs(double(c) - n * p) / sigma);
        return worst;
    }
};

inline TeleportSummary summarize(std::span<const TeleportTrialRecord> records) {
    if (records.empty()) throw InvalidInput("cannot summarize an empty record list");
    TeleportSummary s;
    for (const auto& r : records) {
        ++s.trials;
        auto& pp = s.per_pattern[static_cast<std::size_t>(r.pattern)];
        ++pp.trials;
        if (r.win) ++s.corrected_wins, ++pp.corrected_wins;
        if (r.raw_win) ++s.raw_wins, ++pp.raw_wins;
        if (r.all_detected) ++s.all_detected;
        ++s.bell_histogram[bell_triple_index(r.bell_outcomes)];
    }
    s.corrected_rate = double(s.corrected_wins) / double(s.trials);
    s.raw_rate = double(s.raw_wins) / double(s.trials);
    return s;
}

struct ConditionedCell {
    /// Born probability of the Bell triple itself.
    double triple_probability = 0;
    /// P(corrected product == target | Bell triple).
    double corrected_success = 0;
    /// P(raw product == target | Bell triple).
    double raw_success = 0;
};

/// Exact statistics of one pattern conditioned on one Bell-outcome triple.
inline ConditionedCell condition_on_bell_triple(const BellTriple& triple, QuestionPattern pattern) {
    ConditionedCell cell;
    StateVector state = setup_state();
    double p = 1.0;
    for (std::size_t k = 0; k < kPlayers; ++k) {
        auto proj = project_bell_outcome(state, layout::kGhzSites[k], layout::kLocalSites[k], triple[k]);
        p *= proj.probability;
        if (!proj.collapsed) return cell;
        state = std::move(*proj.collapsed);
    }
    cell.triple_probability = p;
    auto qs = questions(pattern);
    std::array<PauliFactor, kPlayers> axes;
    for (std::size_t k = 0; k < kPlayers; ++k) axes[k] = {layout::kRemoteSites[k], to_axis(qs[k])};
    const auto& rule = correction_rule();
    for (const auto& [tuple, prob] : joint_distribution(state, axes)) {
        AnswerTriple raw{tuple[0], tuple[1], tuple[2]};
        AnswerTriple corrected;
        for (std::size_t k = 0; k < kPlayers; ++k) corrected[k] = rule.correct(triple[k], qs[k], raw[k]);
        if (wins(pattern, corrected)) cell.corrected_success += prob;
        if (wins(pattern, raw)) cell.raw_success += prob;
    }
    return cell;
}

}  // namespace ghz
