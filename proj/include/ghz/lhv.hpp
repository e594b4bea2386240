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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ghz/game.hpp"

// The "instruction kit" hidden-variable model: every particle triple carries
// a ±1 answer per (player, axis) except for exactly one "be not detected"
// entry. The two question patterns that never consult that entry see the
// quantum correlations; the other two lose a detection.

namespace ghz {

enum class InstructionEntry { Plus = 0, Minus = 1, NotDetected = 2 };

inline char entry_symbol(InstructionEntry e) {
    switch (e) {
        case InstructionEntry::Plus: return '+';
        case InstructionEntry::Minus: return '-';
        case InstructionEntry::NotDetected: return '0';
    }
    return '?';
}

/// Entries in the order (A,X), (A,Y), (B,X), (B,Y), (C,X), (C,Y).
struct InstructionKit {
    std::array<InstructionEntry, 2 * kPlayers> entries{};

    InstructionEntry entry(std::size_t player, Question q) const {
        return entries.at(2 * player + (q == Question::Y ? 1 : 0));
    }

    int not_detected_count() const {
        int n = 0;
        for (auto e : entries) n += e == InstructionEntry::NotDetected ? 1 : 0;
        return n;
    }

    /// "+-0+-+" style, in entry order.
    std::string to_string() const {
        std::string s;
        for (auto e : entries) s += entry_symbol(e);
        return s;
    }

    friend bool operator==(const InstructionKit&, const InstructionKit&) = default;
};

using KitAnswers = std::array<std::optional<Sign>, kPlayers>;

/// Per-player results; NotDetected becomes an empty answer.
inline KitAnswers kit_answers(const InstructionKit& kit, QuestionPattern pattern) {
    auto qs = questions(pattern);
    KitAnswers out;
    for (std::size_t p = 0; p < kPlayers; ++p) {
        switch (kit.entry(p, qs[p])) {
            case InstructionEntry::Plus: out[p] = Sign::Plus; break;
            case InstructionEntry::Minus: out[p] = Sign::Minus; break;
            case InstructionEntry::NotDetected: out[p] = std::nullopt; break;
        }
    }
    return out;
}

/// Patterns whose question set avoids every NotDetected entry.
inline std::vector<QuestionPattern> untested_free_patterns(const InstructionKit& kit) {
    std::vector<QuestionPattern> out;
    for (auto pattern : kAllPatterns) {
        auto a = kit_answers(kit, pattern);
        if (a[0] && a[1] && a[2]) out.push_back(pattern);
    }
    return out;
}

/// Exactly one NotDetected entry, and the two patterns that never consult it
/// reproduce the quantum products.
inline bool kit_is_admissible(const InstructionKit& kit) {
    if (kit.not_detected_count() != 1) return false;
    auto patterns = untested_free_patterns(kit);
    if (patterns.size() != 2) return false;
    for (auto pattern : patterns) {
        auto a = kit_answers(kit, pattern);
        if ((*a[0]) * (*a[1]) * (*a[2]) != target_product(pattern)) return false;
    }
    return true;
}

/// All admissible kits in lexicographic order (Plus < Minus < NotDetected).
inline std::vector<InstructionKit> enumerate_kits() {
    std::vector<InstructionKit> kits;
    for (int code = 0; code < 729; ++code) {
        InstructionKit kit;
        int c = code;
        for (std::size_t k = 6; k-- > 0;) {
            kit.entries[k] = static_cast<InstructionEntry>(c % 3);
            c /= 3;
        }
        if (kit_is_admissible(kit)) kits.push_back(kit);
    }
    return kits;
}

inline KitAnswers play_with_kit(const InstructionKit& kit, QuestionPattern pattern) {
    if (!kit_is_admissible(kit)) throw InvalidInput("instruction kit " + kit.to_string() + " is not admissible");
    return kit_answers(kit, pattern);
}

/// Probability of a triple detection for one kit under the given pattern weights.
inline double triple_detection_probability(const InstructionKit& kit, const PatternWeights& weights = kUniformPatterns) {
    double total = 0, hit = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        total += weights[k];
        auto a = kit_answers(kit, kAllPatterns[k]);
        if (a[0] && a[1] && a[2]) hit += weights[k];
    }
    return hit / total;
}

namespace detail {

/// A missing detection is filled with a fair random sign, the same fill
/// rule the measuring team uses.
class KitPlayer final : public Player {
   public:
    KitPlayer(InstructionKit kit, std::size_t player) : kit_(kit), player_(player) {}
    PlayerReply respond(Question q, RandomSource& rnd) override {
        switch (kit_.entry(player_, q)) {
            case InstructionEntry::Plus: return {Sign::Plus, true};
            case InstructionEntry::Minus: return {Sign::Minus, true};
            case InstructionEntry::NotDetected: return {rnd.fair_sign(), false};
        }
        throw InternalError("bad instruction entry");
    }

   private:
    InstructionKit kit_;
    std::size_t player_;
};

}  // namespace detail

/// Draws a fresh kit uniformly from `kits` for every triple.
class LhvStrategy final : public Strategy {
   public:
    LhvStrategy() : LhvStrategy(enumerate_kits()) {}
    explicit LhvStrategy(std::vector<InstructionKit> kits) : kits_(std::move(kits)) {
        if (kits_.empty()) throw InvalidInput("kit sampler needs at least one kit");
        for (const auto& k : kits_)
            if (!kit_is_admissible(k)) throw InvalidInput("kit " + k.to_string() + " is not admissible");
    }
    std::string name() const override { return "lhv"; }
    Team setup(RandomSource& shared) const override {
        const auto& kit = kits_[shared.index(kits_.size())];
        Team team;
        for (std::size_t p = 0; p < kPlayers; ++p) team[p] = std::make_unique<detail::KitPlayer>(kit, p);
        return team;
    }
    const std::vector<InstructionKit>& kits() const { return kits_; }

   private:
    std::vector<InstructionKit> kits_;
};

struct LhvReport {
    ExperimentReport experiment;
    std::uint64_t triple_detections = 0;
    double triple_detection_rate = 0;
    /// Wins among triple-detection trials divided by their number.
    double conditional_win_rate = 0;
    /// Trials with exactly one / zero detected particles.
    std::uint64_t single_detections = 0;
    std::uint64_t null_detections = 0;
};

inline LhvReport lhv_statistics(std::uint64_t trials, std::uint64_t master_seed,
                                const LhvStrategy& sampler = LhvStrategy(), const RunOptions& options = {}) {
    LhvReport r;
    r.experiment = run_experiment(sampler, trials, master_seed, options);
    const auto& counts = r.experiment.detection_counts;
    r.triple_detections = counts[3];
    r.triple_detection_rate = r.experiment.triple_detection_rate;
    r.conditional_win_rate = r.triple_detections ? static_cast<double>(r.experiment.triple_detection_wins) /
                                                       static_cast<double>(r.triple_detections)
                                                 : 0.0;
    r.single_detections = counts[1];
    r.null_detections = counts[0];
    return r;
}

}  // namespace ghz
