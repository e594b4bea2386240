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

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>

#include "ghz/game.hpp"

namespace ghz {

struct StreakStats {
    std::uint64_t rounds = 0;
    std::uint64_t wins = 0;
    std::uint64_t current_streak = 0;
    std::uint64_t best_streak = 0;

    void record(bool win) {
        ++rounds;
        if (win) {
            ++wins;
            best_streak = std::max(best_streak, ++current_streak);
        } else {
            current_streak = 0;
        }
    }
    double win_rate() const { return rounds ? double(wins) / double(rounds) : 0.0; }
};

struct PlayResult {
    QuestionPattern pattern;
    AnswerTriple answers;
    bool measured;
    bool win;
};

/// A human plays A on a quantum team; B and C are simulated. Each round the
/// human sees only A's question and either measures A's particle or answers
/// freely.
class PlaySession {
   public:
    explicit PlaySession(std::uint64_t seed) : seed_(seed) {}

    /// Starts a round and returns A's question.
    Question begin_round() {
        round_seed_ = trial_seed(seed_, round_);
        auto referee = stream(round_seed_, Stream::Referee);
        pattern_ = draw_pattern(referee);
        state_ = make_ghz();
        measured_.reset();
        return questions(*pattern_)[0];
    }

    bool in_round() const { return pattern_.has_value(); }

    /// Measures A's particle along A's question. Repeated calls return the same result.
    Sign measure() {
        require_round();
        if (!measured_) {
            auto rnd = stream(round_seed_, Stream::PlayerA);
            auto m = measure_pauli(*state_, 0, to_axis(questions(*pattern_)[0]), rnd);
            state_ = std::move(m.collapsed);
            measured_ = m.outcome;
        }
        return *measured_;
    }

    /// Finishes the round with A's measured outcome.
    PlayResult submit_measured() { return finish(measure(), true); }

    /// Finishes the round with a freely chosen answer.
    PlayResult submit_free(Sign answer) {
        require_round();
        return finish(answer, false);
    }

    const StreakStats& measured_stats() const { return measured_stats_; }
    const StreakStats& free_stats() const { return free_stats_; }
    std::uint64_t rounds_played() const { return round_; }

    std::string summary() const {
        std::ostringstream out;
        auto line = [&](const char* what, const StreakStats& s) {
            out << what << ": " << s.wins << "/" << s.rounds << " wins";
            if (s.rounds) out << " (" << s.win_rate() << ")";
            out << ", best streak " << s.best_streak << '\n';
        };
        out << "Rounds played: " << round_ << '\n';
        line("Measured answers", measured_stats_);
        line("Free answers    ", free_stats_);
        return out.str();
    }

   private:
    void require_round() const {
        if (!pattern_) throw InvalidInput("no round in progress");
    }

    PlayResult finish(Sign a_answer, bool measured) {
        auto qs = questions(*pattern_);
        AnswerTriple answers{a_answer, Sign::Plus, Sign::Plus};
        for (std::size_t p = 1; p < kPlayers; ++p) {
            auto rnd = stream(round_seed_, static_cast<Stream>(1 + p));
            auto m = measure_pauli(*state_, p, to_axis(qs[p]), rnd);
            state_ = std::move(m.collapsed);
            answers[p] = m.outcome;
        }
        PlayResult r{*pattern_, answers, measured, wins(*pattern_, answers)};
        (measured ? measured_stats_ : free_stats_).record(r.win);
        pattern_.reset();
        ++round_;
        return r;
    }

    std::uint64_t seed_;
    std::uint64_t round_ = 0;
    std::uint64_t round_seed_ = 0;
    std::optional<QuestionPattern> pattern_;
    std::optional<StateVector> state_;
    std::optional<Sign> measured_;
    StreakStats measured_stats_;
    StreakStats free_stats_;
};

}  // namespace ghz
