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

#include "ghz/lhv.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace ghz;

namespace {

using E = InstructionEntry;

// Independent count: kits as base-3 digit strings, constraints written out.
int oracle_admissible_count() {
    int count = 0;
    for (int code = 0; code < 729; ++code) {
        int d[6], c = code;
        for (int k = 5; k >= 0; --k) {
            d[k] = c % 3;
            c /= 3;
        }
        int nd = 0, hole = -1;
        for (int k = 0; k < 6; ++k)
            if (d[k] == 2) ++nd, hole = k;
        if (nd != 1) continue;
        auto v = [&](int k) { return d[k] == 0 ? 1 : -1; };
        // Constraint k uses entries (X_A,X_B,X_C), (X_A,Y_B,Y_C), (Y_A,X_B,Y_C), (Y_A,Y_B,X_C).
        const int uses[4][3] = {{0, 2, 4}, {0, 3, 5}, {1, 2, 5}, {1, 3, 4}};
        const int target[4] = {-1, 1, 1, 1};
        bool ok = true;
        for (int k = 0; k < 4; ++k) {
            bool touches = uses[k][0] == hole || uses[k][1] == hole || uses[k][2] == hole;
            if (!touches && v(uses[k][0]) * v(uses[k][1]) * v(uses[k][2]) != target[k]) ok = false;
        }
        count += ok;
    }
    return count;
}

InstructionKit kit(std::array<E, 6> e) { return InstructionKit{e}; }

}  // namespace

TEST(lhv, enumerate_kits) {
    auto kits = enumerate_kits();
    ASSERT_FALSE(kits.empty());
    EXPECT_EQ(static_cast<int>(kits.size()), oracle_admissible_count());
    EXPECT_EQ(kits.size(), 48u);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < kits.size(); ++i) {
        EXPECT_EQ(kits[i].not_detected_count(), 1);
        EXPECT_TRUE(kit_is_admissible(kits[i]));
        EXPECT_TRUE(seen.insert(kits[i].to_string()).second);
        if (i) {
            EXPECT_LT(kits[i - 1].entries, kits[i].entries);
        }
    }
}

TEST(lhv, no_fully_detected_kit_satisfies_all_constraints) {
    for (unsigned i = 0; i < 64; ++i) {
        auto t = DeterministicTable::from_index(i);
        InstructionKit k;
        for (int e = 0; e < 6; ++e) k.entries[e] = t.entries[e] == Sign::Plus ? E::Plus : E::Minus;
        EXPECT_FALSE(kit_is_admissible(k));
        int satisfied = 0;
        for (auto p : kAllPatterns) {
            auto a = kit_answers(k, p);
            satisfied += (*a[0]) * (*a[1]) * (*a[2]) == target_product(p);
        }
        EXPECT_LT(satisfied, 4);
    }
}

TEST(lhv, kit_is_admissible_examples) {
    EXPECT_FALSE(kit_is_admissible(kit({E::NotDetected, E::NotDetected, E::Plus, E::Plus, E::Plus, E::Plus})));
    // X_A missing; YXY needs Y_A X_B Y_C = +1 but is -1 here. YYX = +1 holds.
    EXPECT_FALSE(kit_is_admissible(kit({E::NotDetected, E::Minus, E::Plus, E::Minus, E::Minus, E::Plus})));
    // Same with Y_C flipped: YXY = +1, YYX = Y_A Y_B X_C = (-1)(-1)(-1) = -1.
    EXPECT_FALSE(kit_is_admissible(kit({E::NotDetected, E::Minus, E::Plus, E::Minus, E::Minus, E::Minus})));
    EXPECT_TRUE(kit_is_admissible(kit({E::NotDetected, E::Plus, E::Plus, E::Plus, E::Plus, E::Plus})));
}

TEST(lhv, play_with_kit_examples) {
    auto k = kit({E::NotDetected, E::Plus, E::Minus, E::Plus, E::Plus, E::Minus});
    ASSERT_TRUE(kit_is_admissible(k));
    auto yxy = play_with_kit(k, QuestionPattern::YXY);
    ASSERT_TRUE(yxy[0] && yxy[1] && yxy[2]);
    EXPECT_EQ((*yxy[0]) * (*yxy[1]) * (*yxy[2]), Sign::Plus);
    auto xxx = play_with_kit(k, QuestionPattern::XXX);
    EXPECT_FALSE(xxx[0].has_value());
    EXPECT_TRUE(xxx[1].has_value());
    EXPECT_TRUE(xxx[2].has_value());
    EXPECT_THROW(play_with_kit(kit({E::Plus, E::Plus, E::Plus, E::Plus, E::Plus, E::Plus}), QuestionPattern::XXX),
                 InvalidInput);
}

TEST(lhv, kit_properties) {
    for (const auto& k : enumerate_kits()) {
        std::size_t hole = 0;
        while (k.entries[hole] != E::NotDetected) ++hole;
        std::size_t player = hole / 2;
        Question axis = hole % 2 ? Question::Y : Question::X;
        auto untested = untested_free_patterns(k);
        ASSERT_EQ(untested.size(), 2u);
        for (auto p : kAllPatterns) {
            bool queries_hole = questions(p)[player] == axis;
            bool in_untested = std::find(untested.begin(), untested.end(), p) != untested.end();
            EXPECT_NE(queries_hole, in_untested);
            auto a = play_with_kit(k, p);
            int missing = 0;
            for (const auto& x : a) missing += !x.has_value();
            EXPECT_LE(missing, 1);
            if (!queries_hole) {
                EXPECT_EQ((*a[0]) * (*a[1]) * (*a[2]), target_product(p));
            }
        }
        EXPECT_DOUBLE_EQ(triple_detection_probability(k), 0.5);
    }
}

TEST(lhv, statistics) {
    auto r = lhv_statistics(100000, 2026);
    EXPECT_EQ(r.experiment.trials, 100000u);
    EXPECT_LE(std::abs(r.triple_detection_rate - 0.5), 4 * binomial_sigma(0.5, 100000));
    EXPECT_EQ(r.conditional_win_rate, 1.0);
    EXPECT_EQ(r.single_detections, 0u);
    EXPECT_EQ(r.null_detections, 0u);
    EXPECT_EQ(r.triple_detections + r.experiment.detection_counts[2], r.experiment.trials);
    EXPECT_EQ(r.experiment.strategy, "lhv");
    EXPECT_THROW(lhv_statistics(0, 1), InvalidInput);
}

TEST(lhv, strategy_validation) {
    EXPECT_THROW(LhvStrategy(std::vector<InstructionKit>{}), InvalidInput);
    EXPECT_THROW(LhvStrategy({kit({E::Plus, E::Plus, E::Plus, E::Plus, E::Plus, E::Plus})}), InvalidInput);
}

TEST(lhv, kits_sampled_uniformly) {
    LhvStrategy s;
    std::vector<int> counts(s.kits().size());
    const int n = 48000;
    for (int i = 0; i < n; ++i) {
        RandomSource shared(derive_seed(1, i));
        auto team = s.setup(shared);
        RandomSource own(0);
        std::array<E, 6> e{};
        for (std::size_t p = 0; p < 3; ++p) {
            for (auto q : {Question::X, Question::Y}) {
                auto reply = team[p]->respond(q, own);
                e[2 * p + (q == Question::Y)] =
                    !reply.detected ? E::NotDetected : (reply.answer == Sign::Plus ? E::Plus : E::Minus);
            }
        }
        auto it = std::find(s.kits().begin(), s.kits().end(), kit(e));
        ASSERT_NE(it, s.kits().end());
        ++counts[it - s.kits().begin()];
    }
    double p = 1.0 / 48;
    for (int c : counts) EXPECT_LE(std::abs(c / double(n) - p), 4 * binomial_sigma(p, n));
}

TEST(lhv, distinguishable_from_lossy_quantum) {
    auto lossy = apply_detection(quantum_strategy(), EfficiencyModel::uniform(0.7));
    auto q = run_experiment(*lossy, 20000, 3);
    EXPECT_GT(q.detection_counts[1], 0u);
    EXPECT_GT(q.detection_counts[0], 0u);
    auto l = lhv_statistics(20000, 3);
    EXPECT_EQ(l.single_detections, 0u);
    EXPECT_EQ(l.null_detections, 0u);
}
