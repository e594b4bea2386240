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

#include "ghz/teleport.hpp"

#include <gtest/gtest.h>

#include "oracle/dense_oracle.hpp"

using namespace ghz;
namespace o = ghz::oracle;

namespace {

o::Vec eigenvector(PauliAxis axis, Sign s) {
    o::Mat proj = o::projector(o::pauli(axis), s);
    // Columns of a rank-one projector are multiples of the eigenvector.
    o::Vec v = proj.col(0).norm() > 0.5 ? o::Vec(proj.col(0)) : o::Vec(proj.col(1));
    return v / v.norm();
}

o::Vec dense_singlet() {
    return std::sqrt(0.5) * (o::product_ket({o::ket_up(), o::ket_down()}) - o::product_ket({o::ket_down(), o::ket_up()}));
}

// Flip table from dense matrices: source on site 0, singlet on (1,2).
bool oracle_flip(BellIndex b, PauliAxis axis) {
    std::optional<bool> flip;
    for (auto s : {Sign::Plus, Sign::Minus}) {
        o::Vec psi = o::kron(dense_singlet(), eigenvector(axis, s));
        o::Vec after = o::bell_projector(3, 0, 1, b) * psi;
        EXPECT_NEAR(after.squaredNorm(), 0.25, 1e-12);
        after /= after.norm();
        double e = o::expectation(after, o::embed(3, {{2, o::pauli(axis)}}));
        EXPECT_NEAR(std::abs(e), 1.0, 1e-12);
        bool f = e * value(s) < 0;
        if (flip) {
            EXPECT_EQ(*flip, f);
        }
        flip = f;
    }
    return *flip;
}

}  // namespace

TEST(teleport, build_setup) {
    auto s = build_setup();
    EXPECT_EQ(s.num_sites(), 9u);
    EXPECT_EQ(s.dimension(), 512u);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    auto rho = reduced_density(s, {6});
    EXPECT_LT((rho.entries() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(expectation_product(s, ProductObservable({{0, PauliAxis::X}, {1, PauliAxis::X}, {2, PauliAxis::X}})),
                -1.0, 1e-12);

    // Direct construction with the singlet partners in place.
    o::Vec ghz = o::to_vec(make_ghz());
    o::Vec full = o::Vec::Zero(512);
    const o::Vec sing = dense_singlet();
    for (std::size_t g = 0; g < 8; ++g)
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b)
                for (std::size_t c = 0; c < 4; ++c) {
                    // Singlet basis index: bit 0 = local half, bit 1 = remote half.
                    std::size_t idx = g | ((a & 1) << 3) | ((b & 1) << 4) | ((c & 1) << 5) | ((a >> 1) << 6) |
                                      ((b >> 1) << 7) | ((c >> 1) << 8);
                    full(idx) = ghz(g) * sing(a) * sing(b) * sing(c);
                }
    EXPECT_LT((o::to_vec(s) - full).norm(), 1e-12);

    for (std::size_t k = 0; k < 3; ++k) {
        auto pair = reduced_density(s, {layout::kLocalSites[k], layout::kRemoteSites[k]});
        o::Mat expected = sing * sing.adjoint();
        EXPECT_LT((pair.entries() - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(teleport, correction_rule_matches_dense_oracle) {
    auto rule = derive_correction_rule();
    for (auto q : {Question::X, Question::Y}) {
        EXPECT_EQ(rule.flip_count(q), 2);
        for (auto b : kAllBellIndices) EXPECT_EQ(rule.flips(b, q), oracle_flip(b, to_axis(q))) << to_string(b);
    }
    EXPECT_FALSE(rule.flips(BellIndex::PsiMinus, Question::X));
    EXPECT_FALSE(rule.flips(BellIndex::PsiMinus, Question::Y));
    EXPECT_EQ(rule.correct(BellIndex::PsiMinus, Question::X, Sign::Minus), Sign::Minus);
    EXPECT_EQ(&correction_rule(), &correction_rule());
}

TEST(teleport, corrected_outcomes_always_win) {
    for (auto p : {QuestionPattern::XXX, QuestionPattern::XYY}) {
        TeleportRunOptions opt;
        opt.pattern_weights = {};
        opt.pattern_weights[static_cast<std::size_t>(p)] = 1;
        auto recs = run_trials(10000, 11, opt);
        std::uint64_t raw = 0;
        for (const auto& r : recs) {
            ASSERT_EQ(r.pattern, p);
            EXPECT_EQ(product(r.corrected_outcomes), target_product(p));
            EXPECT_TRUE(r.win);
            raw += r.raw_win;
            const auto& rule = correction_rule();
            auto qs = questions(p);
            for (std::size_t k = 0; k < 3; ++k)
                EXPECT_EQ(r.corrected_outcomes[k] != r.raw_outcomes[k], rule.flips(r.bell_outcomes[k], qs[k]));
        }
        EXPECT_LE(std::abs(raw / 10000.0 - 0.5), 4 * binomial_sigma(0.5, 10000));
    }
}

TEST(teleport, summary) {
    auto recs = run_trials(10000, 5);
    auto s = summarize(recs);
    EXPECT_EQ(s.trials, 10000u);
    EXPECT_EQ(s.corrected_rate, 1.0);
    for (const auto& pp : s.per_pattern) {
        EXPECT_GT(pp.trials, 0u);
        EXPECT_EQ(pp.corrected_rate(), 1.0);
    }
    EXPECT_LE(std::abs(s.raw_rate - 0.5), 4 * binomial_sigma(0.5, s.trials));
    // 64 cells: allow a Bonferroni-style margin over the per-cell 4 sigma.
    EXPECT_LT(s.max_bell_cell_deviation(), 4.5);
    std::uint64_t total = 0;
    for (auto c : s.bell_histogram) total += c;
    EXPECT_EQ(total, s.trials);
    EXPECT_EQ(s.all_detected, s.trials);

    EXPECT_THROW(summarize(std::span<const TeleportTrialRecord>{}), InvalidInput);
    EXPECT_THROW(run_trials(0, 1), InvalidInput);
    TeleportRunOptions bad;
    bad.eta = 1.2;
    EXPECT_THROW(run_trials(1, 1, bad), InvalidInput);
}

TEST(teleport, every_bell_triple_and_pattern_corrects) {
    for (std::size_t i = 0; i < 64; ++i) {
        auto t = bell_triple_from_index(i);
        EXPECT_EQ(bell_triple_index(t), i);
        for (auto p : kAllPatterns) {
            auto cell = condition_on_bell_triple(t, p);
            EXPECT_NEAR(cell.triple_probability, 1.0 / 64, 1e-12);
            EXPECT_NEAR(cell.corrected_success, 1.0, 1e-12) << i << ' ' << to_string(p);
            EXPECT_TRUE(std::abs(cell.raw_success - 1.0) < 1e-12 || std::abs(cell.raw_success) < 1e-12);
        }
    }
}

TEST(teleport, conditioned_cells_match_dense_oracle) {
    const o::Vec psi = o::to_vec(build_setup());
    const auto& rule = correction_rule();
    for (std::size_t i : {0u, 27u, 63u}) {
        auto t = bell_triple_from_index(i);
        o::Vec v = psi;
        for (std::size_t k = 0; k < 3; ++k) v = o::bell_projector(9, layout::kGhzSites[k], layout::kLocalSites[k], t[k]) * v;
        EXPECT_NEAR(v.squaredNorm(), 1.0 / 64, 1e-12);
        v /= v.norm();
        for (auto p : kAllPatterns) {
            auto qs = questions(p);
            std::vector<PauliFactor> f;
            Sign flip = Sign::Plus;
            for (std::size_t k = 0; k < 3; ++k) {
                f.push_back({layout::kRemoteSites[k], to_axis(qs[k])});
                if (rule.flips(t[k], qs[k])) flip = -flip;
            }
            double corrected = value(flip) * o::expectation(v, o::product_operator(9, f));
            EXPECT_NEAR(corrected, value(target_product(p)), 1e-12);
        }
    }
}

TEST(teleport, measurement_order_irrelevant) {
    TeleportRunOptions bell_first, remote_first;
    remote_first.order = MeasurementOrder::RemoteFirst;
    auto a = summarize(run_trials(10000, 8, bell_first));
    auto b = summarize(run_trials(10000, 9, remote_first));
    EXPECT_EQ(b.corrected_rate, 1.0);
    double sigma = std::sqrt(2.0) * binomial_sigma(0.5, 10000);
    EXPECT_LE(std::abs(a.raw_rate - b.raw_rate), 4 * sigma);
    EXPECT_LT(b.max_bell_cell_deviation(), 4.5);
    for (std::size_t k = 0; k < 4; ++k) {
        double pa = a.per_pattern[k].trials / 10000.0, pb = b.per_pattern[k].trials / 10000.0;
        EXPECT_LE(std::abs(pa - pb), 4 * std::sqrt(2.0) * binomial_sigma(0.25, 10000));
    }
}

TEST(teleport, order_irrelevant_exactly) {
    // Project the remote outcomes first, then the Bell outcomes; the joint
    // probability of every cell must match the reverse order.
    const auto& s = setup_state();
    auto t = bell_triple_from_index(13);
    auto qs = questions(QuestionPattern::YXY);
    for (int code = 0; code < 8; ++code) {
        StateVector a = s, b = s;
        double pa = 1, pb = 1;
        for (std::size_t k = 0; k < 3; ++k) {
            auto sign = sign_from_bit((code >> k) & 1);
            auto obs = ProductObservable::single(layout::kRemoteSites[k], to_axis(qs[k]));
            auto r = project_outcome(a, obs, sign);
            pa *= r.probability;
            a = *r.collapsed;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            auto r = project_bell_outcome(a, layout::kGhzSites[k], layout::kLocalSites[k], t[k]);
            pa *= r.probability;
            if (r.collapsed) a = *r.collapsed;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            auto r = project_bell_outcome(b, layout::kGhzSites[k], layout::kLocalSites[k], t[k]);
            pb *= r.probability;
            b = *r.collapsed;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            auto sign = sign_from_bit((code >> k) & 1);
            auto r = project_outcome(b, ProductObservable::single(layout::kRemoteSites[k], to_axis(qs[k])), sign);
            pb *= r.probability;
            if (r.collapsed) b = *r.collapsed;
        }
        EXPECT_NEAR(pa, pb, 1e-14);
    }
}

TEST(teleport, nine_fold_detection) {
    EXPECT_DOUBLE_EQ(nine_fold_detection_rate(1.0), 1.0);
    EXPECT_NEAR(nine_fold_detection_rate(0.9), 0.387420489, 1e-12);
    TeleportRunOptions opt;
    opt.eta = 0.9;
    auto s = summarize(run_trials(20000, 3, opt));
    double p = nine_fold_detection_rate(0.9);
    EXPECT_LE(std::abs(s.all_detected / 20000.0 - p), 4 * binomial_sigma(p, 20000));
    EXPECT_EQ(s.corrected_rate, 1.0);
}

TEST(teleport, runs_are_reproducible) {
    auto a = run_trials(500, 42), b = run_trials(500, 42);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].bell_outcomes, b[i].bell_outcomes);
        EXPECT_EQ(a[i].raw_outcomes, b[i].raw_outcomes);
        EXPECT_EQ(a[i].seed, trial_seed(42, i));
    }
}
