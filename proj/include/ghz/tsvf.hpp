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
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ghz/game.hpp"
#include "ghz/qsim.hpp"

// Pre- and post-selected inference. Given a preparation and a set of final
// single-site outcomes, the probability of an intermediate measurement of a
// product observable O giving o is
//
//     P(o) = N_o / (N_+ + N_-),   N_o = || Pi_post (I + o O)/2 |pre> ||^2
//
// where Pi_post is the product of the rank-1 projectors of the final outcomes.

namespace ghz {

class ImpossiblePostselection : public InvalidInput {
   public:
    using InvalidInput::InvalidInput;
};

/// An outcome counts as certain at or above this probability.
inline constexpr double kCertainty = 1.0 - 1e-9;

struct PostSelection {
    SiteIndex site;
    PauliAxis axis;
    Sign outcome;
};

class PrePostEnsemble {
   public:
    PrePostEnsemble(StateVector pre, std::vector<PostSelection> post) : pre_(std::move(pre)), post_(std::move(post)) {
        for (std::size_t i = 0; i < post_.size(); ++i) {
            pre_.check_site(post_[i].site);
            for (std::size_t j = 0; j < i; ++j) {
                if (post_[i].site == post_[j].site) throw InvalidInput("post-selected sites must be distinct");
            }
        }
        auto v = apply_post(pre_.amplitudes());
        if (detail::norm_squared(v) <= kImpossibleBranch) {
            throw ImpossiblePostselection("post-selected outcomes have zero probability for this preparation");
        }
    }

    const StateVector& pre() const { return pre_; }
    const std::vector<PostSelection>& post() const { return post_; }

    /// Pi_post applied to an arbitrary vector.
    std::vector<Amplitude> apply_post(std::span<const Amplitude> amps) const {
        std::vector<Amplitude> v(amps.begin(), amps.end());
        for (const auto& p : post_) v = detail::project(ProductObservable::single(p.site, p.axis), p.outcome, v);
        return v;
    }

   private:
    StateVector pre_;
    std::vector<PostSelection> post_;
};

/// Pre = GHZ, post = sigma_x outcomes at sites 0, 1, 2.
inline PrePostEnsemble ghz_x_ensemble(const AnswerTriple& x_outcomes) {
    std::vector<PostSelection> post;
    for (std::size_t k = 0; k < kPlayers; ++k) post.push_back({k, PauliAxis::X, x_outcomes[k]});
    return PrePostEnsemble(make_ghz(), std::move(post));
}

struct AblDistribution {
    ProductObservable observable;
    BranchProbabilities probs;
};

inline AblDistribution abl_distribution(const PrePostEnsemble& ens, const ProductObservable& obs) {
    detail::check_observable(ens.pre(), obs);
    auto amps = ens.pre().amplitudes();
    double n_plus = detail::norm_squared(ens.apply_post(detail::project(obs, Sign::Plus, amps)));
    double n_minus = detail::norm_squared(ens.apply_post(detail::project(obs, Sign::Minus, amps)));
    double total = n_plus + n_minus;
    if (total <= kImpossibleBranch) {
        throw ImpossiblePostselection("intermediate measurement of " + obs.to_string() +
                                      " leaves no weight on the post-selection");
    }
    return {obs, {n_plus / total, n_minus / total}};
}

struct ElementOfReality {
    ProductObservable observable;
    Sign value;
    double certainty;
};

inline std::optional<ElementOfReality> element_of_reality(const PrePostEnsemble& ens, const ProductObservable& obs) {
    auto d = abl_distribution(ens, obs);
    if (d.probs.plus >= kCertainty) return ElementOfReality{obs, Sign::Plus, d.probs.plus};
    if (d.probs.minus >= kCertainty) return ElementOfReality{obs, Sign::Minus, d.probs.minus};
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Product conditionals on the preparation alone

/// sigma_p1 sigma_p2 sigma_p3 on sites 0, 1, 2 for a question pattern.
inline ProductObservable pattern_observable(QuestionPattern pattern) {
    auto qs = questions(pattern);
    return ProductObservable({{0, to_axis(qs[0])}, {1, to_axis(qs[1])}, {2, to_axis(qs[2])}});
}

struct ConditionalEntry {
    QuestionPattern pattern;
    double expectation = 0;
    BranchProbabilities probs;
    Sign measured = Sign::Plus;
    bool deterministic = false;
    Sign expected = Sign::Plus;
    bool matches_target = false;
};

struct CommutationEntry {
    QuestionPattern first;
    QuestionPattern second;
    bool commutes = false;
};

struct ConditionalsReport {
    std::array<ConditionalEntry, 4> entries{};
    std::vector<CommutationEntry> commutation;
    bool all_deterministic = false;
    bool all_match = false;
    bool all_commute = false;
};

/// For each pattern product, checks that it has a definite value on `pre`
/// (by expectation and by a seeded measurement) and which pairs commute on it.
/// Targets are the GHZ values.
inline ConditionalsReport conditionals_check(const StateVector& pre, std::uint64_t seed = 0) {
    if (pre.num_sites() < 3) throw InvalidInput("conditionals check needs at least three sites");
    ConditionalsReport r;
    RandomSource rnd(seed);
    r.all_deterministic = r.all_match = r.all_commute = true;
    for (std::size_t k = 0; k < 4; ++k) {
        auto& e = r.entries[k];
        e.pattern = kAllPatterns[k];
        auto obs = pattern_observable(e.pattern);
        e.expectation = expectation_product(pre, obs);
        e.probs = outcome_probabilities(pre, obs);
        e.measured = measure_product(pre, obs, rnd).outcome;
        e.deterministic = std::max(e.probs.plus, e.probs.minus) >= kCertainty;
        e.expected = target_product(e.pattern);
        e.matches_target = e.deterministic && e.measured == e.expected &&
                           std::abs(e.expectation - value(e.expected)) <= kExactTol;
        r.all_deterministic = r.all_deterministic && e.deterministic;
        r.all_match = r.all_match && e.matches_target;
    }
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            bool c = commutes_on_state(pre, pattern_observable(kAllPatterns[i]), pattern_observable(kAllPatterns[j]));
            r.commutation.push_back({kAllPatterns[i], kAllPatterns[j], c});
            r.all_commute = r.all_commute && c;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Product rule

inline ProductObservable yy_observable(SiteIndex a, SiteIndex b) {
    return ProductObservable({{a, PauliAxis::Y}, {b, PauliAxis::Y}});
}

/// sigma_Ay sigma_By sigma_Ay sigma_Cy sigma_By sigma_Cy: the product of the
/// three pairwise observables taken as one operator.
inline ProductObservable six_factor_observable() {
    return ProductObservable({{0, PauliAxis::Y},
                              {1, PauliAxis::Y},
                              {0, PauliAxis::Y},
                              {2, PauliAxis::Y},
                              {1, PauliAxis::Y},
                              {2, PauliAxis::Y}},
                             /*allow_repeats=*/true);
}

struct ProductRuleReport {
    /// Elements for sigma_Ay sigma_By, sigma_Ay sigma_Cy, sigma_By sigma_Cy.
    std::array<ElementOfReality, 3> pairwise;
    Sign numeric_product;
    ElementOfReality six_factor;
    bool violated;
};

class MalformedEnsemble : public InternalError {
   public:
    using InternalError::InternalError;
};

inline ProductRuleReport product_rule_report(const PrePostEnsemble& ens) {
    const auto& post = ens.post();
    if (ens.pre().num_sites() != 3 || post.size() != 3) {
        throw InvalidInput("product-rule report needs a three-site preparation and three final outcomes");
    }
    std::array<bool, 3> seen{};
    Sign x_product = Sign::Plus;
    for (const auto& p : post) {
        if (p.axis != PauliAxis::X) throw InvalidInput("product-rule report needs sigma_x final outcomes");
        seen.at(p.site) = true;
        x_product *= p.outcome;
    }
    if (!(seen[0] && seen[1] && seen[2])) throw InvalidInput("final outcomes must cover sites 0, 1, 2");
    if (x_product != Sign::Minus) throw InvalidInput("final sigma_x outcomes must multiply to -1");

    const std::array<std::pair<SiteIndex, SiteIndex>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    std::array<std::optional<ElementOfReality>, 3> found;
    Sign numeric = Sign::Plus;
    for (std::size_t k = 0; k < 3; ++k) {
        found[k] = element_of_reality(ens, yy_observable(pairs[k].first, pairs[k].second));
        if (!found[k]) {
            throw MalformedEnsemble("pairwise observable " + yy_observable(pairs[k].first, pairs[k].second).to_string() +
                                    " is not an element of reality");
        }
        numeric *= found[k]->value;
    }
    auto six = element_of_reality(ens, six_factor_observable());
    if (!six) throw MalformedEnsemble("six-factor product is not an element of reality");
    return {{*found[0], *found[1], *found[2]}, numeric, *six, numeric != six->value};
}

// ---------------------------------------------------------------------------
// Relations among separate single-site measurements

struct GeneralizedPatternStats {
    QuestionPattern pattern;
    std::uint64_t trials = 0;
    std::uint64_t matches = 0;
};

struct GeneralizedElementsReport {
    std::array<GeneralizedPatternStats, 4> per_pattern{};
    bool all_hold = false;
    /// P(a repeated sigma_x on site 0 reproduces the first result when sigma_y
    /// is measured in between), exact.
    double repeat_agreement_after_y = 0;
    /// The four relations need incompatible measurements on the same site, so
    /// they are counterfactual rather than jointly measured.
    bool counterfactual = false;
};

inline GeneralizedElementsReport generalized_elements_check(const StateVector& pre, std::uint64_t trials,
                                                            std::uint64_t master_seed) {
    if (pre.num_sites() < 3) throw InvalidInput("needs at least three sites");
    if (trials < 1) throw InvalidInput("trials must be at least 1");
    GeneralizedElementsReport r;
    r.all_hold = true;
    for (std::size_t k = 0; k < 4; ++k) {
        auto& st = r.per_pattern[k];
        st.pattern = kAllPatterns[k];
        auto qs = questions(st.pattern);
        for (std::uint64_t t = 0; t < trials; ++t) {
            RandomSource rnd(derive_seed(derive_seed(master_seed, k), t));
            StateVector s = pre;
            AnswerTriple out;
            for (std::size_t p = 0; p < kPlayers; ++p) {
                auto m = measure_pauli(s, p, to_axis(qs[p]), rnd);
                out[p] = m.outcome;
                s = std::move(m.collapsed);
            }
            ++st.trials;
            if (product(out) == target_product(st.pattern)) ++st.matches;
        }
        r.all_hold = r.all_hold && st.matches == st.trials;
    }
    // X on site 0, then Y, then X again.
    const auto x0 = ProductObservable::single(0, PauliAxis::X);
    const auto y0 = ProductObservable::single(0, PauliAxis::Y);
    double agree = 0;
    for (auto first : {Sign::Plus, Sign::Minus}) {
        auto a = project_outcome(pre, x0, first);
        if (!a.collapsed) continue;
        for (auto mid : {Sign::Plus, Sign::Minus}) {
            auto b = project_outcome(*a.collapsed, y0, mid);
            if (!b.collapsed) continue;
            agree += a.probability * b.probability * outcome_probabilities(*b.collapsed, x0).of(first);
        }
    }
    r.repeat_agreement_after_y = agree;
    r.counterfactual = agree < kCertainty;
    return r;
}

// ---------------------------------------------------------------------------
// Text report

inline std::string format_element(const ElementOfReality& e) {
    std::ostringstream out;
    out << std::setprecision(12) << "{" << e.observable.to_string() << "} = " << to_string(e.value)
        << "   (ABL probability " << e.certainty << ")";
    return out.str();
}

inline std::string format_product_rule(const ConditionalsReport& cond, const PrePostEnsemble& ens,
                                       const ProductRuleReport& rep) {
    std::ostringstream out;
    out << "Preparation conditionals (products measured as single observables):\n";
    for (const auto& e : cond.entries) {
        out << "  {" << pattern_observable(e.pattern).to_string() << "} = " << to_string(e.measured)
            << (e.deterministic ? "  deterministic" : "  NOT deterministic")
            << (e.matches_target ? "" : "  MISMATCH") << '\n';
    }
    out << "  pairwise commutation on the state: " << (cond.all_commute ? "all commute" : "NOT all commute") << '\n';
    out << "Final outcomes:";
    for (const auto& p : ens.post()) out << ' ' << axis_name(p.axis) << p.site << '=' << to_string(p.outcome);
    out << "\nIntermediate elements of reality:\n";
    for (const auto& e : rep.pairwise) out << "  " << format_element(e) << '\n';
    out << "Product of their values: " << to_string(rep.numeric_product) << '\n';
    out << "Element for the product operator: " << format_element(rep.six_factor) << '\n';
    out << "Product rule " << (rep.violated ? "FAILS" : "holds") << ": " << to_string(rep.numeric_product)
        << (rep.violated ? " != " : " == ") << to_string(rep.six_factor.value) << '\n';
    return out.str();
}

}  // namespace ghz
