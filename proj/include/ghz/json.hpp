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

#include <json.hpp>

#include <variant>

#include "ghz/game.hpp"
#include "ghz/lhv.hpp"
#include "ghz/logic.hpp"
#include "ghz/teleport.hpp"
#include "ghz/tsvf.hpp"

// JSON views of the reports. Field names are lower_snake_case and objects
// keep insertion order so output is byte-stable.

namespace ghz {

using Json = nlohmann::ordered_json;

inline Json signs_json(const AnswerTriple& a) { return Json::array({value(a[0]), value(a[1]), value(a[2])}); }

inline Json to_json(const TrialRecord& r) {
    return Json{{"trial_index", r.trial_index},
                {"seed", r.seed},
                {"pattern", to_string(r.pattern)},
                {"answers", signs_json(r.answers)},
                {"detections", Json::array({r.detections[0], r.detections[1], r.detections[2]})},
                {"win", r.win}};
}

inline Json to_json(const ExperimentReport& r) {
    Json per = Json::object();
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& p = r.per_pattern[k];
        per[to_string(kAllPatterns[k])] = {{"trials", p.trials}, {"wins", p.wins}, {"win_rate", p.win_rate()}};
    }
    Json counts = Json::array();
    for (auto c : r.detection_counts) counts.push_back(c);
    return Json{{"strategy", r.strategy},
                {"trials", r.trials},
                {"wins", r.wins},
                {"win_rate", r.win_rate},
                {"standard_error", r.standard_error},
                {"per_pattern", per},
                {"detection_counts", counts},
                {"triple_detection_rate", r.triple_detection_rate},
                {"master_seed", r.master_seed}};
}

inline Json to_json(const LhvReport& r) {
    Json j = to_json(r.experiment);
    j["triple_detection_rate"] = r.triple_detection_rate;
    j["conditional_win_rate"] = r.conditional_win_rate;
    j["single_detections"] = r.single_detections;
    j["null_detections"] = r.null_detections;
    return j;
}

inline Json to_json(const TeleportTrialRecord& r) {
    return Json{{"trial_index", r.trial_index},
                {"seed", r.seed},
                {"pattern", to_string(r.pattern)},
                {"bell_outcomes", Json::array({to_string(r.bell_outcomes[0]), to_string(r.bell_outcomes[1]),
                                               to_string(r.bell_outcomes[2])})},
                {"raw_outcomes", signs_json(r.raw_outcomes)},
                {"corrected_outcomes", signs_json(r.corrected_outcomes)},
                {"win", r.win},
                {"raw_win", r.raw_win},
                {"all_detected", r.all_detected}};
}

inline Json to_json(const TeleportSummary& s) {
    Json per = Json::object();
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& p = s.per_pattern[k];
        per[to_string(kAllPatterns[k])] = {{"trials", p.trials},
                                           {"corrected_success_rate", p.corrected_rate()},
                                           {"raw_success_rate", p.raw_rate()}};
    }
    Json hist = Json::array();
    for (auto c : s.bell_histogram) hist.push_back(c);
    return Json{{"trials", s.trials},
                {"corrected_success_rate", s.corrected_rate},
                {"raw_success_rate", s.raw_rate},
                {"raw_standard_error", binomial_sigma(0.5, s.trials)},
                {"per_pattern", per},
                {"bell_histogram", hist},
                {"bell_histogram_max_deviation_sigma", s.max_bell_cell_deviation()},
                {"all_detected", s.all_detected}};
}

inline Json to_json(const ParitySystem& s) {
    Json cons = Json::array();
    for (const auto& c : s.constraints()) {
        cons.push_back({{"vars", c.vars}, {"target", value(c.target)}, {"label", c.label}});
    }
    return Json{{"variables", s.variables()}, {"constraints", cons}};
}

inline Json to_json(const ParitySystem& s, const SolveResult& r) {
    if (const auto* sat = std::get_if<Sat>(&r)) {
        Json a = Json::object();
        for (std::size_t v = 0; v < s.num_variables(); ++v) a[s.variables()[v]] = value(sat->assignment[v]);
        return Json{{"verdict", "sat"}, {"assignment", a}};
    }
    const auto& cert = std::get<Unsat>(r).certificate;
    return Json{{"verdict", "unsat"}, {"certificate", cert}, {"certificate_valid", verify_certificate(s, cert)}};
}

inline Json to_json(const ElementOfReality& e) {
    return Json{{"observable", e.observable.to_string()}, {"value", value(e.value)}, {"certainty", e.certainty}};
}

inline Json to_json(const ConditionalsReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"observable", pattern_observable(e.pattern).to_string()},
                           {"expectation", e.expectation},
                           {"probability_plus", e.probs.plus},
                           {"measured", value(e.measured)},
                           {"deterministic", e.deterministic},
                           {"expected", value(e.expected)},
                           {"matches", e.matches_target}});
    }
    Json comm = Json::array();
    for (const auto& c : r.commutation) {
        comm.push_back({{"first", to_string(c.first)}, {"second", to_string(c.second)}, {"commutes", c.commutes}});
    }
    return Json{{"conditionals", entries}, {"commutation", comm}, {"all_commute", r.all_commute}};
}

inline Json to_json(const ProductRuleReport& r) {
    Json pairs = Json::array();
    for (const auto& e : r.pairwise) pairs.push_back(to_json(e));
    return Json{{"pairwise_elements", pairs},
                {"numeric_product", value(r.numeric_product)},
                {"six_factor_element", to_json(r.six_factor)},
                {"violated", r.violated}};
}

inline Json to_json(const GeneralizedElementsReport& r) {
    Json per = Json::object();
    for (const auto& p : r.per_pattern) per[to_string(p.pattern)] = {{"trials", p.trials}, {"matches", p.matches}};
    return Json{{"per_pattern", per},
                {"all_hold", r.all_hold},
                {"repeat_agreement_after_y", r.repeat_agreement_after_y},
                {"counterfactual", r.counterfactual}};
}

}  // namespace ghz
