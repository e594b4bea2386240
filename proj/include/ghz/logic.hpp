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

#include <boost/dynamic_bitset.hpp>

#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ghz/game.hpp"
#include "ghz/sign.hpp"

// ±1 parity constraints: "the product of these variables equals target".
// Two independent solvers: exhaustive enumeration for small systems and
// GF(2) elimination (value v <-> bit (1 - v) / 2) for everything else.

namespace ghz {

struct ParityConstraint {
    /// Repeated variables cancel pairwise.
    std::vector<std::string> vars;
    Sign target = Sign::Plus;
    std::string label;
};

class ParitySystem {
   public:
    std::size_t add_variable(const std::string& name) {
        if (name.empty()) throw InvalidInput("variable name must not be empty");
        if (index_.count(name)) throw InvalidInput("duplicate variable '" + name + "'");
        index_[name] = variables_.size();
        variables_.push_back(name);
        return variables_.size() - 1;
    }

    std::size_t add_constraint(std::vector<std::string> vars, Sign target, std::string label = {}) {
        if (vars.empty()) throw InvalidInput("constraint needs at least one variable");
        for (const auto& v : vars)
            if (!index_.count(v)) throw InvalidInput("undeclared variable '" + v + "'");
        constraints_.push_back({std::move(vars), target, std::move(label)});
        return constraints_.size() - 1;
    }

    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<ParityConstraint>& constraints() const { return constraints_; }
    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }

    std::optional<std::size_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Variables occurring an odd number of times in constraint c.
    boost::dynamic_bitset<> support(std::size_t c) const {
        boost::dynamic_bitset<> s(variables_.size());
        for (const auto& v : constraints_.at(c).vars) s.flip(index_.at(v));
        return s;
    }

    ParitySystem without_constraint(std::size_t c) const {
        if (c >= constraints_.size()) throw InvalidInput("constraint index out of range");
        ParitySystem out = *this;
        out.constraints_.erase(out.constraints_.begin() + static_cast<std::ptrdiff_t>(c));
        return out;
    }

   private:
    std::vector<std::string> variables_;
    std::vector<ParityConstraint> constraints_;
    std::map<std::string, std::size_t> index_;
};

/// Values in variable declaration order.
using Assignment = std::vector<Sign>;

struct Sat {
    Assignment assignment;
};

struct Unsat {
    /// Original constraint indices, ascending, whose product cancels every
    /// variable while the targets multiply to -1.
    std::vector<std::size_t> certificate;
};

using SolveResult = std::variant<Sat, Unsat>;

inline bool is_sat(const SolveResult& r) { return std::holds_alternative<Sat>(r); }

inline bool satisfies(const ParitySystem& system, const Assignment& assignment) {
    if (assignment.size() != system.num_variables()) return false;
    for (const auto& c : system.constraints()) {
        Sign p = Sign::Plus;
        for (const auto& v : c.vars) p *= assignment[*system.find(v)];
        if (p != c.target) return false;
    }
    return true;
}

inline bool verify_certificate(const ParitySystem& system, const std::vector<std::size_t>& certificate) {
    if (certificate.empty()) return false;
    boost::dynamic_bitset<> acc(system.num_variables());
    Sign target = Sign::Plus;
    std::vector<bool> used(system.num_constraints(), false);
    for (auto c : certificate) {
        if (c >= system.num_constraints() || used[c]) return false;
        used[c] = true;
        acc ^= system.support(c);
        target *= system.constraints()[c].target;
    }
    return acc.none() && target == Sign::Minus;
}

inline bool verify(const ParitySystem& system, const SolveResult& result) {
    if (const auto* s = std::get_if<Sat>(&result)) return satisfies(system, s->assignment);
    return verify_certificate(system, std::get<Unsat>(result).certificate);
}

namespace detail {

struct Gf2Row {
    boost::dynamic_bitset<> vars;
    bool rhs = false;
    /// Which original constraints were summed into this row.
    boost::dynamic_bitset<> combo;
};

struct Gf2Echelon {
    std::vector<Gf2Row> rows;
    std::vector<std::size_t> pivot_col;  // pivot column of rows[0..rank)
    std::size_t rank = 0;
};

inline Gf2Echelon eliminate(const ParitySystem& system) {
    const std::size_t n = system.num_variables(), m = system.num_constraints();
    Gf2Echelon e;
    e.rows.reserve(m);
    for (std::size_t c = 0; c < m; ++c) {
        Gf2Row row{system.support(c), bit(system.constraints()[c].target) == 1, boost::dynamic_bitset<>(m)};
        row.combo.set(c);
        e.rows.push_back(std::move(row));
    }
    for (std::size_t col = 0; col < n && e.rank < m; ++col) {
        std::size_t pivot = e.rank;
        while (pivot < m && !e.rows[pivot].vars.test(col)) ++pivot;
        if (pivot == m) continue;
        std::swap(e.rows[pivot], e.rows[e.rank]);
        const Gf2Row& p = e.rows[e.rank];
        for (std::size_t r = 0; r < m; ++r) {
            if (r == e.rank || !e.rows[r].vars.test(col)) continue;
            e.rows[r].vars ^= p.vars;
            e.rows[r].rhs ^= p.rhs;
            e.rows[r].combo ^= p.combo;
        }
        e.pivot_col.push_back(col);
        ++e.rank;
    }
    return e;
}

inline std::vector<std::size_t> combo_indices(const boost::dynamic_bitset<>& combo) {
    std::vector<std::size_t> out;
    for (auto i = combo.find_first(); i != boost::dynamic_bitset<>::npos; i = combo.find_next(i)) out.push_back(i);
    return out;
}

}  // namespace detail

/// GF(2) rank of the constraint left-hand sides.
inline std::size_t gf2_rank(const ParitySystem& system) { return detail::eliminate(system).rank; }

/// Gauss-Jordan elimination. On inconsistency the certificate lists the
/// original constraints whose sum reduces to 0 = 1. Satisfiable systems get
/// every free variable set to +1.
inline SolveResult solve_gf2(const ParitySystem& system) {
    auto e = detail::eliminate(system);
    for (std::size_t r = e.rank; r < e.rows.size(); ++r) {
        if (e.rows[r].rhs) return Unsat{detail::combo_indices(e.rows[r].combo)};
    }
    Assignment a(system.num_variables(), Sign::Plus);
    for (std::size_t r = 0; r < e.rank; ++r) a[e.pivot_col[r]] = e.rows[r].rhs ? Sign::Minus : Sign::Plus;
    return Sat{std::move(a)};
}

inline constexpr std::size_t kMaxEnumerationVariables = 24;

/// Exhaustive scan in lexicographic order (declaration order, +1 before -1).
/// Unsat certificates come from solve_gf2.
inline SolveResult solve_enumerate(const ParitySystem& system) {
    const std::size_t n = system.num_variables();
    if (n > kMaxEnumerationVariables) {
        throw InvalidInput("enumeration supports at most " + std::to_string(kMaxEnumerationVariables) +
                           " variables, got " + std::to_string(n));
    }
    std::vector<std::uint32_t> masks;
    std::vector<unsigned> targets;
    for (std::size_t c = 0; c < system.num_constraints(); ++c) {
        auto s = system.support(c);
        std::uint32_t m = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (s.test(v)) m |= std::uint32_t{1} << (n - 1 - v);
        masks.push_back(m);
        targets.push_back(bit(system.constraints()[c].target));
    }
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t a = 0; a < count; ++a) {
        bool ok = true;
        for (std::size_t c = 0; c < masks.size() && ok; ++c) {
            ok = static_cast<unsigned>(std::popcount(static_cast<std::uint32_t>(a) & masks[c]) & 1) == targets[c];
        }
        if (!ok) continue;
        Assignment out(n);
        for (std::size_t v = 0; v < n; ++v) out[v] = sign_from_bit(static_cast<unsigned>((a >> (n - 1 - v)) & 1));
        return Sat{std::move(out)};
    }
    auto proof = solve_gf2(system);
    if (is_sat(proof)) throw InternalError("enumeration and elimination disagree");
    return proof;
}

/// Enumeration when small enough, elimination otherwise.
inline SolveResult solve(const ParitySystem& system) {
    return system.num_variables() <= kMaxEnumerationVariables ? solve_enumerate(system) : solve_gf2(system);
}

/// Number of assignments (out of 2^n) satisfying exactly k constraints, for
/// every k. Only for systems that enumeration supports.
inline std::vector<std::uint64_t> satisfied_count_histogram(const ParitySystem& system) {
    const std::size_t n = system.num_variables();
    if (n > kMaxEnumerationVariables) throw InvalidInput("too many variables to enumerate");
    std::vector<std::uint64_t> hist(system.num_constraints() + 1, 0);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
        Assignment asg(n);
        for (std::size_t v = 0; v < n; ++v) asg[v] = sign_from_bit(static_cast<unsigned>((a >> (n - 1 - v)) & 1));
        std::size_t k = 0;
        for (std::size_t c = 0; c < system.num_constraints(); ++c) {
            Sign p = Sign::Plus;
            for (const auto& v : system.constraints()[c].vars) p *= asg[*system.find(v)];
            k += p == system.constraints()[c].target ? 1 : 0;
        }
        ++hist[k];
    }
    return hist;
}

/// Result of re-solving with each constraint removed, indexed by the removed constraint.
inline std::vector<SolveResult> drop_one_analysis(const ParitySystem& system) {
    std::vector<SolveResult> out;
    out.reserve(system.num_constraints());
    for (std::size_t c = 0; c < system.num_constraints(); ++c) out.push_back(solve(system.without_constraint(c)));
    return out;
}

// ---------------------------------------------------------------------------
// The two systems of interest

/// Pre-agreed answers X_A ... Y_C that would win all four question patterns.
inline ParitySystem build_classical_game_system() {
    ParitySystem s;
    for (const char* v : {"X_A", "Y_A", "X_B", "Y_B", "X_C", "Y_C"}) s.add_variable(v);
    for (auto pattern : kAllPatterns) {
        auto qs = questions(pattern);
        std::vector<std::string> vars;
        for (std::size_t p = 0; p < kPlayers; ++p) {
            vars.push_back(std::string(1, question_name(qs[p])) + "_" + kPlayerNames[p]);
        }
        s.add_constraint(std::move(vars), target_product(pattern), to_string(pattern));
    }
    return s;
}

/// Counterfactual-worlds system for actual sigma_x outcomes `actual_x`.
/// World CFWk measures sigma_x at the k-th site and sigma_y at the other two.
/// Locality fixes each world's sigma_x result to the actual one, leaving a
/// condition on the two sigma_y results; cross-world locality equates the
/// sigma_y result of a site across the two worlds where it is measured.
inline ParitySystem build_stapp_system(const AnswerTriple& actual_x) {
    if (product(actual_x) != Sign::Minus) {
        throw InvalidInput("actual sigma_x outcomes must multiply to -1, got " + to_string(product(actual_x)));
    }
    auto var = [](char player, int world) { return std::string("sigma") + player + "_y@CFW" + std::to_string(world); };
    ParitySystem s;
    for (const auto& v : {var('B', 1), var('C', 1), var('A', 2), var('C', 2), var('A', 3), var('B', 3)}) s.add_variable(v);
    // x_k * y * y' = +1  <=>  y * y' = x_k
    s.add_constraint({var('B', 1), var('C', 1)}, actual_x[0], "CFW1 XYY with sigmaA_x = " + to_string(actual_x[0]));
    s.add_constraint({var('A', 2), var('C', 2)}, actual_x[1], "CFW2 YXY with sigmaB_x = " + to_string(actual_x[1]));
    s.add_constraint({var('A', 3), var('B', 3)}, actual_x[2], "CFW3 YYX with sigmaC_x = " + to_string(actual_x[2]));
    s.add_constraint({var('C', 1), var('C', 2)}, Sign::Plus, "sigmaC_y agrees in CFW1 and CFW2");
    s.add_constraint({var('B', 1), var('B', 3)}, Sign::Plus, "sigmaB_y agrees in CFW1 and CFW3");
    s.add_constraint({var('A', 2), var('A', 3)}, Sign::Plus, "sigmaA_y agrees in CFW2 and CFW3");
    return s;
}

// ---------------------------------------------------------------------------
// Text format
//
//   # comment
//   VAR name
//   CON name1 name2 ... => +1
//
// A "# label" comment directly above a CON line becomes its label.

inline ParitySystem parse_system(std::istream& in) {
    ParitySystem s;
    std::string line, pending_label;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream words(line);
        std::string head;
        if (!(words >> head)) {
            pending_label.clear();
            continue;
        }
        auto fail = [&](const std::string& why) {
            throw InvalidInput("line " + std::to_string(lineno) + ": " + why);
        };
        if (head[0] == '#') {
            auto pos = line.find('#');
            pending_label = line.substr(pos + 1);
            if (!pending_label.empty() && pending_label[0] == ' ') pending_label.erase(0, 1);
            continue;
        }
        if (head == "VAR") {
            std::string name, extra;
            if (!(words >> name) || (words >> extra)) fail("expected 'VAR name'");
            try {
                s.add_variable(name);
            } catch (const InvalidInput& e) {
                fail(e.what());
            }
        } else if (head == "CON") {
            std::vector<std::string> vars;
            std::string w;
            bool arrow = false;
            while (words >> w) {
                if (w == "=>") {
                    arrow = true;
                    break;
                }
                vars.push_back(w);
            }
            std::string target, extra;
            if (!arrow || !(words >> target) || (words >> extra)) fail("expected 'CON v1 v2 ... => +1|-1'");
            if (target != "+1" && target != "-1") fail("target must be +1 or -1");
            try {
                s.add_constraint(std::move(vars), parse_sign(target), pending_label);
            } catch (const InvalidInput& e) {
                fail(e.what());
            }
        } else {
            fail("unknown directive '" + head + "'");
        }
        pending_label.clear();
    }
    return s;
}

inline ParitySystem parse_system(const std::string& text) {
    std::istringstream in(text);
    return parse_system(in);
}

inline std::string format_system(const ParitySystem& s) {
    std::ostringstream out;
    for (const auto& v : s.variables()) out << "VAR " << v << '\n';
    for (const auto& c : s.constraints()) {
        if (!c.label.empty()) out << "# " << c.label << '\n';
        out << "CON";
        for (const auto& v : c.vars) out << ' ' << v;
        out << " => " << to_string(c.target) << '\n';
    }
    return out.str();
}

inline std::string format_constraint(const ParityConstraint& c) {
    std::string out;
    for (const auto& v : c.vars) {
        if (!out.empty()) out += " * ";
        out += v;
    }
    return out + " = " + to_string(c.target);
}

/// Human-readable proof: the system, then either a witness or the
/// certificate with its cancellation check.
inline std::string format_proof(const ParitySystem& s, const SolveResult& result) {
    std::ostringstream out;
    out << "System: " << s.num_variables() << " variables, " << s.num_constraints() << " constraints\n";
    for (std::size_t c = 0; c < s.num_constraints(); ++c) {
        const auto& con = s.constraints()[c];
        out << "  [" << c << "] " << format_constraint(con);
        if (!con.label.empty()) out << "    (" << con.label << ")";
        out << '\n';
    }
    if (const auto* sat = std::get_if<Sat>(&result)) {
        out << "Verdict: SAT\n";
        for (std::size_t v = 0; v < s.num_variables(); ++v) {
            out << "  " << s.variables()[v] << " = " << to_string(sat->assignment[v]) << '\n';
        }
        out << "Witness check: " << (satisfies(s, sat->assignment) ? "ok" : "FAILED") << '\n';
        return out.str();
    }
    const auto& cert = std::get<Unsat>(result).certificate;
    out << "Verdict: UNSAT\n";
    out << "Certificate: multiply constraints";
    for (auto c : cert) out << " [" << c << "]";
    out << '\n';
    std::map<std::string, int> occurrences;
    Sign target = Sign::Plus;
    for (auto c : cert) {
        for (const auto& v : s.constraints()[c].vars) ++occurrences[v];
        target *= s.constraints()[c].target;
    }
    out << "  left side:";
    for (const auto& [v, n] : occurrences) out << ' ' << v << '^' << n;
    out << "\n  every exponent is even, so the left side is +1\n";
    out << "  right side: product of targets = " << to_string(target) << '\n';
    out << "  +1 = " << to_string(target) << " is a contradiction\n";
    out << "Certificate check: " << (verify_certificate(s, cert) ? "ok" : "FAILED") << '\n';
    return out.str();
}

}  // namespace ghz
