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

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ghz/random.hpp"
#include "ghz/sign.hpp"

// Dense statevector engine for a handful of two-level sites.
//
// Basis convention: bit k of a basis index is the z state of site k, with
// 0 = spin up and 1 = spin down. Site 0 is the lowest bit. The phase
// convention is sigma_y|up> = i|down>, sigma_y|down> = -i|up>.

namespace ghz {

using Amplitude = std::complex<double>;
using SiteIndex = std::size_t;

inline constexpr std::size_t kMaxSites = 12;
/// Tolerance for exact algebraic identities.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for derived operator norms.
inline constexpr double kOperatorTol = 1e-10;
/// Branches below this probability are never selected.
inline constexpr double kImpossibleBranch = 1e-15;

inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

enum class PauliAxis { X, Y, Z };

inline char axis_name(PauliAxis a) {
    switch (a) {
        case PauliAxis::X: return 'X';
        case PauliAxis::Y: return 'Y';
        case PauliAxis::Z: return 'Z';
    }
    return '?';
}

class StateVector {
   public:
    /// Computational basis state |index> on num_sites sites.
    static StateVector basis_state(std::size_t num_sites, std::size_t index) {
        check_site_count(num_sites);
        std::vector<Amplitude> amps(std::size_t{1} << num_sites);
        if (index >= amps.size()) throw InvalidInput("basis index out of range");
        amps[index] = 1.0;
        return StateVector(num_sites, std::move(amps));
    }

    /// Validates length (a power of two), finiteness and unit norm.
    static StateVector from_amplitudes(std::vector<Amplitude> amps) {
        if (amps.empty() || !std::has_single_bit(amps.size())) {
            throw InvalidInput("amplitude count must be a power of two");
        }
        auto n = static_cast<std::size_t>(std::countr_zero(amps.size()));
        check_site_count(n);
        double norm = 0;
        for (const auto& a : amps) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw InvalidInput("non-finite amplitude");
            }
            norm += std::norm(a);
        }
        if (std::abs(norm - 1.0) > kExactTol) throw InvalidInput("state is not normalized");
        return StateVector(n, std::move(amps));
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    static StateVector normalized(std::vector<Amplitude> amps) {
        double norm = 0;
        for (const auto& a : amps) norm += std::norm(a);
        if (!(norm > 0)) throw InternalError("cannot normalize a zero vector");
        double scale = 1.0 / std::sqrt(norm);
        for (auto& a : amps) a *= scale;
        return from_amplitudes(std::move(amps));
    }

    std::size_t num_sites() const { return num_sites_; }
    std::size_t dimension() const { return amps_.size(); }
    const Amplitude& amplitude(std::size_t basis) const { return amps_.at(basis); }
    std::span<const Amplitude> amplitudes() const { return amps_; }

    double norm_squared() const {
        double n = 0;
        for (const auto& a : amps_) n += std::norm(a);
        return n;
    }

    void check_site(SiteIndex site) const {
        if (site >= num_sites_) {
            throw InvalidInput("site " + std::to_string(site) + " out of range for a " +
                               std::to_string(num_sites_) + "-site state");
        }
    }

   private:
    StateVector(std::size_t n, std::vector<Amplitude> amps) : num_sites_(n), amps_(std::move(amps)) {}

    static void check_site_count(std::size_t n) {
        if (n == 0 || n > kMaxSites) {
            throw InvalidInput("site count must be in [1, " + std::to_string(kMaxSites) + "]");
        }
    }

    std::size_t num_sites_;
    std::vector<Amplitude> amps_;
};

struct PauliFactor {
    SiteIndex site;
    PauliAxis axis;
};

/// A tensor product of single-site Pauli operators, measured as a single
/// ±1-valued observable. Repeated sites are rejected unless explicitly
/// allowed; with repeats the factors on each site are multiplied in list
/// order and the total phase must come out real.
class ProductObservable {
   public:
    explicit ProductObservable(std::vector<PauliFactor> factors, bool allow_repeats = false)
        : factors_(std::move(factors)), allow_repeats_(allow_repeats) {
        if (factors_.empty()) throw InvalidInput("product observable needs at least one factor");
        reduce();
    }

    static ProductObservable single(SiteIndex site, PauliAxis axis) { return ProductObservable({{site, axis}}); }

    const std::vector<PauliFactor>& factors() const { return factors_; }
    bool allows_repeats() const { return allow_repeats_; }
    SiteIndex max_site() const { return max_site_; }

    /// Overall sign of the reduced operator.
    Sign sign() const { return sign_; }
    /// Reduced per-site operator for site < max_site()+1; nullopt is identity.
    const std::vector<std::optional<PauliAxis>>& reduced() const { return reduced_; }
    bool is_identity() const {
        for (const auto& r : reduced_)
            if (r) return false;
        return true;
    }

    std::string to_string() const {
        std::string out;
        for (const auto& f : factors_) {
            if (!out.empty()) out += ' ';
            out += axis_name(f.axis);
            out += std::to_string(f.site);
        }
        return out;
    }

   private:
    void reduce() {
        max_site_ = 0;
        for (const auto& f : factors_) max_site_ = std::max(max_site_, f.site);
        if (max_site_ >= kMaxSites) throw InvalidInput("observable site out of range");
        // 0 = I, 1 = X, 2 = Y, 3 = Z; phase counted in powers of i.
        std::vector<int> ops(max_site_ + 1, 0);
        std::vector<int> seen(max_site_ + 1, 0);
        int phase = 0;
        for (const auto& f : factors_) {
            if (seen[f.site]++ && !allow_repeats_) {
                throw InvalidInput("site " + std::to_string(f.site) + " repeated in product observable");
            }
            int q = static_cast<int>(f.axis) + 1;
            int& p = ops[f.site];
            if (p == 0) {
                p = q;
            } else if (p == q) {
                p = 0;
            } else {
                bool cyclic = (q - p + 3) % 3 == 1;
                phase += cyclic ? 1 : 3;
                p = 6 - p - q;
            }
        }
        phase %= 4;
        if (phase % 2 != 0) throw InvalidInput("product observable is not Hermitian: " + to_string());
        sign_ = phase == 0 ? Sign::Plus : Sign::Minus;
        reduced_.assign(max_site_ + 1, std::nullopt);
        for (std::size_t s = 0; s <= max_site_; ++s) {
            if (ops[s] != 0) reduced_[s] = static_cast<PauliAxis>(ops[s] - 1);
        }
    }

    std::vector<PauliFactor> factors_;
    bool allow_repeats_;
    SiteIndex max_site_ = 0;
    Sign sign_ = Sign::Plus;
    std::vector<std::optional<PauliAxis>> reduced_;
};

namespace detail {

inline void check_observable(const StateVector& state, const ProductObservable& obs) {
    state.check_site(obs.max_site());
}

/// O|psi> for a product observable, on a raw (possibly unnormalized) vector.
inline std::vector<Amplitude> apply(const ProductObservable& obs, std::span<const Amplitude> amps) {
    std::size_t flip = 0;
    std::vector<std::pair<std::size_t, PauliAxis>> active;
    const auto& red = obs.reduced();
    for (std::size_t s = 0; s < red.size(); ++s) {
        if (!red[s]) continue;
        active.emplace_back(s, *red[s]);
        if (*red[s] != PauliAxis::Z) flip |= std::size_t{1} << s;
    }
    const Amplitude i_unit(0, 1);
    std::vector<Amplitude> out(amps.size());
    for (std::size_t b = 0; b < amps.size(); ++b) {
        Amplitude c = static_cast<double>(value(obs.sign()));
        for (const auto& [s, axis] : active) {
            bool down = (b >> s) & 1;
            if (axis == PauliAxis::Y) {
                c *= down ? -i_unit : i_unit;
            } else if (axis == PauliAxis::Z && down) {
                c = -c;
            }
        }
        out[b ^ flip] = c * amps[b];
    }
    return out;
}

/// (I + o O)/2 |psi>.
inline std::vector<Amplitude> project(const ProductObservable& obs, Sign outcome, std::span<const Amplitude> amps) {
    auto o_psi = apply(obs, amps);
    double o = value(outcome);
    std::vector<Amplitude> out(amps.size());
    for (std::size_t b = 0; b < amps.size(); ++b) out[b] = 0.5 * (amps[b] + o * o_psi[b]);
    return out;
}

inline double norm_squared(std::span<const Amplitude> amps) {
    double n = 0;
    for (const auto& a : amps) n += std::norm(a);
    return n;
}

inline Amplitude inner(std::span<const Amplitude> bra, std::span<const Amplitude> ket) {
    Amplitude acc = 0;
    for (std::size_t b = 0; b < bra.size(); ++b) acc += std::conj(bra[b]) * ket[b];
    return acc;
}

/// Born-rule choice among branches; branches below kImpossibleBranch are skipped.
template <std::size_t N>
std::size_t sample_branch(const std::array<double, N>& probs, RandomSource& rnd) {
    double total = 0;
    std::size_t last_possible = N;
    for (std::size_t k = 0; k < N; ++k) {
        if (probs[k] >= kImpossibleBranch) {
            total += probs[k];
            last_possible = k;
        }
    }
    if (last_possible == N) throw InternalError("every measurement branch has zero probability");
    double u = rnd.uniform() * total;
    double acc = 0;
    for (std::size_t k = 0; k < N; ++k) {
        if (probs[k] < kImpossibleBranch) continue;
        acc += probs[k];
        if (u < acc) return k;
    }
    return last_possible;
}

}  // namespace detail

/// (|uuu> - |ddd>)/sqrt(2) on three sites.
inline StateVector make_ghz() {
    std::vector<Amplitude> amps(8);
    amps[0b000] = kInvSqrt2;
    amps[0b111] = -kInvSqrt2;
    return StateVector::from_amplitudes(std::move(amps));
}

/// (|ud> - |du>)/sqrt(2) on two sites; site 0 is the first ket label.
inline StateVector make_singlet() {
    std::vector<Amplitude> amps(4);
    amps[0b10] = kInvSqrt2;   // site 0 up, site 1 down
    amps[0b01] = -kInvSqrt2;  // site 0 down, site 1 up
    return StateVector::from_amplitudes(std::move(amps));
}

/// a ⊗ b; a occupies the low sites, b the sites above them.
inline StateVector tensor_product(const StateVector& a, const StateVector& b, std::size_t max_sites = kMaxSites) {
    std::size_t n = a.num_sites() + b.num_sites();
    if (n > max_sites) {
        throw InvalidInput("tensor product of " + std::to_string(n) + " sites exceeds the limit of " +
                           std::to_string(max_sites));
    }
    std::vector<Amplitude> amps(std::size_t{1} << n);
    for (std::size_t ib = 0; ib < b.dimension(); ++ib) {
        for (std::size_t ia = 0; ia < a.dimension(); ++ia) {
            amps[ia | (ib << a.num_sites())] = a.amplitude(ia) * b.amplitude(ib);
        }
    }
    return StateVector::normalized(std::move(amps));
}

/// Relabels sites: old site k becomes new site new_position[k].
inline StateVector permute_sites(const StateVector& state, std::span<const SiteIndex> new_position) {
    std::size_t n = state.num_sites();
    if (new_position.size() != n) throw InvalidInput("permutation size mismatch");
    std::vector<bool> hit(n, false);
    for (auto p : new_position) {
        if (p >= n || hit[p]) throw InvalidInput("not a permutation");
        hit[p] = true;
    }
    std::vector<Amplitude> amps(state.dimension());
    for (std::size_t b = 0; b < state.dimension(); ++b) {
        std::size_t t = 0;
        for (std::size_t k = 0; k < n; ++k) t |= ((b >> k) & 1) << new_position[k];
        amps[t] = state.amplitude(b);
    }
    return StateVector::from_amplitudes(std::move(amps));
}

struct BranchProbabilities {
    double plus = 0;
    double minus = 0;

    double of(Sign s) const { return s == Sign::Plus ? plus : minus; }
};

inline BranchProbabilities outcome_probabilities(const StateVector& state, const ProductObservable& obs) {
    detail::check_observable(state, obs);
    auto amps = state.amplitudes();
    return {detail::norm_squared(detail::project(obs, Sign::Plus, amps)),
            detail::norm_squared(detail::project(obs, Sign::Minus, amps))};
}

struct Projection {
    double probability = 0;
    /// Empty when the branch is impossible.
    std::optional<StateVector> collapsed;
};

/// Deterministic projection onto one eigenspace of obs, with its Born weight.
inline Projection project_outcome(const StateVector& state, const ProductObservable& obs, Sign outcome) {
    detail::check_observable(state, obs);
    auto v = detail::project(obs, outcome, state.amplitudes());
    double p = detail::norm_squared(v);
    if (p < kImpossibleBranch) return {p, std::nullopt};
    return {p, StateVector::normalized(std::move(v))};
}

struct Measurement {
    Sign outcome;
    StateVector collapsed;
};

/// Projective measurement of a product observable with projectors (I ± O)/2.
inline Measurement measure_product(const StateVector& state, const ProductObservable& obs, RandomSource& rnd) {
    auto probs = outcome_probabilities(state, obs);
    std::size_t k = detail::sample_branch<2>({probs.plus, probs.minus}, rnd);
    Sign outcome = k == 0 ? Sign::Plus : Sign::Minus;
    auto proj = project_outcome(state, obs, outcome);
    if (!proj.collapsed) throw InternalError("selected an impossible branch");
    return {outcome, std::move(*proj.collapsed)};
}

inline Measurement measure_pauli(const StateVector& state, SiteIndex site, PauliAxis axis, RandomSource& rnd) {
    state.check_site(site);
    return measure_product(state, ProductObservable::single(site, axis), rnd);
}

inline double expectation_product(const StateVector& state, const ProductObservable& obs) {
    detail::check_observable(state, obs);
    auto amps = state.amplitudes();
    auto o_psi = detail::apply(obs, amps);
    return detail::inner(amps, o_psi).real();
}

/// True iff ||(O1 O2 - O2 O1)|psi>|| < kOperatorTol.
inline bool commutes_on_state(const StateVector& state, const ProductObservable& o1, const ProductObservable& o2) {
    detail::check_observable(state, o1);
    detail::check_observable(state, o2);
    auto amps = state.amplitudes();
    auto a = detail::apply(o1, detail::apply(o2, amps));
    auto b = detail::apply(o2, detail::apply(o1, amps));
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
    return std::sqrt(detail::norm_squared(a)) < kOperatorTol;
}

// ---------------------------------------------------------------------------
// Bell measurements

/// Phi± = (|uu> ± |dd>)/sqrt(2), Psi± = (|ud> ± |du>)/sqrt(2), the first
/// label belonging to the first site of the measured pair.
enum class BellIndex { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

inline constexpr std::array<BellIndex, 4> kAllBellIndices{BellIndex::PhiPlus, BellIndex::PhiMinus,
                                                          BellIndex::PsiPlus, BellIndex::PsiMinus};

inline const char* to_string(BellIndex b) {
    switch (b) {
        case BellIndex::PhiPlus: return "phi_plus";
        case BellIndex::PhiMinus: return "phi_minus";
        case BellIndex::PsiPlus: return "psi_plus";
        case BellIndex::PsiMinus: return "psi_minus";
    }
    return "?";
}

/// Components of Bell state b in the pair basis |s1 s2> ordered uu, ud, du, dd.
inline std::array<double, 4> bell_components(BellIndex b) {
    const double r = kInvSqrt2;
    switch (b) {
        case BellIndex::PhiPlus: return {r, 0, 0, r};
        case BellIndex::PhiMinus: return {r, 0, 0, -r};
        case BellIndex::PsiPlus: return {0, r, r, 0};
        case BellIndex::PsiMinus: return {0, r, -r, 0};
    }
    return {};
}

namespace detail {

inline void check_pair(const StateVector& state, SiteIndex s1, SiteIndex s2) {
    state.check_site(s1);
    state.check_site(s2);
    if (s1 == s2) throw InvalidInput("Bell measurement needs two distinct sites");
}

/// (|b><b| on (s1, s2)) ⊗ I applied to the state.
inline std::vector<Amplitude> project_bell(const StateVector& state, SiteIndex s1, SiteIndex s2, BellIndex b) {
    auto comp = bell_components(b);
    std::size_t m1 = std::size_t{1} << s1, m2 = std::size_t{1} << s2;
    std::vector<Amplitude> out(state.dimension());
    for (std::size_t base = 0; base < state.dimension(); ++base) {
        if (base & (m1 | m2)) continue;
        const std::array<std::size_t, 4> idx{base, base | m2, base | m1, base | m1 | m2};
        Amplitude overlap = 0;
        for (int k = 0; k < 4; ++k) overlap += comp[k] * state.amplitude(idx[k]);
        for (int k = 0; k < 4; ++k) out[idx[k]] = comp[k] * overlap;
    }
    return out;
}

}  // namespace detail

inline std::array<double, 4> bell_probabilities(const StateVector& state, SiteIndex s1, SiteIndex s2) {
    detail::check_pair(state, s1, s2);
    std::array<double, 4> p{};
    for (auto b : kAllBellIndices) p[static_cast<int>(b)] = detail::norm_squared(detail::project_bell(state, s1, s2, b));
    return p;
}

inline Projection project_bell_outcome(const StateVector& state, SiteIndex s1, SiteIndex s2, BellIndex b) {
    detail::check_pair(state, s1, s2);
    auto v = detail::project_bell(state, s1, s2, b);
    double p = detail::norm_squared(v);
    if (p < kImpossibleBranch) return {p, std::nullopt};
    return {p, StateVector::normalized(std::move(v))};
}

struct BellMeasurement {
    BellIndex outcome;
    StateVector collapsed;
};

inline BellMeasurement bell_measure(const StateVector& state, SiteIndex s1, SiteIndex s2, RandomSource& rnd) {
    auto probs = bell_probabilities(state, s1, s2);
    auto b = static_cast<BellIndex>(detail::sample_branch<4>(probs, rnd));
    auto proj = project_bell_outcome(state, s1, s2, b);
    if (!proj.collapsed) throw InternalError("selected an impossible Bell branch");
    return {b, std::move(*proj.collapsed)};
}

// ---------------------------------------------------------------------------
// Distributions and reduced states

/// Outcome tuple (in the order of the requested axes) -> Born probability.
using JointDistribution = std::map<std::vector<Sign>, double>;

/// Exact joint distribution of single-site Pauli measurements on distinct sites.
inline JointDistribution joint_distribution(const StateVector& state, std::span<const PauliFactor> axes) {
    for (std::size_t i = 0; i < axes.size(); ++i) {
        state.check_site(axes[i].site);
        for (std::size_t j = 0; j < i; ++j) {
            if (axes[i].site == axes[j].site) throw InvalidInput("joint distribution sites must be distinct");
        }
    }
    std::vector<ProductObservable> obs;
    obs.reserve(axes.size());
    for (const auto& f : axes) obs.push_back(ProductObservable::single(f.site, f.axis));

    JointDistribution dist;
    std::size_t k = axes.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        std::vector<Sign> tuple(k);
        std::vector<Amplitude> v(state.amplitudes().begin(), state.amplitudes().end());
        for (std::size_t i = 0; i < k; ++i) {
            tuple[i] = sign_from_bit(static_cast<unsigned>((mask >> (k - 1 - i)) & 1));
            v = detail::project(obs[i], tuple[i], v);
        }
        dist[tuple] = detail::norm_squared(v);
    }
    return dist;
}

inline JointDistribution joint_distribution(const StateVector& state, std::initializer_list<PauliFactor> axes) {
    return joint_distribution(state, std::span<const PauliFactor>(axes.begin(), axes.size()));
}

/// Marginal of one entry of a joint distribution.
inline BranchProbabilities marginal(const JointDistribution& dist, std::size_t position) {
    BranchProbabilities m;
    for (const auto& [tuple, p] : dist) (tuple.at(position) == Sign::Plus ? m.plus : m.minus) += p;
    return m;
}

/// Density matrix over a subset of sites. Row/column bit t refers to the
/// t-th site of the subset.
class DensityMatrix {
   public:
    explicit DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
        if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
            throw InvalidInput("density matrix must be square and non-empty");
        }
    }

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    Amplitude operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }

    bool is_hermitian() const { return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= kExactTol; }
    bool has_unit_trace() const { return std::abs(entries_.trace() - Amplitude(1.0)) <= kExactTol; }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().minCoeff();
    }
    bool is_valid() const { return is_hermitian() && has_unit_trace() && min_eigenvalue() >= -kOperatorTol; }

    double max_abs_difference(const DensityMatrix& other) const {
        if (other.dim() != dim()) throw InvalidInput("density matrix dimension mismatch");
        return (entries_ - other.entries_).cwiseAbs().maxCoeff();
    }

   private:
    Eigen::MatrixXcd entries_;
};

/// Partial trace over every site not listed.
inline DensityMatrix reduced_density(const StateVector& state, std::span<const SiteIndex> sites) {
    std::size_t keep_mask = 0;
    for (auto s : sites) {
        state.check_site(s);
        if (keep_mask & (std::size_t{1} << s)) throw InvalidInput("reduced density sites must be distinct");
        keep_mask |= std::size_t{1} << s;
    }
    std::size_t k = sites.size();
    std::size_t dim = std::size_t{1} << k;
    std::vector<std::size_t> offset(dim, 0);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t t = 0; t < k; ++t) offset[r] |= ((r >> t) & 1) << sites[t];
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t rest = 0; rest < state.dimension(); ++rest) {
        if (rest & keep_mask) continue;
        for (std::size_t r = 0; r < dim; ++r) {
            Amplitude ar = state.amplitude(rest | offset[r]);
            if (ar == Amplitude(0)) continue;
            for (std::size_t c = 0; c < dim; ++c) {
                rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
                    ar * std::conj(state.amplitude(rest | offset[c]));
            }
        }
    }
    DensityMatrix out(std::move(rho));
    if (!out.is_valid()) throw InternalError("reduced density matrix violates its invariants");
    return out;
}

inline DensityMatrix reduced_density(const StateVector& state, std::initializer_list<SiteIndex> sites) {
    return reduced_density(state, std::span<const SiteIndex>(sites.begin(), sites.size()));
}

/// Debug dump, one "bitstring re im" line per basis state. Bitstrings list
/// site 0 first ('0' = up, '1' = down); numbers use 15 significant digits.
inline std::string dump(const StateVector& state) {
    std::ostringstream out;
    out << std::setprecision(15);
    for (std::size_t b = 0; b < state.dimension(); ++b) {
        for (std::size_t s = 0; s < state.num_sites(); ++s) out << (((b >> s) & 1) ? '1' : '0');
        out << ' ' << state.amplitude(b).real() << ' ' << state.amplitude(b).imag() << '\n';
    }
    return out.str();
}

}  // namespace ghz
