/*
 * Copyright 2026 The nbkp authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nbkp/partitions.hpp"
#include "nbkp/pfaffian.hpp"
#include "nbkp/polyring.hpp"
#include "nbkp/qfunctions.hpp"

namespace nbkp {

/// Truncation window for the (infinite) partition sums.
struct Truncation {
    int max_part = 0;
    int max_length = 0;
    int degree_cap = 0;
};

enum class SeriesId { S0, S1, S2, S00, S3, S4, S5 };

inline SeriesId series_id_from_string(const std::string& s) {
    if (s == "S0" || s == "s0") return SeriesId::S0;
    if (s == "S1" || s == "s1") return SeriesId::S1;
    if (s == "S2" || s == "s2") return SeriesId::S2;
    if (s == "S00" || s == "s00") return SeriesId::S00;
    if (s == "S3" || s == "s3") return SeriesId::S3;
    if (s == "S4" || s == "s4") return SeriesId::S4;
    if (s == "S5" || s == "s5") return SeriesId::S5;
    throw std::invalid_argument("unknown series id: " + s);
}

/**
 * Weight data for the exponential coefficients e^{-U_alpha}. Stored as
 *   e^{-U_n} = w0(n) * exp(sum_{m odd} n^m tstar_m) * n!
 * where w0(n) = e^{-U_n^{(0)}} defaults to 1 and w0(n) = 0 encodes
 * U_n^{(0)} = +infinity (the term-exclusion device). Exact scalars require an
 * empty tstar; floats take the full formula.
 */
template <typename S>
struct WeightSpec {
    std::map<int, S> w0;
    std::map<int, double> tstar;

    S w0_at(int n) const {
        auto it = w0.find(n);
        return it == w0.end() ? S(1) : it->second;
    }
};

/// e^{-U_n} for one part; zero parts contribute 1 (U_0 := 0 by convention).
template <typename S>
S part_weight(int n, const WeightSpec<S>& ws) {
    if (n == 0) return S(1);
    if (n < 0) throw std::invalid_argument("negative part");
    S w = ws.w0_at(n);
    if (w == S(0)) return S(0);
    if constexpr (std::is_same_v<S, Rational>) {
        if (!ws.tstar.empty())
            throw std::invalid_argument("exact weights require an empty tstar assignment");
        return w * factorial(n);
    } else {
        double expo = 0.0;
        for (auto& [m, v] : ws.tstar) {
            if (m == 0 || m % 2 == 0) throw std::invalid_argument("tstar indices must be odd");
            expo += std::pow(static_cast<double>(n), static_cast<double>(m)) * v;
        }
        double nfact = to_double(factorial(n));
        return w * std::exp(expo) * nfact;
    }
}

/// e^{-U_alpha} = prod_i e^{-U_{alpha_i}} over all parts.
template <typename S>
S weight_factor(const StrictPartition& alpha, const WeightSpec<S>& ws) {
    S acc(1);
    for (int p : alpha.parts()) {
        acc *= part_weight(p, ws);
        if (acc == S(0)) return S(0);
    }
    return acc;
}

/// Hypergeometric-type weights with integer offsets: the net coefficient is
/// e^{-U_n} = prod_i Gamma(n+b_i) / prod_i Gamma(n+a_i), exactly rational.
inline WeightSpec<Rational> hypergeometric_weights_exact(const std::vector<int>& a,
                                                         const std::vector<int>& b, int n_max) {
    WeightSpec<Rational> ws;
    for (int n = 1; n <= n_max; ++n) {
        Rational num(1), den(1);
        for (int bi : b) {
            if (n + bi <= 0) throw std::domain_error("Gamma pole at n + b");
            num *= factorial(n + bi - 1);
        }
        for (int ai : a) {
            if (n + ai <= 0) throw std::domain_error("Gamma pole at n + a");
            den *= factorial(n + ai - 1);
        }
        ws.w0[n] = num / den / factorial(n);
    }
    return ws;
}

inline WeightSpec<double> hypergeometric_weights(const std::vector<double>& a,
                                                 const std::vector<double>& b, int n_max) {
    WeightSpec<double> ws;
    auto check_pole = [](double x) {
        if (x <= 0.0 && x == std::floor(x)) throw std::domain_error("Gamma pole");
    };
    for (int n = 1; n <= n_max; ++n) {
        double logw = 0.0;
        for (double bi : b) {
            check_pole(n + bi);
            logw += std::lgamma(n + bi);
        }
        for (double ai : a) {
            check_pole(n + ai);
            logw -= std::lgamma(n + ai);
        }
        logw -= std::lgamma(n + 1.0);
        ws.w0[n] = std::exp(logw);
    }
    return ws;
}

/**
 * The (A, a) data of the Pfaffian coefficients. Entries are stored for
 * n > m >= 1; lookups apply the antisymmetry.
 */
template <typename S>
struct PairCoefficients {
    std::map<std::pair<int, int>, S> entries;  // (n, m) with n > m
    std::map<int, S> aug;                      // a_n

    void set_A(int n, int m, const S& v) {
        if (n <= 0 || m <= 0 || n == m) throw std::invalid_argument("A indices must be distinct positives");
        if (n > m)
            entries[{n, m}] = v;
        else
            entries[{m, n}] = S(0) - v;
    }
    void set_a(int n, const S& v) {
        if (n <= 0) throw std::invalid_argument("a index must be positive");
        aug[n] = v;
    }

    S A(int n, int m) const {
        if (n == m) return S(0);
        if (n > m) {
            auto it = entries.find({n, m});
            return it == entries.end() ? S(0) : it->second;
        }
        auto it = entries.find({m, n});
        return it == entries.end() ? S(0) : S(0) - it->second;
    }
    S a(int n) const {
        auto it = aug.find(n);
        return it == aug.end() ? S(0) : it->second;
    }
};

/// Data for the determinantal coefficients D_{alpha,beta}.
template <typename S>
struct DMatrix {
    std::map<std::pair<int, int>, S> entries;  // n, m >= 1, no symmetry

    void set(int n, int m, const S& v) {
        if (n <= 0 || m <= 0) throw std::invalid_argument("D indices must be positive");
        entries[{n, m}] = v;
    }
    S at(int n, int m) const {
        auto it = entries.find({n, m});
        return it == entries.end() ? S(0) : it->second;
    }
};

/// Pfaffian coefficient A^c_alpha; odd lengths augment with the a-column.
/// Zero parts are padding and never consult the data.
template <typename S>
S a_c_coefficient(const StrictPartition& alpha, const PairCoefficients<S>& pc) {
    const auto parts = alpha.positive_parts();
    const int l = static_cast<int>(parts.size());
    if (l == 0) return S(1);
    const int n = (l % 2 == 0) ? l : l + 1;
    SkewMatrix<S> m(n);
    for (int i = 0; i < l; ++i)
        for (int j = i + 1; j < l; ++j) m.set_upper(i, j, pc.A(parts[i], parts[j]));
    if (l % 2 == 1)
        for (int i = 0; i < l; ++i) m.set_upper(i, n - 1, pc.a(parts[i]));
    return pfaffian_exact(m);
}

namespace detail {
template <typename T>
T det_field(std::vector<std::vector<T>> a) {
    const std::size_t n = a.size();
    T det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        if constexpr (std::is_same_v<T, double>) {
            for (std::size_t i = col + 1; i < n; ++i)
                if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
        } else {
            while (piv < n && a[piv][col] == T(0)) ++piv;
            if (piv == n) return T(0);
        }
        if (a[piv][col] == T(0)) return T(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = T(0) - det;
        }
        det *= a[col][col];
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a[i][col] == T(0)) continue;
            T f = a[i][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    return det;
}
}  // namespace detail

/// det(D_{alpha_i, beta_j}); empty index lists give 1.
template <typename S>
S d_coefficient(const StrictPartition& alpha, const StrictPartition& beta, const DMatrix<S>& dm) {
    const auto pa = alpha.positive_parts(), pb = beta.positive_parts();
    if (pa.size() != pb.size()) throw std::invalid_argument("d_coefficient: length mismatch");
    const std::size_t l = pa.size();
    if (l == 0) return S(1);
    std::vector<std::vector<S>> m(l, std::vector<S>(l));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) m[i][j] = dm.at(pa[i], pb[j]);
    return detail::det_field(m);
}

/// True when the degree cap cannot hold every reachable |alpha| (the sums are
/// still well defined; callers may warn).
inline bool truncation_drops_terms(const Truncation& tr) {
    long reach = 0;
    for (int p = tr.max_part, k = 0; p >= 1 && k < tr.max_length; --p, ++k) reach += p;
    return reach > tr.degree_cap;
}

namespace detail {

template <typename C>
GradedPoly<C> q_poly_as(const StrictPartition& alpha, int cap) {
    Poly p = q_schur(alpha, cap);
    if constexpr (std::is_same_v<C, Rational>)
        return p;
    else
        return p.template convert<C>();
}

/// Shared kernel: sum over an index set of coefficient times Q-product.
template <typename C>
GradedPoly<C> q_weighted_sum(const std::vector<StrictPartition>& index,
                             const std::function<GradedPoly<C>(const StrictPartition&)>& coeff,
                             int cap, bool bilinear) {
    GradedPoly<C> acc = GradedPoly<C>::zero(cap);
    for (const auto& alpha : index) {
        GradedPoly<C> c = coeff(alpha);
        if (c.is_zero()) continue;
        GradedPoly<C> term = c * q_poly_as<C>(alpha, cap);
        if (bilinear) term = term * q_poly_as<C>(alpha, cap).remap_keys(-1);
        acc += term.with_cap(cap);
    }
    return acc;
}

template <typename C, typename S>
GradedPoly<C> promote(const S& v, int cap) {
    if constexpr (std::is_same_v<S, GradedPoly<C>>) {
        return v;
    } else if constexpr (std::is_same_v<S, Rational> && std::is_same_v<C, double>) {
        return GradedPoly<C>::constant(to_double(v), cap);
    } else {
        return GradedPoly<C>::constant(C(v), cap);
    }
}

}  // namespace detail

template <typename C>
GradedPoly<C> series_s0(int L, const Truncation& tr) {
    auto index = enumerate_dp(std::min(L, tr.max_part), tr.max_length);
    std::function<GradedPoly<C>(const StrictPartition&)> one =
        [&](const StrictPartition&) { return GradedPoly<C>::one(tr.degree_cap); };
    return detail::q_weighted_sum<C>(index, one, tr.degree_cap, false);
}

template <typename C>
GradedPoly<C> series_s00(int L, const Truncation& tr) {
    auto index = enumerate_dp(std::min(L, tr.max_part), tr.max_length);
    std::function<GradedPoly<C>(const StrictPartition&)> one =
        [&](const StrictPartition&) { return GradedPoly<C>::one(tr.degree_cap); };
    return detail::q_weighted_sum<C>(index, one, tr.degree_cap, true);
}

template <typename C>
GradedPoly<C> series_s1(const WeightSpec<C>& ws, const Truncation& tr) {
    auto index = enumerate_dp(tr.max_part, tr.max_length);
    std::function<GradedPoly<C>(const StrictPartition&)> coeff =
        [&](const StrictPartition& a) {
            return GradedPoly<C>::constant(weight_factor(a, ws), tr.degree_cap);
        };
    return detail::q_weighted_sum<C>(index, coeff, tr.degree_cap, false);
}

template <typename C>
GradedPoly<C> series_s2(const WeightSpec<C>& ws, const Truncation& tr) {
    auto index = enumerate_dp(tr.max_part, tr.max_length);
    std::function<GradedPoly<C>(const StrictPartition&)> coeff =
        [&](const StrictPartition& a) {
            return GradedPoly<C>::constant(weight_factor(a, ws), tr.degree_cap);
        };
    return detail::q_weighted_sum<C>(index, coeff, tr.degree_cap, true);
}

template <typename C, typename S>
GradedPoly<C> series_s3(const PairCoefficients<S>& pc, const Truncation& tr) {
    auto index = enumerate_dp(tr.max_part, tr.max_length);
    std::function<GradedPoly<C>(const StrictPartition&)> coeff =
        [&](const StrictPartition& a) {
            return detail::promote<C, S>(a_c_coefficient(a, pc), tr.degree_cap);
        };
    return detail::q_weighted_sum<C>(index, coeff, tr.degree_cap, false);
}

/// Index set of S4: the DP^2 shapes inside the truncation window.
inline std::vector<StrictPartition> dp2_index(const Truncation& tr) {
    std::vector<StrictPartition> index;
    if (tr.max_part < 1) return {StrictPartition()};
    for (auto& shape : enumerate_dp2(tr.max_part))
        if (shape.length() <= tr.max_length) index.push_back(shape);
    return index;
}

template <typename C>
GradedPoly<C> series_s4(const WeightSpec<C>& ws, const Truncation& tr) {
    auto index = dp2_index(tr);
    std::function<GradedPoly<C>(const StrictPartition&)> coeff =
        [&](const StrictPartition& a) {
            return GradedPoly<C>::constant(weight_factor(a, ws), tr.degree_cap);
        };
    return detail::q_weighted_sum<C>(index, coeff, tr.degree_cap, false);
}

template <typename C, typename S>
GradedPoly<C> series_s5(const DMatrix<S>& dm, const Truncation& tr) {
    auto index = enumerate_dp(tr.max_part, tr.max_length);
    GradedPoly<C> acc = GradedPoly<C>::zero(tr.degree_cap);
    for (const auto& alpha : index) {
        GradedPoly<C> qa = detail::q_poly_as<C>(alpha, tr.degree_cap);
        for (const auto& beta : index) {
            if (alpha.length() != beta.length()) continue;
            S d = d_coefficient(alpha, beta, dm);
            if (d == S(0)) continue;
            GradedPoly<C> term =
                detail::promote<C, S>(d, tr.degree_cap) * qa *
                detail::q_poly_as<C>(beta, tr.degree_cap).remap_keys(-1);
            acc += term.with_cap(tr.degree_cap);
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Remark-1 specializations: (A, a) and D data making S3/S5 reproduce the
// other series. The A entries here are normalized for the Pfaffian
// coefficients (A-c); the exponent form of the fermionic representation
// carries the factor 2 instead.
// ---------------------------------------------------------------------------

template <typename C>
PairCoefficients<C> specialize_s1(const WeightSpec<C>& ws, int max_part) {
    PairCoefficients<C> pc;
    for (int n = 1; n <= max_part; ++n) {
        C wn = part_weight(n, ws);
        pc.set_a(n, wn);
        for (int m = 1; m < n; ++m) pc.set_A(n, m, wn * part_weight(m, ws));
    }
    return pc;
}

template <typename C>
PairCoefficients<C> specialize_s0(int L, int max_part) {
    // unit coefficients below the cutoff, nothing above
    PairCoefficients<C> pc;
    for (int n = 1; n <= std::min(L, max_part); ++n) {
        pc.set_a(n, C(1));
        for (int m = 1; m < n; ++m) pc.set_A(n, m, C(1));
    }
    return pc;
}

template <typename C>
PairCoefficients<GradedPoly<C>> specialize_s2(const WeightSpec<C>& ws, int max_part, int cap) {
    PairCoefficients<GradedPoly<C>> pc;
    for (int n = 1; n <= max_part; ++n) {
        C wn = part_weight(n, ws);
        pc.set_a(n, detail::q_poly_as<C>(StrictPartition({n}), cap).remap_keys(-1) * wn);
        for (int m = 1; m < n; ++m) {
            GradedPoly<C> qnm = detail::q_poly_as<C>(StrictPartition({n, m}), cap).remap_keys(-1);
            pc.set_A(n, m, qnm * (wn * part_weight(m, ws)));
        }
    }
    return pc;
}

template <typename C>
PairCoefficients<GradedPoly<C>> specialize_s00(int L, int max_part, int cap) {
    // unit coefficients e^{-U_n} = 1 below the cutoff: w0 = 1/n! cancels the
    // built-in n! of the weight formula
    WeightSpec<C> ws;
    for (int n = 1; n <= max_part; ++n)
        ws.w0[n] = (n <= L) ? scalar_cast<C>(Rational(1) / factorial(n)) : C(0);
    return specialize_s2(ws, max_part, cap);
}

template <typename C>
PairCoefficients<C> specialize_s4(int max_part) {
    PairCoefficients<C> pc;
    for (int n = 1; n + 1 <= max_part; ++n) pc.set_A(n + 1, n, C(1));
    return pc;
}

template <typename C>
DMatrix<C> specialize_s2_dmatrix(const WeightSpec<C>& ws, int max_part) {
    DMatrix<C> dm;
    for (int n = 1; n <= max_part; ++n) dm.set(n, n, part_weight(n, ws));
    return dm;
}

// ---------------------------------------------------------------------------
// Closed forms at t = t_inf
// ---------------------------------------------------------------------------

template <typename S>
S series_s1_tinf(const WeightSpec<S>& ws, const Truncation& tr) {
    S acc(0);
    for (auto& alpha : enumerate_dp(tr.max_part, tr.max_length)) {
        S w(1);
        for (int p : alpha.positive_parts()) w *= part_weight(p, ws) / scalar_cast<S>(factorial(p));
        acc += scalar_cast<S>(delta_star(alpha)) * w;
    }
    return acc;
}

template <typename S>
S series_s2_tinf(const WeightSpec<S>& ws, const Truncation& tr) {
    S acc(0);
    for (auto& alpha : enumerate_dp(tr.max_part, tr.max_length)) {
        S w(1);
        for (int p : alpha.positive_parts()) {
            S f = scalar_cast<S>(factorial(p));
            w *= part_weight(p, ws) / (f * f);
        }
        S d = scalar_cast<S>(delta_star(alpha));
        acc += d * d * w;
    }
    return acc;
}

/**
 * t_inf form of the DP^2 sum, written over the pair lower members a in DP'.
 * Per pair: e^{-U_a - U_{a+1}} / (a! (a+1)! (2a+1)); across pairs the
 * interaction is the tilde-Delta^4 form taken at the pair midpoints, i.e.
 * with pair-sum a_i + a_j + 1.
 */
template <typename S>
S series_s4_tinf(const WeightSpec<S>& ws, const Truncation& tr) {
    S acc(0);
    if (tr.max_part < 1) return S(1);
    for (auto& lowers : enumerate_dp_prime(tr.max_part - 1, tr.max_length / 2)) {
        const auto a = lowers.positive_parts();
        S term(1);
        for (int ai : a) {
            term *= part_weight(ai, ws) * part_weight(ai + 1, ws);
            term /= scalar_cast<S>(factorial(ai) * factorial(ai + 1) * Rational(2 * ai + 1));
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = i + 1; j < a.size(); ++j) {
                S d = S(a[i] - a[j]), s = S(a[i] + a[j] + 1);
                term *= d * d * (d * d - S(1)) / (s * s * (s * s - S(1)));
            }
        acc += term;
    }
    return acc;
}

template <typename S>
S series_s5_tinf(const DMatrix<S>& dm, const Truncation& tr) {
    S acc(0);
    auto index = enumerate_dp(tr.max_part, tr.max_length);
    for (auto& alpha : index)
        for (auto& beta : index) {
            if (alpha.length() != beta.length()) continue;
            S d = d_coefficient(alpha, beta, dm);
            if (d == S(0)) continue;
            S w = scalar_cast<S>(delta_star(alpha) * delta_star(beta));
            for (int p : alpha.positive_parts()) w /= scalar_cast<S>(factorial(p));
            for (int p : beta.positive_parts()) w /= scalar_cast<S>(factorial(p));
            acc += d * w;
        }
    return acc;
}

// ---------------------------------------------------------------------------
// Random partition models
// ---------------------------------------------------------------------------

enum class RandomModel { A, B, C };

struct ProbabilityTable {
    std::vector<StrictPartition> support;  // enumeration order
    std::vector<Rational> weight;          // unnormalized W_alpha
    std::vector<Rational> prob;            // W_alpha / sum, sums to 1 exactly
};

namespace detail {
inline ProbabilityTable normalize_table(std::vector<StrictPartition> support,
                                        std::vector<Rational> weight) {
    Rational total(0);
    for (std::size_t i = 0; i < weight.size(); ++i) {
        if (weight[i] < 0)
            throw std::domain_error("negative weight at alpha = " + support[i].to_string());
        total += weight[i];
    }
    if (total <= 0) throw std::domain_error("partition function is not positive");
    ProbabilityTable t;
    t.support = std::move(support);
    t.prob.reserve(weight.size());
    for (auto& w : weight) t.prob.push_back(w / total);
    t.weight = std::move(weight);
    return t;
}
}  // namespace detail

/// Exact table for model A (weights A^c_alpha Q_alpha), B (e^{-U} Q_alpha) or
/// C (e^{-U} Q_alpha(t) Q_alpha(tbar)); times are exact rational assignments.
inline ProbabilityTable model_distribution_a(const PairCoefficients<Rational>& pc,
                                             const Truncation& tr,
                                             const std::map<int, Rational>& times) {
    auto index = enumerate_dp(tr.max_part, tr.max_length);
    std::vector<Rational> w;
    for (auto& alpha : index)
        w.push_back(a_c_coefficient(alpha, pc) *
                    q_schur(alpha, tr.degree_cap).eval(times));
    return detail::normalize_table(std::move(index), std::move(w));
}

inline ProbabilityTable model_distribution_b(const WeightSpec<Rational>& ws, const Truncation& tr,
                                             const std::map<int, Rational>& times) {
    auto index = enumerate_dp(tr.max_part, tr.max_length);
    std::vector<Rational> w;
    for (auto& alpha : index)
        w.push_back(weight_factor(alpha, ws) * q_schur(alpha, tr.degree_cap).eval(times));
    return detail::normalize_table(std::move(index), std::move(w));
}

inline ProbabilityTable model_distribution_c(const WeightSpec<Rational>& ws, const Truncation& tr,
                                             const std::map<int, Rational>& times,
                                             const std::map<int, Rational>& times_bar) {
    auto index = enumerate_dp(tr.max_part, tr.max_length);
    std::vector<Rational> w;
    for (auto& alpha : index) {
        Poly q = q_schur(alpha, tr.degree_cap);
        w.push_back(weight_factor(alpha, ws) * q.eval(times) * q.eval(times_bar));
    }
    return detail::normalize_table(std::move(index), std::move(w));
}

/// Inverse-CDF sampling over the deterministic enumeration order.
inline std::vector<StrictPartition> sample_partitions(const ProbabilityTable& table,
                                                      std::uint64_t seed, int count) {
    std::vector<double> cdf;
    cdf.reserve(table.prob.size());
    Rational acc(0);
    for (auto& p : table.prob) {
        acc += p;
        cdf.push_back(to_double(acc));
    }
    if (!cdf.empty()) cdf.back() = 1.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<StrictPartition> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        double x = u(rng);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
        std::size_t idx = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
        out.push_back(table.support[idx]);
    }
    return out;
}

}  // namespace nbkp
