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

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nbkp/rational.hpp"

namespace nbkp {

/**
 * Sparse monomial in the odd higher times. Keys are odd integers; positive
 * keys are the t family, negative keys address a second (bar) family used by
 * the bilinear series. deg t_k = |k|.
 */
using Monomial = std::vector<std::pair<int, int>>;  // (variable key, exponent>0), sorted by key

inline long monomial_degree(const Monomial& m) {
    long d = 0;
    for (auto& [k, e] : m) d += static_cast<long>(k < 0 ? -k : k) * e;
    return d;
}

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    return out;
}

/**
 * Polynomial in the odd times with a hard degree cap: monomials of total
 * degree above the cap are dropped by every operation. Coefficients are an
 * exact ring (Rational) or floats at the evaluation boundary.
 *
 * The type also works as a scalar for the generic Pfaffian/determinant
 * kernels, so GradedPoly(int) constructs a constant value. Constants are
 * cap-agnostic: binary operations adopt the cap of the non-constant operand
 * and reject genuinely different caps. Equality compares coefficient data,
 * not caps.
 */
template <typename C>
class GradedPoly {
  public:
    GradedPoly() : cap_(0) {}

    GradedPoly(int value) : cap_(0) {  // NOLINT: implicit by design (ring scalar)
        if (value != 0) terms_[{}] = C(value);
    }

    static GradedPoly zero(int cap) {
        GradedPoly p;
        p.cap_ = check_cap(cap);
        return p;
    }

    static GradedPoly constant(const C& c, int cap) {
        GradedPoly p;
        p.cap_ = check_cap(cap);
        if (!(c == C(0))) p.terms_[{}] = c;
        return p;
    }

    static GradedPoly one(int cap) { return constant(C(1), cap); }

    /// t_key (key odd, possibly negative for the bar family).
    static GradedPoly variable(int key, int cap) {
        if (key == 0 || (key % 2) == 0) throw std::invalid_argument("time variables have odd index");
        GradedPoly p;
        p.cap_ = check_cap(cap);
        if (std::abs(key) <= cap) p.terms_[{{key, 1}}] = C(1);
        return p;
    }

    int degree_cap() const { return cap_; }
    const std::map<Monomial, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }

    C coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? C(0) : it->second;
    }
    C constant_term() const { return coeff({}); }

    void add_term(const Monomial& m, const C& c) {
        if (monomial_degree(m) > cap_) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!(c == C(0))) terms_[m] = c;
        } else {
            it->second += c;
            if (it->second == C(0)) terms_.erase(it);
        }
    }

    GradedPoly with_cap(int new_cap) const {
        GradedPoly out = zero(new_cap);
        for (auto& [m, c] : terms_)
            if (monomial_degree(m) <= new_cap) out.terms_[m] = c;
        return out;
    }

    GradedPoly& operator+=(const GradedPoly& o) {
        int cap = resolve_cap(*this, o);
        if (cap != cap_) *this = with_cap(cap);
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    GradedPoly& operator-=(const GradedPoly& o) {
        int cap = resolve_cap(*this, o);
        if (cap != cap_) *this = with_cap(cap);
        for (auto& [m, c] : o.terms_) add_term(m, C(0) - c);
        return *this;
    }
    friend GradedPoly operator+(GradedPoly a, const GradedPoly& b) { return a += b; }
    friend GradedPoly operator-(GradedPoly a, const GradedPoly& b) { return a -= b; }

    GradedPoly operator-() const {
        GradedPoly out = zero(cap_);
        for (auto& [m, c] : terms_) out.terms_[m] = C(0) - c;
        return out;
    }

    friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b) {
        GradedPoly out = zero(resolve_cap(a, b));
        for (auto& [ma, ca] : a.terms_) {
            long da = monomial_degree(ma);
            for (auto& [mb, cb] : b.terms_) {
                if (da + monomial_degree(mb) > out.cap_) continue;
                out.add_term(monomial_mul(ma, mb), ca * cb);
            }
        }
        return out;
    }
    GradedPoly& operator*=(const GradedPoly& o) { return *this = *this * o; }

    GradedPoly& operator*=(const C& s) {
        if (s == C(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend GradedPoly operator*(GradedPoly p, const C& s) { return p *= s; }
    friend GradedPoly operator*(const C& s, GradedPoly p) { return p *= s; }

    /// Coefficient-data equality; the cap does not participate.
    bool operator==(const GradedPoly& o) const { return terms_ == o.terms_; }

    /// d^order/d(t_key)^order, exact.
    GradedPoly derivative(int key, int order = 1) const {
        if (order == 0) return *this;
        GradedPoly out = zero(cap_);
        for (auto& [m, c] : terms_) {
            int e = 0;
            for (auto& [k, ee] : m)
                if (k == key) e = ee;
            if (e < order) continue;
            C factor = c;
            for (int i = 0; i < order; ++i) factor *= C(e - i);
            Monomial reduced;
            for (auto& [k, ee] : m) {
                if (k == key) {
                    if (ee > order) reduced.emplace_back(k, ee - order);
                } else {
                    reduced.emplace_back(k, ee);
                }
            }
            out.add_term(reduced, factor);
        }
        return out;
    }

    /// Evaluate with an assignment covering every variable that occurs.
    template <typename V>
    V eval(const std::map<int, V>& assign) const {
        V acc(0);
        for (auto& [m, c] : terms_) {
            V term = convert_coeff<V>(c);
            for (auto& [k, e] : m) {
                auto it = assign.find(k);
                if (it == assign.end())
                    throw std::invalid_argument("eval: missing assignment for t_" + std::to_string(k));
                for (int i = 0; i < e; ++i) term *= it->second;
            }
            acc += term;
        }
        return acc;
    }

    /// Coefficient-wise conversion (Rational -> double etc.).
    template <typename D>
    GradedPoly<D> convert() const {
        GradedPoly<D> out = GradedPoly<D>::zero(cap_);
        for (auto& [m, c] : terms_) out.add_term(m, convert_coeff<D>(c));
        return out;
    }

    /// Remaps every variable key (used to move a polynomial into the bar family).
    GradedPoly remap_keys(int multiplier) const {
        GradedPoly out = zero(cap_);
        for (auto& [m, c] : terms_) {
            Monomial mm = m;
            for (auto& [k, e] : mm) k *= multiplier;
            std::sort(mm.begin(), mm.end());
            out.add_term(mm, c);
        }
        return out;
    }

  private:
    static int check_cap(int cap) {
        if (cap < 0) throw std::invalid_argument("degree cap must be >= 0");
        return cap;
    }

    /// Constants inherit the cap of the other operand; distinct caps between
    /// non-constant polynomials are an error.
    static int resolve_cap(const GradedPoly& a, const GradedPoly& b) {
        if (a.cap_ == b.cap_) return a.cap_;
        if (a.is_constant() && b.is_constant()) return std::max(a.cap_, b.cap_);
        if (a.is_constant()) return b.cap_;
        if (b.is_constant()) return a.cap_;
        throw std::invalid_argument("degree cap mismatch");
    }

    template <typename V>
    static V convert_coeff(const C& c) {
        if constexpr (std::is_same_v<C, Rational> && std::is_same_v<V, double>) {
            return to_double(c);
        } else if constexpr (std::is_same_v<C, Rational> && std::is_same_v<V, Complex>) {
            return Complex(to_double(c), 0.0);
        } else {
            return V(c);
        }
    }

    int cap_;
    std::map<Monomial, C> terms_;
};

using Poly = GradedPoly<Rational>;

/// exp(p) truncated at the cap; p must have zero constant term.
template <typename C>
GradedPoly<C> poly_exp(const GradedPoly<C>& p) {
    if (!(p.constant_term() == C(0)))
        throw std::invalid_argument("poly_exp requires zero constant term");
    GradedPoly<C> acc = GradedPoly<C>::one(p.degree_cap());
    GradedPoly<C> power = acc;
    C kfact(1);
    for (int k = 1; k <= p.degree_cap(); ++k) {
        power = power * p;
        if (power.is_zero()) break;
        kfact *= C(k);
        acc += power * (C(1) / kfact);
    }
    return acc;
}

namespace detail {
inline Rational binom(int n, int k) {
    Rational acc(1);
    for (int i = 0; i < k; ++i) acc *= Rational(n - i) / Rational(i + 1);
    return acc;
}
}  // namespace detail

/**
 * Hirota bilinear derivative D^orders f.g, computed exactly from
 *   D^a f.g = sum_{b <= a} prod_k C(a_k, b_k) (-1)^{|a-b|} (d^b f)(d^{a-b} g).
 * Orders whose total degree exceeds the cap give the zero polynomial.
 */
template <typename C>
GradedPoly<C> hirota_D(const GradedPoly<C>& f, const GradedPoly<C>& g,
                       const std::map<int, int>& orders) {
    if (f.degree_cap() != g.degree_cap()) throw std::invalid_argument("degree cap mismatch");
    long total_deg = 0;
    for (auto& [k, a] : orders) total_deg += static_cast<long>(std::abs(k)) * a;
    GradedPoly<C> out = GradedPoly<C>::zero(f.degree_cap());
    if (total_deg > f.degree_cap()) return out;  // truncation: exact zero

    std::vector<std::pair<int, int>> ord(orders.begin(), orders.end());
    // iterate over all sub-multi-indices b <= a
    std::vector<int> b(ord.size(), 0);
    while (true) {
        GradedPoly<C> df = f, dg = g;
        Rational mult(1);
        int rem = 0;
        for (std::size_t i = 0; i < ord.size(); ++i) {
            df = df.derivative(ord[i].first, b[i]);
            dg = dg.derivative(ord[i].first, ord[i].second - b[i]);
            mult *= detail::binom(ord[i].second, b[i]);
            rem += ord[i].second - b[i];
        }
        C coeff = (rem % 2 == 0) ? C(1) : C(-1);
        if constexpr (std::is_same_v<C, Rational>) {
            coeff *= mult;
        } else {
            coeff *= C(to_double(mult));
        }
        out += (df * dg) * coeff;
        // odometer
        std::size_t i = 0;
        for (; i < ord.size(); ++i) {
            if (b[i] < ord[i].second) {
                ++b[i];
                break;
            }
            b[i] = 0;
        }
        if (i == ord.size()) break;
    }
    return out;
}

}  // namespace nbkp
