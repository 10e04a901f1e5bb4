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
#include <complex>
#include <stdexcept>
#include <vector>

#include "nbkp/partitions.hpp"
#include "nbkp/rational.hpp"

namespace nbkp {

/**
 * Square antisymmetric matrix storing only the strict upper triangle, so the
 * skew symmetry M_ji = -M_ij and the zero diagonal hold structurally.
 */
template <typename T>
class SkewMatrix {
  public:
    explicit SkewMatrix(int n) : n_(n), upper_(static_cast<std::size_t>(n) * (n - 1) / 2, T(0)) {
        if (n < 0) throw std::invalid_argument("negative dimension");
    }

    int size() const { return n_; }

    T get(int i, int j) const {
        check(i), check(j);
        if (i == j) return T(0);
        if (i < j) return upper_[index(i, j)];
        return T(0) - upper_[index(j, i)];
    }

    void set_upper(int i, int j, const T& v) {
        check(i), check(j);
        if (i >= j) throw std::invalid_argument("set_upper requires i < j");
        upper_[index(i, j)] = v;
    }

    /// Submatrix with rows/columns `drop1` and `drop2` removed.
    SkewMatrix minor2(int drop1, int drop2) const {
        SkewMatrix out(n_ - 2);
        std::vector<int> keep;
        keep.reserve(n_ - 2);
        for (int k = 0; k < n_; ++k)
            if (k != drop1 && k != drop2) keep.push_back(k);
        for (int a = 0; a < n_ - 2; ++a)
            for (int b = a + 1; b < n_ - 2; ++b) out.set_upper(a, b, get(keep[a], keep[b]));
        return out;
    }

  private:
    void check(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("skew matrix index");
    }
    std::size_t index(int i, int j) const {
        // strict upper triangle, row major
        return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i + 1) / 2 +
               (j - i - 1);
    }

    int n_;
    std::vector<T> upper_;
};

/// Laplace-type expansion along the first row. Works over any commutative
/// ring (no division), so this is the path for polynomial-valued matrices.
template <typename T>
T pfaffian_expand(const SkewMatrix<T>& m) {
    int n = m.size();
    if (n % 2 != 0) throw std::invalid_argument("Pfaffian requires even dimension");
    if (n == 0) return T(1);
    if (n == 2) return m.get(0, 1);
    T acc(0);
    for (int j = 1; j < n; ++j) {
        T term = m.get(0, j) * pfaffian_expand(m.minor2(0, j));
        if (j % 2 == 1)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

/// Brute-force sum over perfect matchings; self-check oracle for small n.
template <typename T>
T pfaffian_matchings(const SkewMatrix<T>& m) {
    int n = m.size();
    if (n % 2 != 0) throw std::invalid_argument("Pfaffian requires even dimension");
    if (n > 12) throw std::invalid_argument("matching sum limited to n <= 12");
    std::vector<int> order;
    T acc(0);
    // recursively match the lowest unmatched index against every partner
    auto rec = [&](auto&& self, unsigned used, const T& coeff, int sign) -> void {
        if (used == (1u << n) - 1) {
            acc += (sign > 0) ? coeff : T(0) - coeff;
            return;
        }
        int i = 0;
        while (used & (1u << i)) ++i;
        int skipped = 0;
        for (int j = i + 1; j < n; ++j) {
            if (used & (1u << j)) continue;
            // crossing sign: pairing (i, j) past `skipped` unmatched indices
            self(self, used | (1u << i) | (1u << j), coeff * m.get(i, j),
                 (skipped % 2 == 0) ? sign : -sign);
            ++skipped;
        }
    };
    rec(rec, 0u, T(1), +1);
    return acc;
}

/// Parlett-Reid tridiagonalization with partial pivoting over an exact field.
/// See https://arxiv.org/abs/1102.3440 for the float version of the scheme.
template <typename T>
T pfaffian_eliminate(SkewMatrix<T> m) {
    int n = m.size();
    if (n % 2 != 0) throw std::invalid_argument("Pfaffian requires even dimension");
    if (n == 0) return T(1);
    // dense working copy
    std::vector<std::vector<T>> a(n, std::vector<T>(n, T(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m.get(i, j);
    T result(1);
    for (int k = 0; k + 1 < n; k += 2) {
        int piv = -1;
        for (int i = k + 1; i < n; ++i)
            if (!(a[k][i] == T(0))) {
                piv = i;
                break;
            }
        if (piv < 0) return T(0);
        if (piv != k + 1) {
            std::swap(a[piv], a[k + 1]);
            for (int i = 0; i < n; ++i) std::swap(a[i][piv], a[i][k + 1]);
            result = T(0) - result;
        }
        T pivot = a[k][k + 1];
        result *= pivot;
        for (int i = k + 2; i < n; ++i) {
            T tau = a[k][i] / pivot;
            for (int j = k + 2; j < n; ++j)
                a[i][j] += tau * a[j][k + 1] - (a[k][j] / pivot) * a[i][k + 1];
        }
    }
    return result;
}

/// Exact Pfaffian. Uses division wherever the scalar supports it and falls
/// back to the ring expansion otherwise.
template <typename T>
T pfaffian_exact(const SkewMatrix<T>& m) {
    if constexpr (std::is_same_v<T, Rational>) {
        return pfaffian_eliminate(m);
    } else {
        return pfaffian_expand(m);
    }
}

namespace detail {
inline double abs_value(double x) { return std::fabs(x); }
inline double abs_value(const Complex& x) { return std::abs(x); }
inline bool finite_value(double x) { return std::isfinite(x); }
inline bool finite_value(const Complex& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
}
}  // namespace detail

/**
 * Float/complex Pfaffian via Parlett-Reid tridiagonalization with partial
 * pivoting (Gauss congruence transforms have unit determinant, so the
 * Pfaffian is the signed product of the superdiagonal pivots).
 */
template <typename T>
T pfaffian_float(const SkewMatrix<T>& m) {
    static_assert(std::is_same_v<T, double> || std::is_same_v<T, Complex>);
    int n = m.size();
    if (n % 2 != 0) throw std::invalid_argument("Pfaffian requires even dimension");
    if (n == 0) return T(1);
    std::vector<std::vector<T>> a(n, std::vector<T>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            a[i][j] = m.get(i, j);
            if (!detail::finite_value(a[i][j]))
                throw std::invalid_argument("pfaffian_float: non-finite entry");
        }
    T result(1);
    double sign_flips = 1.0;
    for (int k = 0; k + 1 < n; k += 2) {
        int piv = k + 1;
        for (int i = k + 2; i < n; ++i)
            if (detail::abs_value(a[k][i]) > detail::abs_value(a[k][piv])) piv = i;
        if (piv != k + 1) {
            std::swap(a[piv], a[k + 1]);
            for (int i = 0; i < n; ++i) std::swap(a[i][piv], a[i][k + 1]);
            sign_flips = -sign_flips;
        }
        T pivot = a[k][k + 1];
        if (detail::abs_value(pivot) == 0.0) return T(0);
        result *= pivot;
        std::vector<T> tau(n, T(0));
        for (int i = k + 2; i < n; ++i) tau[i] = a[k][i] / pivot;
        for (int i = k + 2; i < n; ++i)
            for (int j = k + 2; j < n; ++j)
                a[i][j] += tau[i] * a[j][k + 1] - tau[j] * a[i][k + 1];
    }
    return result * T(sign_flips);
}

/// Exact determinant by fraction-preserving Gaussian elimination.
inline Rational det_exact(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    for (auto& row : a)
        if (row.size() != n) throw std::invalid_argument("det_exact: non-square matrix");
    Rational det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a[i][col] == 0) continue;
            Rational f = a[i][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    return det;
}

/// Report from the sign-lemma verification.
struct SgnLemmaReport {
    bool ok = false;
    int pfaffian_sign = 0;
    int delta_sign = 0;
    double imag_residual = 0.0;  // circle case only
};

namespace detail {
/// Pf[sgn(s_k - s_j)] of an ordered parameter list; odd lists are augmented
/// with a final all-ones column, matching the odd-size kernel convention.
inline int sign_pfaffian(const std::vector<double>& s) {
    int n = static_cast<int>(s.size());
    int m = (n % 2 == 0) ? n : n + 1;
    SkewMatrix<Rational> a(m);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (s[i] == s[j]) throw std::invalid_argument("coincident points");
            a.set_upper(i, j, Rational(s[i] > s[j] ? 1 : -1));
        }
    for (int i = 0; n % 2 == 1 && i < n; ++i) a.set_upper(i, m - 1, Rational(1));
    return sign_of(pfaffian_eliminate(a));
}
}  // namespace detail

/// Case A: Pf[sgn(z_k - z_j)] against sgn Delta*(z) for positive reals.
inline SgnLemmaReport sgn_pfaffian_check_real(const std::vector<double>& z) {
    SgnLemmaReport rep;
    for (double v : z)
        if (!(v > 0)) throw std::invalid_argument("case A requires positive reals");
    rep.pfaffian_sign = detail::sign_pfaffian(z);
    double d = delta_star_values(z);
    rep.delta_sign = (d > 0) - (d < 0);
    rep.ok = rep.pfaffian_sign == rep.delta_sign;
    return rep;
}

/// Case B: angles in (0, pi); the phase-corrected Delta* must be real (checked)
/// and its sign must match Pf[sgn(phi_k - phi_j)].
inline SgnLemmaReport sgn_pfaffian_check_circle(const std::vector<double>& angles,
                                                double realness_tol = 1e-12) {
    SgnLemmaReport rep;
    for (double a : angles)
        if (!(a > 0.0 && a < 3.14159265358979323846))
            throw std::invalid_argument("case B requires angles in (0, pi)");
    rep.pfaffian_sign = detail::sign_pfaffian(angles);
    std::vector<Complex> z;
    for (double a : angles) z.emplace_back(std::cos(a), std::sin(a));
    Complex d = delta_star_values(z);
    double n = static_cast<double>(angles.size());
    Complex phase = std::exp(Complex(0.0, -3.14159265358979323846 / 4.0 * (n * n - n)));
    Complex corrected = phase * d;
    rep.imag_residual = std::fabs(corrected.imag()) / std::max(1.0, std::abs(corrected));
    rep.delta_sign = corrected.real() > 0 ? 1 : (corrected.real() < 0 ? -1 : 0);
    rep.ok = rep.imag_residual <= realness_tol && rep.pfaffian_sign == rep.delta_sign;
    return rep;
}

}  // namespace nbkp
