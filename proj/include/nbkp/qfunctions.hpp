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

#include <vector>

#include "nbkp/partitions.hpp"
#include "nbkp/pfaffian.hpp"
#include "nbkp/polyring.hpp"

namespace nbkp {

/**
 * One-row projective Schur polynomials q_0..q_n, defined by the generating
 * series sum_n q_n z^n = exp(sum_{k odd} t_k z^k). q_n is homogeneous of
 * degree n (degrees above the cap are dropped, so q_n = 0 when cap < n).
 */
inline std::vector<Poly> q_rows(int n_max, int degree_cap) {
    std::vector<Poly> q(static_cast<std::size_t>(n_max) + 1, Poly::zero(degree_cap));
    q[0] = Poly::one(degree_cap);
    for (int k = 1; k <= n_max; k += 2) {
        // multiply by exp(t_k z^k), tracked to order z^{n_max}
        Poly tk = Poly::variable(k, degree_cap);
        std::vector<Poly> next(q);
        Poly tk_pow = Poly::one(degree_cap);
        Rational jfact(1);
        for (int j = 1; j * k <= n_max; ++j) {
            tk_pow = tk_pow * tk;
            jfact *= j;
            if (tk_pow.is_zero()) break;
            Poly term = tk_pow * (Rational(1) / jfact);
            for (int m = j * k; m <= n_max; ++m) next[m] += q[m - j * k] * term;
        }
        q = std::move(next);
    }
    return q;
}

/// q_n = Q_{(n)}(t/2); zero polynomial for n < 0.
inline Poly q_row(int n, int degree_cap) {
    if (n < 0) return Poly::zero(degree_cap);
    return q_rows(n, degree_cap)[n];
}

/// Two-row function Q_{(a,b)}(t/2) for a > b >= 0, via the classical
/// recurrence Q_{(a,b)} = q_a q_b + 2 sum_{i=1..b} (-1)^i q_{a+i} q_{b-i}.
/// Q_{(a,0)} reduces to q_a.
inline Poly q_pair(int a, int b, int degree_cap) {
    if (a == b) throw std::invalid_argument("q_pair requires distinct rows");
    if (a < b) return -q_pair(b, a, degree_cap);
    if (b < 0) throw std::invalid_argument("q_pair requires b >= 0");
    auto q = q_rows(a + b, degree_cap);
    Poly acc = q[a] * q[b];
    for (int i = 1; i <= b; ++i) {
        Poly term = q[a + i] * q[b - i] * Rational(2);
        if (i % 2 == 1)
            acc -= term;
        else
            acc += term;
    }
    return acc;
}

/// Q_alpha(t/2) as the Pfaffian of the two-row matrix over the even-padded
/// part list (odd lengths take a zero part, with Q_{(a,0)} = q_a).
inline Poly q_schur(const StrictPartition& alpha, int degree_cap) {
    const auto parts = alpha.padded_even().parts();
    const int n = static_cast<int>(parts.size());
    if (n == 0) return Poly::one(degree_cap);
    if (n == 2) return q_pair(parts[0], parts[1], degree_cap);
    SkewMatrix<Poly> m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.set_upper(i, j, q_pair(parts[i], parts[j], degree_cap));
    return pfaffian_expand(m);
}

/// Closed-form value of Q_alpha(t/2) at t_inf = (1,0,0,...):
/// Delta*(alpha) prod_i 1/alpha_i!.
inline Rational q_at_tinf(const StrictPartition& alpha) {
    Rational acc = delta_star(alpha);
    for (int p : alpha.positive_parts()) acc /= factorial(p);
    return acc;
}

/// The t_inf assignment for GradedPoly::eval, covering odd keys up to cap.
inline std::map<int, Rational> tinf_assignment(int degree_cap) {
    std::map<int, Rational> a;
    for (int k = 1; k <= degree_cap; k += 2) a[k] = (k == 1) ? Rational(1) : Rational(0);
    return a;
}

}  // namespace nbkp
