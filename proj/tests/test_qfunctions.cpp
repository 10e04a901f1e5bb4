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

#include <catch2/catch_amalgamated.hpp>

#include "nbkp/qfunctions.hpp"

using namespace nbkp;

TEST_CASE("one-row q polynomials") {
    CHECK(q_row(0, 4) == Poly::one(4));
    CHECK(q_row(-1, 4).is_zero());

    Poly q1 = q_row(1, 4);
    CHECK(q1.coeff({{1, 1}}) == Rational(1));
    CHECK(q1.terms().size() == 1);

    Poly q3 = q_row(3, 4);
    CHECK(q3.coeff({{1, 3}}) == Rational(1, 6));
    CHECK(q3.coeff({{3, 1}}) == Rational(1));
    CHECK(q3.terms().size() == 2);
}

TEST_CASE("two-row Q functions") {
    Poly q21 = q_pair(2, 1, 4);
    CHECK(q21.coeff({{1, 3}}) == Rational(1, 6));
    CHECK(q21.coeff({{3, 1}}) == Rational(-2));
    CHECK(q21.terms().size() == 2);

    CHECK(q_pair(1, 0, 4) == q_row(1, 4));
    CHECK(q_pair(1, 2, 4) == -q_pair(2, 1, 4));
    CHECK_THROWS_AS(q_pair(2, 2, 4), std::invalid_argument);
}

TEST_CASE("q_schur basics") {
    CHECK(q_schur(StrictPartition(), 4) == Poly::one(4));
    CHECK(q_schur(StrictPartition({2, 1}), 4) == q_pair(2, 1, 4));
    // odd length pads with a zero part
    CHECK(q_schur(StrictPartition({3}), 4) == q_row(3, 4));

    // homogeneity
    for (auto& alpha : enumerate_dp(5, 3)) {
        Poly p = q_schur(alpha, 10);
        for (auto& [m, c] : p.terms()) CHECK(monomial_degree(m) == alpha.weight());
    }
}

TEST_CASE("t_inf specialization closed form") {
    CHECK(q_at_tinf(StrictPartition({2, 1})) == Rational(1, 6));
    CHECK(q_at_tinf(StrictPartition({1})) == Rational(1));
    CHECK(q_at_tinf(StrictPartition({4, 1})) == Rational(1, 40));
    CHECK(q_at_tinf(StrictPartition({3, 2, 1})) == Rational(1, 360));

    // eval(q_schur, t_inf) must agree exactly (spot check to weight 10 here;
    // the acceptance suite runs the full sweep to weight 14)
    for (auto& alpha : enumerate_dp(10, 4)) {
        if (alpha.weight() > 10) continue;
        int cap = static_cast<int>(alpha.weight());
        Poly p = q_schur(alpha, cap);
        CHECK(p.eval(tinf_assignment(cap)) == q_at_tinf(alpha));
    }
}

TEST_CASE("pfaffian expansion consistency for length four") {
    StrictPartition alpha({5, 3, 2, 1});
    const auto parts = alpha.parts();
    int cap = static_cast<int>(alpha.weight());
    SkewMatrix<Poly> m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m.set_upper(i, j, q_pair(parts[i], parts[j], cap));
    CHECK(pfaffian_expand(m) == pfaffian_matchings(m));
    CHECK(pfaffian_expand(m) == q_schur(alpha, cap));
}
