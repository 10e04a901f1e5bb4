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

#include <random>

#include "nbkp/pfaffian.hpp"

using namespace nbkp;

namespace {

SkewMatrix<Rational> random_skew(std::mt19937& rng, int n) {
    SkewMatrix<Rational> m(n);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.set_upper(i, j, Rational(num(rng), den(rng)));
    return m;
}

std::vector<std::vector<Rational>> full(const SkewMatrix<Rational>& m) {
    int n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m.get(i, j);
    return a;
}

}  // namespace

TEST_CASE("pfaffian basics") {
    SkewMatrix<Rational> m2(2);
    m2.set_upper(0, 1, Rational(7, 3));
    CHECK(pfaffian_exact(m2) == Rational(7, 3));

    SkewMatrix<Rational> ones(4);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) ones.set_upper(i, j, Rational(1));
    CHECK(pfaffian_exact(ones) == Rational(1));  // 1*1 - 1*1 + 1*1

    SkewMatrix<Rational> odd(3);
    CHECK_THROWS_AS(pfaffian_eliminate(odd), std::invalid_argument);
    CHECK_THROWS_AS(pfaffian_expand(odd), std::invalid_argument);

    SkewMatrix<Rational> empty(0);
    CHECK(pfaffian_exact(empty) == Rational(1));
}

TEST_CASE("pfaffian of the delta-star kernel") {
    std::vector<Rational> z{4, 3, 2, 1};
    SkewMatrix<Rational> m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m.set_upper(i, j, (z[i] - z[j]) / (z[i] + z[j]));
    CHECK(pfaffian_exact(m) == delta_star_values(z));

    std::mt19937 rng(101);
    for (int n : {2, 4, 6, 8}) {
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < n) chosen.insert(1 + static_cast<int>(rng() % 40));
        std::vector<Rational> zz(chosen.rbegin(), chosen.rend());
        SkewMatrix<Rational> k(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) k.set_upper(i, j, (zz[i] - zz[j]) / (zz[i] + zz[j]));
        CHECK(pfaffian_exact(k) == delta_star_values(zz));
    }
}

TEST_CASE("pfaffian squared equals determinant (exact)") {
    std::mt19937 rng(17);
    for (int n : {2, 4, 6, 8, 10}) {
        auto m = random_skew(rng, n);
        Rational pf = pfaffian_exact(m);
        CHECK(pf * pf == det_exact(full(m)));
    }
}

TEST_CASE("elimination, expansion and matching sum agree") {
    std::mt19937 rng(23);
    for (int n : {2, 4, 6, 8}) {
        auto m = random_skew(rng, n);
        Rational a = pfaffian_eliminate(m);
        CHECK(a == pfaffian_expand(m));
        CHECK(a == pfaffian_matchings(m));
    }
}

TEST_CASE("row/column scaling and permutation covariance") {
    std::mt19937 rng(29);
    auto m = random_skew(rng, 6);
    Rational pf = pfaffian_exact(m);

    // scaling row i and column i by lambda scales Pf by lambda
    Rational lambda(3, 2);
    SkewMatrix<Rational> scaled(6);
    int target = 2;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) {
            Rational v = m.get(i, j);
            if (i == target || j == target) v *= lambda;
            scaled.set_upper(i, j, v);
        }
    CHECK(pfaffian_exact(scaled) == lambda * pf);

    // simultaneous row/column permutation multiplies by the permutation sign
    std::vector<int> perm{1, 0, 2, 3, 4, 5};  // one transposition: sign -1
    SkewMatrix<Rational> permuted(6);
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) permuted.set_upper(i, j, m.get(perm[i], perm[j]));
    CHECK(pfaffian_exact(permuted) == -pf);
}

TEST_CASE("pfaffian_float against exact and determinant") {
    std::mt19937 rng(31);
    auto m = random_skew(rng, 8);
    SkewMatrix<double> mf(8);
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) mf.set_upper(i, j, to_double(m.get(i, j)));
    double exact = to_double(pfaffian_exact(m));
    CHECK(pfaffian_float(mf) == Catch::Approx(exact).epsilon(1e-12));

    SkewMatrix<double> m2(2);
    m2.set_upper(0, 1, 2.5);
    CHECK(pfaffian_float(m2) == Catch::Approx(2.5));

    // NaN rejected
    SkewMatrix<double> bad(2);
    bad.set_upper(0, 1, std::nan(""));
    CHECK_THROWS_AS(pfaffian_float(bad), std::invalid_argument);
}

TEST_CASE("pfaffian_float squared tracks determinant at n = 50") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int n = 50;
    SkewMatrix<double> m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.set_upper(i, j, u(rng));
    double pf = pfaffian_float(m);
    // LU determinant as the independent oracle
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m.get(i, j);
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::fabs(a[i][col]) > std::fabs(a[piv][col])) piv = i;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int i = col + 1; i < n; ++i) {
            double f = a[i][col] / a[col][col];
            for (int j = col; j < n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    CHECK(pf * pf == Catch::Approx(det).epsilon(1e-10));
}

TEST_CASE("complex pfaffian") {
    SkewMatrix<Complex> m(4);
    m.set_upper(0, 1, Complex(1, 1));
    m.set_upper(0, 2, Complex(0, 2));
    m.set_upper(0, 3, Complex(-1, 0.5));
    m.set_upper(1, 2, Complex(2, -1));
    m.set_upper(1, 3, Complex(0.5, 0));
    m.set_upper(2, 3, Complex(1, 3));
    // 3-term expansion oracle
    Complex expected = m.get(0, 1) * m.get(2, 3) - m.get(0, 2) * m.get(1, 3) +
                       m.get(0, 3) * m.get(1, 2);
    Complex got = pfaffian_float(m);
    CHECK(std::abs(got - expected) < 1e-13);
}

TEST_CASE("sign lemma on the real line") {
    auto r1 = sgn_pfaffian_check_real({3.0, 1.0});
    CHECK(r1.ok);
    CHECK(r1.pfaffian_sign == 1);

    auto r2 = sgn_pfaffian_check_real({1.0, 3.0});
    CHECK(r2.ok);
    CHECK(r2.pfaffian_sign == -1);

    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(0.05, 10.0);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 2 + static_cast<int>(rng() % 5);
        std::vector<double> z;
        for (int i = 0; i < n; ++i) z.push_back(u(rng));
        CHECK(sgn_pfaffian_check_real(z).ok);
    }

    CHECK_THROWS_AS(sgn_pfaffian_check_real({1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("sign lemma on the circle") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> u(0.01, 3.13);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 2 + static_cast<int>(rng() % 4);
        std::vector<double> phi;
        for (int i = 0; i < n; ++i) phi.push_back(u(rng));
        auto rep_result = sgn_pfaffian_check_circle(phi);
        CHECK(rep_result.ok);
        CHECK(rep_result.imag_residual <= 1e-12);
    }
}
