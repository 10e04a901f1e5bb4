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

#include "nbkp/polyring.hpp"

using namespace nbkp;

namespace {

Poly t(int k, int cap) { return Poly::variable(k, cap); }

Poly random_poly(std::mt19937& rng, int cap, bool zero_constant = false) {
    Poly p = Poly::zero(cap);
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::vector<int> keys{1, 3, 5};
    for (int terms = 0; terms < 6; ++terms) {
        Monomial m;
        long deg = 0;
        for (int k : keys) {
            int e = static_cast<int>(rng() % 3);
            if (e > 0 && deg + static_cast<long>(k) * e <= cap) {
                m.emplace_back(k, e);
                deg += static_cast<long>(k) * e;
            }
        }
        if (zero_constant && m.empty()) continue;
        int c = coeff(rng);
        if (c != 0) p.add_term(m, Rational(c));
    }
    return p;
}

}  // namespace

TEST_CASE("multiplication with truncation") {
    Poly t1 = t(1, 3);
    CHECK((t1 * t1).coeff({{1, 2}}) == Rational(1));

    Poly one = Poly::one(2);
    Poly a = one + t(1, 2);
    Poly b = one - t(1, 2);
    Poly prod = a * b;
    CHECK(prod.coeff({}) == Rational(1));
    CHECK(prod.coeff({{1, 2}}) == Rational(-1));
    CHECK(prod.coeff({{1, 1}}) == Rational(0));

    // degree 5 > cap 4 truncates to zero
    Poly p = t(1, 4) * t(1, 4) * t(3, 4);
    CHECK(p.is_zero());

    CHECK_THROWS_AS(t(1, 3) * t(1, 4), std::invalid_argument);
}

TEST_CASE("poly_exp basics") {
    Poly e1 = poly_exp(t(1, 3));
    CHECK(e1.coeff({}) == Rational(1));
    CHECK(e1.coeff({{1, 1}}) == Rational(1));
    CHECK(e1.coeff({{1, 2}}) == Rational(1, 2));
    CHECK(e1.coeff({{1, 3}}) == Rational(1, 6));

    CHECK(poly_exp(Poly::zero(4)) == Poly::one(4));

    Poly e3 = poly_exp(t(3, 6));
    CHECK(e3.coeff({}) == Rational(1));
    CHECK(e3.coeff({{3, 1}}) == Rational(1));
    CHECK(e3.coeff({{3, 2}}) == Rational(1, 2));

    CHECK_THROWS_AS(poly_exp(Poly::one(3)), std::invalid_argument);
}

TEST_CASE("coeff and eval") {
    Poly p = Poly::one(4) + t(1, 4) * t(3, 4) * Rational(2);
    CHECK(p.coeff({{1, 1}, {3, 1}}) == Rational(2));
    CHECK(p.coeff({}) == Rational(1));

    Poly q = t(1, 3) * t(1, 3) * t(1, 3) * (Rational(1, 6)) + t(3, 3);
    std::map<int, Rational> assign{{1, Rational(1)}, {3, Rational(0)}};
    CHECK(q.eval(assign) == Rational(1, 6));

    std::map<int, Rational> missing{{1, Rational(1)}};
    CHECK_THROWS_AS(q.eval(missing), std::invalid_argument);

    std::map<int, double> fl{{1, 0.5}, {3, 2.0}};
    CHECK(q.eval(fl) == Catch::Approx(0.125 / 6.0 + 2.0));
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 30; ++rep) {
        int cap = 4 + static_cast<int>(rng() % 7);
        Poly a = random_poly(rng, cap), b = random_poly(rng, cap), c = random_poly(rng, cap);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (b + c) == (a + b) + c);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("poly_exp is a homomorphism") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 15; ++rep) {
        int cap = 4 + static_cast<int>(rng() % 5);
        Poly p = random_poly(rng, cap, true), q = random_poly(rng, cap, true);
        CHECK(poly_exp(p + q) == poly_exp(p) * poly_exp(q));
    }
}

TEST_CASE("hirota examples") {
    Poly one = Poly::one(6);
    CHECK(hirota_D(one, one, {{1, 2}}).is_zero());

    Poly f = t(1, 6);
    Poly d = hirota_D(f, one, {{1, 1}});
    CHECK(d.coeff({}) == Rational(1));
    CHECK(d.terms().size() == 1);

    // f = 1 + t1^2: D1^2 (f.f) = 2(f f'' - f'^2) = 4 - 4 t1^2
    Poly g = one + t(1, 6) * t(1, 6);
    Poly r = hirota_D(g, g, {{1, 2}});
    CHECK(r.coeff({}) == Rational(4));
    CHECK(r.coeff({{1, 2}}) == Rational(-4));
}

TEST_CASE("hirota symmetry and bilinearity") {
    std::mt19937 rng(13);
    for (int rep = 0; rep < 15; ++rep) {
        int cap = 6 + static_cast<int>(rng() % 4);
        Poly f = random_poly(rng, cap), g = random_poly(rng, cap), h = random_poly(rng, cap);
        std::map<int, int> ord{{1, static_cast<int>(rng() % 3)}, {3, static_cast<int>(rng() % 2)}};
        int total = ord[1] + ord[3];
        Poly fg = hirota_D(f, g, ord);
        Poly gf = hirota_D(g, f, ord);
        CHECK(fg == (total % 2 == 0 ? gf : -gf));
        CHECK(hirota_D(f + h, g, ord) == hirota_D(f, g, ord) + hirota_D(h, g, ord));
    }
}

TEST_CASE("hirota order exceeding cap is exact zero") {
    Poly f = t(1, 4) + Poly::one(4);
    CHECK(hirota_D(f, f, {{1, 5}}).is_zero());
    CHECK(hirota_D(f, f, {{5, 1}}).is_zero());
}

TEST_CASE("key remapping to the bar family") {
    Poly p = t(1, 5) * t(3, 5) + t(1, 5);
    Poly barred = p.remap_keys(-1);
    CHECK(barred.coeff({{-3, 1}, {-1, 1}}) == Rational(1));
    CHECK(barred.coeff({{-1, 1}}) == Rational(1));
    CHECK(monomial_degree({{-3, 1}, {-1, 1}}) == 4);
}
