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

// Acceptance suite: one criterion per check, one pass/fail line per
// criterion, every tolerance pinned here in code. Exit code is the number of
// failed criteria.

#include <chrono>
#include <cstdio>
#include <random>

#include "nbkp/fermionic.hpp"
#include "nbkp/hirota.hpp"
#include "nbkp/integrals.hpp"
#include "nbkp/qfunctions.hpp"
#include "nbkp/tausums.hpp"

using namespace nbkp;

namespace {

int g_failures = 0;

struct Criterion {
    const char* name;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    explicit Criterion(const char* n) : name(n) {}
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    void finish(double time_limit_s) {
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > time_limit_s) {
            ok = false;
            if (detail.empty()) detail = "exceeded the runtime limit";
        }
        std::printf("[%s] %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", name, secs,
                    detail.empty() ? "" : "; ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

std::map<int, Rational> filled(const std::map<int, Rational>& given, int cap, bool both) {
    std::map<int, Rational> out;
    for (int k = 1; k <= cap; k += 2) {
        out[k] = Rational(0);
        if (both) out[-k] = Rational(0);
    }
    for (auto& [k, v] : given) out[k] = v;
    return out;
}

std::map<int, double> as_doubles(const std::map<int, Rational>& m) {
    std::map<int, double> out;
    for (auto& [k, v] : m) out[k] = to_double(v);
    return out;
}

Rational random_rational(std::mt19937& rng, int lo, int hi, int den_max) {
    std::uniform_int_distribution<int> num(lo, hi);
    std::uniform_int_distribution<int> den(1, den_max);
    return Rational(num(rng), den(rng));
}

// 1. Q-specialization: eval(q_schur, t_inf) = Delta* prod 1/alpha_i!, exact,
//    every strict alpha with |alpha| <= 14, < 10 s.
void criterion_1() {
    Criterion c("criterion 1: Q specialization at t_inf, |alpha| <= 14, exact");
    int checked = 0;
    for (auto& alpha : enumerate_dp(14, 14)) {
        if (alpha.weight() > 14) continue;
        int cap = std::max<long>(1, alpha.weight());
        Poly q = q_schur(alpha, static_cast<int>(cap));
        c.require(q.eval(tinf_assignment(static_cast<int>(cap))) == q_at_tinf(alpha),
                  "mismatch at alpha = " + alpha.to_string());
        ++checked;
    }
    c.require(checked == 110, "wrong enumeration count");  // sum of q(0..14)
    c.finish(10.0);
}

// 2. You's formula at 5 random rational time assignments, all alpha with
//    parts <= 4, |delta| <= 1e-10, < 60 s.
void criterion_2() {
    Criterion c("criterion 2: You formula, parts <= 4, 5 random assignments, 1e-10");
    std::mt19937 rng(20260818);
    CliffordRep rep(4, 1);
    const int cap = 10;
    for (int assignment = 0; assignment < 5; ++assignment) {
        std::map<int, Rational> t{{1, random_rational(rng, -3, 3, 4)},
                                  {3, random_rational(rng, -3, 3, 4)},
                                  {5, random_rational(rng, -3, 3, 4)}};
        auto td = as_doubles(t);
        auto full = filled(t, cap, false);
        for (auto& alpha : enumerate_dp(4, 4)) {
            std::vector<int> modes = alpha.positive_parts();
            if (modes.size() % 2) modes.push_back(0);
            Complex lhs = vev_gamma_phis(rep, td, modes);
            double rhs = std::pow(2.0, -0.5 * static_cast<double>(modes.size())) *
                         to_double(q_schur(alpha, cap).eval(full));
            c.require(std::abs(lhs - Complex(rhs)) <= 1e-10,
                      "mismatch at alpha = " + alpha.to_string());
        }
    }
    c.finish(60.0);
}

// 3. Remark-1 specializations, L <= 6, cap <= 9, random rational weights,
//    exact equality, < 30 s.
void criterion_3() {
    Criterion c("criterion 3: Remark-1 specializations at L = 6, cap = 9, exact");
    std::mt19937 rng(20260819);
    const int L = 6;
    Truncation tr{L, L, 9};
    WeightSpec<Rational> ws;
    for (int n = 1; n <= L; ++n) ws.w0[n] = abs(random_rational(rng, 1, 8, 5));

    c.require(series_s3<Rational>(specialize_s1(ws, L), tr) == series_s1<Rational>(ws, tr),
              "S3(spec) != S1");
    c.require(series_s3<Rational>(specialize_s0<Rational>(4, L), tr) ==
                  series_s0<Rational>(4, tr),
              "S3(spec) != S0");
    c.require(series_s3<Rational>(specialize_s2(ws, L, tr.degree_cap), tr) ==
                  series_s2<Rational>(ws, tr),
              "S3(spec) != S2");
    c.require(series_s3<Rational>(specialize_s00<Rational>(4, L, tr.degree_cap), tr) ==
                  series_s00<Rational>(4, tr),
              "S3(spec) != S00");
    WeightSpec<Rational> unit;
    for (int n = 1; n <= L; ++n) unit.w0[n] = Rational(1) / factorial(n);
    c.require(series_s3<Rational>(specialize_s4<Rational>(L), tr) ==
                  series_s4<Rational>(unit, tr),
              "S3(spec) != S4");
    c.require(series_s5<Rational, Rational>(specialize_s2_dmatrix(ws, L), tr) ==
                  series_s2<Rational>(ws, tr),
              "S5(diag) != S2");
    c.finish(30.0);
}

// 4. Fermionic oracle equality for S0, S1, S3, S4, S5 at L <= 4, three
//    random datasets each, |delta| <= 1e-10, < 120 s.
void criterion_4() {
    Criterion c("criterion 4: fermionic oracles = combinatorial sums, L = 4, 1e-10");
    std::mt19937 rng(20260820);
    const int L = 4;
    long maxw = 4 + 3 + 2 + 1;
    Truncation tr{L, L, static_cast<int>(maxw)};
    Truncation trb{L, L, 2 * static_cast<int>(maxw)};
    CliffordRep rep(L, 1);
    CliffordRep rep2(L, 2);

    for (int dataset = 0; dataset < 3; ++dataset) {
        std::map<int, Rational> t{{1, random_rational(rng, -2, 2, 3)},
                                  {3, random_rational(rng, -2, 2, 3)},
                                  {5, random_rational(rng, -2, 2, 3)}};
        auto td = as_doubles(t);
        auto full = filled(t, tr.degree_cap, false);

        // S0
        int cutoff = 2 + static_cast<int>(rng() % 3);
        double expect = to_double(series_s0<Rational>(cutoff, tr).eval(full));
        c.require(std::abs(oracle_s0(rep, cutoff, td) - Complex(expect)) <= 1e-10, "S0 oracle");

        // S1
        WeightSpec<Rational> ws;
        WeightSpec<double> wd;
        for (int n = 1; n <= L; ++n) {
            ws.w0[n] = abs(random_rational(rng, 1, 6, 4));
            wd.w0[n] = to_double(ws.w0[n]);
        }
        expect = to_double(series_s1<Rational>(ws, tr).eval(full));
        c.require(std::abs(oracle_s1(rep, wd, td) - Complex(expect)) <= 1e-10, "S1 oracle");

        // S3
        PairCoefficients<Rational> pr;
        PairCoefficients<double> pd;
        for (int n = 1; n <= L; ++n) {
            Rational a = random_rational(rng, -4, 4, 3);
            pr.set_a(n, a);
            pd.set_a(n, to_double(a));
            for (int m = 1; m < n; ++m) {
                Rational v = random_rational(rng, -4, 4, 3);
                pr.set_A(n, m, v);
                pd.set_A(n, m, to_double(v));
            }
        }
        expect = to_double(series_s3<Rational>(pr, tr).eval(full));
        c.require(std::abs(oracle_s3(rep, pd, td) - Complex(expect)) <= 1e-10, "S3 oracle");

        // S4
        expect = to_double(series_s4<Rational>(ws, tr).eval(full));
        c.require(std::abs(oracle_s4(rep, wd, td) - Complex(expect)) <= 1e-10, "S4 oracle");

        // S5 (two-component)
        DMatrix<Rational> dr;
        DMatrix<double> dd;
        for (int n = 1; n <= L; ++n)
            for (int m = 1; m <= L; ++m) {
                Rational v = random_rational(rng, -3, 3, 3);
                dr.set(n, m, v);
                dd.set(n, m, to_double(v));
            }
        std::map<int, Rational> t2{{1, random_rational(rng, -2, 2, 3)},
                                   {3, random_rational(rng, -2, 2, 3)}};
        auto both = filled(t, trb.degree_cap, true);
        for (auto& [k, v] : filled(t2, trb.degree_cap, false)) both[-k] = v;
        expect = to_double(series_s5<Rational, Rational>(dr, trb).eval(both));
        c.require(std::abs(oracle_s5(rep2, dd, td, as_doubles(t2)) - Complex(expect)) <= 1e-10,
                  "S5 oracle");
    }
    c.finish(120.0);
}

// 5. Hirota certification: residual exactly zero through cap-6 (cap 8) for
//    10 random S3 tau functions, and identically for every Q_alpha with
//    |alpha| <= 8.
void criterion_5() {
    Criterion c("criterion 5: BKP bilinear residual vanishes (10 random S3 taus; Q to weight 8)");
    std::mt19937 rng(20260821);
    for (int rep = 0; rep < 10; ++rep) {
        int L = 4 + static_cast<int>(rng() % 3);
        Truncation tr{L, L, 8};
        PairCoefficients<Rational> pc;
        for (int n = 1; n <= L; ++n) {
            pc.set_a(n, random_rational(rng, -5, 5, 4));
            for (int m = 1; m < n; ++m) pc.set_A(n, m, random_rational(rng, -5, 5, 4));
        }
        Poly tau = series_s3<Rational>(pc, tr);
        c.require(vanishes_through_degree(hirota_residual(tau), tr.degree_cap - 6),
                  "random S3 tau has a residual");
    }
    for (auto& alpha : enumerate_dp(8, 4)) {
        if (alpha.weight() > 8) continue;
        int cap = std::max(6, 2 * static_cast<int>(alpha.weight()));
        c.require(hirota_residual(q_schur(alpha, cap)).is_zero(),
                  "residual at alpha = " + alpha.to_string());
    }
    c.finish(60.0);
}

// 6. Pfaffian identities: Pf^2 = det exact to n = 10; the delta-star kernel;
//    the sign lemma on 200 real and 50 circle point sets.
void criterion_6() {
    Criterion c("criterion 6: Pfaffian identities and the sgn lemma");
    std::mt19937 rng(20260822);
    for (int n = 2; n <= 10; n += 2) {
        SkewMatrix<Rational> m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m.set_upper(i, j, random_rational(rng, -6, 6, 4));
        Rational pf = pfaffian_exact(m);
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[i][j] = m.get(i, j);
        c.require(pf * pf == det_exact(a), "Pf^2 != det");
    }
    for (int n : {2, 4, 6, 8}) {
        std::set<std::pair<int, int>> seen;
        std::vector<Rational> z;
        while (static_cast<int>(z.size()) < n) {
            int p = 1 + static_cast<int>(rng() % 60), q = 1 + static_cast<int>(rng() % 6);
            if (seen.insert({p, q}).second) z.push_back(Rational(p, q));
        }
        bool distinct = true;
        for (std::size_t i = 0; i < z.size(); ++i)
            for (std::size_t j = i + 1; j < z.size(); ++j)
                if (z[i] == z[j]) distinct = false;
        if (!distinct) continue;
        SkewMatrix<Rational> m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) m.set_upper(i, j, (z[i] - z[j]) / (z[i] + z[j]));
        c.require(pfaffian_exact(m) == delta_star_values(z), "delta-star kernel Pfaffian");
    }
    std::uniform_real_distribution<double> u(0.02, 10.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> z;
        for (int i = 0; i < 2 + static_cast<int>(rng() % 5); ++i) z.push_back(u(rng));
        c.require(sgn_pfaffian_check_real(z).ok, "real sgn lemma");
    }
    std::uniform_real_distribution<double> ang(0.01, 3.13);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> phi;
        for (int i = 0; i < 2 + static_cast<int>(rng() % 4); ++i) phi.push_back(ang(rng));
        auto r = sgn_pfaffian_check_circle(phi);
        c.require(r.ok && r.imag_residual <= 1e-12, "circle sgn lemma");
    }
    c.finish(60.0);
}

// 7. Z2 = Z5 with the diagonal bi-measure on a shared grid, N_max = 4,
//    mu in {0.1, 1}: relative gap <= 1e-12.
void criterion_7() {
    Criterion c("criterion 7: Z2 = Z5 (diagonal bi-measure, shared grid), 1e-12");
    BiMeasure bm;
    bm.zm.kind = ContourKind::RealPositive;
    bm.zm.density = DensityKind::BradenExp;
    bm.zm.r = 1.0;
    QuadratureSpec qs{32, 1};
    DeformationTimes dz, dy, combined;
    dz.t = {{1, 0.12}};
    dz.tbar = {{1, 0.07}};
    dy.t = {{3, -0.05}};
    dy.tbar = {{3, 0.06}};
    combined.t = {{1, 0.12}, {3, -0.05}};
    combined.tbar = {{1, 0.07}, {3, 0.06}};
    for (double mu : {0.1, 1.0}) {
        auto z2 = grand_Z(2, mu, 4, bm.zm, combined, qs);
        auto z5 = grand_Z5(mu, 4, bm, dz, dy, qs);
        c.require(std::fabs(z2.value - z5.value) <= 1e-12 * std::fabs(z2.value),
                  "gap at mu = " + std::to_string(mu));
    }
    c.finish(60.0);
}

// 8. Braden/Bessel: the n = 1 term equals K0(2r)/pi to 1e-8 at r in
//    {0.5, 1, 2}, each under a second; Cauchy-Pfaffian identity exact.
void criterion_8() {
    Criterion c("criterion 8: Braden n=1 term = K0(2r)/pi (1e-8); Cauchy-Pfaffian exact");
    QuadratureSpec qs{128, 1};
    for (double r : {0.5, 1.0, 2.0}) {
        auto start = std::chrono::steady_clock::now();
        double term = braden_G(r, +1, 1, qs) - 1.0;
        double expect = std::cyl_bessel_k(0.0, 2.0 * r) / M_PI;
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        c.require(std::fabs(term - expect) <= 1e-8 * expect,
                  "Bessel mismatch at r = " + std::to_string(r));
        c.require(secs < 1.0, "term too slow at r = " + std::to_string(r));
    }
    std::mt19937 rng(20260823);
    for (int n = 1; n <= 6; ++n) {
        std::set<std::pair<int, int>> seen;
        std::vector<Rational> x;
        while (static_cast<int>(x.size()) < n) {
            int p = 1 + static_cast<int>(rng() % 50), q = 1 + static_cast<int>(rng() % 6);
            if (seen.insert({p, q}).second) x.push_back(Rational(p, q));
        }
        bool distinct = true;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = i + 1; j < x.size(); ++j)
                if (x[i] == x[j]) distinct = false;
        if (!distinct) continue;
        c.require(cauchy_pf_identity_check(x).ok, "Cauchy-Pfaffian at n = " + std::to_string(n));
    }
    c.finish(10.0);
}

// 9. Sampler soundness: exact model-B table sums to 1; 1e5 seeded samples
//    fall in 4-sigma multinomial bands for every partition with P >= 1e-3.
void criterion_9() {
    Criterion c("criterion 9: sampler soundness (exact table; 4-sigma bands at 1e5 samples)");
    WeightSpec<Rational> ws;
    ws.w0[1] = Rational(1);
    ws.w0[2] = Rational(2, 3);
    ws.w0[3] = Rational(1, 2);
    Truncation tr{3, 3, 6};
    auto table = model_distribution_b(ws, tr, tinf_assignment(tr.degree_cap));
    Rational total(0);
    for (auto& p : table.prob) total += p;
    c.require(total == Rational(1), "table does not sum to 1");

    const int n_samples = 100000;
    auto samples = sample_partitions(table, 20260824u, n_samples);
    std::map<std::string, int> counts;
    for (auto& s : samples) ++counts[s.to_string()];
    for (std::size_t i = 0; i < table.support.size(); ++i) {
        double p = to_double(table.prob[i]);
        if (p < 1e-3) continue;
        double expect = n_samples * p;
        double sigma = std::sqrt(n_samples * p * (1.0 - p));
        double got = counts[table.support[i].to_string()];
        c.require(std::fabs(got - expect) <= 4.0 * sigma,
                  "band violation at " + table.support[i].to_string());
    }
    c.finish(30.0);
}

// 10. Quadrature stability: every reported integral moves less than its
//     declared tolerance when the node count doubles.
void criterion_10() {
    Criterion c("criterion 10: node-doubling stability within declared tolerances");
    ContourMeasure braden;
    braden.density = DensityKind::BradenExp;
    braden.r = 1.0;
    ContourMeasure expdecay;
    expdecay.density = DensityKind::ExpDecay;
    DeformationTimes dt;
    dt.t = {{1, 0.15}};
    dt.tbar = {{1, 0.1}};
    DeformationTimes none;
    QuadratureSpec q1{96, 1}, q2{192, 1};

    struct Entry {
        const char* what;
        double tol;
        std::function<double(const QuadratureSpec&)> run;
    };
    BiMeasure bm;
    bm.zm = braden;
    std::vector<Entry> entries{
        {"I1(2) braden", 1e-3,
         [&](const QuadratureSpec& q) { return integral_I(1, 2, braden, dt, q).value; }},
        {"I2(2) braden", 1e-9,
         [&](const QuadratureSpec& q) { return integral_I(2, 2, braden, dt, q).value; }},
        {"I4(2) braden", 1e-9,
         [&](const QuadratureSpec& q) { return integral_I(4, 2, braden, dt, q).value; }},
        {"I2(1) expdecay", 1e-9,
         [&](const QuadratureSpec& q) { return integral_I(2, 1, expdecay, none, q).value; }},
        {"I5(2) diagonal", 1e-9,
         [&](const QuadratureSpec& q) { return integral_I5(2, bm, dt, none, q).value; }},
        {"Z2(mu=1, N<=3)", 1e-8,
         [&](const QuadratureSpec& q) { return grand_Z(2, 1.0, 3, braden, dt, q).value; }},
        {"braden G+(1, n<=2)", 1e-10,
         [&](const QuadratureSpec& q) { return braden_G(1.0, +1, 2, q); }},
    };
    for (auto& e : entries) {
        double a = e.run(q1), b = e.run(q2);
        c.require(std::fabs(a - b) <= e.tol,
                  std::string(e.what) + " moved more than its tolerance");
    }
    c.finish(120.0);
}

}  // namespace

int main() {
    std::printf("nbkp acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
