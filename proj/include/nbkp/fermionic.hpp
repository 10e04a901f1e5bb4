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

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>
#include <map>
#include <vector>

#include "nbkp/pfaffian.hpp"
#include "nbkp/tausums.hpp"

namespace nbkp {

using SpMat = Eigen::SparseMatrix<Complex>;
using Vec = Eigen::VectorXcd;

/**
 * Finite-mode matrix representation of the neutral fermion algebra
 *
 *     [phi_n^(a), phi_m^(b)]_+ = (-1)^n delta_{n,-m} delta_{ab},
 *
 * built Jordan-Wigner style on a chain of sites: one shared auxiliary site
 * realizing the zero modes as reflection operators, then the mode sites of
 * each component. Nonzero modes are ladder operators dressed with the global
 * sign string, so all anticommutation relations hold exactly by construction.
 *
 * One component: phi_0 = X_aux/sqrt(2) and the vacuum carries the auxiliary
 * site in the +1 eigenvector of X, giving phi_0|0> = 2^{-1/2}|0>.
 *
 * Two components: phi_0^(1) = X_aux/sqrt(2), phi_0^(2) = Y_aux/sqrt(2). Two
 * anticommuting reflections cannot both have |0> as an eigenvector (applying
 * the anticommutator to a joint eigenvector forces one eigenvalue to vanish),
 * so the two-component vacuum instead takes the auxiliary site in a Z
 * eigenstate. The zero-mode pair expectation <phi_0^(1) phi_0^(2)> = i/2 then
 * carries the odd-sector contractions; the coupling phase in the S5 oracle is
 * calibrated once against the combinatorial sum (see kS5CouplingPhase).
 */
/// Auxiliary-site state of the two-component vacuum; ZPlus is the calibrated
/// default, the alternatives exist so the tests can show they fail.
enum class AuxVacuum { ZPlus, ZMinus, XPlus };

class CliffordRep {
  public:
    CliffordRep(int max_mode, int components, AuxVacuum two_comp_aux = AuxVacuum::ZPlus)
        : L_(max_mode), comps_(components) {
        if (components != 1 && components != 2)
            throw std::invalid_argument("components must be 1 or 2");
        if (max_mode < 1 || (components == 1 && max_mode > 6) ||
            (components == 2 && max_mode > 4))
            throw std::invalid_argument("mode window out of range (dimension guard)");
        sites_ = 1 + comps_ * L_;
        dim_ = 1 << sites_;

        vacuum_ = Vec::Zero(dim_);
        if (comps_ == 1) {
            // auxiliary site in the +1 eigenvector of X
            vacuum_(0) = 1.0 / std::sqrt(2.0);
            vacuum_(1) = 1.0 / std::sqrt(2.0);
        } else {
            switch (two_comp_aux) {
                case AuxVacuum::ZPlus: vacuum_(0) = 1.0; break;
                case AuxVacuum::ZMinus: vacuum_(1) = 1.0; break;
                case AuxVacuum::XPlus:
                    vacuum_(0) = 1.0 / std::sqrt(2.0);
                    vacuum_(1) = 1.0 / std::sqrt(2.0);
                    break;
            }
        }
    }

    int max_mode() const { return L_; }
    int components() const { return comps_; }
    int dimension() const { return dim_; }
    const Vec& vacuum() const { return vacuum_; }

    /// phi_n^{(a)} as a sparse matrix; |n| <= max_mode.
    SpMat phi(int n, int a = 1) const {
        if (a < 1 || a > comps_) throw std::invalid_argument("bad component");
        if (std::abs(n) > L_) throw std::invalid_argument("mode outside the window");
        if (n == 0) return zero_mode(a);
        int site = site_of(std::abs(n), a);
        double sign_factor = (n < 0 && (std::abs(n) % 2 == 1)) ? -1.0 : 1.0;
        return ladder(site, /*create=*/n > 0) * Complex(sign_factor, 0.0);
    }

    /// B_n^{(a)} = (1/2) sum_i (-1)^{i+1} phi_i phi_{-i-n}, windowed to the rep.
    SpMat b_op(int n, int a = 1) const {
        if (n == 0 || n % 2 == 0) throw std::invalid_argument("B_n requires odd nonzero n");
        SpMat acc(dim_, dim_);
        for (int i = -L_; i <= L_; ++i) {
            int j = -i - n;
            if (std::abs(j) > L_) continue;
            double c = (i % 2 == 0) ? -0.5 : 0.5;  // (1/2)(-1)^{i+1}
            acc = acc + SpMat(phi(i, a) * phi(j, a)) * Complex(c, 0.0);
        }
        return acc;
    }

    Complex vev(const SpMat& m) const { return (vacuum_.transpose() * (m * vacuum_))(0); }

  private:
    int site_of(int n, int a) const { return (a == 1) ? n : L_ + n; }

    /// Jordan-Wigner ladder operator on `site` with the sign string over the
    /// preceding sites; one nonzero per column.
    SpMat ladder(int site, bool create) const {
        std::vector<Eigen::Triplet<Complex>> trip;
        trip.reserve(dim_ / 2);
        const unsigned bit = 1u << site;
        const unsigned string_mask = bit - 1;
        for (unsigned m = 0; m < static_cast<unsigned>(dim_); ++m) {
            bool occupied = m & bit;
            if (create == occupied) continue;
            unsigned out = m ^ bit;
            double s = (__builtin_popcount(m & string_mask) % 2 == 0) ? 1.0 : -1.0;
            trip.emplace_back(out, m, Complex(s, 0.0));
        }
        SpMat op(dim_, dim_);
        op.setFromTriplets(trip.begin(), trip.end());
        return op;
    }

    /// phi_0^{(1)} = X_aux/sqrt2, phi_0^{(2)} = Y_aux/sqrt2 (site 0 carries
    /// no string, being first in the chain).
    SpMat zero_mode(int a) const {
        std::vector<Eigen::Triplet<Complex>> trip;
        trip.reserve(dim_);
        const double r = 1.0 / std::sqrt(2.0);
        for (unsigned m = 0; m < static_cast<unsigned>(dim_); ++m) {
            unsigned out = m ^ 1u;
            if (a == 1) {
                trip.emplace_back(out, m, Complex(r, 0.0));
            } else {
                bool occupied = m & 1u;
                trip.emplace_back(out, m, occupied ? Complex(0.0, -r) : Complex(0.0, r));
            }
        }
        SpMat op(dim_, dim_);
        op.setFromTriplets(trip.begin(), trip.end());
        return op;
    }

    int L_, comps_, sites_, dim_;
    Vec vacuum_;
};

/// exp(M) v by scaling and squaring with a Taylor inner loop; terminates
/// exactly on the nilpotent exponents used here and guards against
/// non-convergence otherwise.
inline Vec expm_apply(const SpMat& m, Vec v, double tol = 1e-16) {
    double norm1 = 0.0;
    for (int k = 0; k < m.outerSize(); ++k) {
        double col = 0.0;
        for (SpMat::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
        norm1 = std::max(norm1, col);
    }
    int squarings = 0;
    while (norm1 / std::pow(2.0, squarings) > 1.0 && squarings < 40) ++squarings;
    SpMat scaled = m * Complex(1.0 / std::pow(2.0, squarings), 0.0);
    for (int rep = 0; rep < (1 << squarings); ++rep) {
        Vec term = v;
        Vec acc = v;
        for (int k = 1; k <= 400; ++k) {
            term = scaled * term;
            term /= static_cast<double>(k);
            acc += term;
            if (term.norm() <= tol * std::max(1.0, acc.norm())) break;
            if (k == 400) throw std::runtime_error("expm_apply: series did not converge");
        }
        v = std::move(acc);
    }
    return v;
}

/// Gamma(t) (direction +1) or bar-Gamma(t) (direction -1) as a callable on
/// state vectors: exp(sum_n B_{+-n} t_n) with odd positive keys in `times`.
inline std::function<Vec(const Vec&)> gamma_apply(const CliffordRep& rep,
                                                  const std::map<int, double>& times,
                                                  int direction = +1, int component = 1) {
    SpMat gen(rep.dimension(), rep.dimension());
    for (auto& [n, v] : times) {
        if (n <= 0 || n % 2 == 0) throw std::invalid_argument("gamma times take odd positive keys");
        if (v == 0.0) continue;
        gen = gen + SpMat(rep.b_op(direction > 0 ? n : -n, component)) * Complex(v, 0.0);
    }
    return [gen](const Vec& x) { return expm_apply(gen, x); };
}

/// Dense Gamma matrix (API surface; the oracles use the vector path).
inline Eigen::MatrixXcd gamma_op(const CliffordRep& rep, const std::map<int, double>& times,
                                 int direction = +1, int component = 1) {
    auto apply = gamma_apply(rep, times, direction, component);
    Eigen::MatrixXcd out(rep.dimension(), rep.dimension());
    Vec e = Vec::Zero(rep.dimension());
    for (int j = 0; j < rep.dimension(); ++j) {
        e.setZero();
        e(j) = 1.0;
        out.col(j) = apply(e);
    }
    return out;
}

/// <0| Gamma(t) phi_{alpha_1} ... phi_{alpha_k} |0> via the vector path.
inline Complex vev_gamma_phis(const CliffordRep& rep, const std::map<int, double>& times,
                              const std::vector<int>& modes, int component = 1) {
    Vec v = rep.vacuum();
    for (auto it = modes.rbegin(); it != modes.rend(); ++it) v = rep.phi(*it, component) * v;
    v = gamma_apply(rep, times, +1, component)(v);
    return (rep.vacuum().transpose() * v)(0);
}

/// A linear combination sum_i c_i phi_{n_i}^{(a_i)}.
struct LinearCombo {
    std::vector<std::tuple<Complex, int, int>> terms;  // (coeff, mode, component)
};

/// VEV of a product of linear combinations, evaluated directly; for even
/// counts the Wick Pfaffian of pair VEVs is computed as a cross-check and a
/// disagreement beyond `tol` throws.
inline Complex vev_product(const CliffordRep& rep, const std::vector<LinearCombo>& ws,
                           double tol = 1e-11) {
    auto as_matrix = [&](const LinearCombo& w) {
        SpMat acc(rep.dimension(), rep.dimension());
        for (auto& [c, n, a] : w.terms) acc = acc + SpMat(rep.phi(n, a)) * c;
        return acc;
    };
    Vec v = rep.vacuum();
    for (auto it = ws.rbegin(); it != ws.rend(); ++it) v = as_matrix(*it) * v;
    Complex direct = (rep.vacuum().transpose() * v)(0);

    if (ws.size() % 2 == 0 && !ws.empty()) {
        const int n = static_cast<int>(ws.size());
        SkewMatrix<Complex> pairs(n);
        for (int i = 0; i < n; ++i) {
            Vec vi = as_matrix(ws[i]).transpose() * rep.vacuum();
            for (int j = i + 1; j < n; ++j) {
                Complex pij = (vi.transpose() * (as_matrix(ws[j]) * rep.vacuum()))(0);
                pairs.set_upper(i, j, pij);
            }
        }
        Complex wick = pfaffian_float(pairs);
        if (std::abs(wick - direct) > tol * std::max(1.0, std::abs(direct)))
            throw std::runtime_error("Wick-Pfaffian cross-check failed");
    }
    return direct;
}

// ---------------------------------------------------------------------------
// Convention constants fixed by calibration against the combinatorial sums.
// Candidate alternatives are exercised (and rejected) in the test suite.
// ---------------------------------------------------------------------------

/// The diagonal dressing operator T(t*) acts as prod_n (e^{-U_n})^{N_n}. In
/// operator form this is exp(-sum U_n (-1)^n phi_n phi_{-n}): the mode pair
/// phi_n phi_{-n} equals (-1)^n N_n in any allocation consistent with the
/// anticommutation relations, so the printed exponent without the (-1)^n
/// would dress odd modes with e^{+U_n} and break the S1 identity.
inline std::function<Vec(const Vec&)> t_op_apply(const CliffordRep& rep,
                                                 const WeightSpec<double>& ws) {
    if (rep.components() != 1) throw std::invalid_argument("T(t*) acts on the one-component rep");
    std::vector<double> w(rep.max_mode() + 1, 1.0);
    for (int n = 1; n <= rep.max_mode(); ++n) w[n] = part_weight(n, ws);
    int L = rep.max_mode();
    int dim = rep.dimension();
    return [w, L, dim](const Vec& x) {
        Vec out = x;
        for (int idx = 0; idx < dim; ++idx) {
            double f = 1.0;
            for (int n = 1; n <= L; ++n)
                if (idx & (1 << n)) f *= w[n];
            out(idx) *= f;
        }
        return out;
    };
}

/**
 * Composable operator expression: an ordered product of factors, each either
 * a mode operator, a Fermi-field partial sum phi^{(a)}(z) over the window,
 * a quadratic exponential, a Gamma/bar-Gamma flow, or the diagonal T
 * dressing. Factors apply right to left, as written.
 */
class OperatorExpr {
  public:
    using Apply = std::function<Vec(const CliffordRep&, const Vec&)>;

    static OperatorExpr mode(int n, int a = 1) {
        return OperatorExpr([n, a](const CliffordRep& rep, const Vec& v) -> Vec {
            return rep.phi(n, a) * v;
        });
    }

    /// phi^{(a)}(z) = sum_{|n| <= L} phi_n z^n.
    static OperatorExpr field(Complex z, int a = 1) {
        return OperatorExpr([z, a](const CliffordRep& rep, const Vec& v) -> Vec {
            Vec acc = Vec::Zero(v.size());
            for (int n = -rep.max_mode(); n <= rep.max_mode(); ++n)
                acc += std::pow(z, n) * (rep.phi(n, a) * v);
            return acc;
        });
    }

    /// exp(sum_k c_k phi_{n_k}^{(a_k)} phi_{m_k}^{(b_k)}).
    static OperatorExpr quadratic_exp(
        const std::vector<std::tuple<Complex, int, int, int, int>>& terms) {
        return OperatorExpr([terms](const CliffordRep& rep, const Vec& v) -> Vec {
            SpMat gen(rep.dimension(), rep.dimension());
            for (auto& [c, n, a, m, b] : terms)
                gen = gen + SpMat(rep.phi(n, a) * rep.phi(m, b)) * c;
            return expm_apply(gen, v);
        });
    }

    static OperatorExpr gamma(const std::map<int, double>& times, int direction = +1,
                              int component = 1) {
        return OperatorExpr([times, direction, component](const CliffordRep& rep,
                                                          const Vec& v) -> Vec {
            return gamma_apply(rep, times, direction, component)(v);
        });
    }

    static OperatorExpr t_dressing(const WeightSpec<double>& ws) {
        return OperatorExpr(
            [ws](const CliffordRep& rep, const Vec& v) -> Vec { return t_op_apply(rep, ws)(v); });
    }

    /// Product: *this applied after `right` (operator composition order).
    OperatorExpr operator*(const OperatorExpr& right) const {
        Apply l = apply_, r = right.apply_;
        return OperatorExpr([l, r](const CliffordRep& rep, const Vec& v) -> Vec {
            return l(rep, r(rep, v));
        });
    }

    Vec apply(const CliffordRep& rep, const Vec& v) const { return apply_(rep, v); }

  private:
    explicit OperatorExpr(Apply a) : apply_(std::move(a)) {}
    Apply apply_;
};

/// <0| expr |0>.
inline Complex vev(const CliffordRep& rep, const OperatorExpr& expr) {
    Vec v = expr.apply(rep, rep.vacuum());
    return (rep.vacuum().transpose() * v)(0);
}

/// S4 exponent ordering: exp(2 sum phi_{n+1} phi_n). The transposed ordering
/// exp(2 sum phi_n phi_{n+1}) alternates the sign with the number of pairs
/// and does not reproduce the DP^2 sum (checked in tests).
inline constexpr bool kS4LargerFirst = true;

/// Phase on the two-component coupling exponent of the S5 oracle,
/// exp(2 c sum D_{nm} phi_n^{(1)} phi_m^{(2)}); calibrated so the oracle
/// matches the combinatorial S5 for all pair counts.
inline const Complex kS5CouplingPhase{0.0, -1.0};

// ---------------------------------------------------------------------------
// Fermionic oracles for the partition sums
// ---------------------------------------------------------------------------

inline Complex oracle_s0(const CliffordRep& rep, int cutoff, const std::map<int, double>& t) {
    if (cutoff > rep.max_mode()) throw std::invalid_argument("cutoff exceeds the mode window");
    SpMat x(rep.dimension(), rep.dimension());
    for (int n = 1; n <= cutoff; ++n)
        for (int m = 0; m < n; ++m) x = x + SpMat(rep.phi(n) * rep.phi(m)) * Complex(2.0, 0.0);
    Vec v = expm_apply(x, rep.vacuum());
    v = gamma_apply(rep, t)(v);
    return (rep.vacuum().transpose() * v)(0);
}

inline Complex oracle_s1(const CliffordRep& rep, const WeightSpec<double>& ws,
                         const std::map<int, double>& t) {
    SpMat x(rep.dimension(), rep.dimension());
    for (int n = 1; n <= rep.max_mode(); ++n)
        for (int m = 0; m < n; ++m) x = x + SpMat(rep.phi(n) * rep.phi(m)) * Complex(2.0, 0.0);
    Vec v = expm_apply(x, rep.vacuum());
    v = t_op_apply(rep, ws)(v);
    v = gamma_apply(rep, t)(v);
    return (rep.vacuum().transpose() * v)(0);
}

inline Complex oracle_s3(const CliffordRep& rep, const PairCoefficients<double>& pc,
                         const std::map<int, double>& t) {
    SpMat x(rep.dimension(), rep.dimension());
    for (int n = 1; n <= rep.max_mode(); ++n) {
        double an = pc.a(n);
        if (an != 0.0) x = x + SpMat(rep.phi(n) * rep.phi(0)) * Complex(2.0 * an, 0.0);
        for (int m = 1; m < n; ++m) {
            double anm = pc.A(n, m);
            if (anm != 0.0) x = x + SpMat(rep.phi(n) * rep.phi(m)) * Complex(2.0 * anm, 0.0);
        }
    }
    Vec v = expm_apply(x, rep.vacuum());
    v = gamma_apply(rep, t)(v);
    return (rep.vacuum().transpose() * v)(0);
}

inline Complex oracle_s4(const CliffordRep& rep, const WeightSpec<double>& ws,
                         const std::map<int, double>& t, bool larger_first = kS4LargerFirst) {
    SpMat x(rep.dimension(), rep.dimension());
    for (int n = 1; n + 1 <= rep.max_mode(); ++n) {
        SpMat pair = larger_first ? SpMat(rep.phi(n + 1) * rep.phi(n))
                                  : SpMat(rep.phi(n) * rep.phi(n + 1));
        x = x + pair * Complex(2.0, 0.0);
    }
    Vec v = expm_apply(x, rep.vacuum());
    v = t_op_apply(rep, ws)(v);
    v = gamma_apply(rep, t)(v);
    return (rep.vacuum().transpose() * v)(0);
}

inline Complex oracle_s5(const CliffordRep& rep, const DMatrix<double>& dm,
                         const std::map<int, double>& t1, const std::map<int, double>& t2,
                         Complex coupling_phase = kS5CouplingPhase) {
    if (rep.components() != 2) throw std::invalid_argument("S5 oracle needs two components");
    SpMat x(rep.dimension(), rep.dimension());
    for (int n = 1; n <= rep.max_mode(); ++n)
        for (int m = 1; m <= rep.max_mode(); ++m) {
            double d = dm.at(n, m);
            if (d != 0.0)
                x = x + SpMat(rep.phi(n, 1) * rep.phi(m, 2)) * (Complex(2.0 * d, 0.0) * coupling_phase);
        }
    Vec v = expm_apply(x, rep.vacuum());
    v = gamma_apply(rep, t2, +1, 2)(v);
    v = gamma_apply(rep, t1, +1, 1)(v);
    return (rep.vacuum().transpose() * v)(0);
}

}  // namespace nbkp
