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
#include <atomic>
#include <future>
#include <map>
#include <thread>
#include <vector>

#include "nbkp/partitions.hpp"
#include "nbkp/pfaffian.hpp"

namespace nbkp {

// ---------------------------------------------------------------------------
// Quadrature primitives
// ---------------------------------------------------------------------------

struct QuadratureSpec {
    int nodes = 64;
    int threads = 1;
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline std::vector<std::pair<double, double>> gauss_legendre(int n) {
    if (n < 2) throw std::invalid_argument("quadrature needs at least 2 nodes");
    std::vector<std::pair<double, double>> out(n);
    for (int i = 0; i < n / 2 + n % 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = {-x, w};
        out[n - 1 - i] = {x, w};
    }
    return out;
}

/// Deterministic pairwise tree reduction (summation order independent of any
/// threading of the partial evaluations).
template <typename T>
T pairwise_sum(std::vector<T> v) {
    if (v.empty()) return T(0);
    while (v.size() > 1) {
        std::size_t half = (v.size() + 1) / 2;
        for (std::size_t i = 0; i + half < v.size(); ++i) v[i] += v[i + half];
        v.resize(half);
    }
    return v[0];
}

// ---------------------------------------------------------------------------
// Measures and deformations
// ---------------------------------------------------------------------------

enum class ContourKind { RealPositive, CircleArc };
enum class DensityKind { BradenExp, ExpDecay, Uniform, Atoms };

/// A quadrature node: point on the contour, its contour parameter
/// (z itself on the real ray, the angle on the circle), and the measure
/// weight it carries.
struct Node {
    Complex z;
    double param = 0.0;
    double weight = 0.0;
};

/**
 * Measure on one of the two supported contours. Built-in densities:
 * BradenExp is exp(-r(x+1/x))/x dx on (0, inf) (evaluated through x = e^u,
 * where it becomes exp(-2r cosh u) du); ExpDecay is e^{-x} dx; Uniform is
 * dx on [0,1] or the angle measure on the arc. Atoms is a discrete measure
 * given by explicit (point, weight) pairs (also the shared grid of the
 * diagonal bi-measure).
 */
struct ContourMeasure {
    ContourKind kind = ContourKind::RealPositive;
    DensityKind density = DensityKind::ExpDecay;
    double r = 1.0;               // BradenExp parameter
    double theta = M_PI / 2;      // CircleArc opening angle, in (0, pi)
    double scale = 1.0;           // overall multiplier on the measure
    std::vector<std::pair<double, double>> atoms;

    std::vector<Node> nodes(const QuadratureSpec& qs) const {
        std::vector<Node> out;
        if (density == DensityKind::Atoms) {
            for (auto& [x, w] : atoms) {
                if (kind == ContourKind::CircleArc)
                    out.push_back({Complex(std::cos(x), std::sin(x)), x, w * scale});
                else
                    out.push_back({Complex(x, 0.0), x, w * scale});
            }
            return out;
        }
        auto gl = gauss_legendre(qs.nodes);
        if (kind == ContourKind::CircleArc) {
            if (!(theta > 0.0 && theta < M_PI))
                throw std::invalid_argument("arc angle must lie in (0, pi)");
            if (density != DensityKind::Uniform)
                throw std::invalid_argument("circle arcs use the uniform angle density");
            for (auto& [u, w] : gl) {
                double phi = 0.5 * theta * (u + 1.0);
                out.push_back({Complex(std::cos(phi), std::sin(phi)), phi,
                               0.5 * theta * w * scale});
            }
            return out;
        }
        switch (density) {
            case DensityKind::BradenExp: {
                double window = std::asinh(36.0 / r);
                for (auto& [u, w] : gl) {
                    double uu = window * u;
                    double x = std::exp(uu);
                    out.push_back({Complex(x, 0.0), x,
                                   window * w * std::exp(-2.0 * r * std::cosh(uu)) * scale});
                }
                break;
            }
            case DensityKind::ExpDecay: {
                double lo = -34.0, hi = std::log(45.0);
                for (auto& [u, w] : gl) {
                    double uu = lo + 0.5 * (hi - lo) * (u + 1.0);
                    double x = std::exp(uu);
                    out.push_back(
                        {Complex(x, 0.0), x, 0.5 * (hi - lo) * w * x * std::exp(-x) * scale});
                }
                break;
            }
            case DensityKind::Uniform: {
                for (auto& [u, w] : gl) {
                    double x = 0.5 * (u + 1.0);
                    out.push_back({Complex(x, 0.0), x, 0.5 * w * scale});
                }
                break;
            }
            case DensityKind::Atoms:
                break;  // handled above
        }
        return out;
    }
};

/// b(s, t) = exp(sum_{n odd} (n/2) s_n t_n).
inline double pair_form_b(const std::map<int, double>& s, const std::map<int, double>& t) {
    double acc = 0.0;
    for (auto& [n, sv] : s) {
        if (n % 2 == 0) throw std::invalid_argument("pair form takes odd indices");
        auto it = t.find(n);
        if (it != t.end()) acc += 0.5 * n * sv * it->second;
    }
    return std::exp(acc);
}

/// {z} = (2z, 2z^3/3, 2z^5/5, ...) up to max_index.
inline std::map<int, double> bracket(double z, int max_index) {
    if (z == 0.0) throw std::domain_error("bracket of zero");
    std::map<int, double> out;
    for (int n = 1; n <= max_index; n += 2) out[n] = 2.0 * std::pow(z, n) / n;
    return out;
}

/// Times as deformation data: the measure gains b(t,{z}) b(-tbar,{z^{-1}}).
struct DeformationTimes {
    std::map<int, double> t, tbar;
};

/// exp(sum_m c_m z^m) for odd positive keys m.
inline Complex vertex_factor(const std::map<int, double>& times, Complex z) {
    Complex acc(0.0, 0.0);
    for (auto& [m, v] : times) {
        if (m <= 0 || m % 2 == 0) throw std::invalid_argument("deformation keys must be odd positive");
        acc += v * std::pow(z, m);
    }
    return std::exp(acc);
}

/// Deformed node weight w * b(t,{z}) * b(-tbar,{z^{-1}}); real on the ray,
/// complex on the arc.
inline Complex deformed_weight(const Node& node, const DeformationTimes& dt) {
    if (node.z == Complex(0.0, 0.0)) throw std::domain_error("deformation undefined at z = 0");
    std::map<int, double> neg;
    for (auto& [m, v] : dt.tbar) neg[m] = -v;
    return node.weight * vertex_factor(dt.t, node.z) * vertex_factor(neg, 1.0 / node.z);
}

// ---------------------------------------------------------------------------
// The N-fold integrals
// ---------------------------------------------------------------------------

using Kernel2 = std::function<Complex(const Node&, const Node&)>;
using Kernel1 = std::function<Complex(const Node&)>;

/// Kernels turning I3 into I1: sgn of the contour parameter, with the
/// quarter-phase constants on the arc.
inline std::pair<Kernel2, Kernel1> i1_kernels(ContourKind kind) {
    if (kind == ContourKind::RealPositive) {
        Kernel2 k2 = [](const Node& a, const Node& b) {
            return Complex(a.param > b.param ? 1.0 : (a.param < b.param ? -1.0 : 0.0), 0.0);
        };
        Kernel1 k1 = [](const Node&) { return Complex(1.0, 0.0); };
        return {k2, k1};
    }
    Complex q = std::exp(Complex(0.0, -M_PI / 4.0));
    Kernel2 k2 = [q](const Node& a, const Node& b) {
        double s = a.param > b.param ? 1.0 : (a.param < b.param ? -1.0 : 0.0);
        return q * q * s;
    };
    Kernel1 k1 = [q](const Node&) { return q; };
    return {k2, k1};
}

/// Kernels turning I3 into I2: the Pfaffian of (z_i-z_j)/(z_i+z_j) is Delta*.
inline std::pair<Kernel2, Kernel1> i2_kernels() {
    Kernel2 k2 = [](const Node& a, const Node& b) { return (a.z - b.z) / (a.z + b.z); };
    Kernel1 k1 = [](const Node&) { return Complex(1.0, 0.0); };
    return {k2, k1};
}

namespace detail {

inline Complex delta_star_nodes(const std::vector<const Node*>& pts) {
    Complex acc(1.0, 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            acc *= (pts[i]->z - pts[j]->z) / (pts[i]->z + pts[j]->z);
    return acc;
}

inline Complex kernel_pfaffian(const std::vector<const Node*>& pts, const Kernel2& a2,
                               const Kernel1& a1) {
    int n = static_cast<int>(pts.size());
    int m = (n % 2 == 0) ? n : n + 1;
    SkewMatrix<Complex> mat(m);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) mat.set_upper(i, j, a2(*pts[i], *pts[j]));
    if (n % 2 == 1)
        for (int i = 0; i < n; ++i) mat.set_upper(i, m - 1, a1(*pts[i]));
    return pfaffian_float(mat);
}

/// Tensor iteration over N-tuples of nodes with the first coordinate split
/// into independently evaluated partials (parallelizable, deterministic).
inline Complex tensor_accumulate(const std::vector<Node>& nodes,
                                 const std::vector<Complex>& weights, int n,
                                 const std::function<Complex(const std::vector<const Node*>&)>& f,
                                 int threads) {
    const std::size_t m = nodes.size();
    auto partial = [&](std::size_t first) {
        std::vector<const Node*> tuple(n);
        std::vector<std::size_t> idx(n, 0);
        idx[0] = first;
        tuple[0] = &nodes[first];
        Complex acc(0.0, 0.0);
        if (n == 1) return weights[first] * f(std::vector<const Node*>{&nodes[first]});
        // odometer over the remaining coordinates
        for (std::size_t i = 1; i < static_cast<std::size_t>(n); ++i) {
            idx[i] = 0;
            tuple[i] = &nodes[0];
        }
        while (true) {
            Complex w = weights[first];
            for (int i = 1; i < n; ++i) w *= weights[idx[i]];
            acc += w * f(tuple);
            int pos = n - 1;
            while (pos >= 1) {
                if (++idx[pos] < m) {
                    tuple[pos] = &nodes[idx[pos]];
                    break;
                }
                idx[pos] = 0;
                tuple[pos] = &nodes[0];
                --pos;
            }
            if (pos == 0) break;
        }
        return acc;
    };

    std::vector<Complex> partials(m);
    if (threads <= 1) {
        for (std::size_t k = 0; k < m; ++k) partials[k] = partial(k);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t k = next.fetch_add(1); k < m; k = next.fetch_add(1))
                partials[k] = partial(k);
        };
        std::vector<std::thread> pool;
        int tcount = std::min<int>(threads, static_cast<int>(m));
        pool.reserve(tcount);
        for (int i = 0; i < tcount; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return pairwise_sum(std::move(partials));
}

inline double validated_real(Complex v, double tol, const char* what) {
    if (std::abs(v.imag()) > tol * std::max(1.0, std::abs(v)))
        throw std::runtime_error(std::string(what) + ": result is not real within tolerance");
    return v.real();
}

inline void require_finite_weights(const std::vector<Complex>& w, const char* what) {
    for (auto& x : w)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw std::domain_error(std::string(what) +
                                    ": deformed measure diverges on the grid (deformation "
                                    "outside the convergence domain)");
}

}  // namespace detail

struct IntegralResult {
    double value = 0.0;  // real part; the absolute-value integrands are real
    double imag = 0.0;   // only I3 with complex kernels may populate this
    int nodes = 0;
    double imag_residual = 0.0;
};

/**
 * The N-fold integrals against the (deformed) measure:
 * id 1: |Delta*|, id 2: |Delta*|^2, id 4: |Delta*|^4,
 * id 3: Delta* times the Pfaffian of the supplied kernel pair.
 * N = 0 gives 1 exactly. Tensor grids are limited to N <= 4.
 *
 * Ids 1, 2, 4 are validated to be real to 1e-10 and throw otherwise. I3 with
 * complex kernels is reported as is: on the arc, the quarter-phase constants
 * make the odd-N I3 a phase times I1 (e^{i pi N(N-2)/4}), so realness is the
 * caller's concern there.
 */
inline IntegralResult integral_I(int id, int n, const ContourMeasure& cm,
                                 const DeformationTimes& dt, const QuadratureSpec& qs,
                                 const Kernel2* a2 = nullptr, const Kernel1* a1 = nullptr) {
    if (n < 0) throw std::invalid_argument("N must be >= 0");
    if (n > 4) throw std::invalid_argument("tensor quadrature is limited to N <= 4");
    if (id < 1 || id > 4) throw std::invalid_argument("integral id must be 1..4");
    IntegralResult res;
    if (n == 0) {
        res.value = 1.0;  // every id: the empty integral is 1
        return res;
    }
    if (id == 3 && (a2 == nullptr || a1 == nullptr))
        throw std::invalid_argument("I3 requires the kernel pair");
    auto nodes = cm.nodes(qs);
    res.nodes = static_cast<int>(nodes.size());
    std::vector<Complex> weights(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) weights[i] = deformed_weight(nodes[i], dt);
    detail::require_finite_weights(weights, "integral_I");

    std::function<Complex(const std::vector<const Node*>&)> f;
    switch (id) {
        case 1:
            f = [](const std::vector<const Node*>& p) {
                return Complex(std::abs(detail::delta_star_nodes(p)), 0.0);
            };
            break;
        case 2:
            f = [](const std::vector<const Node*>& p) {
                double a = std::abs(detail::delta_star_nodes(p));
                return Complex(a * a, 0.0);
            };
            break;
        case 3:
            f = [a2, a1](const std::vector<const Node*>& p) {
                return detail::delta_star_nodes(p) * detail::kernel_pfaffian(p, *a2, *a1);
            };
            break;
        case 4:
            f = [](const std::vector<const Node*>& p) {
                double a = std::abs(detail::delta_star_nodes(p));
                return Complex(a * a * a * a, 0.0);
            };
            break;
    }
    Complex total = detail::tensor_accumulate(nodes, weights, n, f, qs.threads);
    res.imag_residual = std::abs(total.imag()) / std::max(1.0, std::abs(total));
    res.imag = total.imag();
    if (id == 3)
        res.value = total.real();
    else
        res.value = detail::validated_real(total, 1e-10, "integral_I");
    return res;
}

/**
 * Bi-measure for the 2N-fold integrals: either the diagonal specialization
 * delta(z-y) dnu(z) dnu(y) living on one grid, or a product grid with an
 * explicit weight kernel w(z_i, y_j) in the contour parameters.
 */
struct BiMeasure {
    bool diagonal = true;
    ContourMeasure zm;
    ContourMeasure ym;                                   // product case only
    std::function<double(double, double)> weight_fn;     // product case only
};

inline IntegralResult integral_I5(int n, const BiMeasure& bm, const DeformationTimes& dz,
                                  const DeformationTimes& dy, const QuadratureSpec& qs) {
    if (n < 0) throw std::invalid_argument("N must be >= 0");
    IntegralResult res;
    if (n == 0) {
        res.value = 1.0;
        return res;
    }
    if (bm.diagonal) {
        if (n > 4) throw std::invalid_argument("tensor quadrature is limited to N <= 4");
        auto nodes = bm.zm.nodes(qs);
        res.nodes = static_cast<int>(nodes.size());
        std::vector<Complex> weights(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            // the pair (z_i, y_i) collapses to one point carrying both
            // deformation families; the grid weight enters once
            Node bare = nodes[i];
            double w = bare.weight;
            bare.weight = 1.0;
            weights[i] = w * deformed_weight(bare, dz) * deformed_weight(bare, dy);
        }
        detail::require_finite_weights(weights, "integral_I5");
        auto f = [](const std::vector<const Node*>& p) {
            Complex d = detail::delta_star_nodes(p);
            return d * d;
        };
        Complex total = detail::tensor_accumulate(
            nodes, weights, n, std::function<Complex(const std::vector<const Node*>&)>(f),
            qs.threads);
        res.imag_residual = std::abs(total.imag()) / std::max(1.0, std::abs(total));
        res.value = detail::validated_real(total, 1e-10, "integral_I5");
        return res;
    }
    if (n > 2) throw std::invalid_argument("product bi-measure grids are limited to N <= 2");
    auto zn = bm.zm.nodes(qs);
    auto yn = bm.ym.nodes(qs);
    res.nodes = static_cast<int>(zn.size());
    // treat index pairs (i, j) as composite nodes
    std::vector<Node> pairs;
    std::vector<Complex> weights;
    pairs.reserve(zn.size() * yn.size());
    for (auto& a : zn)
        for (auto& b : yn) {
            Node za = a, yb = b;
            za.weight = 1.0;
            yb.weight = 1.0;
            Complex w = a.weight * b.weight * bm.weight_fn(a.param, b.param) *
                        deformed_weight(za, dz) * deformed_weight(yb, dy);
            Node composite;
            composite.z = a.z;
            composite.param = b.param;  // carries the y point
            composite.weight = 0.0;
            pairs.push_back(composite);
            weights.push_back(w);
        }
    detail::require_finite_weights(weights, "integral_I5");
    auto f = [&](const std::vector<const Node*>& p) {
        std::vector<Complex> zs, ys;
        for (auto* node : p) {
            zs.push_back(node->z);
            ys.push_back(Complex(node->param, 0.0));
        }
        Complex acc(1.0, 0.0);
        for (std::size_t i = 0; i < zs.size(); ++i)
            for (std::size_t j = i + 1; j < zs.size(); ++j)
                acc *= (zs[i] - zs[j]) / (zs[i] + zs[j]) * (ys[i] - ys[j]) / (ys[i] + ys[j]);
        return acc;
    };
    Complex total = detail::tensor_accumulate(
        pairs, weights, n, std::function<Complex(const std::vector<const Node*>&)>(f),
        qs.threads);
    res.imag_residual = std::abs(total.imag()) / std::max(1.0, std::abs(total));
    res.value = detail::validated_real(total, 1e-10, "integral_I5");
    return res;
}

struct GrandZResult {
    double value = 0.0;
    double prefactor = 1.0;
    double last_term = 0.0;  // magnitude of the final series term, a tail hint
    int nodes = 0;
};

/// Poissonized grand series b * sum_{N<=N_max} I_id(N) mu^N / N!.
inline GrandZResult grand_Z(int id, double mu, int n_max, const ContourMeasure& cm,
                            const DeformationTimes& dt, const QuadratureSpec& qs,
                            const Kernel2* a2 = nullptr, const Kernel1* a1 = nullptr) {
    GrandZResult out;
    out.prefactor = pair_form_b(dt.t, dt.tbar);
    double acc = 0.0, term = 0.0, fact = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) fact *= n;
        auto in = integral_I(id, n, cm, dt, qs, a2, a1);
        out.nodes = std::max(out.nodes, in.nodes);
        term = in.value * std::pow(mu, n) / fact;
        acc += term;
    }
    out.last_term = std::fabs(term);
    out.value = out.prefactor * acc;
    return out;
}

/// Two-component grand series for the bi-measure integrals.
inline GrandZResult grand_Z5(double mu, int n_max, const BiMeasure& bm,
                             const DeformationTimes& dz, const DeformationTimes& dy,
                             const QuadratureSpec& qs) {
    GrandZResult out;
    out.prefactor = pair_form_b(dz.t, dz.tbar) * pair_form_b(dy.t, dy.tbar);
    double acc = 0.0, term = 0.0, fact = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) fact *= n;
        auto in = integral_I5(n, bm, dz, dy, qs);
        out.nodes = std::max(out.nodes, in.nodes);
        term = in.value * std::pow(mu, n) / fact;
        acc += term;
    }
    out.last_term = std::fabs(term);
    out.value = out.prefactor * acc;
    return out;
}

/// Ising-correlator-type series: sum_{n<=n_max} (+-1)^n / n! I_2(n) with the
/// measure exp(-r(x+1/x)) dx / (2 pi x).
inline double braden_G(double r, int sign, int n_max, const QuadratureSpec& qs) {
    if (r <= 0.0) throw std::domain_error("braden_G requires r > 0");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
    ContourMeasure cm;
    cm.kind = ContourKind::RealPositive;
    cm.density = DensityKind::BradenExp;
    cm.r = r;
    cm.scale = 1.0 / (2.0 * M_PI);
    DeformationTimes none;
    double acc = 0.0, fact = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) fact *= n;
        double in = integral_I(2, n, cm, none, qs).value;
        acc += (sign > 0 ? 1.0 : (n % 2 == 0 ? 1.0 : -1.0)) * in / fact;
    }
    return acc;
}

struct CauchyPfReport {
    Rational lhs, rhs;
    bool ok = false;
};

/// det(1/(x_i+x_j)) = (2^n x_1...x_n)^{-1} prod_{i<j} ((x_i-x_j)/(x_i+x_j))^2,
/// exactly over the rationals.
inline CauchyPfReport cauchy_pf_identity_check(const std::vector<Rational>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0)) throw std::invalid_argument("points must be positive");
        for (std::size_t j = i + 1; j < n; ++j)
            if (x[i] == x[j]) throw std::invalid_argument("points must be distinct");
    }
    std::vector<std::vector<Rational>> c(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c[i][j] = Rational(1) / (x[i] + x[j]);
    CauchyPfReport rep;
    rep.lhs = det_exact(c);
    Rational prod(1);
    for (auto& xi : x) prod *= 2 * xi;
    Rational d = delta_star_values(x);
    rep.rhs = d * d / prod;
    rep.ok = rep.lhs == rep.rhs;
    return rep;
}

}  // namespace nbkp
