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

#include <json.hpp>

#include <fstream>
#include <set>
#include <string>

#include "nbkp/integrals.hpp"
#include "nbkp/partitions.hpp"
#include "nbkp/pfaffian.hpp"
#include "nbkp/polyring.hpp"
#include "nbkp/tausums.hpp"

namespace nbkp {

using Json = nlohmann::json;

/// Rejects keys outside the allowed set; malformed configs must name the
/// offending key.
inline void require_keys(const Json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

/// Rationals arrive as "p/q" strings or JSON integers.
inline Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    throw std::invalid_argument(where + ": expected an integer or a \"p/q\" string");
}

inline Json rational_to_json(const Rational& r) { return to_fraction_string(r); }

// ---------------------------------------------------------------------------
// Partitions: JSON integer arrays, e.g. [4,2,1]
// ---------------------------------------------------------------------------

inline Json to_json(const StrictPartition& p) {
    Json arr = Json::array();
    for (int x : p.parts()) arr.push_back(x);
    return arr;
}

inline StrictPartition partition_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("partition: expected an integer array");
    std::vector<int> parts;
    for (auto& x : j) parts.push_back(x.get<int>());
    return StrictPartition(parts);
}

// ---------------------------------------------------------------------------
// Polynomials: lists of {"monomial": {"1": e1, "3": e3, ...}, "coeff": "p/q"}
// ---------------------------------------------------------------------------

inline Json to_json(const Poly& p) {
    Json out = Json::array();
    for (auto& [m, c] : p.terms()) {
        Json mono = Json::object();
        for (auto& [k, e] : m) mono[std::to_string(k)] = e;
        out.push_back(Json{{"monomial", mono}, {"coeff", rational_to_json(c)}});
    }
    return out;
}

inline Poly poly_from_json(const Json& j, int degree_cap) {
    if (!j.is_array()) throw std::invalid_argument("polynomial: expected an array of terms");
    Poly p = Poly::zero(degree_cap);
    for (auto& term : j) {
        require_keys(term, {"monomial", "coeff"}, "polynomial term");
        Monomial m;
        for (auto it = term.at("monomial").begin(); it != term.at("monomial").end(); ++it)
            m.emplace_back(std::stoi(it.key()), it.value().get<int>());
        std::sort(m.begin(), m.end());
        p.add_term(m, rational_from_json(term.at("coeff"), "polynomial coeff"));
    }
    return p;
}

// ---------------------------------------------------------------------------
// Skew matrices: {"n": n, "upper": [[i, j, value], ...]}
// ---------------------------------------------------------------------------

inline Json to_json(const SkewMatrix<Rational>& m) {
    Json upper = Json::array();
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j)
            if (!(m.get(i, j) == Rational(0)))
                upper.push_back(Json::array({i, j, rational_to_json(m.get(i, j))}));
    return Json{{"n", m.size()}, {"upper", upper}};
}

inline SkewMatrix<Rational> skew_from_json(const Json& j) {
    require_keys(j, {"n", "upper"}, "skew matrix");
    SkewMatrix<Rational> m(j.at("n").get<int>());
    for (auto& e : j.at("upper")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("skew matrix: entries are [i, j, value]");
        m.set_upper(e[0].get<int>(), e[1].get<int>(), rational_from_json(e[2], "skew entry"));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Model data
// ---------------------------------------------------------------------------

inline Truncation truncation_from_json(const Json& j) {
    require_keys(j, {"max_part", "max_length", "degree_cap"}, "truncation");
    Truncation tr;
    tr.max_part = j.at("max_part").get<int>();
    tr.max_length = j.at("max_length").get<int>();
    tr.degree_cap = j.at("degree_cap").get<int>();
    if (tr.max_part < 0 || tr.max_length < 0 || tr.degree_cap < 0)
        throw std::invalid_argument("truncation: bounds must be >= 0");
    return tr;
}

/// {"w0": {"n": rational, ...}, "u0": {"n": number|"inf", ...},
///  "tstar": {"m": number, ...}} — w0 and u0 are alternative spellings of
/// the same data (u0 entries are exponentiated; "inf" excludes the part).
template <typename S>
WeightSpec<S> weights_from_json(const Json& j) {
    require_keys(j, {"w0", "u0", "tstar"}, "weights");
    WeightSpec<S> ws;
    if (j.contains("w0"))
        for (auto it = j.at("w0").begin(); it != j.at("w0").end(); ++it) {
            Rational r = rational_from_json(it.value(), "w0");
            ws.w0[std::stoi(it.key())] = scalar_cast<S>(r);
        }
    if (j.contains("u0"))
        for (auto it = j.at("u0").begin(); it != j.at("u0").end(); ++it) {
            if constexpr (std::is_same_v<S, double>) {
                if (it.value().is_string() && it.value().get<std::string>() == "inf")
                    ws.w0[std::stoi(it.key())] = 0.0;
                else
                    ws.w0[std::stoi(it.key())] = std::exp(-it.value().get<double>());
            } else {
                throw std::invalid_argument("u0 entries need float mode; use w0 for exact runs");
            }
        }
    if (j.contains("tstar"))
        for (auto it = j.at("tstar").begin(); it != j.at("tstar").end(); ++it)
            ws.tstar[std::stoi(it.key())] = it.value().get<double>();
    return ws;
}

/// {"A": [[n, m, value], ...], "a": {"n": value, ...}}
template <typename S>
PairCoefficients<S> pair_coeffs_from_json(const Json& j) {
    require_keys(j, {"A", "a"}, "pair coefficients");
    PairCoefficients<S> pc;
    if (j.contains("A"))
        for (auto& e : j.at("A")) {
            if (!e.is_array() || e.size() != 3)
                throw std::invalid_argument("pair coefficients: A entries are [n, m, value]");
            pc.set_A(e[0].get<int>(), e[1].get<int>(),
                     scalar_cast<S>(rational_from_json(e[2], "A entry")));
        }
    if (j.contains("a"))
        for (auto it = j.at("a").begin(); it != j.at("a").end(); ++it)
            pc.set_a(std::stoi(it.key()), scalar_cast<S>(rational_from_json(it.value(), "a entry")));
    return pc;
}

template <typename S>
Json pair_coeffs_to_json(const PairCoefficients<S>& pc) {
    Json a_entries = Json::array();
    for (auto& [nm, v] : pc.entries)
        a_entries.push_back(Json::array({nm.first, nm.second, to_fraction_string(v)}));
    Json aug = Json::object();
    for (auto& [n, v] : pc.aug) aug[std::to_string(n)] = to_fraction_string(v);
    return Json{{"A", a_entries}, {"a", aug}};
}

/// {"D": [[n, m, value], ...]}
template <typename S>
DMatrix<S> dmatrix_from_json(const Json& j) {
    require_keys(j, {"D"}, "D matrix");
    DMatrix<S> dm;
    if (j.contains("D"))
        for (auto& e : j.at("D")) {
            if (!e.is_array() || e.size() != 3)
                throw std::invalid_argument("D matrix: entries are [n, m, value]");
            dm.set(e[0].get<int>(), e[1].get<int>(),
                   scalar_cast<S>(rational_from_json(e[2], "D entry")));
        }
    return dm;
}

template <typename S>
Json dmatrix_to_json(const DMatrix<S>& dm) {
    Json entries = Json::array();
    for (auto& [nm, v] : dm.entries)
        entries.push_back(Json::array({nm.first, nm.second, to_fraction_string(v)}));
    return Json{{"D", entries}};
}

/// Odd-indexed time assignments: {"1": value, "3": value, ...}; negative
/// keys address the bar family.
inline std::map<int, Rational> times_from_json(const Json& j) {
    std::map<int, Rational> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        int k = std::stoi(it.key());
        if (k == 0 || k % 2 == 0) throw std::invalid_argument("times take odd keys");
        out[k] = rational_from_json(it.value(), "times");
    }
    return out;
}

inline std::map<int, double> times_double_from_json(const Json& j) {
    std::map<int, double> out;
    for (auto& [k, v] : times_from_json(j)) out[k] = to_double(v);
    return out;
}

// ---------------------------------------------------------------------------
// Measures and deformations
// ---------------------------------------------------------------------------

/// {"kind": "A"|"B", "density": "braden"|"expdecay"|"uniform"|"atoms",
///  "r": ..., "theta": ..., "scale": ..., "atoms": [[z, w], ...]}
inline ContourMeasure measure_from_json(const Json& j) {
    require_keys(j, {"kind", "density", "r", "theta", "scale", "atoms"}, "measure");
    ContourMeasure cm;
    std::string kind = j.value("kind", "A");
    if (kind == "A")
        cm.kind = ContourKind::RealPositive;
    else if (kind == "B")
        cm.kind = ContourKind::CircleArc;
    else
        throw std::invalid_argument("measure: kind must be \"A\" or \"B\"");
    std::string density = j.value("density", "expdecay");
    if (density == "braden")
        cm.density = DensityKind::BradenExp;
    else if (density == "expdecay")
        cm.density = DensityKind::ExpDecay;
    else if (density == "uniform")
        cm.density = DensityKind::Uniform;
    else if (density == "atoms")
        cm.density = DensityKind::Atoms;
    else
        throw std::invalid_argument("measure: unknown density '" + density + "'");
    cm.r = j.value("r", 1.0);
    cm.theta = j.value("theta", M_PI / 2);
    cm.scale = j.value("scale", 1.0);
    if (j.contains("atoms"))
        for (auto& e : j.at("atoms"))
            cm.atoms.push_back({e[0].get<double>(), e[1].get<double>()});
    return cm;
}

/// {"t": {...}, "tbar": {...}} with odd positive keys.
inline DeformationTimes deformation_from_json(const Json& j) {
    require_keys(j, {"t", "tbar"}, "deformation");
    DeformationTimes dt;
    if (j.contains("t"))
        for (auto it = j.at("t").begin(); it != j.at("t").end(); ++it)
            dt.t[std::stoi(it.key())] = it.value().get<double>();
    if (j.contains("tbar"))
        for (auto it = j.at("tbar").begin(); it != j.at("tbar").end(); ++it)
            dt.tbar[std::stoi(it.key())] = it.value().get<double>();
    return dt;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace nbkp
