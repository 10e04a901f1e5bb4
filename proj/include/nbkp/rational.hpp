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

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <stdexcept>
#include <string>

namespace nbkp {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "p/q", "p", or "-p/q". Throws std::invalid_argument on garbage.
inline Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    try {
        Rational r(s);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

inline std::string to_fraction_string(const Rational& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

inline Rational factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative integer");
    Int f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return Rational(f);
}

inline Rational pow_rational(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0 && e < 0) throw std::domain_error("0 raised to negative power");
    Rational b = e > 0 ? base : Rational(1) / base;
    long n = e > 0 ? e : -e;
    Rational acc(1);
    while (n > 0) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

inline int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

/// Rational -> scalar conversion used by code generic over exact/float kinds.
template <typename S>
S scalar_cast(const Rational& r) {
    if constexpr (std::is_same_v<S, Rational>) {
        return r;
    } else if constexpr (std::is_same_v<S, double>) {
        return to_double(r);
    } else if constexpr (std::is_same_v<S, Complex>) {
        return Complex(to_double(r), 0.0);
    } else {
        return S(r);
    }
}

}  // namespace nbkp
