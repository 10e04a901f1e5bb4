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

#include <algorithm>
#include <string>
#include <vector>

#include "nbkp/rational.hpp"

namespace nbkp {

/**
 * A strict partition: strictly decreasing nonnegative parts, with at most one
 * trailing zero part allowed (the zero acts as padding for even-length
 * Pfaffian indexing and is ignored by length/weight).
 */
class StrictPartition {
  public:
    StrictPartition() = default;

    explicit StrictPartition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (std::size_t i = 0; i + 1 < parts_.size(); ++i) {
            if (parts_[i] <= parts_[i + 1])
                throw std::invalid_argument("parts must be strictly decreasing");
        }
        if (!parts_.empty() && parts_.back() < 0)
            throw std::invalid_argument("parts must be nonnegative");
    }

    static StrictPartition empty() { return StrictPartition(); }

    const std::vector<int>& parts() const { return parts_; }

    /// Number of nonzero parts.
    int length() const {
        int l = static_cast<int>(parts_.size());
        if (l > 0 && parts_.back() == 0) --l;
        return l;
    }

    bool has_zero_part() const { return !parts_.empty() && parts_.back() == 0; }

    long weight() const {
        long w = 0;
        for (int p : parts_) w += p;
        return w;
    }

    /// The nonzero parts only.
    std::vector<int> positive_parts() const {
        std::vector<int> v(parts_.begin(), parts_.begin() + length());
        return v;
    }

    /// Copy with a zero part appended (for even-length Pfaffian indexing).
    StrictPartition padded_even() const {
        if (length() % 2 == 0 && !has_zero_part()) return StrictPartition(positive_parts());
        std::vector<int> v = positive_parts();
        if (v.size() % 2 == 1) v.push_back(0);
        return StrictPartition(std::move(v));
    }

    bool operator==(const StrictPartition& o) const { return positive_parts() == o.positive_parts(); }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

  private:
    std::vector<int> parts_;
};

/// Fixed enumeration order: by weight, then lexicographically on the part list.
inline bool graded_lex_less(const StrictPartition& a, const StrictPartition& b) {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a.positive_parts() < b.positive_parts();
}

namespace detail {

inline void collect_dp(int max_part, int max_length, int next_max, std::vector<int>& cur,
                       std::vector<StrictPartition>& out) {
    out.emplace_back(cur);
    if (static_cast<int>(cur.size()) >= max_length) return;
    for (int p = next_max; p >= 1; --p) {
        cur.push_back(p);
        collect_dp(max_part, max_length, p - 1, cur, out);
        cur.pop_back();
    }
}

inline void collect_gap2(int max_part, int max_length, int next_max, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) >= max_length) return;
    for (int p = next_max; p >= 1; --p) {
        cur.push_back(p);
        collect_gap2(max_part, max_length, p - 2, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

/// All strict partitions with parts <= max_part and length <= max_length,
/// including the empty partition, in graded-lex order.
inline std::vector<StrictPartition> enumerate_dp(int max_part, int max_length) {
    if (max_part < 0 || max_length < 0) throw std::invalid_argument("negative enumeration bound");
    std::vector<StrictPartition> out;
    std::vector<int> cur;
    detail::collect_dp(max_part, max_length, max_part, cur, out);
    std::sort(out.begin(), out.end(), graded_lex_less);
    return out;
}

/// Strict partitions with positive parts and gaps >= 2 between consecutive
/// parts (the set indexing the beta=4-type specialization).
inline std::vector<StrictPartition> enumerate_dp_prime(int max_part, int max_length) {
    if (max_part < 0 || max_length < 0) throw std::invalid_argument("negative enumeration bound");
    std::vector<std::vector<int>> raw;
    std::vector<int> cur;
    detail::collect_gap2(max_part, max_length, max_part, cur, raw);
    std::vector<StrictPartition> out;
    out.reserve(raw.size());
    for (auto& v : raw) out.emplace_back(std::move(v));
    std::sort(out.begin(), out.end(), graded_lex_less);
    return out;
}

/// Partitions built from pairs (b, b-1) with strictly separated pair heads:
/// shapes (b1, b1-1, b2, b2-1, ...) with largest part <= max_part. The pair
/// lower members form a gap->=2 partition and vice versa.
inline std::vector<StrictPartition> enumerate_dp2(int max_part) {
    if (max_part < 1) throw std::invalid_argument("enumerate_dp2 requires max_part >= 1");
    std::vector<StrictPartition> out;
    for (const auto& lowers : enumerate_dp_prime(max_part - 1, max_part)) {
        std::vector<int> shape;
        for (int a : lowers.parts()) {
            shape.push_back(a + 1);
            shape.push_back(a);
        }
        out.emplace_back(std::move(shape));
    }
    std::sort(out.begin(), out.end(), graded_lex_less);
    return out;
}

/// The pair lower members of a DP^2 shape, e.g. (4,3,2,1) -> (3,1).
inline StrictPartition dp2_pair_lowers(const StrictPartition& alpha) {
    const auto parts = alpha.positive_parts();
    if (parts.size() % 2 != 0) throw std::invalid_argument("not a DP^2 shape");
    std::vector<int> lowers;
    for (std::size_t i = 0; i < parts.size(); i += 2) {
        if (parts[i] != parts[i + 1] + 1) throw std::invalid_argument("not a DP^2 shape");
        lowers.push_back(parts[i + 1]);
    }
    return StrictPartition(std::move(lowers));
}

/// prod_{i<j} (z_i - z_j)/(z_i + z_j) over the list in the given order.
/// Antisymmetric under transpositions; empty and singleton lists give 1.
template <typename T>
T delta_star_values(const std::vector<T>& z) {
    T acc(1);
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            T den = z[i] + z[j];
            if (den == T(0)) throw std::domain_error("delta_star: z_i + z_j = 0");
            acc *= (z[i] - z[j]) / den;
        }
    return acc;
}

/// Delta*(alpha) over the nonzero parts; a zero part is padding and ignored.
inline Rational delta_star(const StrictPartition& alpha) {
    std::vector<Rational> z;
    for (int p : alpha.positive_parts()) z.emplace_back(p);
    return delta_star_values(z);
}

/// prod_{i<j} (a_i-a_j)^2((a_i-a_j)^2-1) / [(a_i+a_j)^2((a_i+a_j)^2-1)],
/// over the nonzero parts.
inline Rational delta_star_tilde4(const StrictPartition& alpha) {
    const auto parts = alpha.positive_parts();
    Rational acc(1);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            Rational d(parts[i] - parts[j]), s(parts[i] + parts[j]);
            Rational den = s * s * (s * s - 1);
            if (den == 0) throw std::domain_error("delta_star_tilde4: degenerate pair sum");
            acc *= d * d * (d * d - 1) / den;
        }
    return acc;
}

}  // namespace nbkp
