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

#include <algorithm>
#include <random>
#include <set>

#include "nbkp/partitions.hpp"

using namespace nbkp;

namespace {
std::set<std::vector<int>> as_set(const std::vector<StrictPartition>& v) {
    std::set<std::vector<int>> s;
    for (auto& p : v) s.insert(p.positive_parts());
    return s;
}
}  // namespace

TEST_CASE("strict partition validation") {
    CHECK_NOTHROW(StrictPartition({4, 2, 1}));
    CHECK_NOTHROW(StrictPartition({3, 0}));
    CHECK_THROWS_AS(StrictPartition({3, 3}), std::invalid_argument);
    CHECK_THROWS_AS(StrictPartition({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(StrictPartition({0, 0}), std::invalid_argument);

    StrictPartition p({4, 2, 0});
    CHECK(p.length() == 2);
    CHECK(p.weight() == 6);
    CHECK(p.has_zero_part());
    CHECK(p.positive_parts() == std::vector<int>{4, 2});
}

TEST_CASE("enumerate_dp examples") {
    CHECK(as_set(enumerate_dp(2, 2)) ==
          std::set<std::vector<int>>{{}, {1}, {2}, {2, 1}});
    CHECK(as_set(enumerate_dp(0, 5)) == std::set<std::vector<int>>{{}});

    auto dp42 = enumerate_dp(4, 2);
    CHECK(dp42.size() == 11);
    CHECK(as_set(dp42) == std::set<std::vector<int>>{{},
                                                     {1},
                                                     {2},
                                                     {3},
                                                     {4},
                                                     {2, 1},
                                                     {3, 1},
                                                     {4, 1},
                                                     {3, 2},
                                                     {4, 2},
                                                     {4, 3}});
    // enumeration order is graded by weight
    for (std::size_t i = 0; i + 1 < dp42.size(); ++i)
        CHECK(dp42[i].weight() <= dp42[i + 1].weight());
}

TEST_CASE("enumerate_dp completeness against bitmask oracle") {
    for (int L = 0; L <= 12; ++L) {
        // independent oracle: subsets of {1..L} are exactly the strict
        // partitions with parts <= L and length <= L
        std::size_t expected = std::size_t{1} << L;
        CHECK(enumerate_dp(L, L).size() == expected);
    }
}

TEST_CASE("enumerate_dp2 examples") {
    CHECK(as_set(enumerate_dp2(2)) == std::set<std::vector<int>>{{}, {2, 1}});
    CHECK(as_set(enumerate_dp2(4)) ==
          std::set<std::vector<int>>{{}, {2, 1}, {3, 2}, {4, 3}, {4, 3, 2, 1}});
    CHECK(as_set(enumerate_dp2(1)) == std::set<std::vector<int>>{{}});
}

TEST_CASE("enumerate_dp_prime examples") {
    CHECK(as_set(enumerate_dp_prime(3, 2)) ==
          std::set<std::vector<int>>{{}, {1}, {2}, {3}, {3, 1}});
    CHECK(as_set(enumerate_dp_prime(5, 2)) ==
          std::set<std::vector<int>>{{},
                                     {1},
                                     {2},
                                     {3},
                                     {4},
                                     {5},
                                     {3, 1},
                                     {4, 1},
                                     {4, 2},
                                     {5, 1},
                                     {5, 2},
                                     {5, 3}});
    CHECK(as_set(enumerate_dp_prime(1, 1)) == std::set<std::vector<int>>{{}, {1}});
}

TEST_CASE("DP2 and DP' are in bijection via pair lowers") {
    for (int bound = 2; bound <= 10; ++bound) {
        auto dp2 = enumerate_dp2(bound);
        std::set<std::vector<int>> lowers;
        for (auto& shape : dp2) lowers.insert(dp2_pair_lowers(shape).positive_parts());
        CHECK(lowers.size() == dp2.size());
        CHECK(lowers == as_set(enumerate_dp_prime(bound - 1, bound)));
    }
}

TEST_CASE("delta_star examples") {
    CHECK(delta_star(StrictPartition({2, 1})) == Rational(1, 3));
    CHECK(delta_star(StrictPartition({5})) == Rational(1));
    CHECK(delta_star(StrictPartition({3, 2, 1})) == Rational(1, 30));
    CHECK(delta_star(StrictPartition()) == Rational(1));
    // the trailing zero part is padding
    CHECK(delta_star(StrictPartition({2, 1, 0})) == Rational(1, 3));
}

TEST_CASE("delta_star magnitude and antisymmetry") {
    std::mt19937 rng(20260810);
    for (int rep = 0; rep < 50; ++rep) {
        int len = 2 + static_cast<int>(rng() % 4);
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < len) chosen.insert(1 + static_cast<int>(rng() % 20));
        std::vector<Rational> z(chosen.begin(), chosen.end());
        Rational d = delta_star_values(z);
        CHECK(abs(d) < 1);
        // any single transposition flips the sign
        std::vector<Rational> zs = z;
        std::swap(zs[0], zs[len - 1]);
        CHECK(delta_star_values(zs) == -d);
    }
}

TEST_CASE("delta_star_tilde4 examples") {
    CHECK(delta_star_tilde4(StrictPartition({3, 1})) == Rational(1, 20));
    CHECK(delta_star_tilde4(StrictPartition({4})) == Rational(1));
    CHECK(delta_star_tilde4(StrictPartition({5, 3})) == Rational(1, 336));
}
