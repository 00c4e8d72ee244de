// Copyright 2026 The bosonic-saddle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <set>

#include "bosonic/combinatorics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bosonic;

TEST_CASE("binomials and factorials") {
    CHECK(binomial_u64(10, 3) == 120);
    CHECK(binomial_u64(60, 30) == 118264581564861424ULL);
    CHECK(binomial_u64(5, 7) == 0);
    CHECK(binomial_u64(200, 100) == UINT64_MAX);
    CHECK(log_factorial(0) == 0.0);
    CHECK(log_factorial(20) == doctest::Approx(std::log(2432902008176640000.0)).epsilon(1e-15));
}

TEST_CASE("output configuration count and order") {
    for (int dim = 1; dim <= 4; ++dim) {
        for (int total = 0; total <= 6; ++total) {
            auto all = enumerate_output_configs(dim, total);
            CHECK(all.size() == count_output_configs(dim, total));
            CHECK(all.size() == oracle::compositions(dim, total).size());
            CHECK(std::is_sorted(all.begin(), all.end()));
            CHECK(std::set<Occupation>(all.begin(), all.end()).size() == all.size());
            for (const auto &o : all) {
                CHECK(o.total() == total);
            }
        }
    }
    CHECK(count_output_configs(3, 60) == 1891);
    CHECK(enumerate_output_configs(2, 2).front() == Occupation{0, 2});
    CHECK(count_output_configs(200, 200) == UINT64_MAX);
}

TEST_CASE("contingency tables agree with brute force") {
    const std::vector<std::pair<Occupation, Occupation>> cases = {
        {{2, 1}, {1, 2}}, {{3, 0}, {1, 2}}, {{2, 2, 1}, {1, 3, 1}}, {{1, 1, 1}, {1, 1, 1}}, {{0, 4, 1}, {2, 0, 3}}};
    for (const auto &[n, m] : cases) {
        auto tables = enumerate_contingency_tables(n, m);
        auto brute = oracle::brute_tables(n.counts(), m.counts());
        CHECK(tables.size() == brute.size());
        CHECK(count_contingency_tables(n, m) == brute.size());
        std::set<std::vector<int>> seen;
        for (const auto &t : tables) {
            std::vector<int> flat;
            for (int k = 0; k < n.size(); ++k) {
                int rs = 0;
                for (int l = 0; l < n.size(); ++l) {
                    flat.push_back(t(k, l));
                    rs += t(k, l);
                    CHECK(t(k, l) >= 0);
                }
                CHECK(rs == n[k]);
            }
            seen.insert(flat);
        }
        CHECK(seen == std::set<std::vector<int>>(brute.begin(), brute.end()));
    }
}

TEST_CASE("Fisher-Yates probabilities sum to one") {
    for (auto [n, m] : std::vector<std::pair<Occupation, Occupation>>{
             {{2, 3}, {4, 1}}, {{2, 2, 2}, {3, 1, 2}}, {{1, 0, 3, 2}, {2, 2, 1, 1}}}) {
        double s = 0.0;
        ContingencyEnumerator it(n, m);
        while (auto t = it.next()) {
            s += fisher_yates_probability(*t);
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("crossed-column counts") {
    // prod (1 + z + ... + z^{m_k}) for m = (2, 1): 1 + 2z + 2z^2 + z^3.
    auto c = count_tables_by_crossed_columns(Occupation{2, 1});
    CHECK(c == std::vector<std::uint64_t>{1, 2, 2, 1});
    std::uint64_t total = 0;
    Occupation m{3, 2, 4};
    for (auto v : count_tables_by_crossed_columns(m)) {
        total += v;
    }
    CHECK(total == 4 * 3 * 5);
}
