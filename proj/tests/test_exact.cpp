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

#include <cmath>

#include "bosonic/combinatorics.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/exact.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bosonic;

TEST_CASE("naive permanent on small matrices") {
    ComplexMatrix a(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    CHECK(permanent_naive(a).to_complex() == std::complex<double>(10.0, 0.0));
    ComplexMatrix ones = ComplexMatrix::Ones(5, 5);
    CHECK(permanent_naive(ones).to_complex().real() == doctest::Approx(120.0));
    CHECK_THROWS_AS(permanent_naive(ComplexMatrix::Ones(11, 11)), Error);
}

TEST_CASE("ryser matches the polynomial expansion") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        for (int dim : {2, 3, 4}) {
            auto u = haar_random_unitary(dim, seed);
            for (int total : {1, 3, 5}) {
                for (const auto &n : enumerate_output_configs(dim, total)) {
                    if (seed % 2 == 1 && dim == 4) {
                        break;
                    }
                    for (const auto &m : enumerate_output_configs(dim, total)) {
                        auto got = amplitude_exact(u, n, m).to_complex();
                        auto want = oracle::amplitude_by_expansion(u.matrix(), n.counts(), m.counts());
                        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
                    }
                }
            }
        }
    }
}

TEST_CASE("unitarity: output probabilities sum to one") {
    auto u = haar_random_unitary(3, 9);
    Occupation n{4, 3, 2};
    double s = 0.0;
    for (const auto &m : enumerate_output_configs(3, 9)) {
        s += std::norm(amplitude_exact(u, n, m).to_complex());
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("HOM amplitude is exactly zero") {
    auto a = amplitude_exact(symmetric_beam_splitter(), Occupation{1, 1}, Occupation{1, 1});
    CHECK(a.is_zero());
}

TEST_CASE("identity network") {
    auto id = identity_network(3);
    CHECK(amplitude_exact(id, Occupation{2, 0, 3}, Occupation{2, 0, 3}).to_complex().real() == doctest::Approx(1.0));
    CHECK(amplitude_exact(id, Occupation{2, 0, 3}, Occupation{3, 0, 2}).is_zero());
}

TEST_CASE("arithmetic modes agree; extended precision rescues cancellation") {
    auto u = haar_random_unitary(3, 5);
    Occupation n{5, 4, 3}, m{2, 6, 4};
    RyserOptions dbl;
    dbl.arithmetic = Arithmetic::Double;
    RyserOptions ext;
    ext.arithmetic = Arithmetic::Extended;
    ext.extended_bits = 200;
    RyserStats dstats;
    auto a = amplitude_exact(u, n, m, dbl, &dstats);
    auto b = amplitude_exact(u, n, m, ext);
    auto c = amplitude_exact(u, n, m);
    CHECK(relative_error(a, b) <= dstats.error_bound);
    CHECK(relative_error(c, b) < 1e-13);

    // n = (N/2, N/2) through the beam splitter at N = 80: heavy cancellation.
    RyserStats stats;
    auto bs = symmetric_beam_splitter();
    auto big = amplitude_exact(bs, Occupation{40, 40}, Occupation{38, 42}, {}, &stats);
    RyserOptions hi;
    hi.arithmetic = Arithmetic::Extended;
    hi.extended_bits = 1024;
    auto ref = amplitude_exact(bs, Occupation{40, 40}, Occupation{38, 42}, hi);
    CHECK(relative_error(big, ref) < 1e-12);
    CHECK(stats.reached_tolerance);
    CHECK(stats.precision_bits >= 53);
}

TEST_CASE("contingency average equals ryser") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto u = haar_random_unitary(3, seed + 100);
        Occupation n{2, 1, 3}, m{3, 2, 1};
        CHECK(relative_error(amplitude_via_contingency_average(u, n, m), amplitude_exact(u, n, m)) < 1e-12);
    }
    CHECK_THROWS_AS(amplitude_via_contingency_average(haar_random_unitary(2, 0), Occupation{5, 4}, Occupation{4, 5}),
                    Error);
}

TEST_CASE("classical probability") {
    // Bell multiport: N!/(M^N prod m!).
    auto b = bell_multiport(3);
    Occupation n{2, 2, 3}, m{1, 4, 2};
    double want = 5040.0 / (std::pow(3.0, 7) * 1 * 24 * 2);
    CHECK(classical_probability(b, n, m) == doctest::Approx(want).epsilon(1e-13));
    // Distinguishable particles: probabilities sum to one.
    auto u = haar_random_unitary(3, 3);
    double s = 0.0;
    for (const auto &o : enumerate_output_configs(3, 5)) {
        s += classical_probability(u, Occupation{1, 2, 2}, o);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("operation counts are bracketed by the flop estimate") {
    for (auto [n, m] : std::vector<std::pair<Occupation, Occupation>>{
             {{6, 4}, {5, 5}}, {{5, 5, 5}, {5, 5, 5}}, {{2, 7, 1, 2}, {3, 3, 3, 3}}}) {
        RyserStats st;
        RyserOptions o;
        o.arithmetic = Arithmetic::Double;
        permanent_ryser_repeated(RepeatedMatrixSpec(haar_random_unitary(n.size(), 1), n, m), o, &st);
        auto f = flop_estimate(n, m);
        std::uint64_t terms = 1;
        for (int v : m.counts()) {
            terms *= static_cast<std::uint64_t>(v + 1);
        }
        CHECK(st.terms == terms - 1);
        CHECK(f.lower <= st.operations());
        CHECK(st.operations() <= f.upper);
    }
}

TEST_CASE("invalid inputs") {
    auto u = haar_random_unitary(2, 0);
    CHECK_THROWS_AS(amplitude_exact(u, Occupation{1, 2}, Occupation{2, 2}), Error);
    CHECK_THROWS_AS(amplitude_exact(u, Occupation{1, 2, 0}, Occupation{2, 1, 0}), Error);
}
