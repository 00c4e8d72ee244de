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
#include <limits>
#include <numbers>
#include <random>

#include "bosonic/errors.hpp"
#include "bosonic/log_complex.hpp"
#include "doctest.h"

using bosonic::LogComplex;
using cd = std::complex<double>;

TEST_CASE("log_complex round trip is exact for doubles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        cd z(d(rng), d(rng));
        CHECK(LogComplex::from_complex(z).to_complex() == z);
    }
    CHECK(LogComplex::from_complex({1e-300, -3e-310}).to_complex() == cd(1e-300, -3e-310));
}

TEST_CASE("zero has log_mag -inf and phase 0") {
    LogComplex z;
    CHECK(z.is_zero());
    CHECK(z.log_mag() == -std::numeric_limits<double>::infinity());
    CHECK(z.phase() == 0.0);
    CHECK((z + LogComplex::from_real(2.0)).to_complex() == cd(2.0, 0.0));
    CHECK((LogComplex::from_real(3.0) - LogComplex::from_real(3.0)).is_zero());
}

TEST_CASE("arithmetic matches std::complex") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        cd a(d(rng), d(rng)), b(d(rng), d(rng));
        auto la = LogComplex::from_complex(a), lb = LogComplex::from_complex(b);
        CHECK(std::abs((la * lb).to_complex() - a * b) <= 1e-14 * std::abs(a * b));
        CHECK(std::abs((la / lb).to_complex() - a / b) <= 1e-14 * std::abs(a / b));
        CHECK(std::abs((la + lb).to_complex() - (a + b)) <= 1e-14 * (std::abs(a) + std::abs(b)));
        CHECK(std::abs((la - lb).to_complex() - (a - b)) <= 1e-14 * (std::abs(a) + std::abs(b)));
        CHECK(std::abs(la.sqrt().to_complex() - std::sqrt(a)) <= 1e-14 * std::sqrt(std::abs(a)));
        CHECK(std::abs(la.log() - std::log(a)) <= 1e-13);
    }
}

TEST_CASE("values far outside the double range") {
    // 1000! and its reciprocal.
    LogComplex f = LogComplex::one();
    for (int i = 2; i <= 1000; ++i) {
        f *= LogComplex::from_real(i);
    }
    CHECK(f.log_mag() == doctest::Approx(std::lgamma(1001.0)).epsilon(1e-13));
    LogComplex inv = LogComplex::one() / f;
    CHECK(inv.log_mag() == doctest::Approx(-std::lgamma(1001.0)).epsilon(1e-13));
    CHECK(std::abs((f * inv).to_complex() - cd(1.0)) < 1e-12);
    CHECK(inv.to_complex() == cd(0.0, 0.0));
}

TEST_CASE("pow agrees with repeated multiplication and exp") {
    auto z = LogComplex::from_complex({0.3, -1.7});
    LogComplex rep = LogComplex::one();
    for (int i = 0; i < 137; ++i) {
        rep *= z;
    }
    CHECK(bosonic::relative_error(z.pow(137), rep) < 1e-12);
    CHECK(bosonic::relative_error(z.pow(-5), LogComplex::one() / z.pow(5)) < 1e-14);
    auto e = LogComplex::exp({2000.0, 1.0});
    CHECK(e.log_mag() == doctest::Approx(2000.0));
    CHECK(e.phase() == doctest::Approx(1.0));
}

TEST_CASE("phase lies in (-pi, pi]") {
    CHECK(LogComplex::from_real(-1.0).phase() == doctest::Approx(std::numbers::pi));
    CHECK(bosonic::wrap_phase(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(bosonic::wrap_phase(7.0) == doctest::Approx(7.0 - 2.0 * std::numbers::pi));
    auto p = LogComplex::from_polar_log(-5000.0, 3.0 * std::numbers::pi / 2.0);
    CHECK(p.phase() == doctest::Approx(-std::numbers::pi / 2.0));
}

TEST_CASE("relative_error conventions") {
    CHECK(bosonic::relative_error(LogComplex::zero(), LogComplex::zero()) == 0.0);
    CHECK(std::isinf(bosonic::relative_error(LogComplex::one(), LogComplex::zero())));
    CHECK(bosonic::relative_error(LogComplex::zero(), LogComplex::one()) == 1.0);
    auto a = LogComplex::from_polar_log(-3000.0, 0.0);
    auto b = LogComplex::from_polar_log(-3000.0 + 1e-3, 0.0);
    CHECK(bosonic::relative_error(a, b) == doctest::Approx(1.0 - std::exp(-1e-3)).epsilon(1e-9));
}
