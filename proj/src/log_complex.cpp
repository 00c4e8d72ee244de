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

#include "bosonic/log_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bosonic/errors.hpp"

namespace bosonic {

namespace {

constexpr double kLn2 = std::numbers::ln2;

}  // namespace

double wrap_phase(double phase) {
    if (!std::isfinite(phase)) {
        return phase;
    }
    double r = std::remainder(phase, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) {
        r += 2.0 * std::numbers::pi;
    }
    return r;
}

void LogComplex::normalize() {
    double re = mantissa_.real();
    double im = mantissa_.imag();
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw Error(ErrorKind::InvalidArgument, "non-finite value in LogComplex");
    }
    if (re == 0.0 && im == 0.0) {
        mantissa_ = {0.0, 0.0};
        exp2_ = 0;
        return;
    }
    int e = 0;
    std::frexp(std::max(std::abs(re), std::abs(im)), &e);
    mantissa_ = {std::ldexp(re, -e), std::ldexp(im, -e)};
    exp2_ += e;
}

LogComplex LogComplex::one() {
    return from_complex({1.0, 0.0});
}

LogComplex LogComplex::from_complex(std::complex<double> z) {
    LogComplex r;
    r.mantissa_ = z;
    r.exp2_ = 0;
    r.normalize();
    return r;
}

LogComplex LogComplex::from_scaled(std::complex<double> mantissa, std::int64_t exp2) {
    LogComplex r;
    r.mantissa_ = mantissa;
    r.exp2_ = exp2;
    r.normalize();
    return r;
}

LogComplex LogComplex::from_polar_log(double log_mag, double phase) {
    if (log_mag == -std::numeric_limits<double>::infinity()) {
        return zero();
    }
    if (!std::isfinite(log_mag) || !std::isfinite(phase)) {
        throw Error(ErrorKind::InvalidArgument, "non-finite log magnitude or phase");
    }
    double k = std::floor(log_mag / kLn2);
    double rem = log_mag - k * kLn2;
    double mag = std::exp(rem);
    LogComplex r;
    r.mantissa_ = std::polar(mag, phase);
    r.exp2_ = static_cast<std::int64_t>(k);
    r.normalize();
    return r;
}

LogComplex LogComplex::exp(std::complex<double> w) {
    return from_polar_log(w.real(), w.imag());
}

double LogComplex::log_mag() const {
    if (is_zero()) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(std::abs(mantissa_)) + static_cast<double>(exp2_) * kLn2;
}

double LogComplex::phase() const {
    if (is_zero()) {
        return 0.0;
    }
    double a = std::arg(mantissa_);
    if (a <= -std::numbers::pi) {
        a = std::numbers::pi;
    }
    return a;
}

double LogComplex::magnitude() const {
    if (is_zero()) {
        return 0.0;
    }
    if (exp2_ > std::numeric_limits<int>::max()) {
        return std::numeric_limits<double>::infinity();
    }
    if (exp2_ < std::numeric_limits<int>::min()) {
        return 0.0;
    }
    return std::ldexp(std::abs(mantissa_), static_cast<int>(exp2_));
}

std::complex<double> LogComplex::to_complex() const {
    if (is_zero()) {
        return {0.0, 0.0};
    }
    std::int64_t e = std::clamp<std::int64_t>(exp2_, -100000, 100000);
    return {std::ldexp(mantissa_.real(), static_cast<int>(e)),
            std::ldexp(mantissa_.imag(), static_cast<int>(e))};
}

std::complex<double> LogComplex::log() const {
    return {log_mag(), phase()};
}

LogComplex LogComplex::conj() const {
    LogComplex r = *this;
    r.mantissa_ = std::conj(mantissa_);
    r.normalize();
    return r;
}

LogComplex LogComplex::operator-() const {
    LogComplex r = *this;
    r.mantissa_ = -mantissa_;
    return r;
}

LogComplex &LogComplex::operator*=(const LogComplex &other) {
    mantissa_ *= other.mantissa_;
    exp2_ += other.exp2_;
    normalize();
    return *this;
}

LogComplex &LogComplex::operator/=(const LogComplex &other) {
    if (other.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "division by zero LogComplex");
    }
    mantissa_ /= other.mantissa_;
    exp2_ -= other.exp2_;
    normalize();
    return *this;
}

LogComplex &LogComplex::operator+=(const LogComplex &other) {
    if (other.is_zero()) {
        return *this;
    }
    if (is_zero()) {
        *this = other;
        return *this;
    }
    std::int64_t e = std::max(exp2_, other.exp2_);
    auto shift = [e](const LogComplex &v) -> std::complex<double> {
        std::int64_t d = v.exp2_ - e;
        if (d < -1100) {
            return {0.0, 0.0};
        }
        return {std::ldexp(v.mantissa_.real(), static_cast<int>(d)),
                std::ldexp(v.mantissa_.imag(), static_cast<int>(d))};
    };
    mantissa_ = shift(*this) + shift(other);
    exp2_ = e;
    normalize();
    return *this;
}

LogComplex &LogComplex::operator-=(const LogComplex &other) {
    return *this += -other;
}

LogComplex LogComplex::pow(std::int64_t k) const {
    if (k < 0) {
        return one() / pow(-k);
    }
    LogComplex result = one();
    LogComplex base = *this;
    while (k > 0) {
        if (k & 1) {
            result *= base;
        }
        k >>= 1;
        if (k > 0) {
            base *= base;
        }
    }
    return result;
}

LogComplex LogComplex::sqrt() const {
    if (is_zero()) {
        return zero();
    }
    std::complex<double> m = mantissa_;
    std::int64_t e = exp2_;
    if (e % 2 != 0) {
        m *= 2.0;
        e -= 1;
    }
    return from_scaled(std::sqrt(m), e / 2);
}

std::string LogComplex::str() const {
    std::ostringstream out;
    out.precision(17);
    out << "exp(" << log_mag() << ")*e^(i*" << phase() << ")";
    return out.str();
}

double relative_error(const LogComplex &a, const LogComplex &b) {
    if (b.is_zero()) {
        return a.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
    }
    LogComplex diff = a - b;
    if (diff.is_zero()) {
        return 0.0;
    }
    return std::exp(diff.log_mag() - b.log_mag());
}

}  // namespace bosonic
