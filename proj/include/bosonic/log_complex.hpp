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

#ifndef BOSONIC_LOG_COMPLEX_HPP
#define BOSONIC_LOG_COMPLEX_HPP

#include <complex>
#include <cstdint>
#include <string>

namespace bosonic {

/// Wrap an angle into (-pi, pi].
double wrap_phase(double phase);

/// Complex number with an unbounded exponent range.
///
/// Stored as a normalized complex mantissa times 2^exponent, so values far
/// outside the double range (N! for large N, tiny amplitudes) survive. The
/// public view is (log_mag, phase); zero has log_mag = -inf and phase 0.
class LogComplex {
   public:
    LogComplex() = default;

    static LogComplex zero() {
        return LogComplex();
    }
    static LogComplex one();
    static LogComplex from_complex(std::complex<double> z);
    static LogComplex from_real(double x) {
        return from_complex({x, 0.0});
    }
    static LogComplex from_polar_log(double log_mag, double phase);
    /// exp(w) for a complex w.
    static LogComplex exp(std::complex<double> w);
    /// Build from a mantissa and a base-2 exponent, value = mantissa * 2^exp2.
    static LogComplex from_scaled(std::complex<double> mantissa, std::int64_t exp2);

    bool is_zero() const {
        return mantissa_ == std::complex<double>(0.0, 0.0);
    }
    double log_mag() const;
    double phase() const;
    double magnitude() const;
    std::complex<double> to_complex() const;
    /// Principal complex logarithm (log_mag + i phase). Zero maps to -inf.
    std::complex<double> log() const;

    std::complex<double> mantissa() const {
        return mantissa_;
    }
    std::int64_t exponent() const {
        return exp2_;
    }

    LogComplex conj() const;
    LogComplex pow(std::int64_t k) const;
    LogComplex sqrt() const;
    LogComplex operator-() const;

    LogComplex &operator*=(const LogComplex &other);
    LogComplex &operator/=(const LogComplex &other);
    LogComplex &operator+=(const LogComplex &other);
    LogComplex &operator-=(const LogComplex &other);

    friend LogComplex operator*(LogComplex a, const LogComplex &b) {
        return a *= b;
    }
    friend LogComplex operator/(LogComplex a, const LogComplex &b) {
        return a /= b;
    }
    friend LogComplex operator+(LogComplex a, const LogComplex &b) {
        return a += b;
    }
    friend LogComplex operator-(LogComplex a, const LogComplex &b) {
        return a -= b;
    }

    std::string str() const;

   private:
    void normalize();

    std::complex<double> mantissa_{0.0, 0.0};
    std::int64_t exp2_ = 0;
};

/// |a - b| / |b|, evaluated without leaving the scaled representation.
/// Returns 0 when both are zero and +inf when only b is zero.
double relative_error(const LogComplex &a, const LogComplex &b);

}  // namespace bosonic

#endif
