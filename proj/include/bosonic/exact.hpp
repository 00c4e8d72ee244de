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

#ifndef BOSONIC_EXACT_HPP
#define BOSONIC_EXACT_HPP

#include <cstdint>

#include "bosonic/log_complex.hpp"
#include "bosonic/network.hpp"

namespace bosonic {

/// U[n|m]: row k repeated n_k times, column l repeated m_l times, never materialized.
///
/// The base matrix is a general square matrix so that the same kernel serves
/// |U|^2 for classical probabilities.
struct RepeatedMatrixSpec {
    ComplexMatrix base;
    Occupation row_reps;
    Occupation col_reps;

    RepeatedMatrixSpec(ComplexMatrix base_matrix, Occupation n, Occupation m);
    RepeatedMatrixSpec(const NetworkMatrix &u, Occupation n, Occupation m)
        : RepeatedMatrixSpec(u.matrix(), std::move(n), std::move(m)) {
    }

    int total() const {
        return row_reps.total();
    }
    /// The explicit N x N matrix (for the naive oracle).
    ComplexMatrix materialize() const;
};

enum class Arithmetic {
    /// Double precision first, extended precision when the cancellation estimate demands it.
    Auto,
    /// Double precision only.
    Double,
    /// MPFR at a fixed number of bits.
    Extended,
};

struct RyserOptions {
    Arithmetic arithmetic = Arithmetic::Auto;
    int extended_bits = 256;
    int max_bits = 16384;
    /// Target relative accuracy of the permanent.
    double rel_tol = 1e-13;
    /// Absolute accuracy target of per / sqrt(prod n! m!); tiny amplitudes stop escalating here.
    double abs_amplitude_tol = 1e-30;
};

struct RyserStats {
    std::uint64_t terms = 0;
    std::uint64_t multiplications = 0;
    std::uint64_t additions = 0;
    int precision_bits = 53;
    int passes = 0;
    /// log10 of (sum of term majorants / |result|).
    double cancellation_digits = 0.0;
    /// Estimated relative error bound of the returned value.
    double error_bound = 0.0;
    bool reached_tolerance = true;

    std::uint64_t operations() const {
        return multiplications + additions;
    }
};

/// Permanent by enumeration of all n! permutations. n <= 10.
LogComplex permanent_naive(const ComplexMatrix &a);

/// Permanent of U[n|m] by the inclusion-exclusion sum over crossed-out column counts.
LogComplex permanent_ryser_repeated(const RepeatedMatrixSpec &spec, const RyserOptions &options = {},
                                    RyserStats *stats = nullptr);

/// per(U[n|m]) / sqrt(prod n_k! m_k!).
LogComplex amplitude_exact(const NetworkMatrix &u, const Occupation &n, const Occupation &m,
                           const RyserOptions &options = {}, RyserStats *stats = nullptr);

/// N! times the Fisher-Yates average of prod U^S, normalized as an amplitude. N <= 8.
LogComplex amplitude_via_contingency_average(const NetworkMatrix &u, const Occupation &n, const Occupation &m);

/// per(|U|^2[n|m]) / prod m_k!.
double classical_probability(const NetworkMatrix &u, const Occupation &n, const Occupation &m,
                             const RyserOptions &options = {});

struct FlopEstimate {
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
};

/// N (prod(m_k + 1) - 1) and M N (prod(m_k + 1) - 1), saturating.
FlopEstimate flop_estimate(const Occupation &n, const Occupation &m);

}  // namespace bosonic

#endif
