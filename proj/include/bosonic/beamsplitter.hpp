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

#ifndef BOSONIC_BEAMSPLITTER_HPP
#define BOSONIC_BEAMSPLITTER_HPP

#include <array>
#include <complex>
#include <string>

#include "bosonic/log_complex.hpp"
#include "bosonic/scaling.hpp"

namespace bosonic {

/// Closed forms for the symmetric beam splitter [[-1, 1], [1, 1]] / sqrt(2).

enum class Regime { Oscillatory, Decay, Coalescing };

const char *to_string(Regime regime);

struct BeamSplitterCase {
    int n1 = 0, n2 = 0, m1 = 0, m2 = 0;
    /// (m2 - m1) / (2 sqrt(n1 n2)); infinite when n1 n2 = 0 and m1 != m2.
    double gamma = 0.0;
    /// (n2 - n1) / (2 sqrt(m1 m2)).
    double sigma = 0.0;
    Regime regime = Regime::Oscillatory;

    static BeamSplitterCase make(int n1, int n2, int m1, int m2, double band = 13.0);
    int total() const {
        return n1 + n2;
    }
    int delta_n() const {
        return n2 - n1;
    }
    int delta_m() const {
        return m2 - m1;
    }
    Occupation n() const {
        return Occupation{n1, n2};
    }
    Occupation m() const {
        return Occupation{m1, m2};
    }
};

/// Oscillatory when gamma^2 < 1, Decay when gamma^2 > 1, Coalescing when |gamma^2 - 1| <= band / N.
Regime classify_regime(const BeamSplitterCase &c, double band = 13.0);

/// N^2 - dn^2 - dm^2 in exact integer arithmetic (= 4 n1 n2 (1 - gamma^2)).
long long transition_discriminant(const BeamSplitterCase &c);

/// Phases of one analytic saddle.
struct BeamSplitterPhases {
    std::complex<double> e_i_phi;    // R_1 = sqrt(n2/n1) x1/x2
    std::complex<double> e_i_psi;    // sqrt(m2/m1) y1/y2
    std::complex<double> e_i_delta;  // N y1 y2 / sqrt(m1 m2)
};

/// saddle_index 0 takes the upper signs (e^{i phi} = gamma - i sqrt(1 - gamma^2)), 1 the lower.
BeamSplitterPhases analytic_phases(const BeamSplitterCase &c, int saddle_index);

/// Both saddles from the closed forms, in the canonical gauge.
std::array<SaddleSolution, 2> analytic_saddles(const BeamSplitterCase &c);

/// p_11, p_12, p_21, p_22 written directly in terms of gamma.
ComplexMatrix analytic_p(const BeamSplitterCase &c, int saddle_index);

/// Closed-form det(D') for the saddle (last index crossed out).
std::complex<double> analytic_det(const BeamSplitterCase &c, int saddle_index);

/// sqrt(m1! m2!/(n1! n2!)) 2^{-N/2} sum_q (-1)^q C(n1, q) C(n2, m1 - q), summed exactly.
LogComplex amplitude_exact_bs(const BeamSplitterCase &c);

/// The saddle-point amplitude built only from the closed forms.
LogComplex amplitude_analytic_bs(const BeamSplitterCase &c, double cancellation_ulps = 16.0);

}  // namespace bosonic

#endif
