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

#include "bosonic/beamsplitter.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>

#include "bosonic/combinatorics.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/saddle.hpp"

namespace bosonic {

using cd = std::complex<double>;

const char *to_string(Regime regime) {
    switch (regime) {
        case Regime::Oscillatory:
            return "oscillatory";
        case Regime::Decay:
            return "decay";
        case Regime::Coalescing:
            return "coalescing";
    }
    return "unknown";
}

BeamSplitterCase BeamSplitterCase::make(int n1, int n2, int m1, int m2, double band) {
    if (n1 < 0 || n2 < 0 || m1 < 0 || m2 < 0) {
        throw Error(ErrorKind::InvalidArgument, "occupations must be non-negative");
    }
    if (n1 + n2 != m1 + m2) {
        throw Error(ErrorKind::MarginMismatch, "input and output photon numbers differ");
    }
    BeamSplitterCase c;
    c.n1 = n1;
    c.n2 = n2;
    c.m1 = m1;
    c.m2 = m2;
    const double inf = std::numeric_limits<double>::infinity();
    double dn = n2 - n1, dm = m2 - m1;
    c.gamma = n1 > 0 && n2 > 0 ? dm / (2.0 * std::sqrt(double(n1) * n2)) : (dm == 0 ? 0.0 : inf);
    c.sigma = m1 > 0 && m2 > 0 ? dn / (2.0 * std::sqrt(double(m1) * m2)) : (dn == 0 ? 0.0 : inf);
    c.regime = classify_regime(c, band);
    return c;
}

Regime classify_regime(const BeamSplitterCase &c, double band) {
    int total = c.total();
    if (total == 0) {
        return Regime::Coalescing;
    }
    if (!std::isfinite(c.gamma)) {
        return Regime::Decay;
    }
    double g2 = c.gamma * c.gamma;
    if (std::abs(g2 - 1.0) <= band / total) {
        return Regime::Coalescing;
    }
    return g2 < 1.0 ? Regime::Oscillatory : Regime::Decay;
}

long long transition_discriminant(const BeamSplitterCase &c) {
    long long n = c.total(), dn = c.delta_n(), dm = c.delta_m();
    return n * n - dn * dn - dm * dm;
}

namespace {

void require_interior(const BeamSplitterCase &c) {
    require_strictly_positive(c.n(), c.m());
}

int sign_of(int saddle_index) {
    if (saddle_index != 0 && saddle_index != 1) {
        throw Error(ErrorKind::InvalidArgument, "saddle index must be 0 or 1");
    }
    return saddle_index == 0 ? 1 : -1;
}

// sqrt(N^2 - dn^2 - dm^2) = 2 sqrt(n1 n2) w, w = sqrt(1 - gamma^2) on the principal branch.
cd discriminant_root(const BeamSplitterCase &c) {
    cd w = std::sqrt(cd(1.0 - c.gamma * c.gamma, 0.0));
    return 2.0 * std::sqrt(double(c.n1) * c.n2) * w;
}

}  // namespace

BeamSplitterPhases analytic_phases(const BeamSplitterCase &c, int saddle_index) {
    require_interior(c);
    const int s = sign_of(saddle_index);
    const cd i(0.0, 1.0);
    const cd sq = discriminant_root(c);
    const double n1 = c.n1, n2 = c.n2, m1 = c.m1, m2 = c.m2, total = c.total();
    BeamSplitterPhases ph;
    ph.e_i_phi = c.gamma - double(s) * i * sq / (2.0 * std::sqrt(n1 * n2));
    ph.e_i_psi = c.sigma - double(s) * i * sq / (2.0 * std::sqrt(m1 * m2));
    ph.e_i_delta = (double(c.delta_n()) * c.delta_m() - double(s) * i * total * sq) /
                   (4.0 * std::sqrt(n1 * n2 * m1 * m2));
    return ph;
}

std::array<SaddleSolution, 2> analytic_saddles(const BeamSplitterCase &c) {
    require_interior(c);
    const NetworkMatrix u = symmetric_beam_splitter();
    const double total = c.total();
    std::array<SaddleSolution, 2> out;
    for (int idx = 0; idx < 2; ++idx) {
        BeamSplitterPhases ph = analytic_phases(c, idx);
        cd h = std::sqrt(ph.e_i_phi);
        ComplexVector x(2), y(2);
        x(0) = std::sqrt(c.n1 / total) * h;
        x(1) = std::sqrt(c.n2 / total) / h;
        // y1^2 = (m1/N) e^{i delta} e^{i psi}; y2 = y1 sqrt(m2/m1) e^{-i psi}.
        cd y1 = std::sqrt(c.m1 / total * ph.e_i_delta * ph.e_i_psi);
        SaddleSolution best;
        best.residual = std::numeric_limits<double>::infinity();
        for (double sgn : {1.0, -1.0}) {
            y(0) = sgn * y1;
            y(1) = y(0) * std::sqrt(double(c.m2) / c.m1) / ph.e_i_psi;
            SaddleSolution s = assemble_solution(u.matrix(), x, y, c.n(), c.m());
            if (s.residual < best.residual) {
                best = s;
            }
        }
        out[idx] = canonicalize(best, c.n());
    }
    return out;
}

ComplexMatrix analytic_p(const BeamSplitterCase &c, int saddle_index) {
    require_interior(c);
    const int s = sign_of(saddle_index);
    const double total = c.total();
    const cd i(0.0, 1.0);
    // p_11 = (n1 - sqrt(n1 n2) e^{i phi}) / (2N) = (2 n1 - dm + s i sq) / (4N); margins fix the rest.
    ComplexMatrix p(2, 2);
    p(0, 0) = (2.0 * c.n1 - c.delta_m() + double(s) * i * discriminant_root(c)) / (4.0 * total);
    p(0, 1) = c.n1 / total - p(0, 0);
    p(1, 0) = c.m1 / total - p(0, 0);
    p(1, 1) = c.n2 / total - p(1, 0);
    return p;
}

std::complex<double> analytic_det(const BeamSplitterCase &c, int saddle_index) {
    require_interior(c);
    const int s = sign_of(saddle_index);
    const double total = c.total();
    const double a = c.delta_n() / total, b = c.delta_m() / total;
    const cd i(0.0, 1.0);
    const cd sq = discriminant_root(c);
    const cd phase = (i * (double(c.delta_n()) * c.delta_m()) + double(s) * total * sq) /
                     (4.0 * std::sqrt(double(c.n1) * c.n2 * c.m1 * c.m2));
    return double(s) * 0.125 * phase * std::sqrt(1.0 - a * a) * std::sqrt(1.0 - b * b) * (sq / total);
}

LogComplex amplitude_exact_bs(const BeamSplitterCase &c) {
    using boost::multiprecision::cpp_int;
    if (c.n1 < 0 || c.n2 < 0 || c.m1 < 0 || c.m2 < 0 || c.n1 + c.n2 != c.m1 + c.m2) {
        throw Error(ErrorKind::MarginMismatch, "input and output photon numbers differ");
    }
    auto binom = [](int n, int k) {
        cpp_int r = 1;
        for (int j = 1; j <= k; ++j) {
            r *= n - k + j;
            r /= j;
        }
        return r;
    };
    cpp_int k_sum = 0;
    for (int q = std::max(0, c.n1 - c.m2); q <= std::min(c.n1, c.m1); ++q) {
        cpp_int t = binom(c.n1, q) * binom(c.n2, c.m1 - q);
        if (q % 2 == 0) {
            k_sum += t;
        } else {
            k_sum -= t;
        }
    }
    if (k_sum == 0) {
        return LogComplex::zero();
    }
    bool negative = k_sum < 0;
    cpp_int mag = negative ? cpp_int(-k_sum) : k_sum;
    std::int64_t shift = 0;
    std::size_t bits = boost::multiprecision::msb(mag) + 1;
    if (bits > 62) {
        shift = static_cast<std::int64_t>(bits - 62);
        mag >>= static_cast<unsigned>(shift);
    }
    double lead = static_cast<double>(mag.convert_to<long long>());
    LogComplex k_value = LogComplex::from_scaled(cd(negative ? -lead : lead, 0.0), shift);
    double lg = 0.5 * (log_factorial(c.m1) + log_factorial(c.m2) - log_factorial(c.n1) - log_factorial(c.n2)) -
                0.5 * c.total() * std::log(2.0);
    return k_value * LogComplex::from_polar_log(lg, 0.0);
}

LogComplex amplitude_analytic_bs(const BeamSplitterCase &c, double cancellation_ulps) {
    require_interior(c);
    auto saddles = analytic_saddles(c);
    std::vector<SaddleSolution> sols(saddles.begin(), saddles.end());
    std::vector<SaddleContribution> contribs = select_contributing(sols, c.n(), c.m());
    double total = c.total();
    double margins = double(c.n1) * c.n2 * c.m1 * c.m2 / (total * total * total * total);
    for (auto &con : contribs) {
        // Match the contribution back to its closed-form determinant.
        int idx = (con.solution.p - saddles[0].p).cwiseAbs().maxCoeff() <=
                          (con.solution.p - saddles[1].p).cwiseAbs().maxCoeff()
                      ? 0
                      : 1;
        con.det_dprime = analytic_det(c, idx);
        con.det_ratio = std::abs(con.det_dprime) / margins;
        con.term = con.exponent_term / LogComplex::from_complex(con.det_dprime).sqrt();
    }
    ApproxOptions opts;
    opts.cancellation_ulps = cancellation_ulps;
    opts.coalescence_det_ratio = 0.0;
    opts.coalescence_separation = 0.0;
    return assemble_approximation(contribs, c.n(), c.m(), opts).amplitude;
}

}  // namespace bosonic
