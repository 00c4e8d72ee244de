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
#include <random>

#include "bosonic/combinatorics.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/exact.hpp"
#include "bosonic/saddle.hpp"
#include "doctest.h"

using namespace bosonic;
using cd = std::complex<double>;

namespace {

ComplexMatrix random_complex(int rows, int cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    ComplexMatrix a(rows, cols);
    for (int i = 0; i < a.size(); ++i) {
        a.data()[i] = cd(g(rng), g(rng));
    }
    return a;
}

double rel(cd a, cd b) {
    return std::abs(a - b) / std::abs(b);
}

}  // namespace

TEST_CASE("all principal minors of D agree at every saddle") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto u = haar_random_unitary(3, seed + 20);
        Occupation n{2, 3, 4}, m{3, 3, 3};
        for (const auto &s : solve_all_saddles(ScalingProblem(u, n, m))) {
            auto blocks = build_hessian_blocks(s.p, n, m);
            cd ref = principal_minor(blocks, 5);
            for (int i = 0; i < 6; ++i) {
                CHECK(rel(principal_minor(blocks, i), ref) < 1e-10);
                auto crossed = build_hessian_blocks(s.p, n, m, i);
                CHECK(rel(det_dprime(crossed), ref) < 1e-10);
            }
            auto forms = det_dprime_forms(blocks);
            CHECK(rel(forms.via_lambda2, forms.via_lambda1) < 1e-10);
        }
    }
}

TEST_CASE("full D is singular at a saddle") {
    auto u = haar_random_unitary(2, 3);
    Occupation n{3, 2}, m{1, 4};
    auto s = solve_all_saddles(ScalingProblem(u, n, m)).front();
    auto d = assemble_d(build_hessian_blocks(s.p, n, m));
    CHECK(std::abs(d.determinant()) < 1e-14);
}

TEST_CASE("block determinant identity") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        auto b = identities::block_determinant(random_complex(3, 3, rng), random_complex(3, 2, rng),
                                               random_complex(2, 3, rng), random_complex(2, 2, rng));
        CHECK(rel(b.via_a1, b.direct) < 1e-10);
        CHECK(rel(b.via_a4, b.direct) < 1e-10);
    }
}

TEST_CASE("generalized Sylvester identity") {
    std::mt19937_64 rng(6);
    for (int dim : {2, 3}) {
        auto c = identities::constraint_matrix(dim);
        CHECK(c.rows() == 2 * dim - 1);
        CHECK(c.cols() == dim * dim);
        for (int t = 0; t < 10; ++t) {
            ComplexMatrix a = random_complex(dim * dim, dim * dim, rng);
            a = (a + a.transpose()).eval();
            auto s = identities::generalized_sylvester(a, c);
            CHECK(rel(s.lhs, s.rhs) < 1e-9);
        }
    }
}

TEST_CASE("saddle exponent is gauge invariant") {
    auto u = haar_random_unitary(3, 31);
    Occupation n{1, 2, 3}, m{2, 2, 2};
    for (const auto &s : solve_all_saddles(ScalingProblem(u, n, m))) {
        SaddleSolution t = s;
        const cd lambda(0.3, -2.1);
        t.x *= lambda;
        t.y /= lambda;
        CHECK(relative_error(saddle_exponent(t, n, m), saddle_exponent(s, n, m)) < 1e-12);
    }
}

TEST_CASE("classical saddle is exact for Bell multiports") {
    for (int dim : {2, 3, 4}) {
        auto b = bell_multiport(dim);
        std::vector<int> nv(dim), mv(dim);
        for (int k = 0; k < dim; ++k) {
            nv[k] = 2 + k;
            mv[k] = 2 + (dim - 1 - k);
        }
        Occupation n(nv), m(mv);
        CHECK(log_classical_probability_approx(b, n, m) ==
              doctest::Approx(log_classical_bell_probability(dim, m)).epsilon(1e-13));
        double exact = classical_probability(b, n, m);
        CHECK(classical_probability_approx(b, n, m) == doctest::Approx(exact).epsilon(1e-12));
        // det D' at the Bell saddle equals prod (n/N)(m/N).
        auto a = b.intensities();
        auto s = sinkhorn_scale_classical(a, n, m);
        double prod = 1.0;
        for (int k = 0; k < dim; ++k) {
            prod *= n[k] * m[k] / double(n.total() * n.total());
        }
        CHECK(rel(det_dprime(build_hessian_blocks(s.p, n, m)), prod) < 1e-12);
    }
}

TEST_CASE("classical approximation improves with N") {
    auto u = haar_random_unitary(2, 12);
    double prev = 1.0;
    for (int scale : {2, 8, 32}) {
        Occupation n{scale, 2 * scale}, m{2 * scale, scale};
        double e = std::abs(classical_probability_approx(u, n, m) / classical_probability(u, n, m) - 1.0);
        CHECK(e < prev);
        prev = e;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("multinomial helpers") {
    Occupation n{30, 20, 50};
    CHECK(multinomial_mortici_log(n) == doctest::Approx(multinomial_exact_log(n)).epsilon(1e-14));
    double e = std::abs(std::exp(multinomial_approx(n) - multinomial_exact_log(n)) - 1.0);
    CHECK(e < 0.02);
    CHECK(mortici_theta(0) == doctest::Approx(1.0 / (2.0 * M_PI)));
    for (int k : {1, 5, 11, 12, 40, 500}) {
        double t = mortici_theta(k);
        CHECK(t > 1.0 / 6.0);
        CHECK(t < 0.2);
        double lf = 0.5 * std::log(2.0 * M_PI * (k + t)) + k * (std::log(double(k)) - 1.0);
        CHECK(lf == doctest::Approx(log_factorial(k)).epsilon(1e-14));
    }
    CHECK(stirling_binomial_relative_error(30, 15) == doctest::Approx(std::abs(
                                                          std::exp(30 * std::log(2.0)) / std::sqrt(2 * M_PI * 7.5) /
                                                              155117520.0 -
                                                          1.0)));
}

TEST_CASE("HOM and generalized HOM are exactly zero") {
    auto bs = symmetric_beam_splitter();
    auto hom = amplitude_approx(bs, Occupation{1, 1}, Occupation{1, 1});
    CHECK(hom.amplitude.is_zero());
    CHECK(hom.diagnostics.cancelled);
    for (int m1 : {1, 3, 7, 9}) {
        CHECK(amplitude_approx(bs, Occupation{5, 5}, Occupation{m1, 10 - m1}).amplitude.is_zero());
    }
    CHECK_FALSE(amplitude_approx(bs, Occupation{5, 5}, Occupation{4, 6}).amplitude.is_zero());
}

TEST_CASE("tritter approximation tracks the exact amplitude") {
    auto t = tritter();
    Occupation n{8, 8, 8};
    auto ap = amplitude_approx(t, n, n);
    auto ex = amplitude_exact(t, n, n);
    CHECK(ap.diagnostics.saddle_count == 6);
    CHECK(ap.diagnostics.contributing_count == 6);
    CHECK(relative_error(ap.amplitude, ex) < 0.05);
    CHECK(ap.diagnostics.branch_rule == "principal");
    double lg = 0.0;
    for (int k = 0; k < 3; ++k) {
        lg += log_factorial(n[k]);
    }
    CHECK(relative_error(ap.permanent, ap.amplitude * LogComplex::from_polar_log(lg, 0.0)) < 1e-12);
}

TEST_CASE("haar network diagnostics are consistent") {
    // Which complex saddles contribute is not settled for M >= 3; only the bookkeeping is checked here.
    auto u = haar_random_unitary(3, 4);
    Occupation n{9, 9, 9}, m{8, 10, 9};
    auto ap = amplitude_approx(u, n, m);
    const auto &d = ap.diagnostics;
    CHECK(d.saddle_count == static_cast<int>(d.contributions.size()));
    int contributing = 0;
    for (const auto &c : d.contributions) {
        contributing += c.contributing ? 1 : 0;
        CHECK(relative_error(c.term, c.exponent_term / LogComplex::from_complex(c.det_dprime).sqrt()) < 1e-12);
    }
    CHECK(contributing == d.contributing_count);
    CHECK(std::isfinite(ap.amplitude.log_mag()));
    CHECK(relative_error(ap.amplitude, amplitude_exact(u, n, m)) < 0.1);
}

TEST_CASE("calibrated branch records its choice") {
    ApproxOptions opt;
    opt.branch = BranchRule::Calibrated;
    auto r = amplitude_approx(tritter(), Occupation{4, 4, 4}, Occupation{4, 4, 4}, opt);
    CHECK(r.diagnostics.branch_rule == "calibrated");
    CHECK(r.diagnostics.sign_choices.size() == static_cast<std::size_t>(r.diagnostics.contributing_count));
}

TEST_CASE("errors") {
    auto bs = symmetric_beam_splitter();
    try {
        amplitude_approx(bs, Occupation{0, 4}, Occupation{2, 2});
        FAIL("");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::EmptyMode);
    }
    try {
        amplitude_approx(bs, Occupation{10, 50}, Occupation{8, 52});
        FAIL("");
    } catch (const CoalescingError &e) {
        CHECK(e.kind() == ErrorKind::CoalescingSaddles);
        CHECK(e.diagnostics().coalescing);
        CHECK(e.diagnostics().min_separation < 0.5);
    }
    CHECK_THROWS_AS(assemble_approximation({}, Occupation{1, 1}, Occupation{1, 1}), Error);
    ComplexMatrix z = ComplexMatrix::Identity(2, 2);
    try {
        ComplexMatrix a = bs.matrix();
        SaddleSolution s;
        s.x = ComplexVector::Zero(2);
        s.y = ComplexVector::Ones(2);
        s.p = z;
        saddle_exponent(s, Occupation{1, 1}, Occupation{1, 1});
        FAIL("");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::ZeroScalingComponent);
    }
    try {
        log_classical_probability_approx(identity_network(2), Occupation{1, 1}, Occupation{1, 1});
        FAIL("");
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::NonPositiveIntensity);
    }
}
