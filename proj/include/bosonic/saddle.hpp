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

#ifndef BOSONIC_SADDLE_HPP
#define BOSONIC_SADDLE_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bosonic/errors.hpp"
#include "bosonic/log_complex.hpp"
#include "bosonic/network.hpp"
#include "bosonic/scaling.hpp"

namespace bosonic {

/// Pieces of the 2M x 2M Hessian D = [[Lambda1, p], [p^T, Lambda2]].
struct HessianBlocks {
    Eigen::VectorXd lambda1;
    Eigen::VectorXd lambda2;
    ComplexMatrix p;
    /// Index in [0, 2M) of the row/column removed to form D'. Default: the last one.
    int crossed_index = -1;

    int dim() const {
        return static_cast<int>(lambda1.size());
    }
};

HessianBlocks build_hessian_blocks(const ComplexMatrix &p, const Occupation &n, const Occupation &m,
                                   int crossed_index = -1);

/// The full 2M x 2M matrix D.
ComplexMatrix assemble_d(const HessianBlocks &blocks);

/// det of D with row and column `index` removed, by LU.
std::complex<double> principal_minor(const HessianBlocks &blocks, int index);

/// Both Schur-complement evaluations of det(D'): through Lambda1 first and through Lambda2 first.
struct DetForms {
    std::complex<double> via_lambda1;
    std::complex<double> via_lambda2;
};
DetForms det_dprime_forms(const HessianBlocks &blocks);

/// det(D'); throws FormMismatch if the two Schur forms disagree by more than tol (relative).
std::complex<double> det_dprime(const HessianBlocks &blocks, double tol = 1e-10);

/// prod_k (n_k/(N x_k))^{n_k} (m_k/(N y_k))^{m_k}.
LogComplex saddle_exponent(const SaddleSolution &solution, const Occupation &n, const Occupation &m);

/// exponent / sqrt(det D') with the principal square root.
LogComplex saddle_term(const SaddleSolution &solution, const Occupation &n, const Occupation &m);

struct SaddleContribution {
    SaddleSolution solution;
    LogComplex exponent_term;
    std::complex<double> det_dprime{0.0, 0.0};
    /// sign_choice * exponent_term / sqrt(det_dprime).
    LogComplex term;
    bool contributing = false;
    int sign_choice = 1;
    bool complex_saddle = false;
    bool inside_domain = false;
    /// |det D'| / prod (n_k/N)(m_k/N).
    double det_ratio = 0.0;
};

/// Selection rule: complex saddles contribute; real saddles contribute when p lies in [0,1]
/// (the smallest |term| one if several); with no complex saddle and no real one inside the domain,
/// the smallest |term| real saddle is kept.
std::vector<SaddleContribution> select_contributing(const std::vector<SaddleSolution> &solutions,
                                                    const Occupation &n, const Occupation &m);

enum class BranchRule {
    /// Principal square root of det(D') for every saddle.
    Principal,
    /// Per-saddle signs fitted against exact amplitudes at smaller N with the same fractions.
    Calibrated,
};

struct ApproxOptions {
    SolverOptions solver;
    /// CoalescingSaddles when a contributing saddle has |det D'| / prod (n/N)(m/N) below this.
    double coalescence_det_ratio = 1e-3;
    /// CoalescingSaddles when a contributing saddle lies closer than this to another saddle, in the
    /// scale-free distance N max|p - p'| / prod (n_k m_k)^{1/(2M)}. For M = 2 this distance is
    /// |(1 - gamma^2)(1 - sigma^2)|^{1/4}.
    double coalescence_separation = 0.5;
    BranchRule branch = BranchRule::Principal;
    /// Largest N used for calibration runs.
    int calibration_max_total = 30;
    /// Report an exact zero when |sum of terms| <= this * N * eps * sum |terms|. Each term is a product
    /// of 2N powered factors, so its rounding error grows linearly with N.
    double cancellation_ulps = 16.0;
};

struct ApproxDiagnostics {
    int saddle_count = 0;
    int contributing_count = 0;
    double min_abs_det = 0.0;
    double min_det_ratio = 0.0;
    /// Smallest scale-free distance between a contributing saddle and any other saddle (inf if alone).
    double min_separation = 0.0;
    bool coalescing = false;
    bool cancelled = false;
    std::vector<SaddleContribution> contributions;
    std::vector<int> sign_choices;
    std::string branch_rule = "principal";
};

struct ApproxResult {
    LogComplex amplitude;
    LogComplex permanent;
    ApproxDiagnostics diagnostics;
};

/// Thrown for CoalescingSaddles; carries the diagnostics gathered so far.
class CoalescingError : public Error {
   public:
    CoalescingError(const std::string &message, ApproxDiagnostics diag)
        : Error(ErrorKind::CoalescingSaddles, message), diagnostics_(std::move(diag)) {
    }
    const ApproxDiagnostics &diagnostics() const {
        return diagnostics_;
    }

   private:
    ApproxDiagnostics diagnostics_;
};

/// Leading-order saddle-point amplitude per(U[n|m]) / sqrt(prod n! m!).
ApproxResult amplitude_approx(const NetworkMatrix &u, const Occupation &n, const Occupation &m,
                              const ApproxOptions &options = {});

/// Scale-free distance N max|p_a - p_b| / prod (n_k m_k)^{1/(2M)}.
double saddle_separation(const ComplexMatrix &pa, const ComplexMatrix &pb, const Occupation &n, const Occupation &m);

/// Same pipeline given the saddles; used by the closed-form beam-splitter check.
ApproxResult assemble_approximation(const std::vector<SaddleContribution> &contributions, const Occupation &n,
                                    const Occupation &m, const ApproxOptions &options = {});

/// Saddle-point classical probability at the unique Sinkhorn saddle of |U|^2.
double classical_probability_approx(const NetworkMatrix &u, const Occupation &n, const Occupation &m);
/// Its logarithm (no underflow for large N).
double log_classical_probability_approx(const NetworkMatrix &u, const Occupation &n, const Occupation &m);
/// log of N!/(M^N prod m_k!).
double log_classical_bell_probability(int modes, const Occupation &m);

/// log of exp(N H) / sqrt((2 pi N)^{M-1} prod n_k/N).
double multinomial_approx(const Occupation &n);
/// log of N! / prod n_k!.
double multinomial_exact_log(const Occupation &n);
/// theta_n with n! = sqrt(2 pi (n + theta_n)) (n/e)^n; theta_0 = 1/(2 pi).
double mortici_theta(int n);
/// log N!/prod n_k! written through theta_n; equal to multinomial_exact_log up to rounding.
double multinomial_mortici_log(const Occupation &n);
/// |approx - C(N,k)| / C(N,k) for the two-mode entropy approximation.
double stirling_binomial_relative_error(int total, int k);

/// Hessian identity helpers used by the property tests.
namespace identities {

/// Constraint matrix C of size (2M-1) x M^2 acting on p_kl (row-major k*M + l):
/// rows 0..M-1 are row-sum constraints, rows M..2M-2 the first M-1 column-sum constraints.
RealMatrix constraint_matrix(int dim);

struct SylvesterSides {
    std::complex<double> lhs;
    std::complex<double> rhs;
};
/// det(C^I)^2 det([B^T, I] A [B; I]) versus det(A) det(C A^{-1} C^T), B = -(C^I)^{-1} C^II.
SylvesterSides generalized_sylvester(const ComplexMatrix &a, const RealMatrix &c);

struct BlockSides {
    std::complex<double> direct;
    std::complex<double> via_a1;
    std::complex<double> via_a4;
};
/// det [[A1, A2], [A3, A4]] directly and through either Schur complement.
BlockSides block_determinant(const ComplexMatrix &a1, const ComplexMatrix &a2, const ComplexMatrix &a3,
                             const ComplexMatrix &a4);

}  // namespace identities

}  // namespace bosonic

#endif
