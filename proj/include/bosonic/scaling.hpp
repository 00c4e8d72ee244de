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

#ifndef BOSONIC_SCALING_HPP
#define BOSONIC_SCALING_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "bosonic/network.hpp"

namespace bosonic {

/// Complex matrix scaling: find x, y with p = diag(x) U diag(y) having row sums n/N and column sums m/N.
struct ScalingProblem {
    NetworkMatrix u;
    Occupation n;
    Occupation m;

    ScalingProblem(NetworkMatrix matrix, Occupation in, Occupation out);
    int dim() const {
        return u.dim();
    }
    int total() const {
        return n.total();
    }
};

struct SaddleSolution {
    ComplexVector x;
    ComplexVector y;
    ComplexMatrix p;
    /// Max-norm violation of both margin equations.
    double residual = 0.0;
    /// x was multiplied by this factor (and y divided) to reach the canonical gauge.
    std::complex<double> gauge{1.0, 0.0};
};

/// p = diag(x) A diag(y) with both margin residuals.
SaddleSolution assemble_solution(const ComplexMatrix &a, const ComplexVector &x, const ComplexVector &y,
                                 const Occupation &n, const Occupation &m);

/// Margin residual of p against n/N, m/N.
double margin_residual(const ComplexMatrix &p, const Occupation &n, const Occupation &m);

/// Unknowns R_1..R_{M-1} (R_M = 1) and coefficient vectors Z^(l)_k = sqrt(n_k/N) U_kl.
class ReducedSystem {
   public:
    explicit ReducedSystem(const ScalingProblem &problem);

    int dim() const {
        return dim_;
    }
    /// F_l(R) for l = 1..M-1; r has length M-1.
    ComplexVector residual(const ComplexVector &r) const;
    /// dF_l / dR_j, (M-1) x (M-1).
    ComplexMatrix jacobian(const ComplexVector &r) const;
    const ComplexMatrix &z() const {
        return z_;
    }
    /// Recover the full (gauge-free) scaling vectors from R.
    void recover(const ComplexVector &r, ComplexVector &x, ComplexVector &y) const;
    /// R from a full x vector.
    ComplexVector reduce(const ComplexVector &x) const;

   private:
    ComplexVector full_r(const ComplexVector &r) const;

    int dim_;
    int total_;
    std::vector<int> n_;
    ComplexMatrix u_;
    ComplexMatrix z_;
    Eigen::VectorXd target_;
};

ReducedSystem build_reduced_system(const ScalingProblem &problem);

struct SolverOptions {
    /// 0 picks 200 for M <= 3 and 1000 otherwise.
    int starts = 0;
    std::uint64_t seed = 1;
    double tolerance = 1e-12;
    int max_iterations = 100;
    double dedup_tolerance = 1e-8;
    double degenerate_tolerance = 1e-12;
    /// 0 uses BOSONIC_SADDLE_THREADS or the hardware concurrency.
    int threads = 0;
};

struct SolverReport {
    int starts = 0;
    int converged = 0;
    int degenerate = 0;
    int distinct = 0;
};

/// Newton from a single starting R. Returns true when max |F| <= tolerance.
bool newton_solve(const ReducedSystem &system, ComplexVector &r, const SolverOptions &options,
                  int *iterations = nullptr);

/// Multi-start Newton; deduplicated, gauge-fixed roots sorted by decreasing |saddle term|.
std::vector<SaddleSolution> solve_all_saddles(const ScalingProblem &problem, const SolverOptions &options = {},
                                              SolverReport *report = nullptr);

/// Gauge x_1 = sqrt(n_1/N) > 0 for every solution, then merge those with max |p - p'| <= tol.
std::vector<SaddleSolution> canonicalize_and_dedup(std::vector<SaddleSolution> solutions, const Occupation &n,
                                                   double tol = 1e-8);

/// Rescale one solution into the canonical gauge.
SaddleSolution canonicalize(SaddleSolution s, const Occupation &n);

/// Alternating row/column normalization of a positive matrix.
SaddleSolution sinkhorn_scale_classical(const RealMatrix &a, const Occupation &n, const Occupation &m,
                                        double tol = 1e-14, int max_sweeps = 100000,
                                        std::vector<double> *l1_history = nullptr);

/// Worker count from BOSONIC_SADDLE_THREADS, else hardware concurrency.
int default_thread_count();

}  // namespace bosonic

#endif
