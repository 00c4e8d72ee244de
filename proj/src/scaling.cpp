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

#include "bosonic/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "bosonic/errors.hpp"
#include "bosonic/saddle.hpp"

namespace bosonic {

ScalingProblem::ScalingProblem(NetworkMatrix matrix, Occupation in, Occupation out)
    : u(std::move(matrix)), n(std::move(in)), m(std::move(out)) {
    check_margins(u.dim(), n, m);
    require_strictly_positive(n, m);
}

double margin_residual(const ComplexMatrix &p, const Occupation &n, const Occupation &m) {
    double total = static_cast<double>(n.total());
    double res = 0.0;
    for (int k = 0; k < p.rows(); ++k) {
        res = std::max(res, std::abs(p.row(k).sum() - n[k] / total));
    }
    for (int l = 0; l < p.cols(); ++l) {
        res = std::max(res, std::abs(p.col(l).sum() - m[l] / total));
    }
    return res;
}

SaddleSolution assemble_solution(const ComplexMatrix &a, const ComplexVector &x, const ComplexVector &y,
                                 const Occupation &n, const Occupation &m) {
    SaddleSolution s;
    s.x = x;
    s.y = y;
    s.p = x.asDiagonal() * a * y.asDiagonal();
    s.residual = margin_residual(s.p, n, m);
    return s;
}

ReducedSystem::ReducedSystem(const ScalingProblem &problem)
    : dim_(problem.dim()), total_(problem.total()), n_(problem.n.counts()), u_(problem.u.matrix()) {
    z_.resize(dim_, dim_);
    target_.resize(dim_);
    for (int k = 0; k < dim_; ++k) {
        double s = std::sqrt(static_cast<double>(n_[k]) / total_);
        for (int l = 0; l < dim_; ++l) {
            z_(k, l) = s * u_(k, l);
        }
        target_(k) = static_cast<double>(problem.m[k]) / total_;
    }
}

ComplexVector ReducedSystem::full_r(const ComplexVector &r) const {
    ComplexVector f(dim_);
    f.head(dim_ - 1) = r;
    f(dim_ - 1) = 1.0;
    return f;
}

ComplexVector ReducedSystem::residual(const ComplexVector &r) const {
    ComplexVector f = full_r(r);
    ComplexVector out(dim_ - 1);
    for (int l = 0; l < dim_ - 1; ++l) {
        std::complex<double> a = 0.0, b = 0.0;
        for (int k = 0; k < dim_; ++k) {
            a += f(k) * z_(k, l);
            b += std::conj(z_(k, l)) / f(k);
        }
        out(l) = a * b - target_(l);
    }
    return out;
}

ComplexMatrix ReducedSystem::jacobian(const ComplexVector &r) const {
    ComplexVector f = full_r(r);
    ComplexMatrix j(dim_ - 1, dim_ - 1);
    for (int l = 0; l < dim_ - 1; ++l) {
        std::complex<double> a = 0.0, b = 0.0;
        for (int k = 0; k < dim_; ++k) {
            a += f(k) * z_(k, l);
            b += std::conj(z_(k, l)) / f(k);
        }
        for (int q = 0; q < dim_ - 1; ++q) {
            j(l, q) = z_(q, l) * b - a * std::conj(z_(q, l)) / (f(q) * f(q));
        }
    }
    return j;
}

void ReducedSystem::recover(const ComplexVector &r, ComplexVector &x, ComplexVector &y) const {
    ComplexVector f = full_r(r);
    x.resize(dim_);
    y.resize(dim_);
    double n_last = n_[dim_ - 1];
    for (int k = 0; k < dim_; ++k) {
        x(k) = f(k) * std::sqrt(n_[k] / n_last);
    }
    for (int l = 0; l < dim_; ++l) {
        std::complex<double> s = 0.0;
        for (int k = 0; k < dim_; ++k) {
            s += std::conj(u_(k, l)) * (static_cast<double>(n_[k]) / (static_cast<double>(total_) * x(k)));
        }
        y(l) = s;
    }
}

ComplexVector ReducedSystem::reduce(const ComplexVector &x) const {
    ComplexVector r(dim_ - 1);
    double n_last = n_[dim_ - 1];
    for (int k = 0; k < dim_ - 1; ++k) {
        r(k) = std::sqrt(n_last / n_[k]) * x(k) / x(dim_ - 1);
    }
    return r;
}

ReducedSystem build_reduced_system(const ScalingProblem &problem) {
    return ReducedSystem(problem);
}

namespace {

Eigen::VectorXd split(const ComplexVector &f) {
    Eigen::VectorXd v(2 * f.size());
    v.head(f.size()) = f.real();
    v.tail(f.size()) = f.imag();
    return v;
}

bool finite_and_nonzero(const ComplexVector &r) {
    for (int i = 0; i < r.size(); ++i) {
        double a = std::abs(r(i));
        if (!std::isfinite(a) || a < 1e-150 || a > 1e150) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool newton_solve(const ReducedSystem &system, ComplexVector &r, const SolverOptions &options, int *iterations) {
    const int d = system.dim() - 1;
    ComplexVector f = system.residual(r);
    double norm2 = f.squaredNorm();
    int it = 0;
    int polish = 0;
    for (; it < options.max_iterations; ++it) {
        if (!std::isfinite(norm2)) {
            return false;
        }
        double fmax = f.cwiseAbs().maxCoeff();
        if (fmax <= options.tolerance) {
            // A couple of extra steps push the residual to rounding level.
            if (polish >= 2 || fmax <= 1e-15) {
                break;
            }
            ++polish;
        }
        ComplexMatrix jc = system.jacobian(r);
        // Real form of the complex Jacobian: unknowns (Re R, Im R).
        Eigen::MatrixXd jr(2 * d, 2 * d);
        jr.topLeftCorner(d, d) = jc.real();
        jr.topRightCorner(d, d) = -jc.imag();
        jr.bottomLeftCorner(d, d) = jc.imag();
        jr.bottomRightCorner(d, d) = jc.real();
        Eigen::VectorXd rhs = -split(f);
        Eigen::VectorXd step = jr.colPivHouseholderQr().solve(rhs);
        if (!step.allFinite()) {
            return false;
        }
        ComplexVector dr(d);
        for (int i = 0; i < d; ++i) {
            dr(i) = {step(i), step(i + d)};
        }
        double t = 1.0;
        bool accepted = false;
        while (t > 1e-10) {
            ComplexVector trial = r + t * dr;
            if (finite_and_nonzero(trial)) {
                ComplexVector ft = system.residual(trial);
                double n2 = ft.squaredNorm();
                if (std::isfinite(n2) && (n2 <= (1.0 - 1e-4 * t) * norm2 || (polish > 0 && n2 <= norm2))) {
                    r = trial;
                    f = ft;
                    norm2 = n2;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) {
            break;
        }
    }
    if (iterations) {
        *iterations = it;
    }
    return std::isfinite(norm2) && f.cwiseAbs().maxCoeff() <= options.tolerance;
}

int default_thread_count() {
    if (const char *env = std::getenv("BOSONIC_SADDLE_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) {
            return v;
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

SaddleSolution canonicalize(SaddleSolution s, const Occupation &n) {
    double target = std::sqrt(static_cast<double>(n[0]) / n.total());
    std::complex<double> lambda = target / s.x(0);
    s.x *= lambda;
    s.y /= lambda;
    s.x(0) = target;
    s.gauge *= lambda;
    return s;
}

std::vector<SaddleSolution> canonicalize_and_dedup(std::vector<SaddleSolution> solutions, const Occupation &n,
                                                   double tol) {
    std::vector<SaddleSolution> out;
    for (auto &s : solutions) {
        SaddleSolution c = canonicalize(std::move(s), n);
        bool dup = false;
        for (const auto &kept : out) {
            if ((kept.p - c.p).cwiseAbs().maxCoeff() <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            out.push_back(std::move(c));
        }
    }
    return out;
}

namespace {

bool lex_less(const ComplexMatrix &a, const ComplexMatrix &b) {
    for (int i = 0; i < a.size(); ++i) {
        auto x = a.data()[i];
        auto y = b.data()[i];
        if (std::abs(x.real() - y.real()) > 1e-12) {
            return x.real() < y.real();
        }
        if (std::abs(x.imag() - y.imag()) > 1e-12) {
            return x.imag() < y.imag();
        }
    }
    return false;
}

}  // namespace

std::vector<SaddleSolution> solve_all_saddles(const ScalingProblem &problem, const SolverOptions &options,
                                              SolverReport *report) {
    const int dim = problem.dim();
    int starts = options.starts > 0 ? options.starts : (dim <= 3 ? 200 : 1000);
    ReducedSystem system(problem);
    const ComplexMatrix &u = problem.u.matrix();

    struct StartResult {
        bool converged = false;
        bool degenerate = false;
        SaddleSolution solution;
    };
    std::vector<StartResult> results(static_cast<std::size_t>(starts));

    auto run_start = [&](int index) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffu),
                          static_cast<std::uint32_t>(options.seed >> 32), static_cast<std::uint32_t>(index)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::vector<double> theta(static_cast<std::size_t>(dim));
        for (auto &t : theta) {
            t = angle(rng);
        }
        // x_k = sqrt(n_k/N) e^{i theta_k} maps to R_k = e^{i (theta_k - theta_M)}. Odd starts also get a
        // random modulus: real roots off the unit circle can have basins that never meet it.
        std::normal_distribution<double> log_radius(0.0, 1.5);
        ComplexVector r(dim - 1);
        for (int k = 0; k < dim - 1; ++k) {
            double radius = index % 2 == 1 ? std::exp(log_radius(rng)) : 1.0;
            r(k) = std::polar(radius, theta[k] - theta[dim - 1]);
        }
        StartResult &res = results[static_cast<std::size_t>(index)];
        if (!newton_solve(system, r, options)) {
            return;
        }
        ComplexVector x, y;
        system.recover(r, x, y);
        SaddleSolution s = assemble_solution(u, x, y, problem.n, problem.m);
        if (!(s.residual <= options.tolerance)) {
            return;
        }
        res.converged = true;
        if (s.p.cwiseAbs().minCoeff() <= options.degenerate_tolerance) {
            res.degenerate = true;
            return;
        }
        res.solution = std::move(s);
    };

    int threads = options.threads > 0 ? options.threads : default_thread_count();
    threads = std::clamp(threads, 1, starts);
    if (threads == 1) {
        for (int i = 0; i < starts; ++i) {
            run_start(i);
        }
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (int i = w; i < starts; i += threads) {
                    run_start(i);
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
    }

    std::vector<SaddleSolution> roots;
    SolverReport rep;
    rep.starts = starts;
    for (auto &r : results) {
        if (r.converged) {
            rep.converged += 1;
        }
        if (r.degenerate) {
            rep.degenerate += 1;
        } else if (r.converged) {
            roots.push_back(std::move(r.solution));
        }
    }
    auto distinct = canonicalize_and_dedup(std::move(roots), problem.n, options.dedup_tolerance);
    rep.distinct = static_cast<int>(distinct.size());
    if (report) {
        *report = rep;
    }
    if (distinct.empty()) {
        if (rep.degenerate > 0) {
            throw Error(ErrorKind::DegenerateSaddle, "every converged root has a vanishing p entry");
        }
        throw Error(ErrorKind::NoConvergence, "no start converged to a root of the scaling equations");
    }

    std::vector<double> weight(distinct.size());
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        try {
            weight[i] = saddle_term(distinct[i], problem.n, problem.m).log_mag();
        } catch (const Error &) {
            weight[i] = -std::numeric_limits<double>::infinity();
        }
    }
    std::vector<std::size_t> order(distinct.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double wa = weight[a], wb = weight[b];
        if (std::isfinite(wa) && std::isfinite(wb) && std::abs(wa - wb) <= 1e-9 * std::max(1.0, std::abs(wa))) {
            return lex_less(distinct[a].p, distinct[b].p);
        }
        return wa > wb;
    });
    std::vector<SaddleSolution> sorted;
    sorted.reserve(order.size());
    for (auto i : order) {
        sorted.push_back(std::move(distinct[i]));
    }
    return sorted;
}

SaddleSolution sinkhorn_scale_classical(const RealMatrix &a, const Occupation &n, const Occupation &m, double tol,
                                        int max_sweeps, std::vector<double> *l1_history) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorKind::BadDimension, "Sinkhorn needs a square matrix");
    }
    const int dim = static_cast<int>(a.rows());
    check_margins(dim, n, m);
    require_strictly_positive(n, m);
    if (!(a.minCoeff() > 0.0) || !a.allFinite()) {
        throw Error(ErrorKind::NonPositiveMatrix, "Sinkhorn scaling needs strictly positive entries");
    }
    const double total = n.total();
    Eigen::VectorXd rn(dim), cm(dim);
    for (int k = 0; k < dim; ++k) {
        rn(k) = n[k] / total;
        cm(k) = m[k] / total;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Ones(dim);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(dim);
    double res = std::numeric_limits<double>::infinity();
    double best = res;
    int stalled = 0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        Eigen::VectorXd ay = a * y;
        x = rn.cwiseQuotient(ay);
        Eigen::VectorXd atx = a.transpose() * x;
        y = cm.cwiseQuotient(atx);
        // Columns are exact after the y update; measure the rows.
        Eigen::VectorXd rows = x.cwiseProduct(a * y);
        Eigen::VectorXd dev = (rows - rn).cwiseAbs();
        if (l1_history) {
            l1_history->push_back(dev.sum());
        }
        Eigen::MatrixXd p = x.asDiagonal() * a * y.asDiagonal();
        res = std::max((p.rowwise().sum() - rn).cwiseAbs().maxCoeff(),
                       (p.colwise().sum().transpose() - cm).cwiseAbs().maxCoeff());
        if (res <= tol) {
            break;
        }
        // Rounding floor: stop once the residual no longer improves.
        if (res < best) {
            best = res;
            stalled = 0;
        } else if (++stalled > 50 && res <= 1e-12) {
            break;
        }
    }
    if (!(res <= std::max(tol, 1e-12))) {
        throw Error(ErrorKind::NoConvergence, "Sinkhorn iteration did not reach the margin tolerance");
    }
    SaddleSolution s = assemble_solution(a.cast<std::complex<double>>(), x.cast<std::complex<double>>(),
                                         y.cast<std::complex<double>>(), n, m);
    return canonicalize(std::move(s), n);
}

}  // namespace bosonic
