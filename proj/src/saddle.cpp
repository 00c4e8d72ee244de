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

#include "bosonic/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "bosonic/combinatorics.hpp"
#include "bosonic/exact.hpp"

namespace bosonic {

HessianBlocks build_hessian_blocks(const ComplexMatrix &p, const Occupation &n, const Occupation &m,
                                   int crossed_index) {
    const int dim = static_cast<int>(p.rows());
    check_margins(dim, n, m);
    HessianBlocks b;
    b.lambda1.resize(dim);
    b.lambda2.resize(dim);
    double total = n.total();
    for (int k = 0; k < dim; ++k) {
        b.lambda1(k) = n[k] / total;
        b.lambda2(k) = m[k] / total;
    }
    b.p = p;
    b.crossed_index = crossed_index < 0 ? 2 * dim - 1 : crossed_index;
    if (b.crossed_index >= 2 * dim) {
        throw Error(ErrorKind::InvalidArgument, "crossed index out of range");
    }
    return b;
}

ComplexMatrix assemble_d(const HessianBlocks &blocks) {
    const int dim = blocks.dim();
    ComplexMatrix d = ComplexMatrix::Zero(2 * dim, 2 * dim);
    for (int k = 0; k < dim; ++k) {
        d(k, k) = blocks.lambda1(k);
        d(dim + k, dim + k) = blocks.lambda2(k);
    }
    d.topRightCorner(dim, dim) = blocks.p;
    d.bottomLeftCorner(dim, dim) = blocks.p.transpose();
    return d;
}

namespace {

ComplexMatrix drop(const ComplexMatrix &a, int row, int col) {
    ComplexMatrix out(a.rows() - (row >= 0 ? 1 : 0), a.cols() - (col >= 0 ? 1 : 0));
    for (int i = 0, oi = 0; i < a.rows(); ++i) {
        if (i == row) {
            continue;
        }
        for (int j = 0, oj = 0; j < a.cols(); ++j) {
            if (j == col) {
                continue;
            }
            out(oi, oj++) = a(i, j);
        }
        ++oi;
    }
    return out;
}

Eigen::VectorXd drop(const Eigen::VectorXd &v, int index) {
    Eigen::VectorXd out(v.size() - 1);
    for (int i = 0, o = 0; i < v.size(); ++i) {
        if (i != index) {
            out(o++) = v(i);
        }
    }
    return out;
}

std::complex<double> det_lu(const ComplexMatrix &a) {
    if (a.rows() == 0) {
        return 1.0;
    }
    return a.partialPivLu().determinant();
}

}  // namespace

std::complex<double> principal_minor(const HessianBlocks &blocks, int index) {
    ComplexMatrix d = assemble_d(blocks);
    return det_lu(drop(d, index, index));
}

DetForms det_dprime_forms(const HessianBlocks &blocks) {
    const int dim = blocks.dim();
    const int c = blocks.crossed_index;
    Eigen::VectorXd l1 = blocks.lambda1;
    Eigen::VectorXd l2 = blocks.lambda2;
    ComplexMatrix p = blocks.p;
    if (c >= dim) {
        l2 = drop(l2, c - dim);
        p = drop(p, -1, c - dim);
    } else {
        l1 = drop(l1, c);
        p = drop(p, c, -1);
    }
    ComplexMatrix s1 = ComplexMatrix(l2.cast<std::complex<double>>().asDiagonal()) -
                       p.transpose() * l1.cwiseInverse().cast<std::complex<double>>().asDiagonal() * p;
    ComplexMatrix s2 = ComplexMatrix(l1.cast<std::complex<double>>().asDiagonal()) -
                       p * l2.cwiseInverse().cast<std::complex<double>>().asDiagonal() * p.transpose();
    DetForms f;
    f.via_lambda1 = l1.prod() * det_lu(s1);
    f.via_lambda2 = l2.prod() * det_lu(s2);
    return f;
}

std::complex<double> det_dprime(const HessianBlocks &blocks, double tol) {
    DetForms f = det_dprime_forms(blocks);
    double scale = std::max(std::abs(f.via_lambda1), std::abs(f.via_lambda2));
    if (std::abs(f.via_lambda1 - f.via_lambda2) > tol * scale) {
        std::ostringstream msg;
        msg << "Schur forms of det(D') disagree: " << f.via_lambda1 << " vs " << f.via_lambda2;
        throw Error(ErrorKind::FormMismatch, msg.str());
    }
    return f.via_lambda1;
}

LogComplex saddle_exponent(const SaddleSolution &solution, const Occupation &n, const Occupation &m) {
    const int dim = static_cast<int>(solution.x.size());
    check_margins(dim, n, m);
    require_strictly_positive(n, m);
    double total = n.total();
    std::complex<double> lg = 0.0;
    for (int k = 0; k < dim; ++k) {
        if (solution.x(k) == 0.0 || solution.y(k) == 0.0) {
            throw Error(ErrorKind::ZeroScalingComponent, "scaling vector has a zero component");
        }
        lg += static_cast<double>(n[k]) * (std::log(n[k] / total) - std::log(solution.x(k)));
        lg += static_cast<double>(m[k]) * (std::log(m[k] / total) - std::log(solution.y(k)));
    }
    return LogComplex::exp(lg);
}

LogComplex saddle_term(const SaddleSolution &solution, const Occupation &n, const Occupation &m) {
    HessianBlocks b = build_hessian_blocks(solution.p, n, m);
    std::complex<double> det = det_dprime(b);
    return saddle_exponent(solution, n, m) / LogComplex::from_complex(det).sqrt();
}

namespace {

double margin_product(const Occupation &n, const Occupation &m) {
    double total = n.total();
    double prod = 1.0;
    for (int k = 0; k < n.size(); ++k) {
        prod *= (n[k] / total) * (m[k] / total);
    }
    return prod;
}

SaddleContribution make_contribution(const SaddleSolution &s, const Occupation &n, const Occupation &m) {
    SaddleContribution c;
    c.solution = s;
    c.exponent_term = saddle_exponent(s, n, m);
    HessianBlocks b = build_hessian_blocks(s.p, n, m);
    DetForms f = det_dprime_forms(b);
    c.det_dprime = f.via_lambda1;
    c.det_ratio = std::abs(c.det_dprime) / margin_product(n, m);
    if (c.det_dprime == 0.0) {
        c.term = LogComplex::zero();
    } else {
        c.term = c.exponent_term / LogComplex::from_complex(c.det_dprime).sqrt();
    }
    c.complex_saddle = s.p.imag().cwiseAbs().maxCoeff() > 1e-9;
    bool inside = !c.complex_saddle;
    for (int i = 0; i < s.p.size() && inside; ++i) {
        double v = s.p.data()[i].real();
        inside = v >= -1e-12 && v <= 1.0 + 1e-12;
    }
    c.inside_domain = inside;
    return c;
}

}  // namespace

std::vector<SaddleContribution> select_contributing(const std::vector<SaddleSolution> &solutions,
                                                    const Occupation &n, const Occupation &m) {
    std::vector<SaddleContribution> out;
    out.reserve(solutions.size());
    for (const auto &s : solutions) {
        out.push_back(make_contribution(s, n, m));
    }
    bool any_complex = false;
    int best_inside = -1;
    int best_real = -1;
    for (int i = 0; i < static_cast<int>(out.size()); ++i) {
        auto &c = out[i];
        if (c.complex_saddle) {
            c.contributing = true;
            any_complex = true;
            continue;
        }
        double mag = c.term.log_mag();
        if (c.inside_domain && (best_inside < 0 || mag < out[best_inside].term.log_mag())) {
            best_inside = i;
        }
        if (best_real < 0 || mag < out[best_real].term.log_mag()) {
            best_real = i;
        }
    }
    if (best_inside >= 0) {
        out[best_inside].contributing = true;
    } else if (!any_complex && best_real >= 0) {
        out[best_real].contributing = true;
    }
    std::stable_sort(out.begin(), out.end(), [](const SaddleContribution &a, const SaddleContribution &b) {
        return a.term.log_mag() > b.term.log_mag();
    });
    return out;
}

namespace {

LogComplex prefactor(const Occupation &n, const Occupation &m) {
    double total = n.total();
    double lg = log_factorial(n.total());
    for (int k = 0; k < n.size(); ++k) {
        lg += 0.5 * (std::log(n[k] / total) + std::log(m[k] / total));
        lg -= 0.5 * (log_factorial(n[k]) + log_factorial(m[k]));
    }
    return LogComplex::from_polar_log(lg, 0.0);
}

struct Summed {
    LogComplex value;
    bool cancelled = false;
};

Summed sum_terms(const std::vector<SaddleContribution> &contribs, const std::vector<int> &signs, double ulps,
                 int total) {
    Summed s;
    LogComplex abs_sum;
    std::size_t j = 0;
    for (const auto &c : contribs) {
        if (!c.contributing) {
            continue;
        }
        LogComplex t = signs[j++] > 0 ? c.term : -c.term;
        s.value += t;
        abs_sum += LogComplex::from_polar_log(c.term.log_mag(), 0.0);
    }
    if (!abs_sum.is_zero()) {
        double floor = ulps * std::max(total, 1) * std::numeric_limits<double>::epsilon();
        if (s.value.is_zero() || s.value.log_mag() <= std::log(floor) + abs_sum.log_mag()) {
            s.value = LogComplex::zero();
            s.cancelled = true;
        }
    }
    return s;
}

// Terms for the same saddles at other occupations with identical fractions.
std::vector<SaddleContribution> rescale_terms(const std::vector<SaddleContribution> &contribs, const Occupation &n,
                                              const Occupation &m) {
    std::vector<SaddleContribution> out;
    for (const auto &c : contribs) {
        if (!c.contributing) {
            continue;
        }
        SaddleContribution r = c;
        r.exponent_term = saddle_exponent(c.solution, n, m);
        HessianBlocks b = build_hessian_blocks(c.solution.p, n, m);
        r.det_dprime = det_dprime_forms(b).via_lambda1;
        r.term = r.exponent_term / LogComplex::from_complex(r.det_dprime).sqrt();
        out.push_back(r);
    }
    return out;
}

std::vector<int> calibrate_signs(const NetworkMatrix &u, const std::vector<SaddleContribution> &contribs,
                                 const Occupation &n, const Occupation &m, const ApproxOptions &options,
                                 bool *calibrated) {
    int count = 0;
    for (const auto &c : contribs) {
        count += c.contributing ? 1 : 0;
    }
    std::vector<int> signs(static_cast<std::size_t>(count), 1);
    *calibrated = false;
    int g = 0;
    for (int k = 0; k < n.size(); ++k) {
        g = std::gcd(g, n[k]);
        g = std::gcd(g, m[k]);
    }
    if (count == 0 || g <= 1) {
        return signs;
    }
    std::vector<std::pair<Occupation, Occupation>> points;
    for (int t = g - 1; t >= 1 && points.size() < 3; --t) {
        std::vector<int> nc, mc;
        for (int k = 0; k < n.size(); ++k) {
            nc.push_back(n[k] / g * t);
            mc.push_back(m[k] / g * t);
        }
        Occupation on(nc), om(mc);
        if (on.total() > options.calibration_max_total) {
            continue;
        }
        points.emplace_back(on, om);
    }
    std::vector<std::pair<LogComplex, std::vector<SaddleContribution>>> data;
    for (const auto &[cn, cm] : points) {
        LogComplex exact = amplitude_exact(u, cn, cm);
        if (exact.is_zero() || exact.log_mag() < -30.0) {
            continue;
        }
        // Compare in permanent-term units: strip the occupation prefactor from the exact amplitude.
        data.emplace_back(exact / prefactor(cn, cm), rescale_terms(contribs, cn, cm));
    }
    if (data.empty() || count > 12) {
        return signs;
    }
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << count); ++mask) {
        std::vector<int> trial(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            trial[i] = (mask >> i) & 1u ? -1 : 1;
        }
        double err = 0.0;
        for (const auto &[exact, terms] : data) {
            LogComplex s;
            for (int i = 0; i < count; ++i) {
                s += trial[i] > 0 ? terms[i].term : -terms[i].term;
            }
            err += relative_error(s, exact);
        }
        if (err < best) {
            best = err;
            signs = trial;
        }
    }
    *calibrated = true;
    return signs;
}

}  // namespace

double saddle_separation(const ComplexMatrix &pa, const ComplexMatrix &pb, const Occupation &n, const Occupation &m) {
    double log_scale = 0.0;
    for (int k = 0; k < n.size(); ++k) {
        log_scale += std::log(static_cast<double>(n[k])) + std::log(static_cast<double>(m[k]));
    }
    log_scale /= 2.0 * n.size();
    return n.total() * (pa - pb).cwiseAbs().maxCoeff() / std::exp(log_scale);
}

ApproxResult assemble_approximation(const std::vector<SaddleContribution> &contributions, const Occupation &n,
                                    const Occupation &m, const ApproxOptions &options) {
    ApproxResult res;
    ApproxDiagnostics &d = res.diagnostics;
    d.saddle_count = static_cast<int>(contributions.size());
    d.contributions = contributions;
    d.min_abs_det = std::numeric_limits<double>::infinity();
    d.min_det_ratio = std::numeric_limits<double>::infinity();
    for (const auto &c : contributions) {
        if (!c.contributing) {
            continue;
        }
        d.contributing_count += 1;
        d.sign_choices.push_back(c.sign_choice);
        d.min_abs_det = std::min(d.min_abs_det, std::abs(c.det_dprime));
        d.min_det_ratio = std::min(d.min_det_ratio, c.det_ratio);
    }
    if (d.contributing_count == 0) {
        throw Error(ErrorKind::NoSaddlesFound, "no contributing saddle point");
    }
    d.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < contributions.size(); ++a) {
        for (std::size_t b = a + 1; b < contributions.size(); ++b) {
            if (contributions[a].contributing || contributions[b].contributing) {
                d.min_separation = std::min(
                    d.min_separation, saddle_separation(contributions[a].solution.p, contributions[b].solution.p, n, m));
            }
        }
    }
    if (d.min_det_ratio < options.coalescence_det_ratio || d.min_separation < options.coalescence_separation) {
        d.coalescing = true;
        std::ostringstream msg;
        msg << "coalescing saddles: min |det D'| / prod(n m / N^2) = " << d.min_det_ratio
            << ", min saddle separation = " << d.min_separation;
        throw CoalescingError(msg.str(), d);
    }
    Summed s = sum_terms(contributions, d.sign_choices, options.cancellation_ulps, n.total());
    d.cancelled = s.cancelled;
    // per ~ N! sqrt(prod (n/N)(m/N)) sum_s term_s.
    double total = n.total();
    double lg = log_factorial(n.total());
    for (int k = 0; k < n.size(); ++k) {
        lg += 0.5 * (std::log(n[k] / total) + std::log(m[k] / total));
    }
    res.permanent = s.value * LogComplex::from_polar_log(lg, 0.0);
    res.amplitude = s.value * prefactor(n, m);
    return res;
}

ApproxResult amplitude_approx(const NetworkMatrix &u, const Occupation &n, const Occupation &m,
                              const ApproxOptions &options) {
    check_margins(u.dim(), n, m);
    require_strictly_positive(n, m);
    ScalingProblem problem(u, n, m);
    std::vector<SaddleSolution> roots;
    try {
        roots = solve_all_saddles(problem, options.solver);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::NoConvergence || e.kind() == ErrorKind::DegenerateSaddle) {
            throw Error(ErrorKind::NoSaddlesFound, e.what());
        }
        throw;
    }
    std::vector<SaddleContribution> contribs = select_contributing(roots, n, m);
    std::string rule = "principal";
    if (options.branch == BranchRule::Calibrated) {
        bool calibrated = false;
        std::vector<int> signs = calibrate_signs(u, contribs, n, m, options, &calibrated);
        std::size_t j = 0;
        for (auto &c : contribs) {
            if (c.contributing) {
                c.sign_choice = signs[j++];
            }
        }
        rule = calibrated ? "calibrated" : "principal (no calibration point)";
    }
    ApproxResult r = assemble_approximation(contribs, n, m, options);
    r.diagnostics.branch_rule = rule;
    return r;
}

double log_classical_probability_approx(const NetworkMatrix &u, const Occupation &n, const Occupation &m) {
    check_margins(u.dim(), n, m);
    require_strictly_positive(n, m);
    RealMatrix a = u.intensities();
    if (!(a.minCoeff() >= 1e-300)) {
        throw Error(ErrorKind::NonPositiveIntensity, "classical saddle needs every |U_kl|^2 > 0");
    }
    SaddleSolution s = sinkhorn_scale_classical(a, n, m);
    HessianBlocks b = build_hessian_blocks(s.p.real().cast<std::complex<double>>(), n, m);
    std::complex<double> det = det_dprime(b);
    double total = n.total();
    double lg = log_factorial(n.total()) - 0.5 * std::log(std::abs(det));
    for (int k = 0; k < n.size(); ++k) {
        double x = s.x(k).real();
        double y = s.y(k).real();
        lg += 0.5 * (std::log(n[k] / total) + std::log(m[k] / total));
        lg += n[k] * std::log(n[k] / (total * x)) + m[k] * std::log(m[k] / (total * y));
        lg -= log_factorial(m[k]);
    }
    return lg;
}

double classical_probability_approx(const NetworkMatrix &u, const Occupation &n, const Occupation &m) {
    return std::exp(log_classical_probability_approx(u, n, m));
}

double log_classical_bell_probability(int modes, const Occupation &m) {
    double lg = log_factorial(m.total()) - m.total() * std::log(static_cast<double>(modes));
    for (int c : m.counts()) {
        lg -= log_factorial(c);
    }
    return lg;
}

double multinomial_approx(const Occupation &n) {
    if (!n.strictly_positive()) {
        throw Error(ErrorKind::EmptyMode, "multinomial approximation needs every n_k >= 1");
    }
    double total = n.total();
    double entropy = 0.0;
    double log_prod = 0.0;
    for (int c : n.counts()) {
        double f = c / total;
        entropy -= f * std::log(f);
        log_prod += std::log(f);
    }
    return total * entropy - 0.5 * ((n.size() - 1) * std::log(2.0 * std::numbers::pi * total) + log_prod);
}

double multinomial_exact_log(const Occupation &n) {
    double lg = log_factorial(n.total());
    for (int c : n.counts()) {
        lg -= log_factorial(c);
    }
    return lg;
}

double mortici_theta(int n) {
    if (n < 0) {
        throw Error(ErrorKind::InvalidArgument, "negative argument");
    }
    if (n == 0) {
        return 1.0 / (2.0 * std::numbers::pi);
    }
    double x = n;
    // Stirling remainder log n! - (log sqrt(2 pi n) + n log n - n).
    double c;
    if (n >= 12) {
        double x2 = x * x;
        c = 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2) -
            1.0 / (1680.0 * x * x2 * x2 * x2);
    } else {
        c = std::lgamma(x + 1.0) - 0.5 * std::log(2.0 * std::numbers::pi * x) - x * std::log(x) + x;
    }
    return x * std::expm1(2.0 * c);
}

double multinomial_mortici_log(const Occupation &n) {
    if (!n.strictly_positive()) {
        throw Error(ErrorKind::EmptyMode, "multinomial form needs every n_k >= 1");
    }
    double total = n.total();
    double entropy = 0.0;
    double corr = 0.0;
    for (int c : n.counts()) {
        double f = c / total;
        entropy -= f * std::log(f);
        corr += std::log(f + mortici_theta(c) / total);
    }
    return total * entropy - 0.5 * (n.size() - 1) * std::log(2.0 * std::numbers::pi * total) +
           0.5 * std::log1p(mortici_theta(n.total()) / total) - 0.5 * corr;
}

double stirling_binomial_relative_error(int total, int k) {
    Occupation n{k, total - k};
    return std::abs(std::expm1(multinomial_approx(n) - multinomial_exact_log(n)));
}

namespace identities {

RealMatrix constraint_matrix(int dim) {
    RealMatrix c = RealMatrix::Zero(2 * dim - 1, dim * dim);
    for (int k = 0; k < dim; ++k) {
        for (int l = 0; l < dim; ++l) {
            c(k, k * dim + l) = 1.0;
            if (l < dim - 1) {
                c(dim + l, k * dim + l) = 1.0;
            }
        }
    }
    return c;
}

SylvesterSides generalized_sylvester(const ComplexMatrix &a, const RealMatrix &c) {
    const int rows = static_cast<int>(c.rows());
    const int cols = static_cast<int>(c.cols());
    Eigen::ColPivHouseholderQR<RealMatrix> qr(c);
    if (qr.rank() < rows) {
        throw Error(ErrorKind::InvalidArgument, "constraint matrix must have full row rank");
    }
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic> perm = qr.colsPermutation();
    RealMatrix cp = c * perm;
    ComplexMatrix ap = perm.transpose() * a * perm;
    RealMatrix ci = cp.leftCols(rows);
    RealMatrix cii = cp.rightCols(cols - rows);
    RealMatrix b = -ci.partialPivLu().solve(cii);
    ComplexMatrix basis(cols, cols - rows);
    basis.topRows(rows) = b.cast<std::complex<double>>();
    basis.bottomRows(cols - rows) = ComplexMatrix::Identity(cols - rows, cols - rows);
    double dci = ci.determinant();
    SylvesterSides s;
    s.lhs = dci * dci * det_lu(basis.transpose() * ap * basis);
    ComplexMatrix cc = c.cast<std::complex<double>>();
    ComplexMatrix inner = cc * a.partialPivLu().solve(cc.transpose());
    s.rhs = det_lu(a) * det_lu(inner);
    return s;
}

BlockSides block_determinant(const ComplexMatrix &a1, const ComplexMatrix &a2, const ComplexMatrix &a3,
                             const ComplexMatrix &a4) {
    const auto r1 = a1.rows();
    const auto r4 = a4.rows();
    ComplexMatrix full(r1 + r4, r1 + r4);
    full.topLeftCorner(r1, r1) = a1;
    full.topRightCorner(r1, r4) = a2;
    full.bottomLeftCorner(r4, r1) = a3;
    full.bottomRightCorner(r4, r4) = a4;
    BlockSides s;
    s.direct = det_lu(full);
    s.via_a1 = det_lu(a1) * det_lu(a4 - a3 * a1.partialPivLu().solve(a2));
    s.via_a4 = det_lu(a4) * det_lu(a1 - a2 * a4.partialPivLu().solve(a3));
    return s;
}

}  // namespace identities

}  // namespace bosonic
