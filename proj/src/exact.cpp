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

#include "bosonic/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bosonic/combinatorics.hpp"
#include "bosonic/errors.hpp"
#include "mp_complex.hpp"

namespace bosonic {

RepeatedMatrixSpec::RepeatedMatrixSpec(ComplexMatrix base_matrix, Occupation n, Occupation m)
    : base(std::move(base_matrix)), row_reps(std::move(n)), col_reps(std::move(m)) {
    if (base.rows() != base.cols()) {
        throw Error(ErrorKind::BadDimension, "base matrix must be square");
    }
    check_margins(static_cast<int>(base.rows()), row_reps, col_reps);
}

ComplexMatrix RepeatedMatrixSpec::materialize() const {
    int n_total = total();
    ComplexMatrix a(n_total, n_total);
    std::vector<int> rows;
    std::vector<int> cols;
    for (int k = 0; k < row_reps.size(); ++k) {
        rows.insert(rows.end(), static_cast<std::size_t>(row_reps[k]), k);
    }
    for (int l = 0; l < col_reps.size(); ++l) {
        cols.insert(cols.end(), static_cast<std::size_t>(col_reps[l]), l);
    }
    for (int i = 0; i < n_total; ++i) {
        for (int j = 0; j < n_total; ++j) {
            a(i, j) = base(rows[i], cols[j]);
        }
    }
    return a;
}

namespace {

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

    static void add1(double &s, double &c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x)) {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    void add(double xr, double xi) {
        add1(re, cre, xr);
        add1(im, cim, xi);
    }
    std::complex<double> value() const {
        return {re + cre, im + cim};
    }
};

inline void cmul(double &ar, double &ai, double br, double bi) {
    double r = ar * br - ai * bi;
    ai = ar * bi + ai * br;
    ar = r;
}

struct Prepared {
    int dim = 0;
    int total = 0;
    std::vector<int> n;
    std::vector<int> m;
    std::vector<std::complex<double>> u;  // scaled, row-major
    std::vector<double> uabs;
    int scale_exp = 0;  // scaled U = U * 2^scale_exp
    std::vector<int> active;
    int max_m = 0;
    double log_norm_scaled = 0.0;  // log(sqrt(prod n! m!) * 2^(N scale_exp))

    std::complex<double> at(int k, int l) const {
        return u[static_cast<std::size_t>(k * dim + l)];
    }
    double abs_at(int k, int l) const {
        return uabs[static_cast<std::size_t>(k * dim + l)];
    }
    // First-order bound on the accumulated relative rounding of one term.
    double rounding_factor() const {
        return static_cast<double>(total) * (dim + m[0] + 2) + 2.0 * max_m + 8.0;
    }
};

Prepared prepare(const RepeatedMatrixSpec &spec) {
    Prepared p;
    p.dim = static_cast<int>(spec.base.rows());
    p.total = spec.total();
    p.n = spec.row_reps.counts();
    p.m = spec.col_reps.counts();
    p.max_m = *std::max_element(p.m.begin(), p.m.end());
    double big = 0.0;
    for (int k = 0; k < p.dim; ++k) {
        if (p.n[k] == 0) {
            continue;
        }
        p.active.push_back(k);
        double s = 0.0;
        for (int l = 0; l < p.dim; ++l) {
            s += p.m[l] * std::abs(spec.base(k, l));
        }
        big = std::max(big, s);
    }
    int e = 0;
    if (big > 0.0) {
        std::frexp(big, &e);
    }
    // Power-of-two scaling keeps every row sum at most 1 in magnitude, exactly.
    p.scale_exp = -e;
    p.u.resize(static_cast<std::size_t>(p.dim * p.dim));
    p.uabs.resize(p.u.size());
    for (int k = 0; k < p.dim; ++k) {
        for (int l = 0; l < p.dim; ++l) {
            std::complex<double> z = spec.base(k, l);
            std::complex<double> s(std::ldexp(z.real(), p.scale_exp), std::ldexp(z.imag(), p.scale_exp));
            p.u[static_cast<std::size_t>(k * p.dim + l)] = s;
            p.uabs[static_cast<std::size_t>(k * p.dim + l)] = std::abs(s);
        }
    }
    double lf = 0.0;
    for (int k = 0; k < p.dim; ++k) {
        lf += log_factorial(p.n[k]) + log_factorial(p.m[k]);
    }
    p.log_norm_scaled = 0.5 * lf + p.total * p.scale_exp * std::log(2.0);
    return p;
}

struct PassResult {
    LogComplex value;
    long double majorant = 0.0L;
    double error_bound = 0.0;  // absolute, in the scaled domain
    std::uint64_t terms = 0;
    std::uint64_t mults = 0;
    std::uint64_t adds = 0;
};

// Shared odometer over r in prod [0, m_l]; visit(r, sigma) is called for every r with sum(r) < N.
// step(l) is called when digit l increments without a carry; reset() after any carry.
template <class Visit, class Step, class Reset>
void odometer(const Prepared &p, Visit &&visit, Step &&step, Reset &&reset) {
    std::vector<int> r(static_cast<std::size_t>(p.dim), 0);
    int sigma = 0;
    reset(r);
    while (true) {
        if (sigma < p.total) {
            visit(r, sigma);
        }
        int l = 0;
        if (r[0] < p.m[0]) {
            r[0] += 1;
            sigma += 1;
            step(0);
            continue;
        }
        while (l < p.dim && r[l] == p.m[l]) {
            sigma -= r[l];
            r[l] = 0;
            ++l;
        }
        if (l == p.dim) {
            break;
        }
        r[l] += 1;
        sigma += 1;
        reset(r);
    }
}

PassResult run_double(const Prepared &p) {
    const int dim = p.dim;
    std::vector<std::vector<double>> binom(static_cast<std::size_t>(dim));
    for (int l = 0; l < dim; ++l) {
        auto &b = binom[l];
        b.resize(static_cast<std::size_t>(p.m[l] + 1));
        b[0] = 1.0;
        for (int r = 0; r < p.m[l]; ++r) {
            b[r + 1] = b[r] * (p.m[l] - r) / (r + 1);
        }
    }
    std::vector<double> rs_re(static_cast<std::size_t>(dim)), rs_im(static_cast<std::size_t>(dim)),
        rs_abs(static_cast<std::size_t>(dim));
    CompensatedSum acc;
    PassResult out;

    auto reset = [&](const std::vector<int> &r) {
        for (int k : p.active) {
            double re = 0.0, im = 0.0, ab = 0.0;
            for (int l = 0; l < dim; ++l) {
                int c = p.m[l] - r[l];
                re += c * p.at(k, l).real();
                im += c * p.at(k, l).imag();
                ab += c * p.abs_at(k, l);
            }
            rs_re[k] = re;
            rs_im[k] = im;
            rs_abs[k] = ab;
        }
        out.mults += static_cast<std::uint64_t>(p.active.size() * dim);
        out.adds += static_cast<std::uint64_t>(p.active.size() * dim);
    };
    auto step = [&](int l) {
        for (int k : p.active) {
            rs_re[k] -= p.at(k, l).real();
            rs_im[k] -= p.at(k, l).imag();
            rs_abs[k] -= p.abs_at(k, l);
        }
        out.adds += p.active.size();
    };
    auto visit = [&](const std::vector<int> &r, int sigma) {
        double w = binom[0][r[0]];
        for (int l = 1; l < dim; ++l) {
            w *= binom[l][r[l]];
        }
        double tr = 1.0, ti = 0.0, ta = 1.0;
        bool first = true;
        for (int k : p.active) {
            for (int e = 0; e < p.n[k]; ++e) {
                if (first) {
                    tr = rs_re[k];
                    ti = rs_im[k];
                    first = false;
                } else {
                    cmul(tr, ti, rs_re[k], rs_im[k]);
                }
                ta *= std::max(rs_abs[k], 0.0);
            }
        }
        if (sigma & 1) {
            w = -w;
        }
        acc.add(w * tr, w * ti);
        out.majorant += static_cast<long double>(std::abs(w) * ta);
        out.terms += 1;
        out.mults += static_cast<std::uint64_t>(dim - 1 + p.total);
        out.adds += 1;
    };
    odometer(p, visit, step, reset);
    std::complex<double> v = acc.value();
    out.value = LogComplex::from_complex(v);
    out.error_bound = static_cast<double>(p.rounding_factor() * std::numeric_limits<double>::epsilon() *
                                          out.majorant);
    return out;
}

PassResult run_extended(const Prepared &p, int bits) {
    using detail::MpComplex;
    using detail::MpReal;
    const int dim = p.dim;
    const mpfr_prec_t prec = bits;

    std::vector<std::vector<MpReal>> binom(static_cast<std::size_t>(dim));
    mpz_t z;
    mpz_init(z);
    for (int l = 0; l < dim; ++l) {
        binom[l].reserve(static_cast<std::size_t>(p.m[l] + 1));
        for (int r = 0; r <= p.m[l]; ++r) {
            binom[l].emplace_back(prec);
            mpz_bin_uiui(z, static_cast<unsigned long>(p.m[l]), static_cast<unsigned long>(r));
            mpfr_set_z(binom[l].back().get(), z, MPFR_RNDN);
        }
    }
    mpz_clear(z);

    std::vector<MpComplex> u;
    u.reserve(p.u.size());
    for (auto v : p.u) {
        u.emplace_back(prec);
        u.back().set(v);
    }
    std::vector<MpComplex> rs(static_cast<std::size_t>(dim), MpComplex(prec));
    std::vector<double> rs_abs(static_cast<std::size_t>(dim));
    MpComplex acc(prec);
    MpComplex term(prec);
    MpReal w(prec);
    PassResult out;

    auto reset = [&](const std::vector<int> &r) {
        for (int k : p.active) {
            rs[k].set_zero();
            double ab = 0.0;
            for (int l = 0; l < dim; ++l) {
                int c = p.m[l] - r[l];
                rs[k].add_scaled(u[static_cast<std::size_t>(k * dim + l)], c);
                ab += c * p.abs_at(k, l);
            }
            rs_abs[k] = ab;
        }
        out.mults += static_cast<std::uint64_t>(p.active.size() * dim);
        out.adds += static_cast<std::uint64_t>(p.active.size() * dim);
    };
    auto step = [&](int l) {
        for (int k : p.active) {
            rs[k].sub(u[static_cast<std::size_t>(k * dim + l)]);
            rs_abs[k] -= p.abs_at(k, l);
        }
        out.adds += p.active.size();
    };
    auto visit = [&](const std::vector<int> &r, int sigma) {
        mpfr_set(w.get(), binom[0][r[0]].get(), MPFR_RNDN);
        double wd = mpfr_get_d(binom[0][r[0]].get(), MPFR_RNDN);
        for (int l = 1; l < dim; ++l) {
            mpfr_mul(w.get(), w.get(), binom[l][r[l]].get(), MPFR_RNDN);
            wd *= mpfr_get_d(binom[l][r[l]].get(), MPFR_RNDN);
        }
        long double ta = 1.0L;
        bool first = true;
        for (int k : p.active) {
            for (int e = 0; e < p.n[k]; ++e) {
                if (first) {
                    term = rs[k];
                    first = false;
                } else {
                    term.mul(rs[k]);
                }
                ta *= std::max(rs_abs[k], 0.0);
            }
        }
        term.mul_real(w.get());
        if (sigma & 1) {
            acc.sub(term);
        } else {
            acc.add(term);
        }
        out.majorant += static_cast<long double>(wd) * ta;
        out.terms += 1;
        out.mults += static_cast<std::uint64_t>(dim - 1 + p.total);
        out.adds += 1;
    };
    odometer(p, visit, step, reset);
    out.value = acc.to_log_complex();
    out.error_bound = static_cast<double>(static_cast<long double>(p.rounding_factor()) *
                                          std::ldexp(1.0L, 1 - bits) * out.majorant);
    return out;
}

bool accurate_enough(const Prepared &p, const PassResult &r, const RyserOptions &opt) {
    double mag = r.value.magnitude();
    if (r.error_bound <= opt.rel_tol * mag) {
        return true;
    }
    if (r.error_bound == 0.0) {
        return true;
    }
    return std::log(r.error_bound) <= std::log(opt.abs_amplitude_tol) + p.log_norm_scaled;
}

int bits_needed(const Prepared &p, const PassResult &r, const RyserOptions &opt) {
    double mag = r.value.magnitude();
    double target = opt.rel_tol * std::max(mag - r.error_bound, 0.0);
    double floor_target = std::exp(std::log(opt.abs_amplitude_tol) + p.log_norm_scaled);
    target = std::max(target, floor_target);
    double maj = static_cast<double>(r.majorant);
    if (!(maj > 0.0) || !(target > 0.0)) {
        return 128;
    }
    double bits = std::log2(p.rounding_factor() * maj / target) + 16.0;
    return static_cast<int>(std::ceil(std::max(bits, 64.0)));
}

}  // namespace

LogComplex permanent_naive(const ComplexMatrix &a) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorKind::BadDimension, "permanent needs a square matrix");
    }
    int n = static_cast<int>(a.rows());
    if (n > 10) {
        throw Error(ErrorKind::TooLarge, "naive permanent limited to n <= 10");
    }
    if (n == 0) {
        return LogComplex::one();
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    CompensatedSum acc;
    do {
        std::complex<double> prod = a(0, perm[0]);
        for (int i = 1; i < n; ++i) {
            prod *= a(i, perm[i]);
        }
        acc.add(prod.real(), prod.imag());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return LogComplex::from_complex(acc.value());
}

LogComplex permanent_ryser_repeated(const RepeatedMatrixSpec &spec, const RyserOptions &options,
                                    RyserStats *stats) {
    if (spec.total() == 0) {
        if (stats) {
            *stats = RyserStats{};
        }
        return LogComplex::one();
    }
    Prepared p = prepare(spec);
    if (p.active.empty()) {
        return LogComplex::one();
    }
    RyserStats st;
    PassResult r;
    int bits = 53;
    bool ok = true;
    switch (options.arithmetic) {
        case Arithmetic::Double:
            r = run_double(p);
            st.passes = 1;
            ok = accurate_enough(p, r, options);
            break;
        case Arithmetic::Extended:
            bits = std::max(options.extended_bits, 53);
            r = run_extended(p, bits);
            st.passes = 1;
            ok = accurate_enough(p, r, options);
            break;
        case Arithmetic::Auto: {
            r = run_double(p);
            st.passes = 1;
            ok = accurate_enough(p, r, options);
            int last_bits = 53;
            while (!ok) {
                int want = std::max(bits_needed(p, r, options), last_bits + 64);
                if (last_bits >= options.max_bits) {
                    break;
                }
                bits = std::min(want, options.max_bits);
                r = run_extended(p, bits);
                st.passes += 1;
                last_bits = bits;
                ok = accurate_enough(p, r, options);
            }
            break;
        }
    }
    st.terms = r.terms;
    st.multiplications = r.mults;
    st.additions = r.adds;
    st.precision_bits = bits;
    st.reached_tolerance = ok;
    double mag = r.value.magnitude();
    st.error_bound = mag > 0.0 ? r.error_bound / mag : std::numeric_limits<double>::infinity();
    st.cancellation_digits =
        mag > 0.0 ? std::log10(static_cast<double>(r.majorant) / mag) : std::numeric_limits<double>::infinity();
    if (stats) {
        *stats = st;
    }
    // Undo the power-of-two row scaling: per = per_scaled * 2^(-N e).
    LogComplex unscale = LogComplex::from_scaled({1.0, 0.0}, -static_cast<std::int64_t>(p.total) * p.scale_exp);
    return r.value * unscale;
}

namespace {

LogComplex inverse_sqrt_factorials(const Occupation &n, const Occupation &m) {
    double lf = 0.0;
    for (int k = 0; k < n.size(); ++k) {
        lf += log_factorial(n[k]) + log_factorial(m[k]);
    }
    return LogComplex::from_polar_log(-0.5 * lf, 0.0);
}

}  // namespace

LogComplex amplitude_exact(const NetworkMatrix &u, const Occupation &n, const Occupation &m,
                           const RyserOptions &options, RyserStats *stats) {
    check_margins(u.dim(), n, m);
    RepeatedMatrixSpec spec(u, n, m);
    LogComplex per = permanent_ryser_repeated(spec, options, stats);
    return per * inverse_sqrt_factorials(n, m);
}

LogComplex amplitude_via_contingency_average(const NetworkMatrix &u, const Occupation &n, const Occupation &m) {
    check_margins(u.dim(), n, m);
    if (n.total() > 8) {
        throw Error(ErrorKind::TooLarge, "contingency average limited to N <= 8");
    }
    int dim = u.dim();
    CompensatedSum acc;
    ContingencyEnumerator it(n, m);
    while (auto t = it.next()) {
        double prob = fisher_yates_probability(*t);
        std::complex<double> prod(1.0, 0.0);
        for (int k = 0; k < dim; ++k) {
            for (int l = 0; l < dim; ++l) {
                for (int s = 0; s < (*t)(k, l); ++s) {
                    prod *= u(k, l);
                }
            }
        }
        prod *= prob;
        acc.add(prod.real(), prod.imag());
    }
    LogComplex avg = LogComplex::from_complex(acc.value());
    LogComplex nfact = LogComplex::from_polar_log(log_factorial(n.total()), 0.0);
    return nfact * avg * inverse_sqrt_factorials(n, m);
}

double classical_probability(const NetworkMatrix &u, const Occupation &n, const Occupation &m,
                             const RyserOptions &options) {
    check_margins(u.dim(), n, m);
    ComplexMatrix a = u.intensities().cast<std::complex<double>>();
    RepeatedMatrixSpec spec(a, n, m);
    LogComplex per = permanent_ryser_repeated(spec, options);
    double lf = 0.0;
    for (int k = 0; k < m.size(); ++k) {
        lf += log_factorial(m[k]);
    }
    LogComplex prob = per * LogComplex::from_polar_log(-lf, 0.0);
    return prob.to_complex().real();
}

FlopEstimate flop_estimate(const Occupation &n, const Occupation &m) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    auto mul = [](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
        if (a == 0 || b == 0) {
            return 0;
        }
        return a > kMax / b ? kMax : a * b;
    };
    std::uint64_t prod = 1;
    for (int mk : m.counts()) {
        prod = mul(prod, static_cast<std::uint64_t>(mk) + 1);
    }
    std::uint64_t terms = prod == kMax ? kMax : prod - 1;
    FlopEstimate f;
    f.lower = mul(static_cast<std::uint64_t>(n.total()), terms);
    f.upper = mul(static_cast<std::uint64_t>(m.size()), f.lower);
    return f;
}

}  // namespace bosonic
