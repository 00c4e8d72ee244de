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

// bosonic-saddle: amplitude queries, output scans, error sweeps, saddle
// listings and runtime benchmarks.
//
// Exit codes: 0 ok, 2 input error, 3 coalescing saddles, 4 no saddles.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bosonic/beamsplitter.hpp"
#include "bosonic/combinatorics.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/exact.hpp"
#include "bosonic/saddle.hpp"

using namespace bosonic;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCoalescing = 3;
constexpr int kExitNoSaddles = 4;

constexpr const char *kSchema = "v1";
constexpr const char *kCsvHeader = "# bosonic-saddle sweep v1";
constexpr std::uint64_t kScanLimit = 1000000;
constexpr std::uint64_t kExactFlopLimit = 1000000000ULL;

struct CommonFlags {
    std::string matrix;
    std::string in;
    std::string out;
    std::string method = "exact";
    std::uint64_t seed = 1;
    int starts = 0;
    std::string branch = "principal";
};

// Round-trip formatting, so the same doubles always print the same bytes.
std::string fmt(double v) {
    if (!std::isfinite(v)) {
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int thread_budget() {
    return default_thread_count();
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        parts.push_back(item);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

int parse_int(const std::string &text, const std::string &what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw Error(ErrorKind::ParseError, "bad integer '" + text + "' in " + what);
    }
    return v;
}

// FILE (JSON or CSV), or builtin:beamsplitter, builtin:tritter,
// builtin:bell:M, builtin:identity:M, builtin:haar:M:SEED.
NetworkMatrix load_matrix(const std::string &spec) {
    if (spec.empty()) {
        throw Error(ErrorKind::InvalidArgument, "--matrix is required");
    }
    const std::string prefix = "builtin:";
    if (spec.rfind(prefix, 0) != 0) {
        return read_network_file(spec);
    }
    auto parts = split(spec.substr(prefix.size()), ':');
    const std::string &name = parts.empty() ? spec : parts[0];
    if (name == "beamsplitter" && parts.size() == 1) {
        return symmetric_beam_splitter();
    }
    if (name == "tritter" && parts.size() == 1) {
        return tritter();
    }
    if (name == "bell" && parts.size() == 2) {
        return bell_multiport(parse_int(parts[1], "builtin dimension"));
    }
    if (name == "identity" && parts.size() == 2) {
        return identity_network(parse_int(parts[1], "builtin dimension"));
    }
    if (name == "haar" && parts.size() == 3) {
        return haar_random_unitary(parse_int(parts[1], "builtin dimension"),
                                   static_cast<std::uint64_t>(parse_int(parts[2], "builtin seed")));
    }
    throw Error(ErrorKind::ParseError, "unknown builtin matrix '" + spec + "'");
}

BranchRule parse_branch(const std::string &text) {
    if (text == "principal") {
        return BranchRule::Principal;
    }
    if (text == "calibrated") {
        return BranchRule::Calibrated;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown branch rule '" + text + "'");
}

ApproxOptions approx_options(const CommonFlags &f, int solver_threads = 0) {
    ApproxOptions o;
    o.solver.seed = f.seed;
    o.solver.starts = f.starts;
    o.solver.threads = solver_threads;
    o.branch = parse_branch(f.branch);
    return o;
}

// Intensities 1/2 everywhere: the beam-splitter regime picture applies.
bool balanced_two_mode(const NetworkMatrix &u) {
    if (u.dim() != 2) {
        return false;
    }
    RealMatrix w = u.intensities();
    return (w.array() - 0.5).abs().maxCoeff() < 1e-12;
}

json complex_json(std::complex<double> z) {
    return json::array({z.real(), z.imag()});
}

json matrix_json(const ComplexMatrix &a) {
    json rows = json::array();
    for (int k = 0; k < a.rows(); ++k) {
        json row = json::array();
        for (int l = 0; l < a.cols(); ++l) {
            row.push_back(complex_json(a(k, l)));
        }
        rows.push_back(row);
    }
    return rows;
}

json vector_json(const ComplexVector &v) {
    json out = json::array();
    for (int k = 0; k < v.size(); ++k) {
        out.push_back(complex_json(v(k)));
    }
    return out;
}

json value_json(const LogComplex &a) {
    std::complex<double> z = a.to_complex();
    json j;
    j["log_mag"] = a.is_zero() ? json(nullptr) : json(a.log_mag());
    j["phase"] = a.is_zero() ? 0.0 : a.phase();
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

json diagnostics_json(const ApproxDiagnostics &d) {
    json j;
    j["saddle_count"] = d.saddle_count;
    j["contributing_count"] = d.contributing_count;
    j["min_abs_det"] = d.min_abs_det;
    j["min_det_ratio"] = d.min_det_ratio;
    j["min_separation"] = d.min_separation;
    j["coalescing"] = d.coalescing;
    j["cancelled"] = d.cancelled;
    j["branch_rule"] = d.branch_rule;
    j["sign_choices"] = d.sign_choices;
    return j;
}

json ryser_json(const RyserStats &s, const FlopEstimate &f) {
    json j;
    j["terms"] = s.terms;
    j["operations"] = s.operations();
    j["precision_bits"] = s.precision_bits;
    j["error_bound"] = s.error_bound;
    j["flop_lower"] = f.lower;
    j["flop_upper"] = f.upper;
    return j;
}

// The exact engine certifies an absolute error bound; a value inside it is
// reported as an exact zero.
LogComplex exact_amplitude(const NetworkMatrix &u, const Occupation &n, const Occupation &m, RyserStats &stats,
                           bool &zero_within_bound) {
    LogComplex a = amplitude_exact(u, n, m, {}, &stats);
    zero_within_bound = !a.is_zero() && stats.error_bound >= 1.0;
    return zero_within_bound ? LogComplex::zero() : a;
}

void print_json(const json &j) {
    std::cout << j.dump(2) << "\n";
}

// amplitude

int cmd_amplitude(const CommonFlags &f) {
    NetworkMatrix u = load_matrix(f.matrix);
    Occupation n = Occupation::parse(f.in);
    Occupation m = Occupation::parse(f.out);
    check_margins(u.dim(), n, m);
    const std::string &method = f.method;
    if (method != "exact" && method != "approx" && method != "classical" && method != "both") {
        throw Error(ErrorKind::InvalidArgument, "unknown method '" + method + "'");
    }

    json out;
    out["schema"] = kSchema;
    out["method"] = method;
    out["in"] = n.counts();
    out["out"] = m.counts();

    if (method == "classical") {
        double exact = classical_probability(u, n, m);
        double approx = classical_probability_approx(u, n, m);
        out["probability"] = exact;
        out["approx_probability"] = approx;
        out["rel_error"] = exact > 0 ? json(std::abs(approx - exact) / exact) : json(nullptr);
        out["log_mag"] = std::log(exact);
        out["phase"] = 0.0;
        out["re"] = exact;
        out["im"] = 0.0;
        out["diagnostics"] = json::object();
        print_json(out);
        return kExitOk;
    }

    std::optional<LogComplex> exact;
    if (method == "exact" || method == "both") {
        RyserStats stats;
        bool snapped = false;
        exact = exact_amplitude(u, n, m, stats, snapped);
        out["exact_stats"] = ryser_json(stats, flop_estimate(n, m));
        out["exact_stats"]["zero_within_bound"] = snapped;
    }

    int code = kExitOk;
    std::optional<LogComplex> approx;
    if (method == "approx" || method == "both") {
        try {
            ApproxResult r = amplitude_approx(u, n, m, approx_options(f));
            approx = r.amplitude;
            out["diagnostics"] = diagnostics_json(r.diagnostics);
        } catch (const CoalescingError &e) {
            out["diagnostics"] = diagnostics_json(e.diagnostics());
            out["error"] = e.what();
            code = kExitCoalescing;
        }
    } else {
        out["diagnostics"] = json::object();
    }

    const LogComplex *primary = method == "exact" ? &*exact : (approx ? &*approx : nullptr);
    if (primary) {
        json value = value_json(*primary);
        for (auto &[k, v] : value.items()) {
            out[k] = v;
        }
    } else {
        out["log_mag"] = nullptr;
        out["phase"] = nullptr;
        out["re"] = nullptr;
        out["im"] = nullptr;
    }
    if (method == "both") {
        out["exact"] = value_json(*exact);
        out["approx"] = approx ? value_json(*approx) : json(nullptr);
        out["rel_error"] = (approx && !exact->is_zero()) ? json(relative_error(*approx, *exact)) : json(nullptr);
        RealMatrix w = u.intensities();
        if ((w.array() > 0.0).all() && n.strictly_positive() && m.strictly_positive()) {
            double ce = classical_probability(u, n, m);
            double ca = classical_probability_approx(u, n, m);
            out["classical"] = {{"exact", ce}, {"approx", ca}, {"rel_error", std::abs(ca - ce) / ce}};
        }
    }
    print_json(out);
    return code;
}

// scan

struct ScanRow {
    std::string exact_re, exact_im, exact_prob, approx_re, approx_im, approx_prob, rel_error, status = "ok";
};

ScanRow scan_one(const NetworkMatrix &u, const Occupation &n, const Occupation &m, const std::string &method,
                 const ApproxOptions &opts) {
    ScanRow row;
    if (method == "classical") {
        double ce = classical_probability(u, n, m);
        row.exact_prob = fmt(ce);
        try {
            double ca = classical_probability_approx(u, n, m);
            row.approx_prob = fmt(ca);
            if (ce > 0) {
                row.rel_error = fmt(std::abs(ca - ce) / ce);
            }
        } catch (const Error &e) {
            row.status = to_string(e.kind());
        }
        return row;
    }
    std::optional<LogComplex> exact;
    if (method == "exact" || method == "both") {
        RyserStats stats;
        bool snapped = false;
        exact = exact_amplitude(u, n, m, stats, snapped);
        if (snapped) {
            row.status = "zero_within_bound";
        }
        auto z = exact->to_complex();
        row.exact_re = fmt(z.real());
        row.exact_im = fmt(z.imag());
        row.exact_prob = fmt(std::norm(z));
    }
    if (method == "approx" || method == "both") {
        try {
            LogComplex a = amplitude_approx(u, n, m, opts).amplitude;
            auto z = a.to_complex();
            row.approx_re = fmt(z.real());
            row.approx_im = fmt(z.imag());
            row.approx_prob = fmt(std::norm(z));
            if (exact && !exact->is_zero()) {
                row.rel_error = fmt(relative_error(a, *exact));
            }
        } catch (const Error &e) {
            row.status = to_string(e.kind());
        }
    }
    return row;
}

// Runs fn(i) for i in [0, count) on the thread budget; results land by index.
template <class Fn>
void parallel_for(std::size_t count, Fn fn) {
    int threads = std::clamp<int>(thread_budget(), 1, static_cast<int>(std::max<std::size_t>(count, 1)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

int cmd_scan(const CommonFlags &f, bool force) {
    NetworkMatrix u = load_matrix(f.matrix);
    Occupation n = Occupation::parse(f.in);
    check_margins(u.dim(), n, n);
    const std::string &method = f.method;
    if (method != "exact" && method != "approx" && method != "classical" && method != "both") {
        throw Error(ErrorKind::InvalidArgument, "unknown method '" + method + "'");
    }
    std::uint64_t count = count_output_configs(u.dim(), n.total());
    if (count > kScanLimit && !force) {
        throw Error(ErrorKind::TooLarge,
                    std::to_string(count) + " output configurations exceed 1000000; pass --force to scan anyway");
    }
    std::vector<Occupation> outs = enumerate_output_configs(u.dim(), n.total());
    ApproxOptions opts = approx_options(f, 1);
    std::vector<ScanRow> rows(outs.size());
    parallel_for(outs.size(), [&](std::size_t i) { rows[i] = scan_one(u, n, outs[i], method, opts); });

    std::cout << kCsvHeader << "\n";
    std::cout << "# scan method=" << method << " in=" << n.str() << " matrix=" << f.matrix << "\n";
    for (int k = 0; k < u.dim(); ++k) {
        std::cout << "m" << (k + 1) << ",";
    }
    std::cout << "exact_re,exact_im,exact_prob,approx_re,approx_im,approx_prob,rel_error,status\n";
    for (std::size_t i = 0; i < outs.size(); ++i) {
        for (int c : outs[i].counts()) {
            std::cout << c << ",";
        }
        const ScanRow &r = rows[i];
        std::cout << r.exact_re << "," << r.exact_im << "," << r.exact_prob << "," << r.approx_re << ","
                  << r.approx_im << "," << r.approx_prob << "," << r.rel_error << "," << r.status << "\n";
    }
    return kExitOk;
}

// error-sweep

struct Fraction {
    long long num = 0;
    long long den = 1;
};

Fraction parse_fraction(const std::string &text) {
    auto parts = split(text, '/');
    Fraction fr;
    if (parts.size() == 1) {
        fr.num = parse_int(parts[0], "fraction");
    } else if (parts.size() == 2) {
        fr.num = parse_int(parts[0], "fraction");
        fr.den = parse_int(parts[1], "fraction");
    } else {
        throw Error(ErrorKind::ParseError, "bad fraction '" + text + "'");
    }
    if (fr.den <= 0 || fr.num < 0 || fr.num > fr.den) {
        throw Error(ErrorKind::ParseError, "fraction '" + text + "' must lie in [0, 1]");
    }
    return fr;
}

// "a/b,c/d" with M or M-1 entries; a missing last entry closes the sum to 1.
std::vector<Fraction> parse_fraction_list(const std::string &text, int dim) {
    std::vector<Fraction> out;
    for (const auto &item : split(text, ',')) {
        out.push_back(parse_fraction(item));
    }
    if (static_cast<int>(out.size()) == dim - 1) {
        long long den = 1;
        for (const auto &fr : out) {
            den = std::lcm(den, fr.den);
        }
        long long num = den;
        for (const auto &fr : out) {
            num -= fr.num * (den / fr.den);
        }
        if (num < 0) {
            throw Error(ErrorKind::ParseError, "fractions '" + text + "' exceed 1");
        }
        out.push_back({num, den});
    }
    if (static_cast<int>(out.size()) != dim) {
        throw Error(ErrorKind::BadDimension, "fractions '" + text + "' do not match the matrix dimension");
    }
    return out;
}

std::optional<Occupation> occupation_at(const std::vector<Fraction> &fracs, int total) {
    std::vector<int> counts;
    long long sum = 0;
    for (const auto &fr : fracs) {
        if ((fr.num * total) % fr.den != 0) {
            return std::nullopt;
        }
        counts.push_back(static_cast<int>(fr.num * total / fr.den));
        sum += counts.back();
    }
    if (sum != total) {
        return std::nullopt;
    }
    return Occupation(counts);
}

struct SweepRow {
    int total = 0;
    Occupation n, m;
    std::optional<LogComplex> exact;
    std::optional<LogComplex> approx;
    std::string regime;
    std::string flag = "ok";
    ApproxDiagnostics diag;
    double wall_exact = 0.0;
    double wall_approx = 0.0;
};

SweepRow sweep_one(const NetworkMatrix &u, const Occupation &n, const Occupation &m, const ApproxOptions &opts,
                   bool bs_regimes) {
    SweepRow row;
    row.total = n.total();
    row.n = n;
    row.m = m;
    if (bs_regimes) {
        row.regime = to_string(BeamSplitterCase::make(n[0], n[1], m[0], m[1]).regime);
    }
    auto t0 = Clock::now();
    try {
        ApproxResult r = amplitude_approx(u, n, m, opts);
        row.approx = r.amplitude;
        row.diag = r.diagnostics;
    } catch (const CoalescingError &e) {
        row.diag = e.diagnostics();
        row.flag = "coalescing";
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::NoSaddlesFound) {
            throw;
        }
        row.flag = "no_saddles";
    }
    row.wall_approx = seconds_since(t0);
    if (flop_estimate(n, m).upper <= kExactFlopLimit) {
        t0 = Clock::now();
        RyserStats stats;
        bool snapped = false;
        row.exact = exact_amplitude(u, n, m, stats, snapped);
        row.wall_exact = seconds_since(t0);
    } else if (row.flag == "ok") {
        row.flag = "no_exact";
    }
    if (row.regime.empty()) {
        row.regime = row.flag == "coalescing" ? "coalescing" : "simple";
    }
    return row;
}

int cmd_error_sweep(const CommonFlags &f, const std::string &fractions, int n_min, int n_max, int n_step,
                    bool timing) {
    NetworkMatrix u = load_matrix(f.matrix);
    auto sides = split(fractions, ':');
    if (sides.size() != 2) {
        throw Error(ErrorKind::ParseError, "--fractions must look like n-fracs:m-fracs");
    }
    auto nf = parse_fraction_list(sides[0], u.dim());
    auto mf = parse_fraction_list(sides[1], u.dim());
    if (n_min < 1 || n_max < n_min || n_step < 1) {
        throw Error(ErrorKind::InvalidArgument, "need 1 <= --n-min <= --n-max and --n-step >= 1");
    }
    std::vector<std::pair<Occupation, Occupation>> points;
    for (int total = n_min; total <= n_max; total += n_step) {
        auto n = occupation_at(nf, total);
        auto m = occupation_at(mf, total);
        if (n && m && n->strictly_positive() && m->strictly_positive()) {
            points.emplace_back(*n, *m);
        }
    }
    bool bs_regimes = balanced_two_mode(u);
    ApproxOptions opts = approx_options(f, 1);
    std::vector<SweepRow> rows(points.size());
    parallel_for(points.size(),
                 [&](std::size_t i) { rows[i] = sweep_one(u, points[i].first, points[i].second, opts, bs_regimes); });

    std::cout << kCsvHeader << "\n";
    std::cout << "# error-sweep fractions=" << fractions << " matrix=" << f.matrix << " seed=" << f.seed << "\n";
    std::cout << "N,n,m,exact_re,exact_im,approx_re,approx_im,rel_error,C_N,stirling_ref,regime,flag,"
                 "saddle_count,contributing_count,min_det,wall_time_exact,wall_time_approx\n";
    for (const SweepRow &r : rows) {
        std::string ere, eim, are, aim, rel, cn;
        if (r.exact) {
            auto z = r.exact->to_complex();
            ere = fmt(z.real());
            eim = fmt(z.imag());
        }
        if (r.approx) {
            auto z = r.approx->to_complex();
            are = fmt(z.real());
            aim = fmt(z.imag());
        }
        if (r.exact && r.approx && !r.exact->is_zero()) {
            double e = relative_error(*r.approx, *r.exact);
            rel = fmt(e);
            cn = fmt(e * r.total);
        }
        std::string stirling = fmt(std::abs(std::expm1(multinomial_approx(r.m) - multinomial_exact_log(r.m))));
        std::cout << r.total << ",\"" << r.n.str() << "\",\"" << r.m.str() << "\"," << ere << "," << eim << ","
                  << are << "," << aim << "," << rel << "," << cn << "," << stirling << "," << r.regime << ","
                  << r.flag << "," << r.diag.saddle_count << "," << r.diag.contributing_count << ","
                  << fmt(r.diag.min_abs_det) << "," << (timing && r.exact ? fmt(r.wall_exact) : "") << ","
                  << (timing ? fmt(r.wall_approx) : "") << "\n";
    }
    return kExitOk;
}

// saddles

int cmd_saddles(const CommonFlags &f) {
    NetworkMatrix u = load_matrix(f.matrix);
    Occupation n = Occupation::parse(f.in);
    Occupation m = Occupation::parse(f.out);
    check_margins(u.dim(), n, m);
    require_strictly_positive(n, m);
    ScalingProblem problem(u, n, m);
    SolverOptions so = approx_options(f).solver;
    SolverReport report;
    std::vector<SaddleSolution> sols = solve_all_saddles(problem, so, &report);
    json out;
    out["schema"] = kSchema;
    out["in"] = n.counts();
    out["out"] = m.counts();
    out["starts"] = report.starts;
    out["converged"] = report.converged;
    out["degenerate"] = report.degenerate;
    if (sols.empty()) {
        out["saddles"] = json::array();
        out["error"] = "NoSaddlesFound: no start converged to a nondegenerate saddle";
        print_json(out);
        return kExitNoSaddles;
    }
    std::vector<SaddleContribution> contribs = select_contributing(sols, n, m);
    json list = json::array();
    for (const auto &c : contribs) {
        json s;
        s["x"] = vector_json(c.solution.x);
        s["y"] = vector_json(c.solution.y);
        s["p"] = matrix_json(c.solution.p);
        s["residual"] = c.solution.residual;
        s["det_Dprime"] = complex_json(c.det_dprime);
        s["term"] = value_json(c.term);
        s["contributing"] = c.contributing;
        s["complex"] = c.complex_saddle;
        s["det_ratio"] = c.det_ratio;
        list.push_back(s);
    }
    out["count"] = contribs.size();
    out["saddles"] = list;
    print_json(out);
    return kExitOk;
}

// bench

Occupation uniform_occupation(int dim, int total) {
    std::vector<int> counts(static_cast<std::size_t>(dim), total / dim);
    for (int k = 0; k < total % dim; ++k) {
        ++counts[static_cast<std::size_t>(k)];
    }
    return Occupation(counts);
}

int cmd_bench(const CommonFlags &f, const std::string &n_list, const std::string &arithmetic, double min_time) {
    NetworkMatrix u = load_matrix(f.matrix);
    RyserOptions ro;
    if (arithmetic == "auto") {
        ro.arithmetic = Arithmetic::Auto;
    } else if (arithmetic == "double") {
        ro.arithmetic = Arithmetic::Double;
    } else if (arithmetic == "extended") {
        ro.arithmetic = Arithmetic::Extended;
    } else {
        throw Error(ErrorKind::InvalidArgument, "unknown arithmetic '" + arithmetic + "'");
    }
    std::vector<int> totals;
    for (const auto &item : split(n_list, ',')) {
        int total = parse_int(item, "--n-list");
        if (total < 1) {
            throw Error(ErrorKind::InvalidArgument, "--n-list entries must be positive");
        }
        totals.push_back(total);
    }
    if (totals.empty()) {
        throw Error(ErrorKind::InvalidArgument, "--n-list is empty");
    }
    json rows = json::array();
    std::vector<double> lx, ly;
    for (int total : totals) {
        Occupation n = uniform_occupation(u.dim(), total);
        RyserStats stats;
        int reps = 0;
        double best = 0.0;
        double spent = 0.0;
        while (reps < 3 || spent < min_time) {
            auto t0 = Clock::now();
            amplitude_exact(u, n, n, ro, &stats);
            double t = seconds_since(t0);
            best = reps == 0 ? t : std::min(best, t);
            spent += t;
            ++reps;
        }
        FlopEstimate fe = flop_estimate(n, n);
        json r;
        r["N"] = total;
        r["n"] = n.counts();
        r["seconds"] = best;
        r["reps"] = reps;
        r["operations"] = stats.operations();
        r["precision_bits"] = stats.precision_bits;
        r["flop_lower"] = fe.lower;
        r["flop_upper"] = fe.upper;
        rows.push_back(r);
        lx.push_back(std::log(static_cast<double>(total)));
        ly.push_back(std::log(best));
    }
    json out;
    out["schema"] = kSchema;
    out["dim"] = u.dim();
    out["arithmetic"] = arithmetic;
    out["rows"] = rows;
    if (lx.size() >= 2) {
        double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
        double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        out["fitted_exponent"] = sxx > 0 ? json(sxy / sxx) : json(nullptr);
    } else {
        out["fitted_exponent"] = nullptr;
    }
    out["target_exponent"] = u.dim() + 1;
    print_json(out);
    return kExitOk;
}

void add_common(CLI::App *sub, CommonFlags &f, bool with_out) {
    sub->add_option("--matrix", f.matrix, "network file (JSON or CSV) or builtin:NAME")->required();
    if (with_out) {
        sub->add_option("--in", f.in, "input occupation n1,...,nM")->required();
        sub->add_option("--out", f.out, "output occupation m1,...,mM")->required();
    }
    sub->add_option("--seed", f.seed, "seed for the saddle solver starts");
    sub->add_option("--starts", f.starts, "number of solver starts (0 picks a default)");
    sub->add_option("--branch", f.branch, "square-root branch rule: principal or calibrated");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Exact and saddle-point boson sampling amplitudes", "bosonic-saddle"};
    app.require_subcommand(1);

    CommonFlags f;
    bool force = false;
    bool timing = false;
    std::string fractions;
    int n_min = 10, n_max = 100, n_step = 1;
    std::string n_list = "15,30,60";
    std::string arithmetic = "auto";
    double min_time = 0.2;

    auto *amp = app.add_subcommand("amplitude", "amplitude of one input/output pair");
    add_common(amp, f, true);
    amp->add_option("--method", f.method, "exact, approx, classical or both");

    auto *scan = app.add_subcommand("scan", "every output configuration for one input");
    scan->add_option("--matrix", f.matrix, "network file (JSON or CSV) or builtin:NAME")->required();
    scan->add_option("--in", f.in, "input occupation n1,...,nM")->required();
    scan->add_option("--method", f.method, "exact, approx, classical or both");
    scan->add_option("--seed", f.seed, "seed for the saddle solver starts");
    scan->add_option("--starts", f.starts, "number of solver starts (0 picks a default)");
    scan->add_option("--branch", f.branch, "square-root branch rule: principal or calibrated");
    scan->add_flag("--force", force, "scan more than 10^6 configurations");

    auto *sweep = app.add_subcommand("error-sweep", "relative error of the approximation against N");
    add_common(sweep, f, false);
    sweep->add_option("--fractions", fractions, "n fractions:m fractions, e.g. 1/2,1/2:1/2,1/2")->required();
    sweep->add_option("--n-min", n_min, "smallest N");
    sweep->add_option("--n-max", n_max, "largest N");
    sweep->add_option("--n-step", n_step, "step in N");
    sweep->add_flag("--timing", timing, "fill the wall time columns (output is then not byte-stable)");

    auto *sad = app.add_subcommand("saddles", "list the deduplicated saddle points");
    add_common(sad, f, true);

    auto *bench = app.add_subcommand("bench", "exact engine runtime against N");
    bench->add_option("--matrix", f.matrix, "network file (JSON or CSV) or builtin:NAME")->required();
    bench->add_option("--n-list", n_list, "comma separated N values");
    bench->add_option("--arithmetic", arithmetic, "auto, double or extended");
    bench->add_option("--min-time", min_time, "minimum seconds spent per N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*amp) {
            return cmd_amplitude(f);
        }
        if (*scan) {
            return cmd_scan(f, force);
        }
        if (*sweep) {
            return cmd_error_sweep(f, fractions, n_min, n_max, n_step, timing);
        }
        if (*sad) {
            return cmd_saddles(f);
        }
        if (*bench) {
            return cmd_bench(f, n_list, arithmetic, min_time);
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::CoalescingSaddles:
                return kExitCoalescing;
            case ErrorKind::NoSaddlesFound:
            case ErrorKind::NoConvergence:
            case ErrorKind::DegenerateSaddle:
                return kExitNoSaddles;
            default:
                return kExitInput;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
