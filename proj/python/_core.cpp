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


// Python bindings for the exact engine, the saddle-point approximation and
// the beam-splitter closed forms.

#include <limits>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bosonic/beamsplitter.hpp"
#include "bosonic/combinatorics.hpp"
#include "bosonic/errors.hpp"
#include "bosonic/exact.hpp"
#include "bosonic/saddle.hpp"

namespace py = pybind11;
using namespace bosonic;

namespace {

Occupation occ(const std::vector<int> &v) {
    return Occupation(v);
}

NetworkMatrix net(const ComplexMatrix &u) {
    return NetworkMatrix::validate(u);
}

py::tuple log_form(const LogComplex &a) {
    return py::make_tuple(a.is_zero() ? -std::numeric_limits<double>::infinity() : a.log_mag(),
                          a.is_zero() ? 0.0 : a.phase());
}

py::dict diagnostics(const ApproxDiagnostics &d) {
    py::dict j;
    j["saddle_count"] = d.saddle_count;
    j["contributing_count"] = d.contributing_count;
    j["min_abs_det"] = d.min_abs_det;
    j["min_det_ratio"] = d.min_det_ratio;
    j["min_separation"] = d.min_separation;
    j["coalescing"] = d.coalescing;
    j["cancelled"] = d.cancelled;
    j["branch_rule"] = d.branch_rule;
    return j;
}

ApproxOptions approx_options(std::uint64_t seed, int starts) {
    ApproxOptions o;
    o.solver.seed = seed;
    o.solver.starts = starts;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact and saddle-point boson sampling amplitudes";

    static py::exception<Error> error(m, "BosonicError", PyExc_ValueError);
    static py::exception<CoalescingError> coalescing(m, "CoalescingError", error.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const CoalescingError &e) {
            PyErr_SetString(coalescing.ptr(), e.what());
        } catch (const Error &e) {
            PyErr_SetString(error.ptr(), e.what());
        }
    });

    m.def("beam_splitter", [] { return symmetric_beam_splitter().matrix(); },
          "The symmetric beam splitter [[-1, 1], [1, 1]] / sqrt(2).");
    m.def("tritter", [] { return tritter().matrix(); });
    m.def("bell_multiport", [](int dim) { return bell_multiport(dim).matrix(); }, py::arg("dim"));
    m.def("haar_random_unitary", [](int dim, std::uint64_t seed) { return haar_random_unitary(dim, seed).matrix(); },
          py::arg("dim"), py::arg("seed"));

    m.def(
        "amplitude_exact",
        [](const ComplexMatrix &u, const std::vector<int> &n, const std::vector<int> &mm) {
            return amplitude_exact(net(u), occ(n), occ(mm)).to_complex();
        },
        py::arg("u"), py::arg("n"), py::arg("m"), "per(U[n|m]) / sqrt(prod n! m!) by the repeated-row Ryser sum.");
    m.def(
        "amplitude_exact_log",
        [](const ComplexMatrix &u, const std::vector<int> &n, const std::vector<int> &mm) {
            return log_form(amplitude_exact(net(u), occ(n), occ(mm)));
        },
        py::arg("u"), py::arg("n"), py::arg("m"), "(log |amplitude|, phase); log is -inf for a zero amplitude.");
    m.def(
        "amplitude_approx",
        [](const ComplexMatrix &u, const std::vector<int> &n, const std::vector<int> &mm, std::uint64_t seed,
           int starts) {
            ApproxResult r = amplitude_approx(net(u), occ(n), occ(mm), approx_options(seed, starts));
            return py::make_tuple(r.amplitude.to_complex(), diagnostics(r.diagnostics));
        },
        py::arg("u"), py::arg("n"), py::arg("m"), py::arg("seed") = 1, py::arg("starts") = 0,
        "Saddle-point amplitude and diagnostics; raises CoalescingError when saddles merge.");
    m.def(
        "saddles",
        [](const ComplexMatrix &u, const std::vector<int> &n, const std::vector<int> &mm, std::uint64_t seed,
           int starts) {
            Occupation on = occ(n), om = occ(mm);
            SolverOptions so;
            so.seed = seed;
            so.starts = starts;
            auto sols = solve_all_saddles(ScalingProblem(net(u), on, om), so);
            py::list out;
            for (const auto &c : select_contributing(sols, on, om)) {
                py::dict s;
                s["x"] = ComplexVector(c.solution.x);
                s["y"] = ComplexVector(c.solution.y);
                s["p"] = ComplexMatrix(c.solution.p);
                s["residual"] = c.solution.residual;
                s["det_dprime"] = c.det_dprime;
                s["term"] = c.term.to_complex();
                s["contributing"] = c.contributing;
                out.append(s);
            }
            return out;
        },
        py::arg("u"), py::arg("n"), py::arg("m"), py::arg("seed") = 1, py::arg("starts") = 0);
    m.def(
        "classical_probability",
        [](const ComplexMatrix &u, const std::vector<int> &n, const std::vector<int> &mm) {
            return classical_probability(net(u), occ(n), occ(mm));
        },
        py::arg("u"), py::arg("n"), py::arg("m"));
    m.def(
        "classical_probability_approx",
        [](const ComplexMatrix &u, const std::vector<int> &n, const std::vector<int> &mm) {
            return classical_probability_approx(net(u), occ(n), occ(mm));
        },
        py::arg("u"), py::arg("n"), py::arg("m"));
    m.def(
        "flop_estimate",
        [](const std::vector<int> &n, const std::vector<int> &mm) {
            FlopEstimate f = flop_estimate(occ(n), occ(mm));
            return py::make_tuple(f.lower, f.upper);
        },
        py::arg("n"), py::arg("m"));
    m.def("count_output_configs", &count_output_configs, py::arg("modes"), py::arg("total"));

    m.def(
        "beam_splitter_exact",
        [](int n1, int n2, int m1, int m2) {
            return amplitude_exact_bs(BeamSplitterCase::make(n1, n2, m1, m2)).to_complex();
        },
        py::arg("n1"), py::arg("n2"), py::arg("m1"), py::arg("m2"), "Beam-splitter amplitude summed in integers.");
    m.def(
        "beam_splitter_analytic",
        [](int n1, int n2, int m1, int m2) {
            return amplitude_analytic_bs(BeamSplitterCase::make(n1, n2, m1, m2)).to_complex();
        },
        py::arg("n1"), py::arg("n2"), py::arg("m1"), py::arg("m2"),
        "Beam-splitter saddle-point amplitude from the closed forms.");
    m.def(
        "beam_splitter_regime",
        [](int n1, int n2, int m1, int m2) { return std::string(to_string(BeamSplitterCase::make(n1, n2, m1, m2).regime)); },
        py::arg("n1"), py::arg("n2"), py::arg("m1"), py::arg("m2"));
}
