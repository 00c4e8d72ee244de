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

#include "bosonic/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "bosonic/errors.hpp"
#include "json.hpp"

namespace bosonic {

const char *to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotUnitary:
            return "NotUnitary";
        case ErrorKind::BadDimension:
            return "BadDimension";
        case ErrorKind::MarginMismatch:
            return "MarginMismatch";
        case ErrorKind::TooLarge:
            return "TooLarge";
        case ErrorKind::NoConvergence:
            return "NoConvergence";
        case ErrorKind::DegenerateSaddle:
            return "DegenerateSaddle";
        case ErrorKind::NonPositiveMatrix:
            return "NonPositiveMatrix";
        case ErrorKind::FormMismatch:
            return "FormMismatch";
        case ErrorKind::ZeroScalingComponent:
            return "ZeroScalingComponent";
        case ErrorKind::EmptyMode:
            return "EmptyMode";
        case ErrorKind::CoalescingSaddles:
            return "CoalescingSaddles";
        case ErrorKind::NoSaddlesFound:
            return "NoSaddlesFound";
        case ErrorKind::NonPositiveIntensity:
            return "NonPositiveIntensity";
        case ErrorKind::ParseError:
            return "ParseError";
        case ErrorKind::InvalidArgument:
            return "InvalidArgument";
    }
    return "Unknown";
}

double unitarity_deviation(const ComplexMatrix &u) {
    ComplexMatrix g = u.adjoint() * u;
    g -= ComplexMatrix::Identity(u.rows(), u.cols());
    return g.cwiseAbs().maxCoeff();
}

NetworkMatrix NetworkMatrix::validate(const ComplexMatrix &u, double tol) {
    if (u.rows() != u.cols()) {
        throw Error(ErrorKind::BadDimension, "network matrix must be square");
    }
    if (u.rows() < 2) {
        throw Error(ErrorKind::BadDimension, "network matrix needs at least 2 modes");
    }
    if (!u.allFinite()) {
        throw Error(ErrorKind::NotUnitary, "matrix has non-finite entries");
    }
    double dev = unitarity_deviation(u);
    if (!(dev <= tol)) {
        std::ostringstream msg;
        msg << "max |U^dagger U - I| = " << dev;
        throw Error(ErrorKind::NotUnitary, msg.str());
    }
    return NetworkMatrix(u);
}

NetworkMatrix validate_unitary(const ComplexMatrix &u) {
    return NetworkMatrix::validate(u);
}

NetworkMatrix NetworkMatrix::adjoint() const {
    return NetworkMatrix(u_.adjoint());
}

RealMatrix NetworkMatrix::intensities() const {
    return u_.cwiseAbs2();
}

NetworkMatrix NetworkMatrix::permuted(const std::vector<int> &row_perm, const std::vector<int> &col_perm) const {
    int m = dim();
    if (static_cast<int>(row_perm.size()) != m || static_cast<int>(col_perm.size()) != m) {
        throw Error(ErrorKind::BadDimension, "permutation length differs from network size");
    }
    ComplexMatrix out(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            out(i, j) = u_(row_perm[i], col_perm[j]);
        }
    }
    return NetworkMatrix(out);
}

NetworkMatrix haar_random_unitary(int dim, std::uint64_t seed) {
    if (dim < 2) {
        throw Error(ErrorKind::BadDimension, "Haar unitary needs at least 2 modes");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    ComplexMatrix z(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            double re = gauss(rng);
            double im = gauss(rng);
            z(i, j) = {re, im};
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        std::complex<double> d = r(j, j);
        double a = std::abs(d);
        std::complex<double> ph = a > 0.0 ? d / a : std::complex<double>(1.0, 0.0);
        q.col(j) *= ph;
    }
    return NetworkMatrix::validate(q);
}

NetworkMatrix symmetric_beam_splitter() {
    double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix u(2, 2);
    u << -s, s, s, s;
    return NetworkMatrix::validate(u);
}

NetworkMatrix tritter() {
    return bell_multiport(3);
}

NetworkMatrix bell_multiport(int dim) {
    if (dim < 2) {
        throw Error(ErrorKind::BadDimension, "Bell multiport needs at least 2 modes");
    }
    ComplexMatrix u(dim, dim);
    double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int k = 0; k < dim; ++k) {
        for (int l = 0; l < dim; ++l) {
            int e = (k * l) % dim;
            if (e == 0) {
                u(k, l) = s;
            } else {
                u(k, l) = std::polar(s, 2.0 * std::numbers::pi * e / dim);
            }
        }
    }
    return NetworkMatrix::validate(u);
}

NetworkMatrix identity_network(int dim) {
    return NetworkMatrix::validate(ComplexMatrix::Identity(dim, dim));
}

Occupation::Occupation(std::vector<int> counts) : counts_(std::move(counts)) {
    if (counts_.empty()) {
        throw Error(ErrorKind::BadDimension, "occupation has no modes");
    }
    long long total = 0;
    for (int c : counts_) {
        if (c < 0) {
            throw Error(ErrorKind::InvalidArgument, "negative occupation");
        }
        total += c;
    }
    if (total > 1000000) {
        throw Error(ErrorKind::TooLarge, "occupation total too large");
    }
    total_ = static_cast<int>(total);
}

Occupation Occupation::parse(const std::string &text) {
    std::vector<int> counts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) {
            throw Error(ErrorKind::ParseError, "empty entry in occupation '" + text + "'");
        }
        item = item.substr(b, e - b + 1);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(item, &used);
        } catch (const std::exception &) {
            throw Error(ErrorKind::ParseError, "bad integer '" + item + "' in occupation");
        }
        if (used != item.size() || v < 0 || v > 1000000) {
            throw Error(ErrorKind::ParseError, "bad integer '" + item + "' in occupation");
        }
        counts.push_back(static_cast<int>(v));
    }
    if (counts.empty() || (!text.empty() && text.back() == ',')) {
        throw Error(ErrorKind::ParseError, "malformed occupation '" + text + "'");
    }
    return Occupation(std::move(counts));
}

bool Occupation::strictly_positive() const {
    return std::all_of(counts_.begin(), counts_.end(), [](int c) { return c >= 1; });
}

std::string Occupation::str() const {
    std::string s;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (i) {
            s += ',';
        }
        s += std::to_string(counts_[i]);
    }
    return s;
}

Occupation Occupation::permuted(const std::vector<int> &perm) const {
    std::vector<int> out(counts_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out[i] = counts_[static_cast<std::size_t>(perm[i])];
    }
    return Occupation(out);
}

void check_margins(int dim, const Occupation &n, const Occupation &m) {
    if (n.size() != dim || m.size() != dim) {
        throw Error(ErrorKind::MarginMismatch, "occupation length differs from network size");
    }
    if (n.total() != m.total()) {
        throw Error(ErrorKind::MarginMismatch,
                    "input total " + std::to_string(n.total()) + " differs from output total " +
                        std::to_string(m.total()));
    }
}

void require_strictly_positive(const Occupation &n, const Occupation &m) {
    if (!n.strictly_positive() || !m.strictly_positive()) {
        throw Error(ErrorKind::EmptyMode, "every input and output mode needs at least one boson");
    }
}

NetworkMatrix parse_network_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
    try {
        int dim = j.at("dim").get<int>();
        const auto &rows = j.at("entries");
        if (dim < 2 || static_cast<int>(rows.size()) != dim) {
            throw Error(ErrorKind::BadDimension, "entries do not match dim");
        }
        ComplexMatrix u(dim, dim);
        for (int k = 0; k < dim; ++k) {
            if (static_cast<int>(rows[k].size()) != dim) {
                throw Error(ErrorKind::BadDimension, "row length does not match dim");
            }
            for (int l = 0; l < dim; ++l) {
                const auto &e = rows[k][l];
                if (e.is_number()) {
                    u(k, l) = {e.get<double>(), 0.0};
                } else {
                    if (e.size() != 2) {
                        throw Error(ErrorKind::ParseError, "entry must be [re, im]");
                    }
                    u(k, l) = {e[0].get<double>(), e[1].get<double>()};
                }
            }
        }
        return NetworkMatrix::validate(u);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorKind::ParseError, std::string("bad matrix JSON: ") + e.what());
    }
}

NetworkMatrix parse_network_csv(const std::string &text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') {
            continue;
        }
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
            } catch (const std::exception &) {
                throw Error(ErrorKind::ParseError, "bad number '" + cell + "' in matrix CSV");
            }
        }
        rows.push_back(std::move(row));
    }
    int dim = static_cast<int>(rows.size());
    if (dim < 2) {
        throw Error(ErrorKind::BadDimension, "matrix CSV needs at least 2 rows");
    }
    ComplexMatrix u(dim, dim);
    for (int k = 0; k < dim; ++k) {
        if (static_cast<int>(rows[k].size()) != 2 * dim) {
            throw Error(ErrorKind::BadDimension, "matrix CSV rows need 2M columns");
        }
        for (int l = 0; l < dim; ++l) {
            u(k, l) = {rows[k][2 * l], rows[k][2 * l + 1]};
        }
    }
    return NetworkMatrix::validate(u);
}

NetworkMatrix read_network_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::ParseError, "cannot open matrix file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    auto b = text.find_first_not_of(" \t\r\n");
    if (b != std::string::npos && text[b] == '{') {
        return parse_network_json(text);
    }
    return parse_network_csv(text);
}

std::string network_to_json(const NetworkMatrix &u) {
    nlohmann::json j;
    j["dim"] = u.dim();
    nlohmann::json rows = nlohmann::json::array();
    for (int k = 0; k < u.dim(); ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int l = 0; l < u.dim(); ++l) {
            row.push_back({u(k, l).real(), u(k, l).imag()});
        }
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j.dump();
}

}  // namespace bosonic
