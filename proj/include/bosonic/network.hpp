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

#ifndef BOSONIC_NETWORK_HPP
#define BOSONIC_NETWORK_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace bosonic {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kUnitarityTolerance = 1e-10;

/// Max-norm of U^dagger U - I.
double unitarity_deviation(const ComplexMatrix &u);

/// Validated M x M unitary, M >= 2. Immutable.
class NetworkMatrix {
   public:
    static NetworkMatrix validate(const ComplexMatrix &u, double tol = kUnitarityTolerance);

    int dim() const {
        return static_cast<int>(u_.rows());
    }
    const ComplexMatrix &matrix() const {
        return u_;
    }
    std::complex<double> operator()(int k, int l) const {
        return u_(k, l);
    }
    NetworkMatrix adjoint() const;
    /// Elementwise |U_kl|^2.
    RealMatrix intensities() const;
    /// Relabel modes: rows by row_perm, columns by col_perm (new index -> old index).
    NetworkMatrix permuted(const std::vector<int> &row_perm, const std::vector<int> &col_perm) const;

   private:
    explicit NetworkMatrix(ComplexMatrix u) : u_(std::move(u)) {
    }
    ComplexMatrix u_;
};

NetworkMatrix validate_unitary(const ComplexMatrix &u);

/// Haar-distributed unitary from QR of a complex Ginibre matrix with the R-diagonal phase fix.
NetworkMatrix haar_random_unitary(int dim, std::uint64_t seed);

/// [[-1, 1], [1, 1]] / sqrt(2).
NetworkMatrix symmetric_beam_splitter();
/// Three-mode Bell multiport with w = exp(2 pi i / 3).
NetworkMatrix tritter();
/// Discrete Fourier multiport, |U_kl|^2 = 1/M.
NetworkMatrix bell_multiport(int dim);
NetworkMatrix identity_network(int dim);

/// Particle counts per mode.
class Occupation {
   public:
    Occupation() = default;
    explicit Occupation(std::vector<int> counts);
    Occupation(std::initializer_list<int> counts) : Occupation(std::vector<int>(counts)) {
    }

    /// Comma separated integers, e.g. "3,2,2".
    static Occupation parse(const std::string &text);

    int size() const {
        return static_cast<int>(counts_.size());
    }
    int total() const {
        return total_;
    }
    int operator[](int k) const {
        return counts_[static_cast<std::size_t>(k)];
    }
    const std::vector<int> &counts() const {
        return counts_;
    }
    bool strictly_positive() const;
    std::string str() const;
    Occupation permuted(const std::vector<int> &perm) const;

    friend bool operator==(const Occupation &a, const Occupation &b) {
        return a.counts_ == b.counts_;
    }
    friend bool operator<(const Occupation &a, const Occupation &b) {
        return a.counts_ < b.counts_;
    }

   private:
    std::vector<int> counts_;
    int total_ = 0;
};

/// Throws MarginMismatch unless n and m have the same size as U and equal totals.
void check_margins(int dim, const Occupation &n, const Occupation &m);

/// Throws EmptyMode unless both occupations are strictly positive.
void require_strictly_positive(const Occupation &n, const Occupation &m);

/// Read a network from a JSON ({"dim", "entries"}) or CSV (2M columns) file.
NetworkMatrix read_network_file(const std::string &path);
NetworkMatrix parse_network_json(const std::string &text);
NetworkMatrix parse_network_csv(const std::string &text);
std::string network_to_json(const NetworkMatrix &u);

}  // namespace bosonic

#endif
