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

#ifndef BOSONIC_COMBINATORICS_HPP
#define BOSONIC_COMBINATORICS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "bosonic/network.hpp"

namespace bosonic {

/// Saturating binomial coefficient; returns UINT64_MAX on overflow.
std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k);

/// log(n!) via lgamma.
double log_factorial(int n);

/// Number of length-M compositions of N, (M+N-1 choose N). Saturates on overflow.
std::uint64_t count_output_configs(int modes, int total);

/// All length-M compositions of N in lexicographic order.
std::vector<Occupation> enumerate_output_configs(int modes, int total);

/// Nonnegative integer matrix with fixed margins.
struct ContingencyTable {
    std::vector<std::vector<int>> entries;
    Occupation row_sums;
    Occupation col_sums;

    int operator()(int k, int l) const {
        return entries[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
    }
};

/// Lazy enumeration of every contingency table with margins (n, m).
///
///     ContingencyEnumerator it(n, m);
///     while (auto t = it.next()) { ... }
class ContingencyEnumerator {
   public:
    ContingencyEnumerator(const Occupation &row_sums, const Occupation &col_sums);
    std::optional<ContingencyTable> next();

   private:
    bool first_fill(int from_row);
    bool advance_row(int row);
    void fill_row_min(int row, int amount);
    ContingencyTable current() const;

    Occupation n_;
    Occupation m_;
    std::vector<std::vector<int>> table_;
    bool started_ = false;
    bool done_ = false;
};

std::vector<ContingencyTable> enumerate_contingency_tables(const Occupation &n, const Occupation &m);

/// Table count by coefficient extraction from prod_k h_{n_k}(t_1..t_M) truncated at m.
std::uint64_t count_contingency_tables(const Occupation &n, const Occupation &m);

/// Coefficients T_0..T_N of prod_k (1 + z + ... + z^{m_k}).
std::vector<std::uint64_t> count_tables_by_crossed_columns(const Occupation &m);

/// Fisher-Yates probability prod n_k! prod m_l! / (N! prod S_kl!).
double fisher_yates_probability(const ContingencyTable &table);

}  // namespace bosonic

#endif
