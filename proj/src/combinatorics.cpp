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

#include "bosonic/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bosonic/errors.hpp"

namespace bosonic {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > kSaturated - b ? kSaturated : a + b;
}

}  // namespace

std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > kSaturated) {
            return kSaturated;
        }
    }
    return static_cast<std::uint64_t>(r);
}

double log_factorial(int n) {
    if (n < 0) {
        throw Error(ErrorKind::InvalidArgument, "negative factorial");
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

std::uint64_t count_output_configs(int modes, int total) {
    if (modes < 1 || total < 0) {
        return 0;
    }
    return binomial_u64(static_cast<std::uint64_t>(modes + total - 1), static_cast<std::uint64_t>(total));
}

std::vector<Occupation> enumerate_output_configs(int modes, int total) {
    if (modes < 1) {
        throw Error(ErrorKind::BadDimension, "need at least one mode");
    }
    if (total < 0) {
        throw Error(ErrorKind::InvalidArgument, "negative particle number");
    }
    std::vector<Occupation> out;
    std::uint64_t count = count_output_configs(modes, total);
    if (count > 50'000'000) {
        throw Error(ErrorKind::TooLarge, "too many output configurations to enumerate");
    }
    out.reserve(count);
    std::vector<int> c(static_cast<std::size_t>(modes), 0);
    c.back() = total;
    // Lexicographic successor: bump the rightmost non-last slot that has mass to its right.
    while (true) {
        out.emplace_back(c);
        int i = modes - 2;
        while (i >= 0) {
            int rest = 0;
            for (int j = i + 1; j < modes; ++j) {
                rest += c[j];
            }
            if (rest > 0) {
                c[i] += 1;
                for (int j = i + 1; j < modes; ++j) {
                    c[j] = 0;
                }
                c.back() = rest - 1;
                break;
            }
            --i;
        }
        if (i < 0) {
            break;
        }
    }
    return out;
}

ContingencyEnumerator::ContingencyEnumerator(const Occupation &row_sums, const Occupation &col_sums)
    : n_(row_sums), m_(col_sums) {
    if (n_.size() != m_.size()) {
        throw Error(ErrorKind::MarginMismatch, "row and column margins differ in length");
    }
    if (n_.total() != m_.total()) {
        throw Error(ErrorKind::MarginMismatch, "row and column margins differ in total");
    }
    int dim = n_.size();
    table_.assign(static_cast<std::size_t>(dim), std::vector<int>(static_cast<std::size_t>(dim), 0));
}

// Lexicographically smallest row with the given sum under the remaining column capacities.
void ContingencyEnumerator::fill_row_min(int row, int amount) {
    int dim = n_.size();
    std::vector<int> cap(static_cast<std::size_t>(dim));
    for (int l = 0; l < dim; ++l) {
        int used = 0;
        for (int k = 0; k < row; ++k) {
            used += table_[k][l];
        }
        cap[l] = m_[l] - used;
    }
    auto &r = table_[row];
    std::fill(r.begin(), r.end(), 0);
    for (int l = dim - 1; l >= 0 && amount > 0; --l) {
        int take = std::min(cap[l], amount);
        r[l] = take;
        amount -= take;
    }
}

bool ContingencyEnumerator::first_fill(int from_row) {
    int dim = n_.size();
    for (int k = from_row; k < dim; ++k) {
        fill_row_min(k, n_[k]);
    }
    return true;
}

bool ContingencyEnumerator::advance_row(int row) {
    int dim = n_.size();
    std::vector<int> cap(static_cast<std::size_t>(dim));
    for (int l = 0; l < dim; ++l) {
        int used = 0;
        for (int k = 0; k < row; ++k) {
            used += table_[k][l];
        }
        cap[l] = m_[l] - used;
    }
    auto &r = table_[row];
    int suffix = 0;
    for (int i = dim - 1; i >= 0; --i) {
        if (i < dim - 1 && r[i] < cap[i] && suffix > 0) {
            r[i] += 1;
            int amount = suffix - 1;
            for (int j = i + 1; j < dim; ++j) {
                r[j] = 0;
            }
            for (int j = dim - 1; j > i && amount > 0; --j) {
                int take = std::min(cap[j], amount);
                r[j] = take;
                amount -= take;
            }
            return true;
        }
        suffix += r[i];
    }
    return false;
}

ContingencyTable ContingencyEnumerator::current() const {
    return ContingencyTable{table_, n_, m_};
}

std::optional<ContingencyTable> ContingencyEnumerator::next() {
    if (done_) {
        return std::nullopt;
    }
    int dim = n_.size();
    if (!started_) {
        started_ = true;
        first_fill(0);
        return current();
    }
    // The last row is forced by the column sums; advance the deepest free row.
    for (int row = dim - 2; row >= 0; --row) {
        if (advance_row(row)) {
            first_fill(row + 1);
            return current();
        }
    }
    done_ = true;
    return std::nullopt;
}

std::vector<ContingencyTable> enumerate_contingency_tables(const Occupation &n, const Occupation &m) {
    std::vector<ContingencyTable> out;
    ContingencyEnumerator it(n, m);
    while (auto t = it.next()) {
        out.push_back(std::move(*t));
    }
    return out;
}

std::uint64_t count_contingency_tables(const Occupation &n, const Occupation &m) {
    if (n.size() != m.size() || n.total() != m.total()) {
        throw Error(ErrorKind::MarginMismatch, "margins do not match");
    }
    int dim = m.size();
    // Polynomial in t_1..t_M, truncated at exponent m_l; keys are exponent vectors.
    std::map<std::vector<int>, std::uint64_t> poly;
    poly[std::vector<int>(static_cast<std::size_t>(dim), 0)] = 1;
    for (int k = 0; k < dim; ++k) {
        // Multiply by h_{n_k}: every composition of n_k, coefficient 1.
        std::map<std::vector<int>, std::uint64_t> next;
        for (const auto &[expo, coef] : poly) {
            int left = n[k];
            std::vector<int> e = expo;
            // Depth-first over compositions of n_k respecting the caps.
            auto rec = [&](auto &&self, int l, int remaining) -> void {
                if (l == dim - 1) {
                    if (e[l] + remaining <= m[l]) {
                        std::vector<int> out = e;
                        out[l] += remaining;
                        next[out] = sat_add(next[out], coef);
                    }
                    return;
                }
                for (int a = 0; a <= remaining && e[l] + a <= m[l]; ++a) {
                    e[l] += a;
                    self(self, l + 1, remaining - a);
                    e[l] -= a;
                }
            };
            rec(rec, 0, left);
        }
        poly.swap(next);
    }
    auto it = poly.find(m.counts());
    return it == poly.end() ? 0 : it->second;
}

std::vector<std::uint64_t> count_tables_by_crossed_columns(const Occupation &m) {
    std::vector<std::uint64_t> coef{1};
    for (int mk : m.counts()) {
        std::vector<std::uint64_t> next(coef.size() + static_cast<std::size_t>(mk), 0);
        for (std::size_t i = 0; i < coef.size(); ++i) {
            for (int j = 0; j <= mk; ++j) {
                next[i + static_cast<std::size_t>(j)] = sat_add(next[i + static_cast<std::size_t>(j)], coef[i]);
            }
        }
        coef.swap(next);
    }
    return coef;
}

double fisher_yates_probability(const ContingencyTable &table) {
    int dim = table.row_sums.size();
    double lp = -log_factorial(table.row_sums.total());
    for (int k = 0; k < dim; ++k) {
        lp += log_factorial(table.row_sums[k]) + log_factorial(table.col_sums[k]);
        for (int l = 0; l < dim; ++l) {
            lp -= log_factorial(table(k, l));
        }
    }
    return std::exp(lp);
}

}  // namespace bosonic
