#include "mmphflab/lp.hpp"

#include <utility>

namespace mmphflab::lp {

namespace {

constexpr std::uint64_t kDegenerateRunBeforeBland = 50;

class Dictionary {
public:
    Dictionary(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
               const std::vector<Rational>& c)
        : rows_(b.size()), cols_(c.size()), table_(rows_ + 1, std::vector<Rational>(cols_ + 1)),
          basic_(rows_), nonbasic_(cols_) {
        for (std::size_t i = 0; i < rows_; ++i) {
            if (a[i].size() != cols_) {
                throw InvalidInput("lp: ragged constraint matrix");
            }
            if (b[i] < 0) {
                throw InvalidInput("lp: right-hand side must be non-negative");
            }
            for (std::size_t j = 0; j < cols_; ++j) {
                table_[i][j] = a[i][j];
            }
            table_[i][cols_] = b[i];
            basic_[i] = cols_ + i;
        }
        for (std::size_t j = 0; j < cols_; ++j) {
            table_[rows_][j] = -c[j];
            nonbasic_[j] = j;
        }
    }

    Solution solve() {
        Solution out;
        std::uint64_t degenerate_run = 0;
        for (;;) {
            const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
            const auto entering = choose_entering(bland);
            if (entering == npos) {
                break;
            }
            const auto leaving = choose_leaving(entering);
            if (leaving == npos) {
                out.status = Solution::Status::unbounded;
                return out;
            }
            degenerate_run = sgn(table_[leaving][cols_]) == 0 ? degenerate_run + 1 : 0;
            pivot(leaving, entering);
            ++out.pivots;
        }
        out.value = table_[rows_][cols_];
        out.primal.assign(cols_, Rational(0));
        out.dual.assign(rows_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basic_[i] < cols_) {
                out.primal[basic_[i]] = table_[i][cols_];
            }
        }
        for (std::size_t j = 0; j < cols_; ++j) {
            if (nonbasic_[j] >= cols_) {
                out.dual[nonbasic_[j] - cols_] = table_[rows_][j];
            }
        }
        return out;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t choose_entering(bool bland) const {
        std::size_t best = npos;
        const auto& objective = table_[rows_];
        for (std::size_t j = 0; j < cols_; ++j) {
            if (sgn(objective[j]) >= 0) {
                continue;
            }
            if (best == npos) {
                best = j;
            } else if (bland ? nonbasic_[j] < nonbasic_[best] : objective[j] < objective[best]) {
                best = j;
            }
        }
        return best;
    }

    std::size_t choose_leaving(std::size_t s) const {
        std::size_t best = npos;
        Rational best_ratio;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (sgn(table_[i][s]) <= 0) {
                continue;
            }
            Rational ratio = table_[i][cols_] / table_[i][s];
            if (best == npos || ratio < best_ratio || (ratio == best_ratio && basic_[i] < basic_[best])) {
                best = i;
                best_ratio = std::move(ratio);
            }
        }
        return best;
    }

    void pivot(std::size_t r, std::size_t s) {
        auto& pivot_row = table_[r];
        const Rational inv = 1 / pivot_row[s];
        std::vector<std::size_t> support;
        for (std::size_t j = 0; j <= cols_; ++j) {
            if (j != s && sgn(pivot_row[j]) != 0) {
                support.push_back(j);
            }
        }
        Rational factor;
        Rational scratch;
        for (std::size_t i = 0; i <= rows_; ++i) {
            auto& row = table_[i];
            if (i == r || sgn(row[s]) == 0) {
                continue;
            }
            factor = row[s] * inv;
            for (std::size_t j : support) {
                mpq_mul(scratch.get_mpq_t(), pivot_row[j].get_mpq_t(), factor.get_mpq_t());
                mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), scratch.get_mpq_t());
            }
            row[s] = -factor;
        }
        for (std::size_t j : support) {
            pivot_row[j] *= inv;
        }
        pivot_row[s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::vector<Rational>> table_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> nonbasic_;
};

}  // namespace

Solution maximize(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                  const std::vector<Rational>& c) {
    if (a.size() != b.size()) {
        throw InvalidInput("lp: row count mismatch");
    }
    return Dictionary(a, b, c).solve();
}

Solution maximize_packing(const std::vector<std::vector<std::uint32_t>>& rows, std::size_t columns) {
    std::vector<std::vector<Rational>> a(rows.size(), std::vector<Rational>(columns));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (auto v : rows[i]) {
            if (v >= columns) {
                throw InvalidInput("lp: packing row references a missing column");
            }
            a[i][v] = 1;
        }
    }
    return maximize(a, std::vector<Rational>(rows.size(), Rational(1)),
                    std::vector<Rational>(columns, Rational(1)));
}

}  // namespace mmphflab::lp
