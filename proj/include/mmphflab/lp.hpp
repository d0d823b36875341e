#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mmphflab/common.hpp"

namespace mmphflab::lp {

/// Result of max c'x s.t. Ax <= b, x >= 0 with b >= 0, solved exactly.
struct Solution {
    enum class Status { optimal, unbounded };

    Status status = Status::optimal;
    Rational value;
    std::vector<Rational> primal;  // x, one entry per column
    std::vector<Rational> dual;    // y >= 0 with A'y >= c, b'y = value
    std::uint64_t pivots = 0;
};

/// Dense exact-rational dictionary simplex. Origin is feasible because
/// b >= 0, so no phase one is needed. Dantzig pricing with a switch to
/// Bland's rule after a run of degenerate pivots.
Solution maximize(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                  const std::vector<Rational>& c);

/// Packing LP over 0/1 rows: max sum(y) s.t. sum_{v in row} y_v <= 1.
/// Rows are sorted column-index lists.
Solution maximize_packing(const std::vector<std::vector<std::uint32_t>>& rows, std::size_t columns);

}  // namespace mmphflab::lp
