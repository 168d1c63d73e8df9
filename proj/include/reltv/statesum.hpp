#pragma once

// The relative state sum: enumerate r-admissible edge colorings of a
// triangulation by backtracking and accumulate the weighted sum
//   sum_a  prod_edges H(a_e, b_e) * prod_tets {6j}(a at tet slots).

#include <cstdint>
#include <functional>
#include <vector>

#include "reltv/quantum.hpp"
#include "reltv/sixj.hpp"
#include "reltv/triangulation.hpp"

namespace reltv {

enum class Parity { All, EvenOnly };
enum class Summation { Plain, Compensated };

struct StateSumOptions {
    Parity parity = Parity::All;
    Summation summation = Summation::Plain;
    // Number of blocks the first edge's color range splits into; the blocks
    // are reduced in index order, so the result is independent of `threads`.
    int parallel_width = 1;
    int threads = 1;
    bool record_seconds = false;
};

struct StateSumResult {
    cplx value{0.0, 0.0};
    double log_abs = 0.0;      // -inf when value == 0
    std::int64_t num_colorings = 0;
    double seconds = 0.0;      // 0 unless record_seconds
    bool zero = false;
};

// Stream every admissible coloring (colors per global edge) in lexicographic
// order of the internal edge ordering (descending degree, index tiebreak).
void enumerate_admissible(const Triangulation& tri, int r, Parity parity,
                          const std::function<void(const std::vector<int>&)>& visit);

// Count only.
std::int64_t count_admissible(const Triangulation& tri, int r, Parity parity);

// The relative invariant for boundary coloring b (size num_edges()).
StateSumResult relative_tv(const Triangulation& tri, const std::vector<int>& b,
                           const QuantumContext& ctx,
                           const StateSumOptions& opts = {});

struct GrowthRow {
    int r = 0;
    double scaled_log = 0.0;   // (2 pi / r) log |TV_r|
    double diff = 0.0;         // vs previous row (NaN on the first)
    bool zero = false;
};

// Scaled logarithmic growth of a sequence of invariant values indexed by r.
std::vector<GrowthRow> growth_rate(const std::vector<std::pair<int, cplx>>& values);

}  // namespace reltv
