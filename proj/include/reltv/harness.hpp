#pragma once

// Asymptotic sweeps: choose boundary colorings b^{(r)} tracking prescribed
// cone angles, run the state sum over a list of odd r, compare the scaled
// logarithmic growth with the volume of the solved polyhedral metric, and
// extrapolate the gap sequence.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reltv/hypgeom.hpp"
#include "reltv/statesum.hpp"
#include "reltv/triangulation.hpp"

namespace reltv {

struct AsymptoticsPlan {
    std::vector<double> theta;       // target cone-angle deficits per edge
    std::vector<int> mu;             // +-1 per edge; empty = all +1
    std::vector<int> r_list;         // odd, increasing
    Parity parity = Parity::All;
    Summation summation = Summation::Plain;
    int parallel_width = 1;
    int threads = 1;
    bool timings = false;
    bool b_zero = false;             // force b = 0 instead of the tracking rule
    // When set, skip the state sum and inject TV_r = exp(r * v0 / (2 pi)): a
    // self-test mode in which every gap row must equal v0 - geom_vol exactly.
    std::optional<double> synthetic_v0;
};

struct AsymptoticsRow {
    int r = 0;
    std::vector<int> b;
    std::vector<double> theta_real;  // |2 pi - 4 pi b_e / r|
    cplx tv{0.0, 0.0};
    double scaled_log = 0.0;
    double gap = 0.0;                // scaled_log - geom_vol
    std::int64_t colorings = 0;
    double seconds = 0.0;
    bool zero = false;
};

struct AsymptoticsReport {
    std::vector<AsymptoticsRow> rows;
    double geom_vol = 0.0;
    // Aitken extrapolation of scaled_log over the rows nearest r_max,
    // r_max/2, r_max/4 (NaN when fewer than three usable rows exist).
    double extrapolated = 0.0;
    PolyhedralMetric metric;
};

// b_e = round((2 pi - mu_e theta_e) r / (4 pi)), clamped to [0, r-2]; in
// EvenOnly mode rounded to the nearest even integer in range.
std::vector<int> boundary_coloring_for(const std::vector<double>& theta,
                                       const std::vector<int>& mu, int r,
                                       Parity parity);

AsymptoticsReport run_asymptotics(const Triangulation& tri, const AsymptoticsPlan& plan);

// One Aitken delta-squared step on s (size >= 3): s2 - (s2-s1)^2/((s2-s1)-(s1-s0)).
double aitken(double s0, double s1, double s2);

// CSV with the pinned column set; header_lines are emitted first, each
// prefixed by '# '.
void write_asymptotics_csv(std::ostream& os, const AsymptoticsReport& report,
                           const std::vector<std::string>& header_lines);

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured residual / error
    double threshold = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_pass = false;
    PolyhedralMetric metric;
};

// The full self-check battery on one triangulation: xi and potential values
// at the regular point, Hessian spot checks, the metric solve for the given
// cone angles, and criticality of the geometric point for the given eps
// vector and its negation.
VerificationReport run_verification(const Triangulation& tri,
                                    const std::vector<double>& theta,
                                    const std::vector<int>& eps,
                                    const std::vector<int>& mu = {});

}  // namespace reltv
