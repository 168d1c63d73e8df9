#include "reltv/statesum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>

namespace reltv {

namespace {

// Static enumeration plan: edges ordered by descending degree (index as the
// tiebreak), plus which face constraints become checkable and which
// tetrahedra become fully colored at each assignment position.
struct Plan {
    std::vector<int> order;                                // position -> edge
    std::vector<std::vector<std::array<int, 3>>> faces_at; // edge-id triples
    std::vector<std::vector<int>> tets_at;                 // tet indices
};

Plan make_plan(const Triangulation& tri) {
    Plan plan;
    const int ne = tri.num_edges();
    plan.order.resize(ne);
    std::iota(plan.order.begin(), plan.order.end(), 0);
    const auto& deg = tri.edge_degrees();
    std::stable_sort(plan.order.begin(), plan.order.end(),
                     [&](int a, int b) { return deg[a] > deg[b]; });
    std::vector<int> pos_of(ne, 0);
    for (int p = 0; p < ne; ++p) pos_of[plan.order[p]] = p;

    plan.faces_at.resize(ne);
    plan.tets_at.resize(ne);
    for (int t = 0; t < tri.num_tets(); ++t) {
        const auto& tet = tri.tets()[t];
        int tet_last = 0;
        for (int s = 0; s < 6; ++s) tet_last = std::max(tet_last, pos_of[tet[s]]);
        plan.tets_at[tet_last].push_back(t);
        for (const auto& fc : kFaceSlots) {
            const std::array<int, 3> face = {tet[fc[0]], tet[fc[1]], tet[fc[2]]};
            const int last =
                std::max({pos_of[face[0]], pos_of[face[1]], pos_of[face[2]]});
            plan.faces_at[last].push_back(face);
        }
    }
    return plan;
}

// Neumaier-compensated complex accumulator.
struct Compensated {
    cplx sum{0.0, 0.0};
    cplx comp{0.0, 0.0};
    void add(cplx v) {
        auto one = [](double& s, double& c, double x) {
            const double t = s + x;
            if (std::fabs(s) >= std::fabs(x))
                c += (s - t) + x;
            else
                c += (x - t) + s;
            s = t;
        };
        double sr = sum.real(), sc = comp.real();
        double ir = sum.imag(), ic = comp.imag();
        one(sr, sc, v.real());
        one(ir, ic, v.imag());
        sum = {sr, ir};
        comp = {sc, ic};
    }
    cplx value() const { return sum + comp; }
};

struct BlockResult {
    cplx value{0.0, 0.0};
    std::int64_t count = 0;
};

struct Walker {
    const Triangulation* tri;
    const Plan* plan;
    const QuantumContext* ctx;
    const std::vector<int>* b;
    int r;
    Parity parity;
    Summation summation;
    std::vector<int> colors;          // by edge id
    std::vector<cplx> weight_stack;   // product up to position p
    std::vector<std::vector<double>> h_table;  // per edge, H(c, b_e)
    SixJCache cache;
    cplx plain{0.0, 0.0};
    Compensated comp;
    std::int64_t count = 0;

    Walker(const Triangulation& t, const Plan& p, const QuantumContext& c,
           const std::vector<int>& bb, Parity par, Summation summ)
        : tri(&t), plan(&p), ctx(&c), b(&bb), r(c.r()), parity(par),
          summation(summ), colors(t.num_edges(), -1),
          weight_stack(t.num_edges() + 1, cplx(1.0, 0.0)), cache(c) {
        h_table.assign(t.num_edges(), std::vector<double>(r - 1, 0.0));
        for (int e = 0; e < t.num_edges(); ++e)
            for (int col = 0; col <= r - 2; ++col)
                h_table[e][col] = edge_weight(col, (*b)[e], c).real();
    }

    bool faces_ok(int p) const {
        for (const auto& face : (*plan).faces_at[p])
            if (!is_admissible_triple(colors[face[0]], colors[face[1]],
                                      colors[face[2]], r))
                return false;
        return true;
    }

    void leaf(cplx w) {
        ++count;
        if (summation == Summation::Compensated)
            comp.add(w);
        else
            plain += w;
    }

    void descend(int p) {
        const int ne = tri->num_edges();
        if (p == ne) {
            leaf(weight_stack[p]);
            return;
        }
        const int e = (*plan).order[p];
        const int step = (parity == Parity::EvenOnly) ? 2 : 1;
        for (int c = 0; c <= r - 2; c += step) {
            colors[e] = c;
            if (!faces_ok(p)) continue;
            cplx w = weight_stack[p] * h_table[e][c];
            for (int t : (*plan).tets_at[p]) {
                std::array<int, 6> tuple{};
                const auto& tet = tri->tets()[t];
                for (int s = 0; s < 6; ++s) tuple[s] = colors[tet[s]];
                w *= cache.get(tuple);
            }
            weight_stack[p + 1] = w;
            descend(p + 1);
        }
        colors[e] = -1;
    }

    // Restrict the first position to one color block.
    void run_block(int c_lo, int c_hi) {
        const int ne = tri->num_edges();
        if (ne == 0) return;
        const int e = (*plan).order[0];
        const int step = (parity == Parity::EvenOnly) ? 2 : 1;
        for (int c = c_lo; c < c_hi; c += step) {
            colors[e] = c;
            if (!faces_ok(0)) continue;
            cplx w = weight_stack[0] * h_table[e][c];
            for (int t : (*plan).tets_at[0]) {
                std::array<int, 6> tuple{};
                const auto& tet = tri->tets()[t];
                for (int s = 0; s < 6; ++s) tuple[s] = colors[tet[s]];
                w *= cache.get(tuple);
            }
            weight_stack[1] = w;
            descend(1);
        }
        colors[e] = -1;
    }

    BlockResult result() const {
        BlockResult br;
        br.value = (summation == Summation::Compensated) ? comp.value() : plain;
        br.count = count;
        return br;
    }
};

}  // namespace

void enumerate_admissible(const Triangulation& tri, int r, Parity parity,
                          const std::function<void(const std::vector<int>&)>& visit) {
    if (r < 3) throw DomainError("enumerate_admissible: r must be at least 3");
    const Plan plan = make_plan(tri);
    std::vector<int> colors(tri.num_edges(), -1);
    const int step = (parity == Parity::EvenOnly) ? 2 : 1;

    std::function<void(int)> rec = [&](int p) {
        if (p == tri.num_edges()) {
            visit(colors);
            return;
        }
        const int e = plan.order[p];
        for (int c = 0; c <= r - 2; c += step) {
            colors[e] = c;
            bool ok = true;
            for (const auto& face : plan.faces_at[p])
                if (!is_admissible_triple(colors[face[0]], colors[face[1]],
                                          colors[face[2]], r)) {
                    ok = false;
                    break;
                }
            if (ok) rec(p + 1);
        }
        colors[e] = -1;
    };
    rec(0);
}

std::int64_t count_admissible(const Triangulation& tri, int r, Parity parity) {
    std::int64_t n = 0;
    enumerate_admissible(tri, r, parity, [&](const std::vector<int>&) { ++n; });
    return n;
}

StateSumResult relative_tv(const Triangulation& tri, const std::vector<int>& b,
                           const QuantumContext& ctx, const StateSumOptions& opts) {
    const int r = ctx.r();
    if (static_cast<int>(b.size()) != tri.num_edges())
        throw InputError("relative_tv: boundary coloring size must equal the edge count");
    for (int v : b)
        if (v < 0 || v > r - 2)
            throw InputError("relative_tv: boundary colors must lie in [0, r-2]");
    if (opts.parallel_width < 1 || opts.threads < 1)
        throw InputError("relative_tv: parallel_width and threads must be positive");

    const auto t0 = std::chrono::steady_clock::now();
    const Plan plan = make_plan(tri);

    // Color blocks for the first position; the reduction runs in block order,
    // so the value is independent of the thread count.
    std::vector<int> first_colors;
    const int step = (opts.parity == Parity::EvenOnly) ? 2 : 1;
    for (int c = 0; c <= r - 2; c += step) first_colors.push_back(c);
    const int width = std::min(opts.parallel_width,
                               std::max(static_cast<int>(first_colors.size()), 1));

    std::vector<std::pair<int, int>> blocks;  // [c_lo, c_hi) in color units
    for (int i = 0; i < width; ++i) {
        const std::size_t lo = first_colors.size() * i / width;
        const std::size_t hi = first_colors.size() * (i + 1) / width;
        if (lo == hi) continue;
        const int c_lo = first_colors[lo];
        const int c_hi = (hi == first_colors.size()) ? r - 1 : first_colors[hi];
        blocks.emplace_back(c_lo, c_hi);
    }

    auto run_one = [&](std::pair<int, int> blk) {
        Walker w(tri, plan, ctx, b, opts.parity, opts.summation);
        w.run_block(blk.first, blk.second);
        return w.result();
    };

    std::vector<BlockResult> results(blocks.size());
    if (opts.threads == 1 || blocks.size() <= 1) {
        for (std::size_t i = 0; i < blocks.size(); ++i) results[i] = run_one(blocks[i]);
    } else {
        const int workers = std::min(opts.threads, static_cast<int>(blocks.size()));
        std::vector<std::future<BlockResult>> futs(blocks.size());
        std::size_t next = 0;
        // simple wave scheduling: at most `workers` futures in flight
        while (next < blocks.size()) {
            const std::size_t batch_end =
                std::min(blocks.size(), next + static_cast<std::size_t>(workers));
            for (std::size_t i = next; i < batch_end; ++i)
                futs[i] = std::async(std::launch::async, run_one, blocks[i]);
            for (std::size_t i = next; i < batch_end; ++i) results[i] = futs[i].get();
            next = batch_end;
        }
    }

    StateSumResult out;
    if (opts.summation == Summation::Compensated) {
        Compensated acc;
        for (const auto& br : results) acc.add(br.value);
        out.value = acc.value();
    } else {
        for (const auto& br : results) out.value += br.value;
    }
    for (const auto& br : results) out.num_colorings += br.count;

    const double mag = std::abs(out.value);
    out.zero = (mag == 0.0);
    out.log_abs = out.zero ? -std::numeric_limits<double>::infinity() : std::log(mag);
    if (opts.record_seconds) {
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
    }
    return out;
}

std::vector<GrowthRow> growth_rate(const std::vector<std::pair<int, cplx>>& values) {
    std::vector<GrowthRow> rows;
    int prev_r = 0;
    for (const auto& [r, v] : values) {
        if (r < 3 || r % 2 == 0)
            throw InputError("growth_rate: r values must be odd and at least 3");
        if (r <= prev_r) throw InputError("growth_rate: r values must increase");
        prev_r = r;
        GrowthRow row;
        row.r = r;
        const double mag = std::abs(v);
        row.zero = (mag == 0.0);
        row.scaled_log = row.zero ? -std::numeric_limits<double>::infinity()
                                  : 2.0 * std::numbers::pi / r * std::log(mag);
        row.diff = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                : row.scaled_log - rows.back().scaled_log;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace reltv
