#include "reltv/triangulation.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace reltv {

using nlohmann::json;

Triangulation Triangulation::from_json_text(const std::string& text, bool strict) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("triangulation: invalid JSON: ") + e.what());
    }
    Triangulation tri;
    try {
        if (doc.contains("name")) tri.name_ = doc.at("name").get<std::string>();
        tri.num_edges_ = doc.at("num_edges").get<int>();
        for (const auto& row : doc.at("tetrahedra")) {
            if (!row.is_array() || row.size() != 6)
                throw InputError("triangulation: each tetrahedron needs exactly 6 edge indices");
            std::array<int, 6> tet{};
            for (int s = 0; s < 6; ++s) tet[s] = row.at(s).get<int>();
            tri.tets_.push_back(tet);
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("triangulation: missing or malformed field: ") + e.what());
    }
    tri.validate(strict);
    return tri;
}

Triangulation Triangulation::from_file(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw InputError("triangulation: cannot open file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), strict);
}

void Triangulation::validate(bool strict) {
    if (num_edges_ < 1)
        throw InputError("triangulation: num_edges must be at least 1");
    if (tets_.empty())
        throw InputError("triangulation: at least one tetrahedron is required");
    degrees_.assign(num_edges_, 0);
    for (std::size_t t = 0; t < tets_.size(); ++t) {
        for (int s = 0; s < 6; ++s) {
            const int e = tets_[t][s];
            if (e < 0 || e >= num_edges_) {
                std::ostringstream os;
                os << "triangulation: tetrahedron " << t << " slot " << s
                   << " references edge " << e << " outside [0, " << num_edges_ << ")";
                throw InputError(os.str());
            }
            degrees_[e] += 1;
        }
    }
    for (int e = 0; e < num_edges_; ++e) {
        if (degrees_[e] == 0) {
            std::ostringstream os;
            os << "triangulation: edge " << e << " is not used by any tetrahedron";
            if (strict) throw InputError(os.str());
            warnings_.push_back(os.str());
        }
    }
}

std::vector<std::array<int, 3>> Triangulation::face_constraints() const {
    std::vector<std::array<int, 3>> out;
    out.reserve(4 * tets_.size());
    for (const auto& tet : tets_)
        for (const auto& fc : kFaceSlots)
            out.push_back({tet[fc[0]], tet[fc[1]], tet[fc[2]]});
    return out;
}

struct Triangulation::FaceClasses {
    // Distinct face multisets with their total multiplicity.
    std::map<std::array<int, 3>, int> counts;
    int glued_pairs = 0;
    std::vector<bool> edge_on_boundary;
};

Triangulation::FaceClasses Triangulation::face_classes() const {
    FaceClasses fc;
    fc.edge_on_boundary.assign(num_edges_, false);
    for (auto face : face_constraints()) {
        std::sort(face.begin(), face.end());
        fc.counts[face] += 1;
    }
    for (const auto& [face, count] : fc.counts) {
        fc.glued_pairs += count / 2;
        if (count % 2 != 0)
            for (int e : face) fc.edge_on_boundary[e] = true;
    }
    return fc;
}

std::vector<std::vector<std::uint8_t>> Triangulation::z2_boundary_matrix() const {
    const FaceClasses fc = face_classes();
    std::vector<int> col_of(num_edges_, -1);
    int ncols = 0;
    for (int e = 0; e < num_edges_; ++e)
        if (!fc.edge_on_boundary[e]) col_of[e] = ncols++;

    std::vector<std::vector<std::uint8_t>> rows;
    for (const auto& [face, count] : fc.counts) {
        if (count / 2 == 0) continue;
        std::vector<std::uint8_t> row(ncols, 0);
        for (int e : face)
            if (col_of[e] >= 0) row[col_of[e]] ^= 1;
        // one row per glued pair; duplicates do not change the rank but keep
        // the chain-level bookkeeping honest
        for (int copy = 0; copy < count / 2; ++copy) rows.push_back(row);
    }
    return rows;
}

namespace {

int gf2_rank(std::vector<std::vector<std::uint8_t>> rows) {
    if (rows.empty()) return 0;
    const int ncols = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        for (int row = rank; row < static_cast<int>(rows.size()); ++row)
            if (rows[row][col]) {
                piv = row;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[piv], rows[rank]);
        for (int row = 0; row < static_cast<int>(rows.size()); ++row)
            if (row != rank && rows[row][col])
                for (int c = col; c < ncols; ++c) rows[row][c] ^= rows[rank][c];
        ++rank;
    }
    return rank;
}

}  // namespace

Z2Ranks Triangulation::z2_homology_ranks() const {
    const FaceClasses fc = face_classes();
    const int interior_edges =
        static_cast<int>(std::count(fc.edge_on_boundary.begin(),
                                    fc.edge_on_boundary.end(), false));

    const auto matrix = z2_boundary_matrix();
    const int rank = matrix.empty() || matrix[0].empty() ? 0 : gf2_rank(matrix);

    // Components of the edge-sharing tetrahedron graph (union-find on edges).
    std::vector<int> parent(num_edges_ + tets_.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t t = 0; t < tets_.size(); ++t) {
        const int tn = num_edges_ + static_cast<int>(t);
        for (int s = 0; s < 6; ++s) parent[find(tets_[t][s])] = find(tn);
    }
    std::vector<int> roots;
    for (std::size_t t = 0; t < tets_.size(); ++t)
        roots.push_back(find(num_edges_ + static_cast<int>(t)));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    const int components = static_cast<int>(roots.size());

    Z2Ranks out;
    out.h0 = components;
    out.h2 = interior_edges - rank;
    // Euler characteristic of the handle complex:
    // |tets| - #glued pairs + #interior edges; b1 = b0 + b2 - chi.
    const int chi = static_cast<int>(tets_.size()) - fc.glued_pairs + interior_edges;
    out.h1 = out.h0 + out.h2 - chi;
    return out;
}

std::string Triangulation::to_json_text() const {
    json doc;
    if (!name_.empty()) doc["name"] = name_;
    doc["num_edges"] = num_edges_;
    json rows = json::array();
    for (const auto& tet : tets_) {
        json row = json::array();
        for (int s = 0; s < 6; ++s) row.push_back(tet[s]);
        rows.push_back(row);
    }
    doc["tetrahedra"] = rows;
    return doc.dump(2) + "\n";
}

}  // namespace reltv
