#pragma once

// Ideal triangulations given combinatorially: a pool of edges and, for each
// tetrahedron, the six global edge indices sitting on its edge slots.
//
// Slot convention (fixed everywhere in this library): slots 0..5 are the six
// edges of an abstract tetrahedron on vertices {0,1,2,3}, opposite pairs are
// (0,3), (1,4), (2,5), and the four faces are the slot triples listed in
// kFaceSlots below.  Slot s joins the vertex pair kSlotVertices[s].

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "reltv/errors.hpp"

namespace reltv {

inline constexpr std::array<std::array<int, 3>, 4> kFaceSlots = {{
    {0, 1, 2},
    {0, 4, 5},
    {1, 3, 5},
    {2, 3, 4},
}};

inline constexpr std::array<std::array<int, 2>, 6> kSlotVertices = {{
    {0, 1}, {0, 2}, {1, 2}, {2, 3}, {1, 3}, {0, 3},
}};

inline constexpr int opposite_slot(int s) { return (s + 3) % 6; }

struct Z2Ranks {
    int h0 = 0;
    int h1 = 0;
    int h2 = 0;
};

class Triangulation {
  public:
    // Parse the JSON document {"name"?, "num_edges", "tetrahedra": [[6 ints]..]}.
    // strict: any edge index unused by every tetrahedron is an error; in
    // lenient mode it is recorded as a warning instead.
    static Triangulation from_json_text(const std::string& text, bool strict = true);
    static Triangulation from_file(const std::string& path, bool strict = true);

    const std::string& name() const { return name_; }
    int num_edges() const { return num_edges_; }
    int num_tets() const { return static_cast<int>(tets_.size()); }
    const std::vector<std::array<int, 6>>& tets() const { return tets_; }
    const std::vector<int>& edge_degrees() const { return degrees_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // All 4*|T| face triples of global edge indices, tets in order, faces in
    // kFaceSlots order, duplicates preserved.
    std::vector<std::array<int, 3>> face_constraints() const;

    // Z2 Betti numbers of the underlying manifold, modeled through the dual
    // handle decomposition.  Faces are matched into glued pairs by their edge
    // multiset (an odd leftover in a multiset class is a boundary face); edges
    // touching no boundary face carry 2-handles.  rank H2 is the kernel
    // dimension of the glued-face/interior-edge parity matrix, H0 counts
    // components of the edge-sharing tetrahedron graph, H1 follows from the
    // Euler characteristic of the handle complex.
    Z2Ranks z2_homology_ranks() const;

    // The parity matrix whose GF(2) kernel dimension is rank H2: one row per
    // glued face pair, one column per interior edge, entry = multiplicity of
    // the edge in the face, mod 2.  Exposed so tests can rank the same matrix
    // through an independent elimination.
    std::vector<std::vector<std::uint8_t>> z2_boundary_matrix() const;

    std::string to_json_text() const;

  private:
    std::string name_;
    int num_edges_ = 0;
    std::vector<std::array<int, 6>> tets_;
    std::vector<int> degrees_;
    std::vector<std::string> warnings_;

    void validate(bool strict);
    struct FaceClasses;
    FaceClasses face_classes() const;
};

}  // namespace reltv
