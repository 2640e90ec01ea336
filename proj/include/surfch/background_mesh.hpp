#pragma once

#include "surfch/common.hpp"

#include <array>
#include <cstdint>

namespace surfch {

/// Axis-aligned computational box. Mesh generation accepts cubes only, so
/// the mesh size h is unambiguous.
struct Box {
    Vec3 lo{-1.25, -1.25, -1.25};
    Vec3 hi{1.25, 1.25, 1.25};

    /// Edge length; throws std::invalid_argument unless the box is a proper cube.
    double edge() const;
};

struct CellIndex {
    int i = 0, j = 0, k = 0;
};

/// One tetrahedron of the six-way cube split. Self-contained: global vertex
/// ids and coordinates are materialized on construction, nothing points back
/// into mesh storage.
struct TetRef {
    CellIndex cell;
    int local = 0; // 0..5 within the cell
    std::array<std::int64_t, 4> vertices{};
    std::array<Vec3, 4> coords{};

    double volume() const; // positive by construction
    Vec3 barycenter() const;
};

/// Gradients of the four barycentric (P1) shape functions; constant per tet.
std::array<Vec3, 4> barycentric_gradients(const TetRef& tet);

/// Barycentric coordinates of x with respect to tet (sums to one).
std::array<double, 4> barycentric_coordinates(const TetRef& tet, const Vec3& x);

/// Uniform tetrahedral mesh of a cube: n^3 cubic cells, each split into six
/// tetrahedra that share the cell's main diagonal (Kuhn split, same diagonal
/// direction in every cell, so faces of neighboring cells match). Tetrahedra
/// are never stored; TetRefs are produced on demand, which keeps memory
/// independent of the mesh resolution.
class BackgroundMesh {
public:
    BackgroundMesh(const Box& box, int cells_per_axis);

    int cells_per_axis() const { return n_; }
    double h() const { return h_; }
    const Box& box() const { return box_; }

    std::int64_t vertex_count() const;
    std::int64_t cell_count() const;
    std::int64_t tet_count() const { return 6 * cell_count(); }

    std::int64_t vertex_id(int i, int j, int k) const;
    Vec3 vertex_coords(std::int64_t id) const;

    /// The six tetrahedra of a cell; throws on out-of-range indices.
    std::array<TetRef, 6> tets_in_cell(const CellIndex& cell) const;

    /// Dense tet id in [0, 6 n^3), lexicographic in (cell, local).
    std::int64_t tet_index(const CellIndex& cell, int local) const;

private:
    void check_cell(const CellIndex& cell) const;

    Box box_;
    int n_ = 0;
    double h_ = 0.0;
};

} // namespace surfch
