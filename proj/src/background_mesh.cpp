#include "surfch/background_mesh.hpp"

#include <cmath>
#include <sstream>

namespace surfch {

namespace {

// The six coordinate permutations defining the Kuhn split. Tet t consists of
// the points whose cell-local coordinates satisfy
//   0 <= x_{p[0]} <= x_{p[1]} <= x_{p[2]} <= 1  (after sorting by the perm),
// giving corners (0,0,0), e_{p0}, e_{p0}+e_{p1}, (1,1,1). Odd permutations
// get vertices 1 and 2 swapped so every tet is positively oriented.
constexpr int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr bool kOddPerm[6] = {false, true, true, false, false, true};

} // namespace

double Box::edge() const
{
    const Vec3 d = hi - lo;
    if (!(d[0] > 0.0 && d[1] > 0.0 && d[2] > 0.0))
        throw std::invalid_argument("Box: hi must exceed lo in every coordinate");
    const double e = d[0];
    const double tol = 1e-12 * e;
    if (std::abs(d[1] - e) > tol || std::abs(d[2] - e) > tol) {
        std::ostringstream msg;
        msg << "Box: only cubes are supported, got edges (" << d[0] << ", " << d[1] << ", " << d[2] << ")";
        throw std::invalid_argument(msg.str());
    }
    return e;
}

double TetRef::volume() const
{
    const Vec3 a = coords[1] - coords[0];
    const Vec3 b = coords[2] - coords[0];
    const Vec3 c = coords[3] - coords[0];
    return a.cross(b).dot(c) / 6.0;
}

Vec3 TetRef::barycenter() const
{
    return 0.25 * (coords[0] + coords[1] + coords[2] + coords[3]);
}

std::array<Vec3, 4> barycentric_gradients(const TetRef& tet)
{
    Mat3 edges;
    edges.col(0) = tet.coords[1] - tet.coords[0];
    edges.col(1) = tet.coords[2] - tet.coords[0];
    edges.col(2) = tet.coords[3] - tet.coords[0];
    const Mat3 inv = edges.inverse();

    std::array<Vec3, 4> grads;
    grads[1] = inv.row(0);
    grads[2] = inv.row(1);
    grads[3] = inv.row(2);
    grads[0] = -(grads[1] + grads[2] + grads[3]);
    return grads;
}

std::array<double, 4> barycentric_coordinates(const TetRef& tet, const Vec3& x)
{
    Mat3 edges;
    edges.col(0) = tet.coords[1] - tet.coords[0];
    edges.col(1) = tet.coords[2] - tet.coords[0];
    edges.col(2) = tet.coords[3] - tet.coords[0];
    const Vec3 rest = edges.inverse() * (x - tet.coords[0]);
    return {1.0 - rest.sum(), rest[0], rest[1], rest[2]};
}

BackgroundMesh::BackgroundMesh(const Box& box, int cells_per_axis)
    : box_(box), n_(cells_per_axis)
{
    if (n_ < 1)
        throw std::invalid_argument("BackgroundMesh: cells_per_axis must be >= 1");
    h_ = box_.edge() / n_;
}

std::int64_t BackgroundMesh::vertex_count() const
{
    const std::int64_t m = n_ + 1;
    return m * m * m;
}

std::int64_t BackgroundMesh::cell_count() const
{
    const std::int64_t m = n_;
    return m * m * m;
}

std::int64_t BackgroundMesh::vertex_id(int i, int j, int k) const
{
    const std::int64_t m = n_ + 1;
    return (static_cast<std::int64_t>(i) * m + j) * m + k;
}

Vec3 BackgroundMesh::vertex_coords(std::int64_t id) const
{
    const std::int64_t m = n_ + 1;
    const int k = static_cast<int>(id % m);
    const int j = static_cast<int>((id / m) % m);
    const int i = static_cast<int>(id / (m * m));
    return box_.lo + h_ * Vec3(i, j, k);
}

void BackgroundMesh::check_cell(const CellIndex& cell) const
{
    if (cell.i < 0 || cell.i >= n_ || cell.j < 0 || cell.j >= n_ || cell.k < 0 || cell.k >= n_) {
        std::ostringstream msg;
        msg << "BackgroundMesh: cell (" << cell.i << ", " << cell.j << ", " << cell.k
            << ") out of range [0, " << n_ << ")^3";
        throw std::invalid_argument(msg.str());
    }
}

std::array<TetRef, 6> BackgroundMesh::tets_in_cell(const CellIndex& cell) const
{
    check_cell(cell);

    std::array<TetRef, 6> tets;
    for (int t = 0; t < 6; ++t) {
        // Cell-local corner offsets in {0,1}^3.
        std::array<std::array<int, 3>, 4> off{};
        off[0] = {0, 0, 0};
        off[1] = off[0];
        off[1][kPerm[t][0]] = 1;
        off[2] = off[1];
        off[2][kPerm[t][1]] = 1;
        off[3] = {1, 1, 1};
        if (kOddPerm[t])
            std::swap(off[1], off[2]);

        TetRef& tet = tets[t];
        tet.cell = cell;
        tet.local = t;
        for (int v = 0; v < 4; ++v) {
            const int i = cell.i + off[v][0];
            const int j = cell.j + off[v][1];
            const int k = cell.k + off[v][2];
            tet.vertices[v] = vertex_id(i, j, k);
            tet.coords[v] = box_.lo + h_ * Vec3(i, j, k);
        }
    }
    return tets;
}

std::int64_t BackgroundMesh::tet_index(const CellIndex& cell, int local) const
{
    check_cell(cell);
    if (local < 0 || local >= 6)
        throw std::invalid_argument("BackgroundMesh: local tet index out of range");
    const std::int64_t c = (static_cast<std::int64_t>(cell.i) * n_ + cell.j) * n_ + cell.k;
    return 6 * c + local;
}

} // namespace surfch
