#pragma once

#include "surfch/levelset.hpp"

#include <cstdint>
#include <vector>

namespace surfch {

struct Triangle {
    std::array<Vec3, 3> v{};
    double area() const;
    Vec3 centroid() const;
};

/// Intersection of the P1 zero set with one tetrahedron: empty, one triangle
/// (3-1 sign split), or two triangles forming a planar quad (2-2 split).
/// A nodal value of exactly zero counts as positive, so every sign pattern
/// maps to exactly one case. Crossing on edge (a,b) sits at t = v_a/(v_a - v_b).
struct MarchingResult {
    int count = 0;
    std::array<Triangle, 2> tris{};
};

MarchingResult marching_tet(const std::array<double, 4>& values, const std::array<Vec3, 4>& coords);

/// Symmetric Gauss rules on the reference triangle, given as barycentric
/// points with weights summing to one. Supported degrees: 2, 4, 6.
struct TriangleRule {
    int degree = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};
const TriangleRule& triangle_rule(int degree);

/// Rules on the reference tetrahedron (weights sum to one). Degrees: 1, 2.
struct TetRule {
    int degree = 0;
    std::vector<std::array<double, 4>> points;
    std::vector<double> weights;
};
const TetRule& tet_rule(int degree);

/// One narrow-band tetrahedron with its precomputed frame and P1 gradients.
struct BandTet {
    TetRef tet;
    ElementFrame frame;
    std::array<Vec3, 4> basis_grad;
};

/// Triangulated piece of the discrete surface inside one band tet.
struct CutTriangle {
    Triangle tri;
    std::int32_t band_tet = 0; // index into NarrowBand::tets
    Vec3 normal;               // parent element's n_h
    double area = 0.0;
};

/// The discrete surface: triangles plus a flat surface quadrature
/// (ambient points, weights carrying the triangle area, parent triangle).
struct CutSurface {
    std::vector<CutTriangle> tris;
    std::vector<Vec3> qpoints;
    std::vector<double> qweights;
    std::vector<std::int32_t> qtri;
    int quadrature_degree = 4;
    double total_area = 0.0;

    /// Regenerate the stored quadrature at another supported degree.
    void rebuild_quadrature(int degree);
};

/// Tetrahedra cut by the surface and their volumetric quadrature
/// (degree 1 by default; the normal-gradient stabilization integrand is
/// constant per element for P1).
struct NarrowBand {
    std::vector<BandTet> tets;
    std::vector<Vec3> qpoints;
    std::vector<double> qweights;
    std::vector<std::int32_t> qtet;
    int quadrature_degree = 1;

    void rebuild_quadrature(int degree);
};

struct CutResult {
    CutSurface surface;
    NarrowBand band;
};

/// Traverses cells lexicographically (then local tet index), collects every
/// tet whose nodal values change sign, extracts its surface triangles, and
/// builds both quadratures. Throws std::runtime_error when the surface does
/// not intersect the mesh. Degenerate (zero-area) triangles are dropped;
/// elements with vanishing grad(phi_h) are skipped with a warning on stderr.
CutResult build_cut_surface(const NodalField& field, const BackgroundMesh& mesh);

/// Quadrature for one ambient triangle: points and weights (summing to the
/// triangle area) for the requested degree.
void surface_quadrature(const Triangle& tri, int degree, std::vector<Vec3>& points,
                        std::vector<double>& weights);

/// Quadrature for one tet: points and weights summing to the tet volume.
void volume_quadrature(const TetRef& tet, int degree, std::vector<Vec3>& points,
                       std::vector<double>& weights);

} // namespace surfch
