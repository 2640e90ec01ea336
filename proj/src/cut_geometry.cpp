#include "surfch/cut_geometry.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace surfch {

double Triangle::area() const
{
    return 0.5 * (v[1] - v[0]).cross(v[2] - v[0]).norm();
}

Vec3 Triangle::centroid() const
{
    return (v[0] + v[1] + v[2]) / 3.0;
}

namespace {

// Zero values count as positive; keeps the case table total.
inline bool is_negative(double v) { return v < 0.0; }

inline Vec3 edge_crossing(double va, double vb, const Vec3& a, const Vec3& b)
{
    const double t = va / (va - vb);
    return a + t * (b - a);
}

} // namespace

MarchingResult marching_tet(const std::array<double, 4>& values, const std::array<Vec3, 4>& coords)
{
    for (double v : values)
        if (std::isnan(v))
            throw std::invalid_argument("marching_tet: NaN nodal value");

    int neg[4], pos[4];
    int n_neg = 0, n_pos = 0;
    for (int k = 0; k < 4; ++k) {
        if (is_negative(values[k]))
            neg[n_neg++] = k;
        else
            pos[n_pos++] = k;
    }

    MarchingResult out;
    if (n_neg == 0 || n_neg == 4)
        return out;

    if (n_neg == 1 || n_neg == 3) {
        // One vertex on the minority side; crossings on its three edges.
        const int apex = (n_neg == 1) ? neg[0] : pos[0];
        const int* other = (n_neg == 1) ? pos : neg;
        Triangle tri;
        for (int k = 0; k < 3; ++k)
            tri.v[k] = edge_crossing(values[apex], values[other[k]], coords[apex], coords[other[k]]);
        out.tris[out.count++] = tri;
        return out;
    }

    // 2-2 split: four crossings form a planar quad. Perimeter order
    // (A-C, A-D, B-D, B-C) with {A,B} negative, {C,D} positive; split along
    // the shorter diagonal for better triangle shape.
    const int a = neg[0], b = neg[1], c = pos[0], d = pos[1];
    const Vec3 pac = edge_crossing(values[a], values[c], coords[a], coords[c]);
    const Vec3 pad = edge_crossing(values[a], values[d], coords[a], coords[d]);
    const Vec3 pbd = edge_crossing(values[b], values[d], coords[b], coords[d]);
    const Vec3 pbc = edge_crossing(values[b], values[c], coords[b], coords[c]);

    const double diag_ac_bd = (pac - pbd).squaredNorm();
    const double diag_ad_bc = (pad - pbc).squaredNorm();
    if (diag_ac_bd <= diag_ad_bc) {
        out.tris[0] = Triangle{{pac, pad, pbd}};
        out.tris[1] = Triangle{{pac, pbd, pbc}};
    } else {
        out.tris[0] = Triangle{{pad, pbd, pbc}};
        out.tris[1] = Triangle{{pad, pbc, pac}};
    }
    out.count = 2;
    return out;
}

const TriangleRule& triangle_rule(int degree)
{
    static const TriangleRule deg2 = [] {
        TriangleRule r;
        r.degree = 2;
        const double a = 2.0 / 3.0, b = 1.0 / 6.0;
        r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
        r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        return r;
    }();

    static const TriangleRule deg4 = [] {
        TriangleRule r;
        r.degree = 4;
        const double a1 = 0.445948490915965, w1 = 0.223381589678011;
        const double a2 = 0.091576213509771, w2 = 0.109951743655322;
        for (double av : {a1, a2}) {
            const double bv = 1.0 - 2.0 * av;
            r.points.push_back({bv, av, av});
            r.points.push_back({av, bv, av});
            r.points.push_back({av, av, bv});
        }
        r.weights = {w1, w1, w1, w2, w2, w2};
        return r;
    }();

    static const TriangleRule deg6 = [] {
        TriangleRule r;
        r.degree = 6;
        const double a1 = 0.063089014491502, w1 = 0.050844906370207;
        const double a2 = 0.249286745170910, w2 = 0.116786275726379;
        const double a3 = 0.310352451033785, b3 = 0.053145049844816, w3 = 0.082851075618374;
        for (auto [av, wv] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
            const double bv = 1.0 - 2.0 * av;
            r.points.push_back({bv, av, av});
            r.points.push_back({av, bv, av});
            r.points.push_back({av, av, bv});
            r.weights.insert(r.weights.end(), 3, wv);
        }
        const double c3 = 1.0 - a3 - b3;
        r.points.push_back({c3, a3, b3});
        r.points.push_back({c3, b3, a3});
        r.points.push_back({a3, c3, b3});
        r.points.push_back({b3, c3, a3});
        r.points.push_back({a3, b3, c3});
        r.points.push_back({b3, a3, c3});
        r.weights.insert(r.weights.end(), 6, w3);
        return r;
    }();

    switch (degree) {
    case 2: return deg2;
    case 4: return deg4;
    case 6: return deg6;
    default: break;
    }
    std::ostringstream msg;
    msg << "triangle_rule: unsupported degree " << degree << " (supported: 2, 4, 6)";
    throw std::invalid_argument(msg.str());
}

const TetRule& tet_rule(int degree)
{
    static const TetRule deg1 = [] {
        TetRule r;
        r.degree = 1;
        r.points = {{0.25, 0.25, 0.25, 0.25}};
        r.weights = {1.0};
        return r;
    }();

    static const TetRule deg2 = [] {
        TetRule r;
        r.degree = 2;
        const double a = 0.585410196624969; // (5 + 3 sqrt(5)) / 20
        const double b = 0.138196601125011; // (5 - sqrt(5)) / 20
        r.points = {{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}};
        r.weights = {0.25, 0.25, 0.25, 0.25};
        return r;
    }();

    switch (degree) {
    case 1: return deg1;
    case 2: return deg2;
    default: break;
    }
    std::ostringstream msg;
    msg << "tet_rule: unsupported degree " << degree << " (supported: 1, 2)";
    throw std::invalid_argument(msg.str());
}

void surface_quadrature(const Triangle& tri, int degree, std::vector<Vec3>& points,
                        std::vector<double>& weights)
{
    const TriangleRule& rule = triangle_rule(degree);
    const double area = tri.area();
    points.clear();
    weights.clear();
    points.reserve(rule.points.size());
    weights.reserve(rule.points.size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        points.push_back(l[0] * tri.v[0] + l[1] * tri.v[1] + l[2] * tri.v[2]);
        weights.push_back(rule.weights[q] * area);
    }
}

void volume_quadrature(const TetRef& tet, int degree, std::vector<Vec3>& points,
                       std::vector<double>& weights)
{
    const TetRule& rule = tet_rule(degree);
    const double vol = tet.volume();
    points.clear();
    weights.clear();
    points.reserve(rule.points.size());
    weights.reserve(rule.points.size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const auto& l = rule.points[q];
        points.push_back(l[0] * tet.coords[0] + l[1] * tet.coords[1] + l[2] * tet.coords[2]
                         + l[3] * tet.coords[3]);
        weights.push_back(rule.weights[q] * vol);
    }
}

void CutSurface::rebuild_quadrature(int degree)
{
    const TriangleRule& rule = triangle_rule(degree);
    quadrature_degree = degree;
    qpoints.clear();
    qweights.clear();
    qtri.clear();
    qpoints.reserve(tris.size() * rule.points.size());
    qweights.reserve(tris.size() * rule.points.size());
    qtri.reserve(tris.size() * rule.points.size());
    for (std::size_t t = 0; t < tris.size(); ++t) {
        const Triangle& tri = tris[t].tri;
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& l = rule.points[q];
            qpoints.push_back(l[0] * tri.v[0] + l[1] * tri.v[1] + l[2] * tri.v[2]);
            qweights.push_back(rule.weights[q] * tris[t].area);
            qtri.push_back(static_cast<std::int32_t>(t));
        }
    }
}

void NarrowBand::rebuild_quadrature(int degree)
{
    const TetRule& rule = tet_rule(degree);
    quadrature_degree = degree;
    qpoints.clear();
    qweights.clear();
    qtet.clear();
    for (std::size_t t = 0; t < tets.size(); ++t) {
        const TetRef& tet = tets[t].tet;
        const double vol = tet.volume();
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const auto& l = rule.points[q];
            qpoints.push_back(l[0] * tet.coords[0] + l[1] * tet.coords[1] + l[2] * tet.coords[2]
                              + l[3] * tet.coords[3]);
            qweights.push_back(rule.weights[q] * vol);
            qtet.push_back(static_cast<std::int32_t>(t));
        }
    }
}

CutResult build_cut_surface(const NodalField& field, const BackgroundMesh& mesh)
{
    CutResult out;
    const int n = mesh.cells_per_axis();
    const double area_floor = 1e-14 * mesh.h() * mesh.h();

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const auto tets = mesh.tets_in_cell({i, j, k});
                for (const TetRef& tet : tets) {
                    const auto values = field.values_on(tet);
                    int n_neg = 0;
                    for (double v : values)
                        n_neg += (v < 0.0) ? 1 : 0;
                    if (n_neg == 0 || n_neg == 4)
                        continue;

                    BandTet band_tet;
                    band_tet.tet = tet;
                    try {
                        band_tet.frame = element_frame(field, tet);
                    } catch (const std::runtime_error&) {
                        std::cerr << "build_cut_surface: dropping degenerate element in cell (" << i
                                  << ", " << j << ", " << k << "), local " << tet.local << "\n";
                        continue;
                    }
                    band_tet.basis_grad = barycentric_gradients(tet);

                    const auto idx = static_cast<std::int32_t>(out.band.tets.size());
                    out.band.tets.push_back(band_tet);

                    const MarchingResult cut = marching_tet(values, tet.coords);
                    for (int t = 0; t < cut.count; ++t) {
                        const double area = cut.tris[t].area();
                        if (area <= area_floor)
                            continue;
                        out.surface.tris.push_back({cut.tris[t], idx, band_tet.frame.normal, area});
                    }
                }
            }

    if (out.band.tets.empty())
        throw std::runtime_error("build_cut_surface: the zero level set does not intersect the mesh");

    out.surface.rebuild_quadrature(4);
    out.band.rebuild_quadrature(1);

    double area = 0.0;
    for (const CutTriangle& t : out.surface.tris)
        area += t.area;
    out.surface.total_area = area;
    return out;
}

} // namespace surfch
