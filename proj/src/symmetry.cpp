#include "expander/symmetry.hpp"

#include "expander/mesh.hpp"
#include "expander/spatial_hash.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace expander {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::SymmetryMismatch: return "symmetry-mismatch";
        case ErrorKind::TopologyError: return "topology-error";
        case ErrorKind::ParseError: return "parse-error";
        case ErrorKind::IntegrationFailure: return "integration-failure";
        case ErrorKind::OutOfRange: return "out-of-range";
        case ErrorKind::GeometryError: return "geometry-error";
        case ErrorKind::RejectedBoundary: return "rejected-boundary";
        case ErrorKind::MeshQuality: return "mesh-quality-error";
        case ErrorKind::WeldError: return "weld-error";
        case ErrorKind::NotConverged: return "not-converged";
        case ErrorKind::MeshDegeneration: return "mesh-degeneration";
        case ErrorKind::NumericalError: return "numerical-error";
        case ErrorKind::ClassificationUnavailable: return "classification-unavailable";
        case ErrorKind::Inconclusive: return "inconclusive";
        case ErrorKind::FlowError: return "flow-error";
        case ErrorKind::HomotopyError: return "homotopy-error";
        case ErrorKind::ReconstructionError: return "reconstruction-error";
        case ErrorKind::DegreeUnresolved: return "degree-unresolved";
    }
    return "error";
}

Mat3 rotation_z(double a) {
    Mat3 m;
    m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return m;
}

Mat3 reflection_vertical_plane(double theta) {
    // P_theta contains e3 and (cos, sin, 0); its normal is (-sin, cos, 0)
    Vec3 n(-std::sin(theta), std::cos(theta), 0.0);
    return Mat3::Identity() - 2.0 * n * n.transpose();
}

Mat3 rotation_pi_about_horizontal(double theta) {
    Vec3 d(std::cos(theta), std::sin(theta), 0.0);
    return 2.0 * d * d.transpose() - Mat3::Identity();
}

Mat3 reflection_z() {
    Mat3 m = Mat3::Identity();
    m(2, 2) = -1.0;
    return m;
}

int SymmetryGroup::find(const Mat3& m, double tol) const {
    for (size_t i = 0; i < elements.size(); ++i)
        if ((elements[i] - m).cwiseAbs().maxCoeff() < tol) return static_cast<int>(i);
    return -1;
}

namespace {

// Clean entries so products of exact rotations hash consistently.
Mat3 snap(const Mat3& m) {
    Mat3 r = m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (std::abs(r(i, j)) < 1e-15) r(i, j) = 0.0;
        }
    return r;
}

SymmetryGroup close_generators(int k, const std::vector<Mat3>& gens) {
    SymmetryGroup g;
    g.k = k;
    g.elements.push_back(Mat3::Identity());
    std::deque<size_t> queue{0};
    while (!queue.empty()) {
        size_t i = queue.front();
        queue.pop_front();
        for (const Mat3& s : gens) {
            Mat3 p = snap(s * g.elements[i]);
            if (g.find(p, 1e-12) < 0) {
                g.elements.push_back(p);
                queue.push_back(g.elements.size() - 1);
            }
        }
    }
    for (int j = 0; j < k; ++j) {
        double th = (2 * j + 1) * kPi / (2.0 * k);
        g.q_lines.emplace_back(std::cos(th), std::sin(th), 0.0);
        double ph = j * kPi / k;
        g.mirror_normals.emplace_back(-std::sin(ph), std::cos(ph), 0.0);
    }
    return g;
}

}  // namespace

SymmetryGroup build_group(int k) {
    if (k < 1) throw Error(ErrorKind::InvalidParameter, "group order parameter k must be >= 1");
    std::vector<Mat3> gens;
    for (int j = 0; j < k; ++j) {
        gens.push_back(rotation_pi_about_horizontal((2 * j + 1) * kPi / (2.0 * k)));
        gens.push_back(reflection_vertical_plane(j * kPi / k));
    }
    return close_generators(k, gens);
}

SymmetryGroup identity_group() {
    SymmetryGroup g;
    g.k = 0;
    g.elements.push_back(Mat3::Identity());
    return g;
}

SymmetryGroup annulus_stabilizer(int k) {
    if (k < 1) throw Error(ErrorKind::InvalidParameter, "k must be >= 1");
    std::vector<Mat3> gens;
    for (int j = 0; j < k; ++j) gens.push_back(reflection_vertical_plane(j * kPi / k));
    return close_generators(k, gens);
}

bool is_subgroup(int k, int n) {
    if (k < 1 || n < 1) throw Error(ErrorKind::InvalidParameter, "k and n must be positive");
    if (k > n) throw Error(ErrorKind::InvalidParameter, "is_subgroup requires k <= n");
    SymmetryGroup gk = build_group(k), gn = build_group(n);
    for (const Mat3& m : gk.elements)
        if (gn.find(m, 1e-12) < 0) return false;
    return true;
}

QPoints q_points(int k, double r) {
    if (k < 1) throw Error(ErrorKind::InvalidParameter, "k must be >= 1");
    if (!(r > 0)) throw Error(ErrorKind::InvalidParameter, "radius must be positive");
    QPoints q;
    for (int j = 0; j < 2 * k; ++j) {
        double th = (2 * j + 1) * kPi / (2.0 * k);
        q.points.emplace_back(r * std::cos(th), r * std::sin(th), 0.0);
    }
    for (int j = 0; j < 2 * k; ++j) {
        double th = j * kPi / k;
        Vec3 p(r * std::cos(th), r * std::sin(th), 0.0);
        (j % 2 == 0 ? q.even_midpoints : q.odd_midpoints).push_back(p);
    }
    return q;
}

VertexAction discover_action(const TriMesh& mesh, const SymmetryGroup& group, double tol) {
    const size_t n = mesh.V.size();
    VertexAction act;
    act.perm.assign(group.order(), std::vector<int>(n, -1));
    SpatialHash hash(mesh.V, std::max(tol * 100.0, 1e-6));
    for (size_t g = 0; g < group.order(); ++g) {
        std::vector<char> hit(n, 0);
        for (size_t i = 0; i < n; ++i) {
            Vec3 img = group.elements[g] * mesh.V[i];
            bool fixed_i = mesh.tags[i].fixed();
            int best = -1;
            double bestd = 0.0;
            hash.query(img, tol, [&](int j, double d) {
                if (mesh.tags[j].fixed() != fixed_i) return;
                if (best < 0 || d < bestd || (d == bestd && j < best)) {
                    best = j;
                    bestd = d;
                }
            });
            if (best < 0)
                throw Error(ErrorKind::SymmetryMismatch,
                            "no image vertex for vertex " + std::to_string(i) + " under element " + std::to_string(g));
            if (hit[best])
                throw Error(ErrorKind::SymmetryMismatch, "element " + std::to_string(g) + " is not a bijection on vertices");
            hit[best] = 1;
            act.perm[g][i] = best;
        }
    }
    // orbits
    act.orbit_of.assign(n, -1);
    for (size_t i = 0; i < n; ++i) {
        if (act.orbit_of[i] >= 0) continue;
        for (size_t g = 0; g < group.order(); ++g) act.orbit_of[act.perm[g][i]] = act.num_orbits;
        ++act.num_orbits;
    }
    // faces must map to faces
    if (!mesh.F.empty()) {
        std::unordered_set<uint64_t> faceset;
        auto key = [](std::array<int, 3> f) {
            std::sort(f.begin(), f.end());
            return (uint64_t(f[0]) << 42) ^ (uint64_t(f[1]) << 21) ^ uint64_t(f[2]);
        };
        for (const auto& f : mesh.F) faceset.insert(key(f));
        for (size_t g = 0; g < group.order(); ++g)
            for (const auto& f : mesh.F) {
                std::array<int, 3> h{act.perm[g][f[0]], act.perm[g][f[1]], act.perm[g][f[2]]};
                if (!faceset.count(key(h)))
                    throw Error(ErrorKind::SymmetryMismatch, "face image is not a face under element " + std::to_string(g));
            }
    }
    return act;
}

void symmetrize_positions(std::vector<Vec3>& V, const SymmetryGroup& group, const VertexAction& act) {
    const size_t n = V.size();
    const double inv = 1.0 / static_cast<double>(group.order());
    std::vector<Vec3> out(n, Vec3::Zero());
    for (size_t i = 0; i < n; ++i) {
        Vec3 acc = Vec3::Zero();
        for (size_t g = 0; g < group.order(); ++g) acc += group.elements[g].transpose() * V[act.perm[g][i]];
        out[i] = acc * inv;
    }
    V.swap(out);
}

TriMesh symmetrize_mesh(const TriMesh& mesh, const SymmetryGroup& group) {
    VertexAction act = discover_action(mesh, group);
    TriMesh out = mesh;
    symmetrize_positions(out.V, group, act);
    return out;
}

double symmetry_defect(const std::vector<Vec3>& V, const SymmetryGroup& group, const VertexAction& act) {
    double m = 0.0;
    for (size_t g = 0; g < group.order(); ++g)
        for (size_t i = 0; i < V.size(); ++i)
            m = std::max(m, (group.elements[g] * V[i] - V[act.perm[g][i]]).norm());
    return m;
}

}  // namespace expander
