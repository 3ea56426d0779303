#include "expander/solver.hpp"
#include "expander/geometry.hpp"
#include "expander/kernels.hpp"

#include <Eigen/SparseCholesky>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace expander {

ResidualResult expander_residual(const TriMesh& mesh) {
    Topology t = build_topology(mesh);
    VertexFaces vf = build_vertex_faces(mesh.F, mesh.nv());
    std::vector<Vec3> grad, N;
    std::vector<double> area;
    weighted_area_gradient_parallel(mesh.V, mesh.F, vf, grad);
    vertex_normals_parallel(mesh.V, mesh.F, vf, N, area);
    area = mixed_areas(mesh.V, mesh.F);
    ResidualResult r;
    r.r.assign(mesh.nv(), Vec3::Zero());
    r.scaled.assign(mesh.nv(), 0.0);
    double l2 = 0, at = 0;
    for (size_t i = 0; i < mesh.nv(); ++i) {
        if (!t.used_vertex[i] || t.boundary_vertex[i]) continue;
        if (!(area[i] > 0) || !(N[i].norm() > 0.5)) {
            ++r.flagged;
            continue;
        }
        double h = -grad[i].dot(N[i]) / (weight(mesh.V[i]) * area[i]);
        r.r[i] = h * N[i];
        double sc = std::abs(h) / std::max(1.0, mesh.V[i].norm());
        r.scaled[i] = sc;
        r.max = std::max(r.max, sc);
        l2 += sc * sc * area[i];
        at += area[i];
    }
    r.l2 = at > 0 ? std::sqrt(l2 / at) : 0.0;
    if (r.flagged) spdlog::warn("expander_residual: {} degenerate vertices skipped", r.flagged);
    return r;
}

WeightedOperators weighted_operators(const TriMesh& m) {
    const int n = static_cast<int>(m.nv());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(m.nf() * 12);
    WeightedOperators op;
    op.M = Eigen::VectorXd::Zero(n);
    for (const auto& f : m.F) {
        const Vec3 &a = m.V[f[0]], &b = m.V[f[1]], &c = m.V[f[2]];
        double w = weight((a + b + c) / 3.0);
        double area = triangle_area(a, b, c);
        const Vec3* P[3] = {&a, &b, &c};
        for (int j = 0; j < 3; ++j) {
            op.M[f[j]] += w * area / 3.0;
            double ct = 0.5 * w * cot_angle(*P[j], *P[(j + 1) % 3], *P[(j + 2) % 3]);
            int u = f[(j + 1) % 3], v = f[(j + 2) % 3];
            trip.emplace_back(u, u, ct);
            trip.emplace_back(v, v, ct);
            trip.emplace_back(u, v, -ct);
            trip.emplace_back(v, u, -ct);
        }
    }
    op.K.resize(n, n);
    op.K.setFromTriplets(trip.begin(), trip.end());
    return op;
}

InvariantBasis invariant_basis(const TriMesh& mesh, const SymmetryGroup& group, const VertexAction& act,
                               const std::vector<Vec3>& normals) {
    const size_t n = mesh.nv();
    Topology t = build_topology(mesh);
    InvariantBasis ib;
    ib.slot.assign(n, -1);
    for (size_t i = 0; i < n; ++i)
        if (t.used_vertex[i] && !t.boundary_vertex[i] && !mesh.tags[i].fixed()) {
            ib.slot[i] = static_cast<int>(ib.free.size());
            ib.free.push_back(static_cast<int>(i));
        }
    // orientation character of each element
    ib.chi.assign(group.order(), 1);
    for (size_t g = 0; g < group.order(); ++g) {
        int plus = 0, minus = 0;
        for (int i : ib.free) {
            double d = normals[act.perm[g][i]].dot(group.elements[g] * normals[i]);
            if (d > 0.5) ++plus;
            if (d < -0.5) ++minus;
        }
        ib.chi[g] = minus > plus ? -1 : 1;
    }
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<int> col_of_orbit(act.num_orbits, -2);
    int ncol = 0;
    for (int i : ib.free) {
        int o = act.orbit_of[i];
        if (col_of_orbit[o] != -2) continue;
        // signs on the orbit; conflicting signs mean the orbit is forced to zero
        std::vector<std::pair<int, int>> entries;
        bool ok = true;
        for (size_t g = 0; g < group.order() && ok; ++g) {
            int j = act.perm[g][i];
            int sgn = ib.chi[g];
            bool seen = false;
            for (auto& e : entries)
                if (e.first == j) {
                    seen = true;
                    if (e.second != sgn) ok = false;
                }
            if (!seen) entries.push_back({j, sgn});
        }
        if (!ok) {
            col_of_orbit[o] = -1;
            continue;
        }
        col_of_orbit[o] = ncol;
        for (auto& e : entries)
            if (ib.slot[e.first] >= 0) trip.emplace_back(ib.slot[e.first], ncol, static_cast<double>(e.second));
        ++ncol;
    }
    ib.B.resize(static_cast<int>(ib.free.size()), ncol);
    ib.B.setFromTriplets(trip.begin(), trip.end());
    return ib;
}

namespace {

SpMat restrict_rows_cols(const SpMat& A, const std::vector<int>& idx) {
    const int m = static_cast<int>(idx.size());
    std::vector<int> pos(A.rows(), -1);
    for (int i = 0; i < m; ++i) pos[idx[i]] = i;
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            int r = pos[it.row()], c = pos[it.col()];
            if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
        }
    SpMat S(m, m);
    S.setFromTriplets(trip.begin(), trip.end());
    return S;
}

double min_quality_and_flips(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F,
                             const std::vector<Vec3>& ref_normals, bool& flipped) {
    double q = 1.0;
    flipped = false;
    for (size_t f = 0; f < F.size(); ++f) {
        const Vec3 &a = V[F[f][0]], &b = V[F[f][1]], &c = V[F[f][2]];
        q = std::min(q, triangle_quality(a, b, c));
        Vec3 n = (b - a).cross(c - a);
        if (n.dot(ref_normals[f]) <= 0) flipped = true;
    }
    return q;
}

std::vector<Vec3> face_normals(const std::vector<Vec3>& V, const std::vector<std::array<int, 3>>& F) {
    std::vector<Vec3> out(F.size());
    for (size_t f = 0; f < F.size(); ++f) out[f] = (V[F[f][1]] - V[F[f][0]]).cross(V[F[f][2]] - V[F[f][0]]);
    return out;
}

}  // namespace

SolveResult minimize(const TriMesh& seed, const SymmetryGroup& group, const SolveOptions& opt) {
    SolveResult res;
    TriMesh m = seed;
    m.ensure_tags();
    Topology topo = build_topology(m);
    VertexAction act = discover_action(m, group);
    symmetrize_positions(m.V, group, act);
    VertexFaces vf = build_vertex_faces(m.F, m.nv());

    std::vector<Vec3> grad, N;
    std::vector<double> area;
    vertex_normals_parallel(m.V, m.F, vf, N, area);
    InvariantBasis ib = invariant_basis(m, group, act, N);
    const SpMat Bt = ib.B.transpose();
    const int nfree = static_cast<int>(ib.free.size());

    double W = weighted_area(m);
    double alpha_prev = opt.step;
    for (int it = 0;; ++it) {
        weighted_area_gradient_parallel(m.V, m.F, vf, grad);
        vertex_normals_parallel(m.V, m.F, vf, N, area);
        ResidualResult rr = expander_residual(m);
        IterationRecord rec{it, W, rr.max, rr.l2, 0.0, false};
        if (rr.max < opt.tol || nfree == 0 || ib.B.cols() == 0) {
            res.history.push_back(rec);
            res.converged = rr.max < opt.tol;
            if (!res.converged) res.message = "no free invariant directions";
            break;
        }
        if (it >= opt.max_iter) {
            res.history.push_back(rec);
            res.message = "iteration limit reached";
            break;
        }
        // weighted operators on the free vertices
        WeightedOperators op = weighted_operators(m);
        SpMat Kf = restrict_rows_cols(op.K, ib.free);
        Eigen::VectorXd Mf(nfree), gf(nfree), A2f(nfree);
        std::vector<double> A2;
        if (opt.newton) A2 = shape_operator_norm2(m, topo, N);
        for (int r = 0; r < nfree; ++r) {
            int i = ib.free[r];
            Mf[r] = op.M[i];
            gf[r] = grad[i].dot(N[i]);
            A2f[r] = opt.newton ? A2[i] : 0.0;
        }
        std::vector<Vec3> d(m.nv(), Vec3::Zero());
        double umax = 0, slope = 0;
        bool used_newton = false;
        if (rr.max > opt.vector_until && it < opt.vector_iters) {
            // semi-implicit weighted flow of the positions; carries tangential motion across creases
            SpMat S = Kf;
            for (int r = 0; r < nfree; ++r) S.coeffRef(r, r) += Mf[r] / opt.flow_time;
            Eigen::SimplicialLDLT<SpMat> ldlt(S);
            if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::NumericalError, "flow matrix factorization failed");
            Eigen::MatrixXd G(nfree, 3);
            for (int r = 0; r < nfree; ++r) G.row(r) = -grad[ib.free[r]].transpose();
            Eigen::MatrixXd D = ldlt.solve(G);
            for (int r = 0; r < nfree; ++r) {
                d[ib.free[r]] = D.row(r).transpose();
                umax = std::max(umax, D.row(r).norm());
            }
            slope = -(G.array() * D.array()).sum();
        } else {
            SpMat P = Kf;
            for (int r = 0; r < nfree; ++r) P.coeffRef(r, r) += 0.5 * Mf[r];
            Eigen::VectorXd rhs = -(Bt * gf);
            Eigen::VectorXd ur;
            if (opt.newton) {
                SpMat H = P;
                for (int r = 0; r < nfree; ++r) H.coeffRef(r, r) -= A2f[r] * Mf[r];
                SpMat Hr = Bt * H * ib.B;
                Eigen::SimplicialLDLT<SpMat> ldlt(Hr);
                if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0) {
                    ur = ldlt.solve(rhs);
                    used_newton = ur.allFinite() && ur.dot(rhs) > 0;
                }
            }
            if (!used_newton) {
                SpMat Pr = Bt * P * ib.B;
                Eigen::SimplicialLDLT<SpMat> ldlt(Pr);
                if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::NumericalError, "preconditioner factorization failed");
                ur = ldlt.solve(rhs);
            }
            Eigen::VectorXd u = ib.B * ur;
            for (int r = 0; r < nfree; ++r) {
                d[ib.free[r]] = u[r] * N[ib.free[r]];
                umax = std::max(umax, std::abs(u[r]));
            }
            slope = gf.dot(u);
        }
        if (!(slope < 0)) {
            res.history.push_back(rec);
            res.message = "no descent direction";
            break;
        }
        const double hmean = mean_edge_length(m);
        double alpha = std::min({1.0, 2.0 * alpha_prev, hmean / std::max(umax, 1e-300)});
        std::vector<Vec3> fn = face_normals(m.V, m.F);
        std::vector<Vec3> X(m.nv());
        double Wn = W;
        bool accepted = false;
        while (alpha > 1e-14) {
            for (size_t i = 0; i < m.nv(); ++i) X[i] = m.V[i] + alpha * d[i];
            symmetrize_positions(X, group, act);
            bool flipped;
            double q = min_quality_and_flips(X, m.F, fn, flipped);
            if (!flipped && q >= opt.min_quality) {
                Wn = weighted_area_parallel(X, m.F);
                if (Wn <= W + opt.armijo * alpha * slope) {
                    accepted = true;
                    break;
                }
            }
            alpha *= opt.backtrack;
        }
        if (!accepted) {
            res.history.push_back(rec);
            res.message = "line search failed";
            break;
        }
        m.V.swap(X);
        W = Wn;
        alpha_prev = alpha;
        rec.step = alpha;
        rec.newton = used_newton;
        res.history.push_back(rec);
        if (opt.verbose)
            spdlog::info("iter {} W {:.10f} res {:.3e} step {:.3e} q {:.3f}{}", it, W, rr.max, alpha, min_triangle_quality(m),
                         used_newton ? " newton" : "");

        // tangential smoothing, kept only if it does not increase W
        if ((opt.smooth_every > 0 && (it + 1) % opt.smooth_every == 0) || min_triangle_quality(m) < 3.0 * opt.min_quality) {
            vertex_normals_parallel(m.V, m.F, vf, N, area);
            std::vector<Vec3> S = m.V;
            for (int i : ib.free) {
                Vec3 c = Vec3::Zero();
                double ws = 0;
                for (int p = vf.offset[i]; p < vf.offset[i + 1]; ++p) {
                    const auto& f = m.F[vf.face[p]];
                    double a = triangle_area(m.V[f[0]], m.V[f[1]], m.V[f[2]]);
                    c += a * (m.V[f[0]] + m.V[f[1]] + m.V[f[2]]) / 3.0;
                    ws += a;
                }
                if (ws <= 0) continue;
                Vec3 dl = c / ws - m.V[i];
                dl -= dl.dot(N[i]) * N[i];
                S[i] = m.V[i] + 0.5 * dl;
            }
            symmetrize_positions(S, group, act);
            for (double beta : {1.0, 0.5, 0.25, 0.125}) {
                std::vector<Vec3> T(m.nv());
                for (size_t i = 0; i < m.nv(); ++i) T[i] = m.V[i] + beta * (S[i] - m.V[i]);
                bool flipped;
                min_quality_and_flips(T, m.F, face_normals(m.V, m.F), flipped);
                double Ws = weighted_area_parallel(T, m.F);
                if (!flipped && Ws <= W) {
                    m.V.swap(T);
                    W = Ws;
                    break;
                }
            }
        }
        double q = min_triangle_quality(m);
        if (q < opt.min_quality)
            throw Error(ErrorKind::MeshDegeneration, "minimum triangle quality " + std::to_string(q) + " at iteration " +
                                                         std::to_string(it));
    }
    res.mesh = m;
    res.iterations = static_cast<int>(res.history.size()) - 1;
    res.weighted_area = W;
    res.residual_max = res.history.back().residual_max;
    res.residual_l2 = res.history.back().residual_l2;
    if (!res.converged && res.message.empty()) res.message = "not converged";
    return res;
}

}  // namespace expander
