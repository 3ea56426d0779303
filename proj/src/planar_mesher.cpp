#include "expander/planar_mesher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace expander {

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// > 0 when d lies inside the circumcircle of counter-clockwise abc
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    long double adx = a.x() - d.x(), ady = a.y() - d.y();
    long double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    long double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    long double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
    return static_cast<double>(adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx));
}

struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb;  // neighbor across edge opposite v[i]
    bool alive;
};

class Delaunay {
public:
    explicit Delaunay(const std::vector<Vec2>& pts) : P(pts) {
        Vec2 lo = P[0], hi = P[0];
        for (const auto& p : P) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        Vec2 c = 0.5 * (lo + hi);
        double d = std::max(hi.x() - lo.x(), hi.y() - lo.y()) + 1.0;
        n0 = static_cast<int>(P.size());
        P.push_back(c + Vec2(-20 * d, -20 * d));
        P.push_back(c + Vec2(20 * d, -20 * d));
        P.push_back(c + Vec2(0, 20 * d));
        tris.push_back({{n0, n0 + 1, n0 + 2}, {-1, -1, -1}, true});
    }

    void insert(int pi) {
        const Vec2& p = P[pi];
        int t = locate(p);
        // cavity
        std::vector<int> cavity{t};
        std::unordered_set<int> in{t};
        for (size_t q = 0; q < cavity.size(); ++q) {
            const Tri& T = tris[cavity[q]];
            for (int i = 0; i < 3; ++i) {
                int nb = T.nb[i];
                if (nb < 0 || in.count(nb)) continue;
                const Tri& N = tris[nb];
                if (incircle(P[N.v[0]], P[N.v[1]], P[N.v[2]], p) > 0) {
                    in.insert(nb);
                    cavity.push_back(nb);
                }
            }
        }
        struct BEdge {
            int a, b, outside;
        };
        std::vector<BEdge> bnd;
        for (int c : cavity) {
            const Tri& T = tris[c];
            for (int i = 0; i < 3; ++i) {
                int nb = T.nb[i];
                if (nb >= 0 && in.count(nb)) continue;
                bnd.push_back({T.v[(i + 1) % 3], T.v[(i + 2) % 3], nb});
            }
        }
        for (int c : cavity) tris[c].alive = false;
        std::unordered_map<int, int> starts, ends;
        std::vector<int> created;
        for (const auto& e : bnd) {
            int id = static_cast<int>(tris.size());
            tris.push_back({{e.a, e.b, pi}, {-1, -1, e.outside}, true});
            if (e.outside >= 0) {
                Tri& O = tris[e.outside];
                for (int i = 0; i < 3; ++i) {
                    int u = O.v[(i + 1) % 3], w = O.v[(i + 2) % 3];
                    if (u == e.b && w == e.a) O.nb[i] = id;
                }
            }
            starts[e.a] = id;
            ends[e.b] = id;
            created.push_back(id);
        }
        for (int id : created) {
            Tri& T = tris[id];
            // edge (b,p) opposite a: neighbor is new triangle starting at b
            T.nb[0] = starts.at(T.v[1]);
            // edge (p,a) opposite b: neighbor is new triangle ending at a
            T.nb[1] = ends.at(T.v[0]);
        }
        last = created.back();
    }

    std::vector<std::array<int, 3>> result() const {
        std::vector<std::array<int, 3>> out;
        for (const auto& T : tris)
            if (T.alive && T.v[0] < n0 && T.v[1] < n0 && T.v[2] < n0) out.push_back(T.v);
        return out;
    }

private:
    int locate(const Vec2& p) {
        int t = last;
        while (!tris[t].alive) --t;
        for (size_t steps = 0; steps < tris.size() + 10; ++steps) {
            const Tri& T = tris[t];
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                int i = (k + static_cast<int>(steps)) % 3;
                if (orient(P[T.v[(i + 1) % 3]], P[T.v[(i + 2) % 3]], p) < 0) {
                    next = T.nb[i];
                    break;
                }
            }
            if (next < 0) return t;
            t = next;
        }
        // fall back to exhaustive search
        for (size_t i = 0; i < tris.size(); ++i) {
            const Tri& T = tris[i];
            if (!T.alive) continue;
            if (orient(P[T.v[0]], P[T.v[1]], p) >= 0 && orient(P[T.v[1]], P[T.v[2]], p) >= 0 &&
                orient(P[T.v[2]], P[T.v[0]], p) >= 0)
                return static_cast<int>(i);
        }
        throw Error(ErrorKind::MeshQuality, "delaunay point location failed");
    }

    std::vector<Vec2> P;
    std::vector<Tri> tris;
    int n0 = 0;
    int last = 0;
};

bool inside_loops(const std::vector<std::vector<Vec2>>& loops, const Vec2& p) {
    bool in = false;
    for (const auto& L : loops)
        for (size_t i = 0, j = L.size() - 1; i < L.size(); j = i++) {
            const Vec2 &a = L[i], &b = L[j];
            if ((a.y() > p.y()) != (b.y() > p.y())) {
                double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
                if (p.x() < x) in = !in;
            }
        }
    return in;
}

double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double t = std::clamp((p - a).dot(d) / std::max(d.squaredNorm(), 1e-300), 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

// ordering that keeps consecutive insertions close
std::vector<int> spatial_order(const std::vector<Vec2>& P, int first) {
    Vec2 lo = P[0], hi = P[0];
    for (const auto& p : P) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const int G = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(P.size()) / 4.0)));
    double w = std::max(hi.x() - lo.x(), 1e-12), h = std::max(hi.y() - lo.y(), 1e-12);
    std::vector<int> idx(P.size() - first);
    std::iota(idx.begin(), idx.end(), first);
    auto key = [&](int i) {
        int cx = std::min(G - 1, static_cast<int>((P[i].x() - lo.x()) / w * G));
        int cy = std::min(G - 1, static_cast<int>((P[i].y() - lo.y()) / h * G));
        int col = (cy % 2 == 0) ? cx : (G - 1 - cx);
        return std::make_pair(cy * G + col, (cy % 2 == 0 ? 1 : -1) * P[i].x());
    };
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a) < key(b); });
    return idx;
}

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts) {
    if (pts.size() < 3) return {};
    Delaunay d(pts);
    for (int i : spatial_order(pts, 0)) d.insert(i);
    return d.result();
}

std::vector<double> graded_parameters(const std::function<Vec2(double)>& c, const std::function<double(const Vec2&)>& size,
                                      int min_segments) {
    // integrate dt-density |c'|/size with fine sampling, then equidistribute
    const int N = 4000;
    std::vector<double> cum(N + 1, 0.0);
    Vec2 prev = c(0.0);
    for (int i = 1; i <= N; ++i) {
        double t = static_cast<double>(i) / N;
        Vec2 cur = c(t);
        Vec2 mid = c((i - 0.5) / N);
        cum[i] = cum[i - 1] + (cur - prev).norm() / size(mid);
        prev = cur;
    }
    int nseg = std::max(min_segments, static_cast<int>(std::ceil(cum[N] - 1e-9)));
    std::vector<double> ts{0.0};
    int j = 0;
    for (int k = 1; k < nseg; ++k) {
        double target = cum[N] * k / nseg;
        while (j < N && cum[j + 1] < target) ++j;
        double f = (target - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300);
        ts.push_back((j + f) / N);
    }
    ts.push_back(1.0);
    return ts;
}

PlanarMesh mesh_polygon_domain(const std::vector<std::vector<Vec2>>& loops, const std::function<double(const Vec2&)>& size,
                               int smoothing_iterations) {
    PlanarMesh out;
    struct Seg {
        int a, b;
    };
    std::vector<Seg> segs;
    for (const auto& L : loops) {
        int base = static_cast<int>(out.P.size());
        for (size_t i = 0; i < L.size(); ++i) {
            out.P.push_back(L[i]);
            segs.push_back({base + static_cast<int>(i), base + static_cast<int>((i + 1) % L.size())});
        }
    }
    out.num_boundary = static_cast<int>(out.P.size());
    const int nb = out.num_boundary;

    Vec2 lo = out.P[0], hi = out.P[0];
    for (const auto& p : out.P) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double span = std::max(hi.x() - lo.x(), hi.y() - lo.y());

    // boundary segment lookup grid
    double hmin = 1e300;
    for (int i = 0; i < nb; ++i) hmin = std::min(hmin, size(out.P[i]));
    double maxseg = 0;
    for (const auto& s : segs) maxseg = std::max(maxseg, (out.P[s.a] - out.P[s.b]).norm());
    const double cell = std::max(maxseg, hmin);
    std::unordered_map<int64_t, std::vector<int>> sgrid;
    auto ckey = [&](int64_t x, int64_t y) { return x * 1000003LL + y; };
    for (size_t s = 0; s < segs.size(); ++s) {
        Vec2 m = 0.5 * (out.P[segs[s].a] + out.P[segs[s].b]);
        sgrid[ckey(static_cast<int64_t>(std::floor(m.x() / cell)), static_cast<int64_t>(std::floor(m.y() / cell)))].push_back(
            static_cast<int>(s));
    }
    auto near_boundary = [&](const Vec2& p, double r) {
        int64_t cx = static_cast<int64_t>(std::floor(p.x() / cell)), cy = static_cast<int64_t>(std::floor(p.y() / cell));
        int64_t R = static_cast<int64_t>(std::ceil((r + maxseg) / cell)) + 1;
        for (int64_t x = cx - R; x <= cx + R; ++x)
            for (int64_t y = cy - R; y <= cy + R; ++y) {
                auto it = sgrid.find(ckey(x, y));
                if (it == sgrid.end()) continue;
                for (int s : it->second) {
                    const Vec2 &a = out.P[segs[s].a], &b = out.P[segs[s].b];
                    if (seg_dist(p, a, b) < r) return true;
                    // keep diametral circles empty so segments stay Delaunay edges
                    if ((p - 0.5 * (a + b)).norm() < 0.5 * (a - b).norm() * 1.05) return true;
                }
            }
        return false;
    };

    // quadtree leaves sized by the sizing function
    std::vector<Vec2> interior;
    struct Cell {
        Vec2 c;
        double h;
    };
    std::vector<Cell> stack{{0.5 * (lo + hi), span * 0.5 + 1e-9}};
    while (!stack.empty()) {
        Cell q = stack.back();
        stack.pop_back();
        double s = size(q.c);
        if (2 * q.h > s * 0.95) {
            for (int dx = -1; dx <= 1; dx += 2)
                for (int dy = -1; dy <= 1; dy += 2) stack.push_back({q.c + Vec2(dx, dy) * (q.h / 2), q.h / 2});
            continue;
        }
        if (!inside_loops(loops, q.c)) continue;
        if (near_boundary(q.c, 0.55 * s)) continue;
        interior.push_back(q.c);
    }
    for (const auto& p : interior) out.P.push_back(p);

    auto triangulate = [&]() {
        std::vector<std::array<int, 3>> tris = delaunay(out.P);
        std::vector<std::array<int, 3>> keep;
        for (const auto& t : tris) {
            Vec2 c = (out.P[t[0]] + out.P[t[1]] + out.P[t[2]]) / 3.0;
            if (inside_loops(loops, c)) keep.push_back(t);
        }
        return keep;
    };

    for (int it = 0;; ++it) {
        out.T = triangulate();
        // boundary conformity
        std::unordered_set<int64_t> edges;
        for (const auto& t : out.T)
            for (int j = 0; j < 3; ++j) {
                int a = t[j], b = t[(j + 1) % 3];
                edges.insert(int64_t(std::min(a, b)) * 10000000LL + std::max(a, b));
            }
        std::vector<int> missing;
        for (size_t s = 0; s < segs.size(); ++s)
            if (!edges.count(int64_t(std::min(segs[s].a, segs[s].b)) * 10000000LL + std::max(segs[s].a, segs[s].b)))
                missing.push_back(static_cast<int>(s));
        if (missing.empty() && it >= smoothing_iterations) break;
        if (!missing.empty()) {
            if (it > smoothing_iterations + 8)
                throw Error(ErrorKind::MeshQuality, "boundary segments not recovered by the planar mesher");
            // drop interior points near the missing segments
            std::vector<Vec2> keep(out.P.begin(), out.P.begin() + nb);
            for (size_t i = nb; i < out.P.size(); ++i) {
                bool bad = false;
                for (int s : missing) {
                    const Vec2 &a = out.P[segs[s].a], &b = out.P[segs[s].b];
                    if ((out.P[i] - 0.5 * (a + b)).norm() < 0.75 * (a - b).norm()) bad = true;
                }
                if (!bad) keep.push_back(out.P[i]);
            }
            out.P.swap(keep);
            continue;
        }
        // centroidal smoothing of interior nodes
        std::vector<Vec2> acc(out.P.size(), Vec2::Zero());
        std::vector<double> wsum(out.P.size(), 0.0);
        for (const auto& t : out.T) {
            double a = 0.5 * orient(out.P[t[0]], out.P[t[1]], out.P[t[2]]);
            Vec2 c = (out.P[t[0]] + out.P[t[1]] + out.P[t[2]]) / 3.0;
            for (int j = 0; j < 3; ++j) {
                acc[t[j]] += a * c;
                wsum[t[j]] += a;
            }
        }
        for (size_t i = nb; i < out.P.size(); ++i) {
            if (wsum[i] <= 0) continue;
            Vec2 np = acc[i] / wsum[i];
            if (inside_loops(loops, np) && !near_boundary(np, 0.3 * size(np))) out.P[i] = np;
        }
    }
    // drop interior points that ended up unused
    std::vector<int> used(out.P.size(), 0);
    for (const auto& t : out.T)
        for (int v : t) used[v] = 1;
    std::vector<int> remap(out.P.size(), -1);
    std::vector<Vec2> P2;
    for (size_t i = 0; i < out.P.size(); ++i)
        if (static_cast<int>(i) < nb || used[i]) {
            remap[i] = static_cast<int>(P2.size());
            P2.push_back(out.P[i]);
        }
    for (auto& t : out.T)
        for (int& v : t) v = remap[v];
    out.P.swap(P2);
    return out;
}

}  // namespace expander
