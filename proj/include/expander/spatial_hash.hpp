#pragma once

#include "expander/common.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace expander {

// Uniform grid over a point set for radius queries.
class SpatialHash {
public:
    SpatialHash(const std::vector<Vec3>& pts, double cell) : pts_(pts), cell_(cell) {
        for (size_t i = 0; i < pts.size(); ++i) cells_[key(cell_of(pts[i]))].push_back(static_cast<int>(i));
    }

    // calls f(index, distance) for every point within r of q
    template <class F>
    void query(const Vec3& q, double r, F&& f) const {
        auto lo = cell_of(q - Vec3::Constant(r));
        auto hi = cell_of(q + Vec3::Constant(r));
        for (int64_t a = lo[0]; a <= hi[0]; ++a)
            for (int64_t b = lo[1]; b <= hi[1]; ++b)
                for (int64_t c = lo[2]; c <= hi[2]; ++c) {
                    auto it = cells_.find(key({a, b, c}));
                    if (it == cells_.end()) continue;
                    for (int j : it->second) {
                        double d = (pts_[j] - q).norm();
                        if (d <= r) f(j, d);
                    }
                }
    }

    // nearest point within r, or -1
    int nearest(const Vec3& q, double r) const {
        int best = -1;
        double bd = 0;
        query(q, r, [&](int j, double d) {
            if (best < 0 || d < bd) {
                best = j;
                bd = d;
            }
        });
        return best;
    }

private:
    std::array<int64_t, 3> cell_of(const Vec3& p) const {
        return {static_cast<int64_t>(std::floor(p.x() / cell_)), static_cast<int64_t>(std::floor(p.y() / cell_)),
                static_cast<int64_t>(std::floor(p.z() / cell_))};
    }
    static uint64_t key(const std::array<int64_t, 3>& c) {
        uint64_t h = 1469598103934665603ull;
        for (int64_t v : c) h = (h ^ static_cast<uint64_t>(v)) * 1099511628211ull;
        return h;
    }

    const std::vector<Vec3>& pts_;
    double cell_;
    std::unordered_map<uint64_t, std::vector<int>> cells_;
};

}  // namespace expander
