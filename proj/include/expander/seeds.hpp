#pragma once

#include "expander/mesh.hpp"
#include "expander/planar_mesher.hpp"

#include <vector>

namespace expander {

struct SeedOptions {
    double h_max = 0.12;        // coarse sheet size
    double q_size = 0.01;       // size at the Q points, in units of the band height
    double band_rows = 3.0;     // rows across the spherical band
    double hole_size = 0.3;     // size at the small circle, in units of eps
    double grade = 0.3;         // growth rate of the sizing function
    double refine = 1.0;        // divides every size (1 = default, 2 = h/2)
};

// Planar mesh of a wedge replicated by the dihedral group of order 2m
// (rotations by 2 pi/m, reflections in lines at multiples of pi/m); the
// wedge must sit in [0, pi/m] with its mirror edges on the two lines.
PlanarMesh replicate_dihedral(const PlanarMesh& wedge, int m);

// Makes face orientation consistent per component (breadth-first flips).
void orient_consistently(TriMesh& mesh);

// Annulus bounded by C_s and Gamma(eps): the spherical band 0 <= z <= z_s
// glued to the odd sectors of D_R minus D_eps.
TriMesh seed_annulus(double s, double eps, int k, double R, const SeedOptions& opt = {});

// A union its image under the rotation by pi about the first Q line, welded
// along the straight segments of Gamma(eps).
TriMesh reflect_union(const TriMesh& annulus, int k);

// Fan over every boundary loop made of curve::kHole vertices.
TriMesh cap_hole(const TriMesh& mesh);

// Flat G_k-symmetric disk of radius R with boundary tagged as the equator.
TriMesh seed_disk(int k, double R, const SeedOptions& opt = {});

// Three parallel sheets spanning C(s) joined by k necks upper/middle (even
// sectors) and k necks middle/lower (odd sectors).
TriMesh seed_big_double_sheet(double s, int k, double R, const SeedOptions& opt = {});

}  // namespace expander
