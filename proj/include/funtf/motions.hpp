#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "funtf/frames.hpp"

namespace funtf {

// One-parameter unitary family, t in [0,1].
using RotationFamily = std::function<Mat(double)>;

struct SubframeSelector {
  std::vector<int> indices;
  std::optional<Mat> subspace;  // orthonormal basis of the invariant subspace
};

// Rotation in the oriented plane of an orthonormal pair (x toward y),
// constant angular speed, fixing the orthogonal complement.
RotationFamily plane_rotation_family(const Vec& x, const Vec& y, double angle);

// Minimal rotation carrying unit vector a to unit vector b; antipodal ties
// resolve through a fixed standard-basis direction.
RotationFamily rotation_taking(const Vec& a, const Vec& b);

// Spins a tight-on-its-span subframe by U(t); every sample keeps the frame
// operator of F.
FramePath spin(const Frame& f, const SubframeSelector& sel, const RotationFamily& rot,
               int steps);

struct TwoOnbBlocks {
  std::vector<int> first, second;
};

TwoOnbBlocks detect_two_onbs(const Frame& f, double tol = 1e-6);

// Continuous transposition of columns i and j of a union of two orthonormal
// bases. Same-block pairs route through a chaperone from the other block
// (three cross-block swaps); the chaperone returns to its start.
FramePath swap_pair_path(const Frame& f, int i, int j, std::optional<int> chaperone, int steps,
                         std::optional<TwoOnbBlocks> blocks = {});

// Negates column `target` while returning every other column to its start.
// block_a and block_b partition [N] into two tight subframes; target and
// chaperone must come from different blocks.
FramePath negate_vector_path(const Frame& f, int target, int chaperone,
                             const std::vector<int>& block_a, const std::vector<int>& block_b,
                             int steps);

// The canonical simplex: k unit vectors in k-1 dimensions with constant
// pairwise inner product -1/(k-1), rows built from the Helmert basis.
RealMat canonical_simplex(int k);

// The +-1 sign pattern spanning the kernel of a simplex (its 1-dimensional
// Naimark complement), first entry positive.
RealVec simplex_sign_vector(const RealMat& h, double tol = 1e-8);

// One frame of the simplex-to-two-ONBs morph: columns are V(t) then U(t).
Frame simplex_onb_morph(const RealVec& xi, const RealMat& h, const RealMat& h_prime,
                        const RealVec& zeta, double t);

// The canonical sweep: fixed simplices with H' pre-rotated until the
// alignment condition holds with margin.
FramePath simplex_onb_morph_path(int d, int steps);

struct TwoOnbSwapFrames {
  Mat U, V;     // positively oriented orthonormal bases
  Frame f_star;  // (u1 v1 u2 v2 v3..vd u3..ud)
  Frame g_star;  // first two columns exchanged
  RealVec xi;
};

// F_small: a FUNTF of d-2 vectors in d-3 dimensions (defaults to the
// canonical simplex; vacuous at d = 3).
TwoOnbSwapFrames two_onb_swap_frames(int d, std::optional<RealMat> f_small = {});

// The staged NOD path from F_star to G_star: e2-e3 pre-rotation, the pi/2
// four-cycle, three pair spins forming the three-cycle, and the undo.
FramePath two_onb_swap_path(int d, int total_samples, std::optional<RealMat> f_small = {});

}  // namespace funtf
