#include "funtf/motions.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace funtf {

RotationFamily plane_rotation_family(const Vec& x, const Vec& y, double angle) {
  if (std::abs(x.norm() - 1.0) > 1e-8 || std::abs(y.norm() - 1.0) > 1e-8 ||
      std::abs((x.adjoint() * y)(0)) > 1e-8)
    raise(Err::NotOrthonormal, "plane_rotation_family: pair not orthonormal");
  const auto d = x.size();
  const Mat sym = x * x.adjoint() + y * y.adjoint();
  const Mat skew = y * x.adjoint() - x * y.adjoint();
  return [=](double t) {
    const double th = t * angle;
    return Mat(Mat::Identity(d, d) + (std::cos(th) - 1.0) * sym + std::sin(th) * skew);
  };
}

RotationFamily rotation_taking(const Vec& a, const Vec& b) {
  const auto d = a.size();
  if (std::abs(a.norm() - 1.0) > 1e-8 || std::abs(b.norm() - 1.0) > 1e-8)
    raise(Err::NotOrthonormal, "rotation_taking: inputs must be unit vectors");
  const Complex gc = (a.adjoint() * b)(0);
  if (std::abs(gc.imag()) > 1e-9)
    raise(Err::FieldUnsupported, "rotation_taking: complex inner product has no real rotation");
  const double g = gc.real();
  if ((a - b).norm() < 1e-12) {
    return [d](double) { return Mat(Mat::Identity(d, d)); };
  }
  Vec residual = b - g * a;
  const double s = residual.norm();
  if (s < 1e-12) {
    // antipodal: pi rotation through a fixed third direction
    Mat am(d, 1);
    am.col(0) = a;
    const Vec u2 = orthonormal_completion(am).col(1);
    return plane_rotation_family(a, u2, M_PI);
  }
  const Vec u2 = residual / s;
  return plane_rotation_family(a, u2, std::atan2(s, g));
}

namespace {

// Columns of the selected subframe replaced by U(t) * column; every sample
// must keep the total frame operator. This is the engine of all motions.
FramePath rotate_positions_path(const Frame& f, const std::vector<int>& positions,
                                const RotationFamily& rot, int steps, std::string name,
                                double op_tol = 1e-8) {
  const Mat s0 = frame_operator(f);
  std::vector<std::pair<double, Frame>> samples;
  for (int k = 0; k <= steps; ++k) {
    const double t = double(k) / steps;
    const Mat u = rot(t);
    if (!is_unitary(u, 1e-8)) raise(Err::NotUnitary, name + ": rotation not unitary");
    Frame g = f;
    for (int p : positions) g.matrix().col(p) = u * f.column(p);
    if (max_abs(frame_operator(g) - s0) > op_tol)
      raise(Err::Internal, name + ": frame operator drifted");
    samples.emplace_back(t, std::move(g));
  }
  return make_path(std::move(samples), std::move(name));
}

struct SpanInfo {
  Mat projector;
  int rank;
  double scale;  // frame operator of the subframe = scale * projector when tight
  bool tight;
};

SpanInfo subframe_span(const Frame& f, const std::vector<int>& idx, double tol) {
  Mat a(f.d(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) a.col(k) = f.column(idx[k]);
  const Mat s = a * a.adjoint();
  SpectralDecomposition dec = hermitian_eig(s, f.field());
  const double top = std::max(1.0, dec.eigenvalues(0));
  int r = 0;
  while (r < f.d() && dec.eigenvalues(r) > 1e-10 * top) ++r;
  SpanInfo info;
  info.rank = r;
  const Mat basis = dec.eigenvectors.leftCols(r);
  info.projector = basis * basis.adjoint();
  info.scale = s.trace().real() / r;
  info.tight = max_abs(s - info.scale * info.projector) <= tol;
  return info;
}

}  // namespace

FramePath spin(const Frame& f, const SubframeSelector& sel, const RotationFamily& rot,
               int steps) {
  for (int p : sel.indices)
    if (p < 0 || p >= f.N()) raise(Err::DimensionMismatch, "spin: index out of range");
  const SpanInfo info = subframe_span(f, sel.indices, 1e-8);
  if (!info.tight) raise(Err::NotTightOnSpan, "spin: selected subframe not tight on its span");
  const Mat pw = sel.subspace ? Mat(*sel.subspace * sel.subspace->adjoint()) : info.projector;
  const auto d = f.d();
  const Mat id = Mat::Identity(d, d);
  // verify the family fixes W before emitting anything
  for (int k = 0; k <= steps; ++k) {
    const Mat u = rot(double(k) / steps);
    if (max_abs((id - pw) * u * pw) > 1e-9)
      raise(Err::RotationLeaksSubspace, "spin: rotation does not fix the subspace");
  }
  return rotate_positions_path(f, sel.indices, rot, steps, "spin");
}

TwoOnbBlocks detect_two_onbs(const Frame& f, double tol) {
  const int d = f.d(), N = f.N();
  if (N != 2 * d) raise(Err::NotTwoONBs, "detect_two_onbs: N != 2d");
  const Mat gram = f.matrix().adjoint() * f.matrix();
  TwoOnbBlocks blocks;
  blocks.first.push_back(0);
  for (int n = 1; n < N; ++n) {
    bool orth = true;
    for (int m : blocks.first) orth = orth && std::abs(gram(n, m)) <= tol;
    (orth && int(blocks.first.size()) < d ? blocks.first : blocks.second).push_back(n);
  }
  auto onb = [&](const std::vector<int>& idx) {
    if (int(idx.size()) != d) return false;
    Mat a(d, d);
    for (int k = 0; k < d; ++k) a.col(k) = f.column(idx[k]);
    return max_abs(a.adjoint() * a - Mat::Identity(d, d)) <= tol;
  };
  if (!onb(blocks.first) || !onb(blocks.second))
    raise(Err::NotTwoONBs, "detect_two_onbs: frame is not a union of two orthonormal bases");
  return blocks;
}

namespace {

struct SwapState {
  Frame frame;
  std::vector<int> block_of;  // 0 or 1 per position
};

// One cross-block transposition: align f_i onto f_j by rotating i's whole
// block, exchange the block roles of the two positions, then run the
// rotation backwards on the updated block.
std::vector<FramePath> cross_swap(SwapState& st, int i, int j, int steps) {
  if (st.block_of[i] == st.block_of[j])
    raise(Err::Internal, "cross_swap: positions share a block");
  const Vec a = st.frame.column(i), b = st.frame.column(j);
  const RotationFamily r = rotation_taking(a, b);
  std::vector<int> block_i;
  for (int p = 0; p < st.frame.N(); ++p)
    if (st.block_of[p] == st.block_of[i]) block_i.push_back(p);

  std::vector<FramePath> pieces;
  pieces.push_back(rotate_positions_path(st.frame, block_i, r, steps, "swap/align"));
  st.frame = pieces.back().back();
  std::swap(st.block_of[i], st.block_of[j]);

  std::vector<int> block_back;
  for (int p = 0; p < st.frame.N(); ++p)
    if (st.block_of[p] == st.block_of[j]) block_back.push_back(p);
  const Mat r1 = r(1.0);
  RotationFamily rback = [r, r1](double t) { return Mat(r(1.0 - t) * r1.adjoint()); };
  pieces.push_back(rotate_positions_path(st.frame, block_back, rback, steps, "swap/return"));
  st.frame = pieces.back().back();
  return pieces;
}

}  // namespace

FramePath swap_pair_path(const Frame& f, int i, int j, std::optional<int> chaperone, int steps,
                         std::optional<TwoOnbBlocks> blocks) {
  const int N = f.N();
  if (i < 0 || i >= N || j < 0 || j >= N)
    raise(Err::DimensionMismatch, "swap_pair_path: index out of range");
  if (i == j) {
    std::vector<std::pair<double, Frame>> samples{{0.0, f}, {1.0, f}};
    return make_path(std::move(samples), "swap_pair_path", "identity");
  }
  const TwoOnbBlocks b = blocks ? *blocks : detect_two_onbs(f);
  SwapState st{f, std::vector<int>(N, 1)};
  for (int p : b.first) st.block_of[p] = 0;

  std::vector<FramePath> pieces;
  if (st.block_of[i] != st.block_of[j]) {
    pieces = cross_swap(st, i, j, steps);
  } else {
    if (!chaperone) raise(Err::MissingChaperone, "swap_pair_path: same-block swap needs a chaperone");
    const int c = *chaperone;
    if (c < 0 || c >= N || c == i || c == j)
      raise(Err::MissingChaperone, "swap_pair_path: bad chaperone index");
    if (st.block_of[c] == st.block_of[i])
      raise(Err::MissingChaperone, "swap_pair_path: chaperone must come from the other block");
    for (auto& p : cross_swap(st, i, c, steps)) pieces.push_back(std::move(p));
    for (auto& p : cross_swap(st, j, i, steps)) pieces.push_back(std::move(p));
    for (auto& p : cross_swap(st, j, c, steps)) pieces.push_back(std::move(p));
  }
  return concat_paths(pieces, "swap_pair_path");
}

namespace {

void check_tight_block(const Frame& f, const std::vector<int>& blk, const char* which) {
  Mat a(f.d(), blk.size());
  for (std::size_t k = 0; k < blk.size(); ++k) a.col(k) = f.column(blk[k]);
  const Mat s = a * a.adjoint();
  const double c = s.trace().real() / f.d();
  if (max_abs(s - c * Mat::Identity(f.d(), f.d())) > 1e-8)
    raise(Err::NotTight, std::string("negate_vector_path: ") + which + " block not tight");
}

}  // namespace

FramePath negate_vector_path(const Frame& f, int target, int chaperone,
                             const std::vector<int>& block_a, const std::vector<int>& block_b,
                             int steps) {
  const int N = f.N();
  std::vector<int> seen(N, 0);
  for (int p : block_a) seen.at(p) += 1;
  for (int p : block_b) seen.at(p) += 1;
  for (int n = 0; n < N; ++n)
    if (seen[n] != 1) raise(Err::DimensionMismatch, "negate_vector_path: blocks must partition [N]");
  const bool t_in_a = std::count(block_a.begin(), block_a.end(), target) > 0;
  const bool c_in_a = std::count(block_a.begin(), block_a.end(), chaperone) > 0;
  if (t_in_a == c_in_a)
    raise(Err::SameSubframe, "negate_vector_path: target and chaperone share a subframe");
  check_tight_block(f, block_a, "first");
  check_tight_block(f, block_b, "second");

  const std::vector<int>& tb = t_in_a ? block_a : block_b;  // target's block
  const std::vector<int>& cb = t_in_a ? block_b : block_a;  // chaperone's block

  std::vector<FramePath> pieces;
  Frame cur = f;

  // 1: rotate the target's block until the target is orthogonal to the chaperone
  const Vec a = cur.column(target), b = cur.column(chaperone);
  const double g = (a.adjoint() * b)(0).real();
  if (std::abs((a.adjoint() * b)(0).imag()) > 1e-9)
    raise(Err::FieldUnsupported, "negate_vector_path: REAL-field motion");
  Vec residual = b - g * a;
  Vec u2;
  if (residual.norm() < 1e-12) {
    Mat am(cur.d(), 1);
    am.col(0) = a;
    u2 = orthonormal_completion(am).col(1);
  } else {
    u2 = residual / residual.norm();
  }
  const double alpha = std::atan2(-g, residual.norm());
  const RotationFamily r1 = plane_rotation_family(a, u2, alpha);
  pieces.push_back(rotate_positions_path(cur, tb, r1, steps, "negate/orthogonalize"));
  cur = pieces.back().back();

  // 2: spin the orthonormal pair a' -> b, b -> -a'
  const Vec ap = cur.column(target);
  const Vec bp = cur.column(chaperone);
  const RotationFamily r2 = plane_rotation_family(ap, bp, M_PI / 2.0);
  pieces.push_back(spin(cur, SubframeSelector{{target, chaperone}, {}}, r2, steps));
  cur = pieces.back().back();

  // 3: the chaperone's original subframe (its block with b now sitting at the
  // target position) rotates b on to -a'
  std::vector<int> s3;
  for (int p : cb)
    if (p != chaperone) s3.push_back(p);
  s3.push_back(target);
  pieces.push_back(rotate_positions_path(cur, s3, r2, steps, "negate/carry"));
  cur = pieces.back().back();

  // 4: run the chaperone's block back to its start
  const Mat r2_end = r2(1.0);
  RotationFamily r4 = [r2, r2_end](double t) { return Mat(r2(1.0 - t) * r2_end.adjoint()); };
  pieces.push_back(rotate_positions_path(cur, cb, r4, steps, "negate/restore-chaperone"));
  cur = pieces.back().back();

  // 5: run the target's block back; the target arrives at -a
  const Mat r1_end = r1(1.0);
  RotationFamily r5 = [r1, r1_end](double t) { return Mat(r1(1.0 - t) * r1_end.adjoint()); };
  pieces.push_back(rotate_positions_path(cur, tb, r5, steps, "negate/restore-target"));

  return concat_paths(pieces, "negate_vector_path");
}

RealMat canonical_simplex(int k) {
  if (k < 2) raise(Err::DimensionMismatch, "canonical_simplex: need k >= 2");
  RealMat h = RealMat::Zero(k - 1, k);
  for (int j = 1; j <= k - 1; ++j) {
    const double s = 1.0 / std::sqrt(double(j) * (j + 1));
    for (int i = 0; i < j; ++i) h(j - 1, i) = s;
    h(j - 1, j) = -double(j) * s;
  }
  return std::sqrt(double(k) / double(k - 1)) * h;
}

RealVec simplex_sign_vector(const RealMat& h, double tol) {
  const int k = int(h.cols());
  Eigen::JacobiSVD<RealMat> svd(h, Eigen::ComputeFullV);
  RealVec kernel = svd.matrixV().col(k - 1);
  const double mag = 1.0 / std::sqrt(double(k));
  RealVec sign(k);
  for (int i = 0; i < k; ++i) {
    if (std::abs(std::abs(kernel(i)) - mag) > 1e-6)
      raise(Err::NotSimplex, "simplex_sign_vector: kernel is not a sign pattern");
    sign(i) = kernel(i) > 0 ? 1.0 : -1.0;
  }
  if (sign(0) < 0) sign = -sign;
  if ((h * sign).cwiseAbs().maxCoeff() > tol * std::sqrt(double(k)))
    raise(Err::NotSimplex, "simplex_sign_vector: sign vector not in the kernel");
  return sign;
}

namespace {

void check_simplex(const RealMat& h, const RealVec& sign, const char* name) {
  const int k = int(h.cols());
  if (h.rows() != k - 1) raise(Err::NotSimplex, std::string(name) + ": shape is not (d-1) x d");
  for (int i = 0; i < k; ++i) {
    if (std::abs(h.col(i).norm() - 1.0) > 1e-8)
      raise(Err::NotSimplex, std::string(name) + ": columns not unit norm");
    if (std::abs(std::abs(sign(i)) - 1.0) > 1e-9)
      raise(Err::NotSimplex, std::string(name) + ": sign vector entries must be +-1");
  }
  const RealMat s = h * h.transpose();
  if ((s - (double(k) / (k - 1)) * RealMat::Identity(k - 1, k - 1)).cwiseAbs().maxCoeff() > 1e-8)
    raise(Err::NotSimplex, std::string(name) + ": not tight");
  if ((h * sign).cwiseAbs().maxCoeff() > 1e-8)
    raise(Err::NotSimplex, std::string(name) + ": sign vector not in the kernel");
}

}  // namespace

Frame simplex_onb_morph(const RealVec& xi, const RealMat& h, const RealMat& h_prime,
                        const RealVec& zeta, double t) {
  const int d = int(h.cols());
  if (d < 3 || h_prime.cols() != d || xi.size() != d || zeta.size() != d)
    raise(Err::DimensionMismatch, "simplex_onb_morph: inconsistent sizes");
  if (t < -1e-12 || t > 1.0 + 1e-12)
    raise(Err::DimensionMismatch, "simplex_onb_morph: t outside [0,1]");
  check_simplex(h, xi, "H");
  check_simplex(h_prime, zeta, "H'");
  for (int i = 0; i < d; ++i) {
    const double cond =
        zeta(0) * xi(i) / d + (double(d - 1) / d) * h_prime.col(0).dot(h.col(i));
    if (std::abs(cond) < 1e-9)
      raise(Err::DegenerateAlignment, "simplex_onb_morph: alignment condition fails");
  }
  RealMat m = RealMat::Zero(d, 2 * d);
  m.block(0, 0, 1, d) = std::sqrt((2.0 - t) / d) * xi.transpose();
  m.block(1, 0, d - 1, d) = std::sqrt((d - 2.0 + t) / d) * h;
  m.block(0, d, 1, d) = std::sqrt(t / d) * zeta.transpose();
  m.block(1, d, d - 1, d) = std::sqrt((d - t) / d) * h_prime;
  return Frame(m.cast<Complex>(), FieldTag::Real);
}

FramePath simplex_onb_morph_path(int d, int steps) {
  if (d < 3) raise(Err::DimensionMismatch, "simplex_onb_morph_path: need d >= 3");
  const RealMat h = canonical_simplex(d);
  const RealVec xi = simplex_sign_vector(h);
  RealMat hp = canonical_simplex(d);
  const RealVec zeta = simplex_sign_vector(hp);
  // rotate H' by small fixed steps until the alignment condition has margin
  for (int k = 1; k <= 10000; ++k) {
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i)
      margin = std::min(margin, std::abs(zeta(0) * xi(i) / d +
                                         (double(d - 1) / d) * hp.col(0).dot(h.col(i))));
    if (margin >= 1e-6) break;
    const int p = (k - 1) % (d - 2);
    RealMat g = RealMat::Identity(d - 1, d - 1);
    const double th = 0.01 * k;
    g(p, p) = std::cos(th);
    g(p, p + 1) = -std::sin(th);
    g(p + 1, p) = std::sin(th);
    g(p + 1, p + 1) = std::cos(th);
    hp = g * hp;
    if (k == 10000)
      raise(Err::DegenerateAlignment, "simplex_onb_morph_path: could not align H'");
  }
  std::vector<std::pair<double, Frame>> samples;
  for (int k = 0; k <= steps; ++k) {
    const double t = double(k) / steps;
    samples.emplace_back(t, simplex_onb_morph(xi, h, hp, zeta, t));
  }
  return make_path(std::move(samples), "simplex_onb_morph", "canonical simplices");
}

TwoOnbSwapFrames two_onb_swap_frames(int d, std::optional<RealMat> f_small_opt) {
  if (d < 3) raise(Err::DimensionMismatch, "two_onb_swap_frames: need d >= 3");
  RealMat f_small;
  if (f_small_opt) {
    f_small = *f_small_opt;
  } else if (d == 3) {
    f_small = RealMat::Zero(0, 1);
  } else {
    f_small = canonical_simplex(d - 2);
  }
  if (f_small.rows() != d - 3 || f_small.cols() != d - 2)
    raise(Err::BadSubframe, "two_onb_swap_frames: F must be (d-3) x (d-2)");
  RealVec xi;
  if (d == 3) {
    xi = RealVec::Ones(1);
  } else {
    xi = simplex_sign_vector(f_small);
  }
  const double a = 1.0 / std::sqrt(double(d - 2));
  const double c = d >= 4 ? std::sqrt(double(d - 3) / double(d - 2)) : 0.0;
  // stacked complement must be negatively oriented; flip the global sign if not
  RealMat stacked(d - 2, d - 2);
  stacked.row(0) = a * xi.transpose();
  if (d >= 4) stacked.bottomRows(d - 3) = c * f_small;
  if (stacked.determinant() > 0) {
    xi = -xi;
    stacked.row(0) = a * xi.transpose();
  }
  if (std::abs(std::abs(stacked.determinant()) - 1.0) > 1e-6)
    raise(Err::BadSubframe, "two_onb_swap_frames: complement stack is not orthogonal");

  const double r = std::sqrt(2.0) / 2.0;
  RealMat u = RealMat::Zero(d, d), v = RealMat::Zero(d, d);
  u(0, 0) = r;
  u(0, 1) = r;
  u(1, 0) = r;
  u(1, 1) = -r;
  u.block(2, 2, 1, d - 2) = a * xi.transpose();
  if (d >= 4) u.block(3, 2, d - 3, d - 2) = c * f_small;
  v(0, 0) = r;
  v(0, 1) = r;
  v.block(1, 2, 1, d - 2) = -a * xi.transpose();
  v(2, 0) = r;
  v(2, 1) = -r;
  if (d >= 4) v.block(3, 2, d - 3, d - 2) = c * f_small;

  TwoOnbSwapFrames out;
  out.U = u.cast<Complex>();
  out.V = v.cast<Complex>();
  out.xi = xi;
  if (!is_unitary(out.U, 1e-9) || !is_unitary(out.V, 1e-9))
    raise(Err::Internal, "two_onb_swap_frames: U or V not orthogonal");
  if (u.determinant() < 0 || v.determinant() < 0)
    raise(Err::Internal, "two_onb_swap_frames: orientation came out negative");

  Mat fs(d, 2 * d), gs(d, 2 * d);
  fs.col(0) = out.U.col(0);
  fs.col(1) = out.V.col(0);
  fs.col(2) = out.U.col(1);
  fs.col(3) = out.V.col(1);
  for (int k = 2; k < d; ++k) fs.col(2 + k) = out.V.col(k);
  for (int k = 2; k < d; ++k) fs.col(d + k) = out.U.col(k);
  gs = fs;
  gs.col(0) = fs.col(1);
  gs.col(1) = fs.col(0);
  out.f_star = Frame(fs, FieldTag::Real);
  out.g_star = Frame(gs, FieldTag::Real);
  return out;
}

FramePath two_onb_swap_path(int d, int total_samples, std::optional<RealMat> f_small) {
  const TwoOnbSwapFrames frames = two_onb_swap_frames(d, std::move(f_small));
  const int steps = std::max(2, total_samples / 6);
  const int n = 2 * d;

  Vec e0 = Vec::Zero(d), e1 = Vec::Zero(d), e2 = Vec::Zero(d);
  e0(0) = 1.0;
  e1(1) = 1.0;
  e2(2) = 1.0;
  std::vector<int> first_four{0, 1, 2, 3};
  std::vector<int> tail;
  for (int p = 4; p < n; ++p) tail.push_back(p);

  std::vector<FramePath> pieces;
  Frame cur = frames.f_star;

  auto run = [&](FramePath piece) {
    cur = piece.back();
    pieces.push_back(std::move(piece));
  };

  // pre-rotation of the tail in the e2-e3 plane, so the tail keeps nonzero
  // correlation with the moving first four throughout
  const RotationFamily pre = plane_rotation_family(e1, e2, M_PI / 4.0);
  run(rotate_positions_path(cur, tail, pre, steps, "two_onb_swap/pre-rotate"));

  // pi/2 rotation of the first four: permutes them by a 4-cycle
  run(rotate_positions_path(cur, first_four, plane_rotation_family(e1, e2, M_PI / 2.0), steps,
                            "two_onb_swap/four-cycle"));

  // three pair spins produce the 3-cycle on the last three of the first four
  run(spin(cur, SubframeSelector{{1, 3}, {}}, plane_rotation_family(e0, e1, M_PI / 4.0), steps));
  {
    const Vec v2 = cur.column(2);
    run(spin(cur, SubframeSelector{{2, 3}, {}}, plane_rotation_family(v2, e1, -M_PI / 2.0),
             steps));
  }
  run(spin(cur, SubframeSelector{{1, 2}, {}}, plane_rotation_family(e0, e1, M_PI / 4.0), steps));

  // undo the pre-rotation
  run(rotate_positions_path(cur, tail, plane_rotation_family(e1, e2, -M_PI / 4.0), steps,
                            "two_onb_swap/undo"));

  FramePath path = concat_paths(pieces, "two_onb_swap_path");
  if (frame_distance(path.back(), frames.g_star) > 1e-6)
    raise(Err::Internal, "two_onb_swap_path: endpoint does not match G*");
  return path;
}

}  // namespace funtf
