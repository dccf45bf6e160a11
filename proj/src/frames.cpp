#include "funtf/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace funtf {

namespace {

struct UnionFind {
  std::vector<int> parent, rank_;
  explicit UnionFind(int n) : parent(n), rank_(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }
};

}  // namespace

bool CorrelationGraph::connected() const {
  if (vertices <= 1) return true;
  UnionFind uf(vertices);
  int components = vertices;
  for (const auto& e : edges)
    if (uf.merge(e.i, e.j)) --components;
  return components == 1;
}

Mat frame_operator(const Frame& f) { return f.matrix() * f.matrix().adjoint(); }

FuntfReport check_funtf(const Frame& f, double tol) {
  FuntfReport rep;
  const int d = f.d(), N = f.N();
  for (int n = 0; n < N; ++n)
    rep.unit_norm_resid =
        std::max(rep.unit_norm_resid, std::abs(f.column(n).squaredNorm() - 1.0));
  const Mat s = frame_operator(f);
  rep.tightness_resid = max_abs(s - (double(N) / double(d)) * Mat::Identity(d, d));
  rep.ok = rep.unit_norm_resid <= tol && rep.tightness_resid <= tol;
  return rep;
}

EigenstepsTable of_frame(const Frame& f) {
  const int d = f.d(), N = f.N();
  EigenstepsTable t(N, d);
  Mat s = Mat::Zero(d, d);
  for (int n = 1; n <= N; ++n) {
    s += f.column(n - 1) * f.column(n - 1).adjoint();
    SpectralDecomposition dec = hermitian_eig(s, f.field());
    t.values.row(n) = dec.eigenvalues;
  }
  return t;
}

EigenstepsTable eigensteps_row_table(const Frame& f) { return of_frame(f); }

Frame naimark_complement(const Frame& f, double tol) {
  const int d = f.d(), N = f.N();
  if (N == d) raise(Err::NoComplement, "naimark_complement: N = d has no complement");
  if (N < d) raise(Err::NoComplement, "naimark_complement: N < d");
  if (!check_funtf(f, tol).ok) raise(Err::NotFUNTF, "naimark_complement: input is not a FUNTF");

  // I_N - P*P for the Parseval scaling P = sqrt(d/N) F is a rank N-d
  // projection; its unit-eigenvalue directions give the complement rows.
  const Mat p = std::sqrt(double(d) / double(N)) * f.matrix();
  const Mat m = Mat::Identity(N, N) - p.adjoint() * p;
  SpectralDecomposition dec = hermitian_eig(m, f.field());
  Mat g(N - d, N);
  for (int k = 0; k < N - d; ++k) {
    if (std::abs(dec.eigenvalues(k) - 1.0) > 1e-6)
      raise(Err::Internal, "naimark_complement: projection spectrum off");
    g.row(k) = dec.eigenvectors.col(k).adjoint();
  }
  g *= std::sqrt(double(N) / double(N - d));
  return Frame(g, f.field());
}

CorrelationGraph correlation_graph(const Frame& f, double eps) {
  CorrelationGraph graph;
  graph.vertices = f.N();
  const Mat gram = f.matrix().adjoint() * f.matrix();
  for (int i = 0; i < f.N(); ++i)
    for (int j = i + 1; j < f.N(); ++j) {
      const double w = std::abs(gram(i, j));
      if (w > eps) graph.edges.push_back({i, j, w});
    }
  return graph;
}

bool is_od(const Frame& f, double eps) { return !correlation_graph(f, eps).connected(); }

double od_margin(const Frame& f) {
  const int N = f.N();
  if (N <= 1) return std::numeric_limits<double>::infinity();
  const Mat gram = f.matrix().adjoint() * f.matrix();
  std::vector<CorrelationGraph::Edge> edges;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) edges.push_back({i, j, std::abs(gram(i, j))});
  std::sort(edges.begin(), edges.end(),
            [](const auto& a, const auto& b) { return a.weight > b.weight; });
  UnionFind uf(N);
  int remaining = N - 1;
  double bottleneck = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) {
    if (uf.merge(e.i, e.j)) {
      bottleneck = std::min(bottleneck, e.weight);
      if (--remaining == 0) return bottleneck;
    }
  }
  return 0.0;
}

namespace {

bool subset_dependent(const Frame& f, const std::vector<int>& idx, double tol_rank) {
  Mat a(f.d(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) a.col(k) = f.column(idx[k]);
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return true;
  return sv(sv.size() - 1) < tol_rank * sv(0);
}

// Lexicographic k-subset enumeration with early exit on the first dependent
// subset (which is then the lexicographically smallest witness).
bool first_dependent_subset(const Frame& f, int k, double tol_rank, std::vector<int>& out) {
  const int N = f.N();
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (subset_dependent(f, idx, tol_rank)) {
      out = idx;
      return true;
    }
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == N - k + pos) --pos;
    if (pos < 0) return false;
    ++idx[pos];
    for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
}

long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > 100'000'000LL) return r;
  }
  return r;
}

}  // namespace

SparkReport spark(const Frame& f, double tol_rank, long long budget) {
  const int d = f.d(), N = f.N();
  long long total = 0;
  for (int k = 2; k <= std::min(d, N); ++k) {
    total += binomial(N, k);
    if (total > budget) raise(Err::TooLarge, "spark: subset enumeration budget exceeded");
  }
  SparkReport rep;
  for (int n = 0; n < N; ++n)
    if (f.column(n).norm() < tol_rank) {
      rep.spark = 1;
      rep.witness = {n};
      rep.full_spark = false;
      return rep;
    }
  for (int k = 2; k <= std::min(d, N); ++k) {
    std::vector<int> witness;
    if (first_dependent_subset(f, k, tol_rank, witness)) {
      rep.spark = k;
      rep.witness = witness;
      rep.full_spark = false;
      return rep;
    }
  }
  if (N > d) {
    // every (d+1)-subset of F^d is dependent
    rep.spark = d + 1;
    rep.witness.resize(d + 1);
    std::iota(rep.witness.begin(), rep.witness.end(), 0);
    rep.full_spark = true;
    return rep;
  }
  rep.spark = N + 1;
  rep.full_spark = (rep.spark == d + 1);
  return rep;
}

Frame permute(const Frame& f, const std::vector<int>& sigma) {
  const int N = f.N();
  if (int(sigma.size()) != N) raise(Err::NotAPermutation, "permute: wrong length");
  std::vector<bool> seen(N, false);
  for (int v : sigma) {
    if (v < 0 || v >= N || seen[v]) raise(Err::NotAPermutation, "permute: not a bijection");
    seen[v] = true;
  }
  Mat out(f.d(), N);
  for (int n = 0; n < N; ++n) out.col(n) = f.column(sigma[n]);
  return Frame(out, f.field());
}

std::vector<int> inverse_permutation(const std::vector<int>& sigma) {
  std::vector<int> inv(sigma.size());
  for (std::size_t n = 0; n < sigma.size(); ++n) inv[sigma[n]] = int(n);
  return inv;
}

std::vector<int> nod_reorder(const Frame& f, double eps) {
  const int d = f.d(), N = f.N();
  std::vector<int> chosen{0};
  std::vector<bool> used(N, false);
  used[0] = true;
  Mat basis(d, d);
  basis.col(0) = f.column(0) / f.column(0).norm();
  int have = 1;
  while (have < d) {
    int pick = -1;
    for (int n = 0; n < N && pick < 0; ++n) {
      if (used[n]) continue;
      Vec x = f.column(n);
      Vec proj = Vec::Zero(d);
      for (int j = 0; j < have; ++j) proj += basis.col(j) * (basis.col(j).adjoint() * x)(0);
      const double in_span = proj.norm();
      const double out_span = (x - proj).norm();
      // need a vector neither in span{chosen} nor in its orthogonal complement
      if (in_span > eps && out_span > eps) pick = n;
    }
    if (pick < 0) raise(Err::FrameIsOD, "nod_reorder: greedy step failed, frame is OD");
    used[pick] = true;
    chosen.push_back(pick);
    Vec x = f.column(pick);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < have; ++j) x -= basis.col(j) * (basis.col(j).adjoint() * x)(0);
    basis.col(have++) = x / x.norm();
  }
  std::vector<int> sigma = chosen;
  for (int n = 0; n < N; ++n)
    if (!used[n]) sigma.push_back(n);
  return sigma;
}

namespace {

std::vector<std::vector<int>> components_of(const Frame& f, double eps) {
  const int N = f.N();
  UnionFind uf(N);
  for (const auto& e : correlation_graph(f, eps).edges) uf.merge(e.i, e.j);
  std::vector<std::vector<int>> comps;
  std::vector<int> root_slot(N, -1);
  for (int n = 0; n < N; ++n) {
    const int r = uf.find(n);
    if (root_slot[r] < 0) {
      root_slot[r] = int(comps.size());
      comps.emplace_back();
    }
    comps[root_slot[r]].push_back(n);
  }
  return comps;
}

// Prefer a member with a neighbor inside its own block, so the rotated pair
// bridges both blocks.
int pick_member(const Frame& f, const std::vector<int>& block, double eps) {
  if (block.size() == 1) return block[0];
  const Mat gram = f.matrix().adjoint() * f.matrix();
  for (int i : block)
    for (int j : block)
      if (i != j && std::abs(gram(i, j)) > eps) return i;
  return block[0];
}

}  // namespace

FramePath od_perturb_path(const Frame& f, double delta, int steps_per_stage) {
  if (!check_funtf(f, 1e-6).ok) raise(Err::NotFUNTF, "od_perturb: input is not a FUNTF");
  if (!is_od(f)) raise(Err::NotOD, "od_perturb: frame is already NOD");
  std::vector<std::pair<double, Frame>> samples;
  Frame cur = f;
  samples.emplace_back(0.0, cur);
  if (delta == 0.0) {
    samples.emplace_back(1.0, cur);
    return make_path(std::move(samples), "od_perturb", "delta=0");
  }
  int stages = 0;
  while (is_od(cur)) {
    auto comps = components_of(cur, 1e-8);
    if (comps.size() < 2) raise(Err::Internal, "od_perturb: OD frame with one component");
    if (cur.N() == cur.d())
      raise(Err::NotOD, "od_perturb: N = d frame cannot be made NOD");
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    const int i = pick_member(cur, comps[0], 1e-8);
    const int j = pick_member(cur, comps[1], 1e-8);
    // cross-block pair is exactly orthonormal; spin it in its own plane
    const Vec a = cur.column(i), b = cur.column(j);
    Frame base = cur;
    for (int s = 1; s <= steps_per_stage; ++s) {
      const double th = delta * double(s) / double(steps_per_stage);
      Frame g = base;
      g.matrix().col(i) = std::cos(th) * a + std::sin(th) * b;
      g.matrix().col(j) = -std::sin(th) * a + std::cos(th) * b;
      samples.emplace_back(double(stages) + double(s) / steps_per_stage, g);
      cur = g;
    }
    if (++stages > cur.N()) raise(Err::Internal, "od_perturb: did not converge");
  }
  const double tmax = samples.back().first;
  for (auto& s : samples) s.first /= tmax;
  return make_path(std::move(samples), "od_perturb",
                   "stages=" + std::to_string(stages) + " delta=" + std::to_string(delta));
}

Frame od_perturb(const Frame& f, double delta) {
  FramePath p = od_perturb_path(f, delta);
  return p.back();
}

double FramePath::max_funtf_residual() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.funtf_residual);
  return m;
}

double FramePath::min_od_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::min(m, s.od_margin);
  return m;
}

FramePath make_path(std::vector<std::pair<double, Frame>> samples, std::string construction,
                    std::string notes) {
  FramePath path;
  path.construction = std::move(construction);
  path.notes = std::move(notes);
  path.samples.reserve(samples.size());
  for (auto& [t, fr] : samples) {
    double unit = 0.0;
    for (int n = 0; n < fr.N(); ++n)
      unit = std::max(unit, std::abs(fr.column(n).norm() - 1.0));
    const int d = fr.d(), num = fr.N();
    const double tight =
        max_abs(frame_operator(fr) - (double(num) / d) * Mat::Identity(d, d));
    const double margin = od_margin(fr);
    path.samples.push_back({t, std::move(fr), std::max(unit, tight), margin});
  }
  return path;
}

FramePath concat_paths(const std::vector<FramePath>& pieces, std::string construction) {
  FramePath out;
  out.construction = std::move(construction);
  const int m = int(pieces.size());
  for (int p = 0; p < m; ++p) {
    for (const auto& s : pieces[p].samples) {
      FramePath::Sample copy = s;
      copy.t = (double(p) + s.t) / double(m);
      if (!out.samples.empty() && copy.t <= out.samples.back().t + 1e-15) continue;
      out.samples.push_back(std::move(copy));
    }
    if (!pieces[p].notes.empty())
      out.notes += (out.notes.empty() ? "" : "; ") + pieces[p].construction + ": " + pieces[p].notes;
  }
  return out;
}

Frame permute_path_sample(const Frame& f, const std::vector<int>& sigma) {
  return permute(f, sigma);
}

FramePath permute_path(const FramePath& path, const std::vector<int>& sigma) {
  FramePath out;
  out.construction = path.construction + " (reordered)";
  out.notes = path.notes;
  for (const auto& s : path.samples) {
    FramePath::Sample copy = s;
    copy.frame = permute(s.frame, sigma);
    out.samples.push_back(std::move(copy));
  }
  return out;
}

double frame_distance(const Frame& a, const Frame& b) {
  if (a.d() != b.d() || a.N() != b.N())
    raise(Err::DimensionMismatch, "frame_distance: shape mismatch");
  return max_abs(a.matrix() - b.matrix());
}

}  // namespace funtf
