#include "funtf/connect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "funtf/motions.hpp"

namespace funtf {

namespace {

FramePath reverse_path(const FramePath& p) {
  FramePath out;
  out.construction = p.construction + " (reversed)";
  out.notes = p.notes;
  for (auto it = p.samples.rbegin(); it != p.samples.rend(); ++it) {
    FramePath::Sample s = *it;
    s.t = 1.0 - s.t;
    out.samples.push_back(std::move(s));
  }
  return out;
}

std::vector<int> identity_perm(int n) {
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  return sigma;
}

bool interior_under(const Frame& f, const std::vector<int>& sigma) {
  return is_interior(of_frame(permute(f, sigma)), 1e-8);
}

// One column order that moves both eigensteps off the boundary. Candidates:
// identity, the NOD reorders of either endpoint, then seeded shuffles.
std::vector<int> find_interior_permutation(const Frame& a, const Frame& b, std::uint64_t seed,
                                           bool prefer_nod_reorder) {
  const int n = a.N();
  std::vector<std::vector<int>> candidates;
  if (!prefer_nod_reorder) candidates.push_back(identity_perm(n));
  for (const Frame* f : {&a, &b}) {
    try {
      candidates.push_back(nod_reorder(*f));
    } catch (const Error&) {
    }
  }
  if (prefer_nod_reorder) candidates.push_back(identity_perm(n));
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int k = 0; k < 400; ++k) {
    std::vector<int> sigma = identity_perm(n);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    candidates.push_back(std::move(sigma));
  }
  for (const auto& sigma : candidates)
    if (interior_under(a, sigma) && interior_under(b, sigma)) return sigma;
  raise(Err::NotInterior,
        "connect: no column order with interior eigensteps found for both endpoints");
}

// A path piece together with the per-sample deviation from its declared
// eigensteps (zeros where no eigensteps path is declared, e.g. OD escapes).
struct AnnotatedPiece {
  FramePath path;
  std::vector<double> eig_dev;
};

// Mirrors concat_paths: same t renormalization, same junction dedup, so the
// flattened deviations align with the concatenated samples by index.
std::vector<double> flatten_devs(const std::vector<AnnotatedPiece>& pieces) {
  std::vector<double> out;
  const int m = int(pieces.size());
  double prev_t = -1.0;
  for (int p = 0; p < m; ++p) {
    for (std::size_t k = 0; k < pieces[p].path.samples.size(); ++k) {
      const double t = (double(p) + pieces[p].path.samples[k].t) / double(m);
      if (t <= prev_t + 1e-15) continue;
      prev_t = t;
      out.push_back(pieces[p].eig_dev[k]);
    }
  }
  return out;
}

std::vector<FramePath> strip(const std::vector<AnnotatedPiece>& pieces) {
  std::vector<FramePath> out;
  for (const auto& p : pieces) out.push_back(p.path);
  return out;
}

ConnectResult connect_core(const Frame& f, const Frame& g, const RunConfig& cfg, bool nod_mode) {
  if (f.d() != g.d() || f.N() != g.N())
    raise(Err::DimensionMismatch, "connect: frames have different shapes");
  if (f.field() != FieldTag::Complex || g.field() != FieldTag::Complex)
    raise(Err::FieldUnsupported,
          "connect: REAL field refused; use the motion primitives (spin, swap, negate, morph)");
  if (!check_funtf(f, 1e-6).ok || !check_funtf(g, 1e-6).ok)
    raise(Err::NotFUNTF, "connect: endpoints must be FUNTFs");
  const int N = f.N(), d = f.d();
  if (N < d + 2)
    raise(Err::InteriorEmpty, "connect: N < d+2, eigensteps interior is empty; deferring");

  std::vector<AnnotatedPiece> pieces;
  Frame f1 = f, g1 = g;
  if (nod_mode) {
    if (is_od(f)) raise(Err::EndpointOD, "connect-nod: first endpoint is OD");
    if (is_od(g)) raise(Err::EndpointOD, "connect-nod: second endpoint is OD");
  } else {
    if (is_od(f)) {
      FramePath esc = od_perturb_path(f, 1e-3);
      f1 = esc.back();
      pieces.push_back({esc, std::vector<double>(esc.samples.size(), 0.0)});
    }
    if (is_od(g)) {
      // built forward from g, appended reversed at the end
      g1 = od_perturb_path(g, 1e-3).back();
    }
  }

  std::string perm_note;
  std::vector<int> sigma = identity_perm(N);
  const bool need_perm =
      !is_interior(of_frame(f1), 1e-8) || !is_interior(of_frame(g1), 1e-8);
  if (need_perm) {
    sigma = find_interior_permutation(f1, g1, cfg.seed, nod_mode);
    perm_note = "reorder sigma =";
    for (int v : sigma) perm_note += " " + std::to_string(v);
  }

  const Frame a = permute(f1, sigma);
  const Frame b = permute(g1, sigma);
  const EigenstepsTable ta = of_frame(a);
  const EigenstepsTable tb = of_frame(b);

  FramePath lift = lift_path(a, tb, cfg.steps);
  const EigenstepsPath ell = linear_path(ta, tb);
  std::vector<double> lift_devs, fiber_devs;
  double max_dev = 0.0;
  for (const auto& s : lift.samples) {
    lift_devs.push_back(table_distance(of_frame(s.frame), ell.at(s.t)));
    max_dev = std::max(max_dev, lift_devs.back());
  }
  FramePath fiber = fiber_path(lift.back(), b, cfg.steps);
  for (const auto& s : fiber.samples)
    fiber_devs.push_back(table_distance(of_frame(s.frame), tb));

  std::vector<double> mid_devs = flatten_devs({{lift, lift_devs}, {fiber, fiber_devs}});
  FramePath mid = concat_paths({std::move(lift), std::move(fiber)}, "lift+fiber");
  if (need_perm) mid = permute_path(mid, inverse_permutation(sigma));
  pieces.push_back({std::move(mid), std::move(mid_devs)});
  if (!nod_mode && is_od(g)) {
    FramePath esc = reverse_path(od_perturb_path(g, 1e-3));
    pieces.push_back({esc, std::vector<double>(esc.samples.size(), 0.0)});
  }

  ConnectResult out;
  out.path = concat_paths(strip(pieces), nod_mode ? "connect-nod" : "connect");
  const std::vector<double> devs = flatten_devs(pieces);
  out.report.permutation_note = perm_note;
  for (std::size_t k = 0; k < out.path.samples.size(); ++k) {
    const auto& s = out.path.samples[k];
    out.report.rows.push_back({s.t, s.funtf_residual, s.od_margin, devs.at(k)});
  }
  out.report.max_funtf_residual = out.path.max_funtf_residual();
  out.report.min_od_margin = out.path.min_od_margin();
  out.report.max_lift_eig_dev = max_dev;
  out.report.endpoint_dev_start = frame_distance(out.path.front(), f);
  out.report.endpoint_dev_end = frame_distance(out.path.back(), g);
  out.report.pass = out.report.max_funtf_residual <= cfg.tol &&
                    out.report.endpoint_dev_start <= 10.0 * cfg.tol &&
                    out.report.endpoint_dev_end <= 10.0 * cfg.tol;
  if (nod_mode) out.report.pass = out.report.pass && out.report.min_od_margin > 0.0;
  return out;
}

}  // namespace

ConnectResult connect_frames(const Frame& f, const Frame& g, const RunConfig& cfg) {
  return connect_core(f, g, cfg, false);
}

ConnectResult connect_frames_nod(const Frame& f, const Frame& g, const RunConfig& cfg) {
  return connect_core(f, g, cfg, true);
}

FullSparkSummary experiment_fullspark(int N, int d, int trials, FieldTag field,
                                      std::uint64_t seed, double tol_rank) {
  Rng rng(seed);
  FullSparkSummary sum;
  sum.trials = trials;
  for (int k = 0; k < trials; ++k) {
    const Frame f = random_funtf(N, d, field, rng);
    if (spark(f, tol_rank).full_spark) ++sum.full_spark_count;
  }
  sum.ratio = trials > 0 ? double(sum.full_spark_count) / trials : 0.0;
  return sum;
}

namespace {

// Any-size random FUNTF, covering the small cases the eigensteps sampler
// cannot reach (N = d and N = d+1).
Frame random_funtf_any(int N, int d, FieldTag field, Rng& rng) {
  if (N < d) raise(Err::DimensionMismatch, "random_funtf_any: N < d");
  if (d == 1) {
    Mat m(1, N);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
    std::bernoulli_distribution coin(0.5);
    for (int n = 0; n < N; ++n)
      m(0, n) = field == FieldTag::Real ? Complex(coin(rng) ? 1.0 : -1.0, 0.0)
                                        : std::exp(Complex(0.0, unif(rng)));
    return Frame(m, field);
  }
  if (N == d) return Frame(haar_unitary(d, field, rng), field);
  if (N == d + 1) {
    Mat m = canonical_simplex(d + 1).cast<Complex>();
    if (field == FieldTag::Complex) {
      std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
      for (int n = 0; n < N; ++n) m.col(n) *= std::exp(Complex(0.0, unif(rng)));
    }
    return Frame(haar_unitary(d, field, rng) * m, field);
  }
  return random_funtf(N, d, field, rng);
}

}  // namespace

Frame random_od_funtf(int N, int d, FieldTag field, Rng& rng) {
  std::vector<int> splits;  // d1 values with matching redundancy
  for (int d1 = 1; d1 < d; ++d1)
    if ((long long)(N)*d1 % d == 0) splits.push_back(d1);
  if (splits.empty()) raise(Err::DimensionMismatch, "random_od_funtf: no orthogonal split");
  std::uniform_int_distribution<std::size_t> pick(0, splits.size() - 1);
  const int d1 = splits[pick(rng)];
  const int n1 = N * d1 / d;
  const Frame a = random_funtf_any(n1, d1, field, rng);
  const Frame b = random_funtf_any(N - n1, d - d1, field, rng);
  Mat m = Mat::Zero(d, N);
  m.block(0, 0, d1, n1) = a.matrix();
  m.block(d1, n1, d - d1, N - n1) = b.matrix();
  return Frame(haar_unitary(d, field, rng) * m, field);
}

}  // namespace funtf
