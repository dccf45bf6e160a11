#include "funtf/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace funtf {

namespace {

constexpr double kRadicandSlack = 1e-12;

struct ClusterInfo {
  double value = 0.0;
  std::vector<int> pos_n, pos_n1;  // ascending positions per row
};

// Single-linkage grouping of the entries of rows n and n+1 together,
// descending by value; rows are nonincreasing so per-row positions come out
// ascending per cluster.
std::vector<ClusterInfo> combined_clusters(const EigenstepsTable& t, int n, double tau_eq) {
  struct Entry {
    double value;
    int row;  // 0 = row n, 1 = row n+1
    int pos;
  };
  const int d = t.d;
  std::vector<Entry> entries;
  entries.reserve(2 * d);
  for (int i = 0; i < d; ++i) entries.push_back({t.at(n, i), 0, i});
  for (int i = 0; i < d; ++i) entries.push_back({t.at(n + 1, i), 1, i});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.row != b.row) return a.row < b.row;
    return a.pos < b.pos;
  });
  std::vector<ClusterInfo> clusters;
  for (const auto& e : entries) {
    if (clusters.empty() || clusters.back().value - e.value > tau_eq) {
      clusters.push_back({e.value, {}, {}});
    }
    auto& c = clusters.back();
    (e.row == 0 ? c.pos_n : c.pos_n1).push_back(e.pos);
  }
  for (auto& c : clusters) {
    std::sort(c.pos_n.begin(), c.pos_n.end());
    std::sort(c.pos_n1.begin(), c.pos_n1.end());
  }
  return clusters;
}

}  // namespace

Mat StepIndexData::P(int d) const {
  Mat p = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) p(sigma[k], k) = 1.0;
  return p;
}

Mat StepIndexData::Q(int d) const {
  Mat q = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) q(tau[k], k) = 1.0;
  return q;
}

StepIndexData step_index_data(const EigenstepsTable& t, int n, double tau_eq) {
  if (n < 1 || n > t.N - 1)
    raise(Err::DimensionMismatch, "step_index_data: step index out of range");
  StepIndexData data;
  data.n = n;
  const auto clusters = combined_clusters(t, n, tau_eq);
  for (const auto& c : clusters) {
    const int cn = int(c.pos_n.size()), cn1 = int(c.pos_n1.size());
    const int g = cn - cn1;
    if (g < -1 || g > 1)
      raise(Err::InvalidTable, "step_index_data: multiplicity step beyond one (interlacing)");
    if (cn > 0) data.gamma_n.push_back({c.value, cn});
    if (cn1 > 0) data.gamma_n1.push_back({c.value, cn1});
    if (g != 0) data.g.push_back({c.value, g});
    std::vector<int> carry_n = c.pos_n, carry_n1 = c.pos_n1;
    if (g == 1) {
      data.I.push_back(c.pos_n.front());
      carry_n.erase(carry_n.begin());
    } else if (g == -1) {
      data.J.push_back(c.pos_n1.front());
      carry_n1.erase(carry_n1.begin());
    }
    if (carry_n.size() != carry_n1.size())
      raise(Err::InvalidTable, "step_index_data: unmatched multiplicities");
    for (std::size_t k = 0; k < carry_n.size(); ++k)
      data.carry.push_back({carry_n[k], carry_n1[k]});
  }
  if (data.I.size() != data.J.size())
    raise(Err::InvalidTable, "step_index_data: |I| != |J|");
  data.K = int(data.I.size());
  const int d = t.d;
  data.sigma = data.I;
  data.tau = data.J;
  std::vector<bool> in_i(d, false), in_j(d, false);
  for (int i : data.I) in_i[i] = true;
  for (int j : data.J) in_j[j] = true;
  for (int p = 0; p < d; ++p) {
    if (!in_i[p]) data.sigma.push_back(p);
    if (!in_j[p]) data.tau.push_back(p);
  }
  return data;
}

LiftEvaluation eval_vwW(const EigenstepsTable& t, int n, const StepIndexData& data) {
  const int K = data.K;
  LiftEvaluation ev;
  ev.v = RealVec::Zero(K);
  ev.w = RealVec::Zero(K);
  ev.W = RealMat::Zero(K, K);
  ev.v_pow.assign(K, 0);
  ev.w_pow.assign(K, 0);

  auto factor = [&](double x) {
    if (std::abs(x) < 1e-300)
      raise(Err::VanishingDenominator, "eval_vwW: vanishing factor, use limit mode");
    return x;
  };

  for (int a = 0; a < K; ++a) {
    const double x = t.at(n, data.I[a]);
    double num = 1.0, den = 1.0;
    for (int b = 0; b < K; ++b) num *= x - t.at(n + 1, data.J[b]);
    for (int a2 = 0; a2 < K; ++a2)
      if (a2 != a) den *= factor(x - t.at(n, data.I[a2]));
    const double v2 = -num / den;
    if (v2 < -kRadicandSlack) raise(Err::NegativeRadicand, "eval_vwW: v^2 negative");
    ev.v(a) = std::sqrt(std::max(v2, 0.0));
  }
  for (int b = 0; b < K; ++b) {
    const double y = t.at(n + 1, data.J[b]);
    double num = 1.0, den = 1.0;
    for (int a = 0; a < K; ++a) num *= y - t.at(n, data.I[a]);
    for (int b2 = 0; b2 < K; ++b2)
      if (b2 != b) den *= factor(y - t.at(n + 1, data.J[b2]));
    const double w2 = num / den;
    if (w2 < -kRadicandSlack) raise(Err::NegativeRadicand, "eval_vwW: w^2 negative");
    ev.w(b) = std::sqrt(std::max(w2, 0.0));
  }
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b)
      ev.W(a, b) = ev.v(a) * ev.w(b) / factor(t.at(n + 1, data.J[b]) - t.at(n, data.I[a]));
  ev.v_reduced = ev.v;
  ev.w_reduced = ev.w;
  return ev;
}

LiftEvaluation eval_vwW_limit(const EigenstepsTable& interior, const EigenstepsTable& endpoint,
                              int n, const StepIndexData& data, double tau_van) {
  const int K = data.K;
  LiftEvaluation ev;
  ev.v = RealVec::Zero(K);
  ev.w = RealVec::Zero(K);
  ev.W = RealMat::Zero(K, K);
  ev.v_reduced = RealVec::Zero(K);
  ev.w_reduced = RealVec::Zero(K);
  ev.v_pow.assign(K, 0);
  ev.w_pow.assign(K, 0);

  // A factor at the endpoint: either its endpoint difference survives, or it
  // vanishes there and contributes the interior difference with one power of
  // the path parameter.
  struct Acc {
    int pow = 0;
    double coeff = 1.0;
  };
  auto mul = [&](Acc& acc, double end_diff, double int_diff) {
    if (std::abs(end_diff) > tau_van) {
      acc.coeff *= end_diff;
    } else {
      acc.pow += 1;
      if (std::abs(int_diff) < 1e-300)
        raise(Err::NoncancellingPowers,
              "eval_vwW_limit: interior coefficient vanishes (table not interior?)");
      acc.coeff *= int_diff;
    }
  };

  for (int a = 0; a < K; ++a) {
    const int i = data.I[a];
    Acc num, den;
    for (int b = 0; b < K; ++b) {
      const int j = data.J[b];
      mul(num, endpoint.at(n, i) - endpoint.at(n + 1, j),
          interior.at(n, i) - interior.at(n + 1, j));
    }
    for (int a2 = 0; a2 < K; ++a2) {
      if (a2 == a) continue;
      const int i2 = data.I[a2];
      mul(den, endpoint.at(n, i) - endpoint.at(n, i2), interior.at(n, i) - interior.at(n, i2));
    }
    const int pow = num.pow - den.pow;
    if (pow < 0) raise(Err::NoncancellingPowers, "eval_vwW_limit: v^2 diverges");
    const double r2 = -num.coeff / den.coeff;
    if (r2 < -1e-9) raise(Err::NegativeRadicand, "eval_vwW_limit: reduced v^2 negative");
    ev.v_pow[a] = pow;
    ev.v_reduced(a) = std::sqrt(std::max(r2, 0.0));
    ev.v(a) = pow == 0 ? ev.v_reduced(a) : 0.0;
  }
  for (int b = 0; b < K; ++b) {
    const int j = data.J[b];
    Acc num, den;
    for (int a = 0; a < K; ++a) {
      const int i = data.I[a];
      mul(num, endpoint.at(n + 1, j) - endpoint.at(n, i),
          interior.at(n + 1, j) - interior.at(n, i));
    }
    for (int b2 = 0; b2 < K; ++b2) {
      if (b2 == b) continue;
      const int j2 = data.J[b2];
      mul(den, endpoint.at(n + 1, j) - endpoint.at(n + 1, j2),
          interior.at(n + 1, j) - interior.at(n + 1, j2));
    }
    const int pow = num.pow - den.pow;
    if (pow < 0) raise(Err::NoncancellingPowers, "eval_vwW_limit: w^2 diverges");
    const double r2 = num.coeff / den.coeff;
    if (r2 < -1e-9) raise(Err::NegativeRadicand, "eval_vwW_limit: reduced w^2 negative");
    ev.w_pow[b] = pow;
    ev.w_reduced(b) = std::sqrt(std::max(r2, 0.0));
    ev.w(b) = pow == 0 ? ev.w_reduced(b) : 0.0;
  }
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      const int i = data.I[a], j = data.J[b];
      const double end_diff = endpoint.at(n + 1, j) - endpoint.at(n, i);
      const double int_diff = interior.at(n + 1, j) - interior.at(n, i);
      int den_pow = 0;
      double den_coeff = end_diff;
      if (std::abs(end_diff) <= tau_van) {
        den_pow = 1;
        den_coeff = int_diff;
        if (std::abs(int_diff) < 1e-300)
          raise(Err::NoncancellingPowers, "eval_vwW_limit: W denominator fully degenerate");
      }
      // powers of v and w enter at half weight (they are square roots)
      const int pow2 = ev.v_pow[a] + ev.w_pow[b] - 2 * den_pow;
      if (pow2 < 0) raise(Err::NoncancellingPowers, "eval_vwW_limit: W entry diverges");
      ev.W(a, b) = pow2 == 0 ? ev.v_reduced(a) * ev.w_reduced(b) / den_coeff : 0.0;
    }
  }
  return ev;
}

LiftEvaluation eval_vwW_limit(const EigenstepsTable& interior, const EigenstepsTable& endpoint,
                              int n, const StepIndexData& data) {
  return eval_vwW_limit(interior, endpoint, n, data, 1e-9);
}

std::vector<std::vector<int>> row_clusters(const EigenstepsTable& t, int n, double tau_eq) {
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < t.d; ++i) {
    if (i == 0 || t.at(n, i - 1) - t.at(n, i) > tau_eq) blocks.emplace_back();
    blocks.back().push_back(i);
  }
  return blocks;
}

std::vector<std::vector<int>> row_clusters_forced(int N, int d, int n) {
  std::vector<std::vector<int>> blocks;
  const int full_count = std::max(0, std::min(d, n - (N - d)));  // leading N/d entries
  const int zero_from = std::min(d, std::max(n, full_count));    // trailing zeros start
  if (full_count > 0) {
    blocks.emplace_back();
    for (int i = 0; i < full_count; ++i) blocks.back().push_back(i);
  }
  for (int i = full_count; i < zero_from; ++i) blocks.push_back({i});
  if (zero_from < d) {
    blocks.emplace_back();
    for (int i = zero_from; i < d; ++i) blocks.back().push_back(i);
  }
  return blocks;
}

BaseData identity_base_data(const EigenstepsTable& table, FieldTag) {
  BaseData base;
  base.U1 = Mat::Identity(table.d, table.d);
  base.V.assign(table.N - 1, Mat::Identity(table.d, table.d));
  return base;
}

BaseData random_base_data(const EigenstepsTable& table, FieldTag field, Rng& rng) {
  BaseData base;
  base.U1 = haar_unitary(table.d, field, rng);
  for (int n = 1; n <= table.N - 1; ++n) {
    Mat v = Mat::Zero(table.d, table.d);
    for (const auto& blk : row_clusters_forced(table.N, table.d, n)) {
      const Mat u = haar_unitary(int(blk.size()), field, rng);
      for (std::size_t a = 0; a < blk.size(); ++a)
        for (std::size_t b = 0; b < blk.size(); ++b) v(blk[a], blk[b]) = u(a, b);
    }
    base.V.push_back(std::move(v));
  }
  return base;
}

namespace {

struct StepEval {
  StepIndexData data;
  LiftEvaluation ev;
};

using StepProvider = std::function<StepEval(int)>;

void check_base(const EigenstepsTable& table, const BaseData& base) {
  const int d = table.d, N = table.N;
  if (base.U1.rows() != d || base.U1.cols() != d || int(base.V.size()) != N - 1)
    raise(Err::DimensionMismatch, "synthesize: base data shape mismatch");
  if (!is_unitary(base.U1, 1e-8)) raise(Err::NotUnitary, "synthesize: U1 not unitary");
  for (int n = 1; n <= N - 1; ++n) {
    const Mat& v = base.V[n - 1];
    if (v.rows() != d || v.cols() != d)
      raise(Err::DimensionMismatch, "synthesize: V_n shape mismatch");
    if (!is_unitary(v, 1e-8)) raise(Err::NotUnitary, "synthesize: V_n not unitary");
    std::vector<int> block_of(d, -1);
    const auto blocks = row_clusters_forced(N, d, n);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int i : blocks[b]) block_of[i] = int(b);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (block_of[i] != block_of[j] && std::abs(v(i, j)) > 1e-8)
          raise(Err::InvalidTable, "synthesize: V_n not block-diagonal for the row pattern");
  }
}

Frame synthesize_core(int N, int d, FieldTag field, const BaseData& base,
                      const StepProvider& provider) {
  Mat f = Mat::Zero(d, N);
  Mat u = base.U1;
  f.col(0) = u.col(0);
  for (int n = 1; n <= N - 1; ++n) {
    const Mat uhat = u * base.V[n - 1];
    const StepEval se = provider(n);
    const auto& I = se.data.I;
    const auto& J = se.data.J;
    const int K = se.data.K;
    Vec col = Vec::Zero(d);
    for (int a = 0; a < K; ++a) col += se.ev.v(a) * uhat.col(I[a]);
    f.col(n) = col;
    Mat unext(d, d);
    for (int b = 0; b < K; ++b) {
      Vec c = Vec::Zero(d);
      for (int a = 0; a < K; ++a) c += se.ev.W(a, b) * uhat.col(I[a]);
      unext.col(J[b]) = c;
    }
    for (const auto& [i, j] : se.data.carry) unext.col(j) = uhat.col(i);
    u = unext;
  }
  return Frame(f, field);
}

FieldTag base_field(const BaseData& base) {
  bool real = entries_real(base.U1, 1e-12);
  for (const auto& v : base.V) real = real && entries_real(v, 1e-12);
  return real ? FieldTag::Real : FieldTag::Complex;
}

}  // namespace

Frame synthesize(const EigenstepsTable& table, const BaseData& base) {
  if (!validate(table).ok) raise(Err::InvalidTable, "synthesize: table fails validation");
  check_base(table, base);
  const FieldTag field = base_field(base);
  if (is_interior(table, 1e-8)) {
    return synthesize_core(table.N, table.d, field, base, [&](int n) {
      StepEval se{step_index_data(table, n), {}};
      se.ev = eval_vwW(table, n, se.data);
      return se;
    });
  }
  // boundary table: endpoint limit of the segment from the interior anchor
  const EigenstepsTable anchor = interior_anchor(table.N, table.d);
  return synthesize_core(table.N, table.d, field, base, [&](int n) {
    StepEval se{step_index_data(anchor, n), {}};
    se.ev = eval_vwW_limit(anchor, table, n, se.data);
    return se;
  });
}

BaseData recover_base_data(const Frame& f, const std::optional<EigenstepsTable>& table_override) {
  const int d = f.d(), N = f.N();
  const EigenstepsTable table = table_override ? *table_override : of_frame(f);
  if (table.N != N || table.d != d)
    raise(Err::DimensionMismatch, "recover_base_data: table shape mismatch");
  if (!is_interior(table, 1e-8))
    raise(Err::DegenerateSpectra,
          "recover_base_data: eigensteps not interior (repeated partial eigenvalues)");

  BaseData base;
  Mat f1(d, 1);
  f1.col(0) = f.column(0) / f.column(0).norm();
  base.U1 = orthonormal_completion(f1);
  Mat u = base.U1;
  for (int n = 1; n <= N - 1; ++n) {
    const StepIndexData data = step_index_data(table, n);
    const LiftEvaluation ev = eval_vwW(table, n, data);
    const Vec c = u.adjoint() * f.column(n);
    Mat vmat = Mat::Identity(d, d);
    const auto blocks = row_clusters(table, n);
    for (const auto& blk : blocks) {
      const auto it = std::find(data.I.begin(), data.I.end(), blk.front());
      if (it == data.I.end()) {
        // eigenvalue does not move: the new vector must avoid this eigenspace
        double nrm = 0.0;
        for (int p : blk) nrm += std::norm(c(p));
        if (std::sqrt(nrm) > 1e-5)
          raise(Err::DegenerateSpectra,
                "recover_base_data: unexpected projection on an inactive eigenspace");
        continue;
      }
      const int a = int(it - data.I.begin());
      Vec cb(blk.size());
      for (std::size_t p = 0; p < blk.size(); ++p) cb(p) = c(blk[p]);
      const double nrm = cb.norm();
      if (std::abs(nrm - ev.v(a)) > 1e-5)
        raise(Err::DegenerateSpectra, "recover_base_data: projection norm mismatch");
      Mat first(blk.size(), 1);
      first.col(0) = cb / nrm;
      const Mat vb = orthonormal_completion(first);
      for (std::size_t p = 0; p < blk.size(); ++p)
        for (std::size_t q = 0; q < blk.size(); ++q) vmat(blk[p], blk[q]) = vb(p, q);
    }
    base.V.push_back(vmat);
    const Mat uhat = u * vmat;
    Mat unext(d, d);
    for (int b = 0; b < data.K; ++b) {
      Vec col = Vec::Zero(d);
      for (int a = 0; a < data.K; ++a) col += ev.W(a, b) * uhat.col(data.I[a]);
      unext.col(data.J[b]) = col;
    }
    for (const auto& [i, j] : data.carry) unext.col(j) = uhat.col(i);
    u = unext;
  }
  return base;
}

namespace {

// lift grid with quadratic clustering of the last tenth toward t = 1
double refine_t(double s) {
  if (s <= 0.9) return s;
  const double u = (s - 0.9) / 0.1;
  return 0.9 + 0.1 * (1.0 - (1.0 - u) * (1.0 - u));
}

}  // namespace

FramePath lift_path(const Frame& f, const EigenstepsTable& target, int steps) {
  if (steps < 2) raise(Err::DimensionMismatch, "lift_path: steps must be >= 2");
  const EigenstepsTable start = of_frame(f);
  if (target.N != start.N || target.d != start.d)
    raise(Err::DimensionMismatch, "lift_path: target shape mismatch");
  if (!validate(target).ok) raise(Err::InvalidTable, "lift_path: target fails validation");
  if (!is_interior(start, 1e-8))
    raise(Err::NotInterior, "lift_path: eigensteps of the start frame lie on the boundary");
  const BaseData base = recover_base_data(f, start);
  const bool target_interior = is_interior(target, 1e-8);
  const EigenstepsPath ell = linear_path(start, target);

  std::vector<std::pair<double, Frame>> samples;
  for (int k = 0; k <= steps; ++k) {
    const double t = refine_t(double(k) / steps);
    if (k == steps && !target_interior) {
      Frame g = synthesize_core(start.N, start.d, f.field(), base, [&](int n) {
        StepEval se{step_index_data(start, n), {}};
        se.ev = eval_vwW_limit(start, target, n, se.data);
        return se;
      });
      samples.emplace_back(1.0, std::move(g));
    } else {
      const EigenstepsTable tab = ell.at(k == steps ? 1.0 : t);
      Frame g = synthesize_core(start.N, start.d, f.field(), base, [&](int n) {
        StepEval se{step_index_data(tab, n), {}};
        se.ev = eval_vwW(tab, n, se.data);
        return se;
      });
      samples.emplace_back(k == steps ? 1.0 : t, std::move(g));
    }
  }
  return make_path(std::move(samples), "lift_path",
                   target_interior ? "interior target" : "boundary target (limit endpoint)");
}

FramePath fiber_path(const Frame& f, const Frame& g, int steps) {
  if (steps < 2) raise(Err::DimensionMismatch, "fiber_path: steps must be >= 2");
  if (f.d() != g.d() || f.N() != g.N())
    raise(Err::DimensionMismatch, "fiber_path: frame shapes differ");
  if (f.field() != g.field()) raise(Err::FieldUnsupported, "fiber_path: mixed fields");
  const EigenstepsTable tf = of_frame(f);
  const EigenstepsTable tg = of_frame(g);
  if (table_distance(tf, tg) > 1e-7)
    raise(Err::EigenstepsMismatch, "fiber_path: eigensteps differ beyond tolerance");
  const BaseData bf = recover_base_data(f, tf);
  const BaseData bg = recover_base_data(g, tf);

  const int d = f.d(), N = f.N();
  if (f.field() == FieldTag::Real) {
    auto bad = [&](const Mat& a, const Mat& b) {
      return determinant_real(a) * determinant_real(b) <= 0.0;
    };
    if (bad(bf.U1, bg.U1))
      raise(Err::OrientationObstruction, "fiber_path: U1 orientation mismatch (REAL field)");
    for (int n = 1; n <= N - 1; ++n)
      for (const auto& blk : row_clusters_forced(N, d, n)) {
        Mat a(blk.size(), blk.size()), b(blk.size(), blk.size());
        for (std::size_t p = 0; p < blk.size(); ++p)
          for (std::size_t q = 0; q < blk.size(); ++q) {
            a(p, q) = bf.V[n - 1](blk[p], blk[q]);
            b(p, q) = bg.V[n - 1](blk[p], blk[q]);
          }
        if (bad(a, b))
          raise(Err::OrientationObstruction, "fiber_path: V block orientation mismatch");
      }
  }

  // cache the step data once; the table is shared by every sample
  std::vector<StepEval> cache;
  for (int n = 1; n <= N - 1; ++n) {
    StepEval se{step_index_data(tf, n), {}};
    se.ev = eval_vwW(tf, n, se.data);
    cache.push_back(std::move(se));
  }

  std::vector<std::pair<double, Frame>> samples;
  for (int k = 0; k <= steps; ++k) {
    const double t = double(k) / steps;
    BaseData bt;
    bt.U1 = unitary_geodesic(bf.U1, bg.U1, t, f.field());
    for (int n = 1; n <= N - 1; ++n) {
      Mat v = Mat::Identity(d, d);
      for (const auto& blk : row_clusters_forced(N, d, n)) {
        const int m = int(blk.size());
        Mat a(m, m), b(m, m);
        for (int p = 0; p < m; ++p)
          for (int q = 0; q < m; ++q) {
            a(p, q) = bf.V[n - 1](blk[p], blk[q]);
            b(p, q) = bg.V[n - 1](blk[p], blk[q]);
          }
        const Mat u = unitary_geodesic(a, b, t, f.field());
        for (int p = 0; p < m; ++p)
          for (int q = 0; q < m; ++q) v(blk[p], blk[q]) = u(p, q);
      }
      bt.V.push_back(std::move(v));
    }
    Frame fr = synthesize_core(N, d, f.field(), bt, [&](int n) { return cache[n - 1]; });
    samples.emplace_back(t, std::move(fr));
  }
  return make_path(std::move(samples), "fiber_path", "");
}

Frame random_funtf(int N, int d, FieldTag field, Rng& rng) {
  const EigenstepsTable table = sample_interior(N, d, rng);
  const BaseData base = random_base_data(table, field, rng);
  return synthesize(table, base);
}

}  // namespace funtf
