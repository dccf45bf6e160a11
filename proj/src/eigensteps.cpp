#include "funtf/eigensteps.hpp"

#include <algorithm>
#include <cmath>

namespace funtf {

ValidationReport validate(const EigenstepsTable& t, double tol) {
  ValidationReport rep;
  if (t.values.rows() != t.N + 1 || t.values.cols() != t.d || t.N <= 0 || t.d <= 0)
    raise(Err::DimensionMismatch, "validate: table dimensions inconsistent");
  const double full = t.ratio();
  auto add = [&](int cond, int n, int i, double mag) {
    rep.ok = false;
    rep.violations.push_back({cond, n, i, mag});
  };
  for (int i = 0; i < t.d; ++i) {
    if (std::abs(t.at(0, i)) > tol) add(1, 0, i, std::abs(t.at(0, i)));
    if (std::abs(t.at(t.N, i) - full) > tol) add(2, t.N, i, std::abs(t.at(t.N, i) - full));
  }
  for (int n = 0; n <= t.N; ++n)
    for (int i = 0; i + 1 < t.d; ++i)
      if (t.at(n, i + 1) - t.at(n, i) > tol) add(5, n, i, t.at(n, i + 1) - t.at(n, i));
  for (int n = 0; n < t.N; ++n) {
    for (int i = 0; i < t.d; ++i) {
      if (t.at(n, i) - t.at(n + 1, i) > tol) add(3, n, i, t.at(n, i) - t.at(n + 1, i));
      if (i + 1 < t.d && t.at(n + 1, i + 1) - t.at(n, i) > tol)
        add(3, n, i, t.at(n + 1, i + 1) - t.at(n, i));
    }
    double step = 1.0;
    for (int i = 0; i < t.d; ++i) step += t.at(n, i) - t.at(n + 1, i);
    if (std::abs(step) > tol * t.d) add(4, n, 0, std::abs(step));
  }
  return rep;
}

bool forced_zero(const EigenstepsTable& t, int n, int i) {
  (void)t;
  return i >= n;  // rank of n vectors is at most n
}

bool forced_full(const EigenstepsTable& t, int n, int i) {
  return n >= t.N - t.d + i + 1;  // pinned to N/d by interlacing against row N
}

bool is_interior(const EigenstepsTable& t, double margin) {
  if (t.values.rows() != t.N + 1 || t.values.cols() != t.d || t.N <= 0 || t.d <= 0)
    raise(Err::InvalidTable, "is_interior: table dimensions inconsistent");
  if (t.N < t.d + 2) return false;
  for (int n = 0; n < t.N; ++n) {
    for (int i = 0; i < t.d; ++i) {
      const bool up_forced = forced_full(t, n, i) || i >= n + 1;
      if (!up_forced && t.at(n + 1, i) - t.at(n, i) <= margin) return false;
      if (i + 1 < t.d) {
        const bool low_forced = forced_full(t, n, i) || i >= n;
        if (!low_forced && t.at(n, i) - t.at(n + 1, i + 1) <= margin) return false;
      }
    }
  }
  for (int n = 0; n <= t.N; ++n)
    for (int i = 0; i + 1 < t.d; ++i) {
      const bool row_forced = forced_full(t, n, i + 1) || i >= n;
      if (!row_forced && t.at(n, i) - t.at(n, i + 1) <= margin) return false;
    }
  return true;
}

bool is_boundary_consistent_with_OD(const EigenstepsTable& t, double margin) {
  if (!validate(t).ok) raise(Err::InvalidTable, "is_boundary_consistent_with_OD: invalid table");
  return !is_interior(t, margin);
}

EigenstepsTable EigenstepsPath::at(double t) const {
  EigenstepsTable out(start.N, start.d);
  out.values = (1.0 - t) * start.values + t * end.values;
  return out;
}

EigenstepsPath linear_path(const EigenstepsTable& start, const EigenstepsTable& end) {
  if (start.N != end.N || start.d != end.d)
    raise(Err::DimensionMismatch, "linear_path: (N,d) mismatch");
  if (!validate(start).ok || !validate(end).ok)
    raise(Err::InvalidTable, "linear_path: endpoint fails validation");
  return EigenstepsPath{start, end};
}

namespace {

struct RowBounds {
  RealVec lo, hi;
};

RowBounds row_bounds(const EigenstepsTable& t, int n, const RealVec& prev) {
  const int d = t.d;
  const double full = t.ratio();
  RowBounds b{RealVec::Zero(d), RealVec::Zero(d)};
  for (int i = 0; i < d; ++i) {
    if (forced_zero(t, n, i)) {
      b.lo(i) = b.hi(i) = 0.0;
    } else if (forced_full(t, n, i)) {
      b.lo(i) = b.hi(i) = full;
    } else if (n == t.N - 1 && i == d - 1) {
      b.lo(i) = b.hi(i) = full - 1.0;  // pinned by the trace of row N-1
    } else {
      b.lo(i) = prev(i);
      b.hi(i) = std::min(i > 0 ? prev(i - 1) : full, full);
      if (i == d - 1) b.hi(i) = std::min(b.hi(i), full - 1.0);
    }
  }
  return b;
}

bool project_sum(RealVec& x, const RealVec& lo, const RealVec& hi, double target) {
  for (int pass = 0; pass < 6; ++pass) {
    const double r = target - x.sum();
    if (std::abs(r) < 1e-13) return true;
    double slack = 0.0;
    for (int i = 0; i < x.size(); ++i) slack += r > 0 ? hi(i) - x(i) : x(i) - lo(i);
    if (slack < std::abs(r) - 1e-12) return false;
    for (int i = 0; i < x.size(); ++i) {
      const double s = r > 0 ? hi(i) - x(i) : x(i) - lo(i);
      x(i) += r * s / slack;
    }
  }
  return std::abs(target - x.sum()) < 1e-11;
}

bool fill_rows(EigenstepsTable& t, Rng* rng) {
  const int d = t.d, N = t.N;
  const double full = t.ratio();
  t.values.row(0).setZero();
  t.values.row(N).setConstant(full);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int n = 1; n < N; ++n) {
    const RealVec prev = t.values.row(n - 1);
    const RowBounds b = row_bounds(t, n, prev);
    bool row_ok = false;
    for (int attempt = 0; attempt < 60 && !row_ok; ++attempt) {
      RealVec x(d), plo(d), phi(d);
      for (int i = 0; i < d; ++i) {
        const double w = b.hi(i) - b.lo(i);
        plo(i) = b.lo(i) + 0.02 * w;
        phi(i) = b.hi(i) - 0.02 * w;
        const double u = rng ? unif(*rng) : 0.5;
        x(i) = b.lo(i) + (0.12 + 0.76 * u) * w;
      }
      if (!project_sum(x, plo, phi, double(n))) {
        if (!rng) return false;  // deterministic mode has nothing to retry
        continue;
      }
      t.values.row(n) = x;
      row_ok = true;
    }
    if (!row_ok) return false;
  }
  return true;
}

}  // namespace

EigenstepsTable sample_interior(int N, int d, Rng& rng, double margin) {
  if (N < d + 2) raise(Err::EmptyInterior, "sample_interior: N < d+2, interior is empty");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    EigenstepsTable t(N, d);
    if (!fill_rows(t, &rng)) continue;
    if (validate(t).ok && is_interior(t, margin)) return t;
  }
  // midpoint fallback before giving up
  EigenstepsTable t(N, d);
  if (fill_rows(t, nullptr) && validate(t).ok && is_interior(t, margin)) return t;
  raise(Err::Internal, "sample_interior: exhausted retries");
}

EigenstepsTable interior_anchor(int N, int d) {
  Rng rng(0);
  return sample_interior(N, d, rng);
}

EigenstepsTable eigensteps_of_two_onbs(int d) {
  EigenstepsTable t(2 * d, d);
  for (int n = 0; n <= 2 * d; ++n)
    for (int i = 0; i < d; ++i) {
      double v = 0.0;
      if (n <= d)
        v = i < n ? 1.0 : 0.0;
      else
        v = i < n - d ? 2.0 : 1.0;
      t.values(n, i) = v;
    }
  return t;
}

double table_distance(const EigenstepsTable& a, const EigenstepsTable& b) {
  if (a.N != b.N || a.d != b.d) raise(Err::DimensionMismatch, "table_distance: shape mismatch");
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

}  // namespace funtf
