#pragma once

#include <string>
#include <vector>

#include "funtf/numerics.hpp"

namespace funtf {

class Frame;

// The (N+1) x d table of partial-frame-operator spectra. Row n holds the
// nonincreasing eigenvalues after the first n vectors; row 0 is zero and
// row N is constant N/d.
struct EigenstepsTable {
  int N = 0;
  int d = 0;
  RealMat values;  // (N+1) x d, each row nonincreasing

  EigenstepsTable() = default;
  EigenstepsTable(int N_, int d_) : N(N_), d(d_), values(RealMat::Zero(N_ + 1, d_)) {}

  double at(int n, int i) const { return values(n, i); }
  double ratio() const { return double(N) / double(d); }
};

struct Violation {
  int condition;  // 1..4, plus 5 for a non-monotone row
  int n;
  int i;
  double magnitude;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  // Index convention the interlacing check uses; see Design note in validate().
  static constexpr const char* convention =
      "rows nonincreasing; interlacing checked as "
      "lambda[n+1][i+1] <= lambda[n][i] <= lambda[n+1][i]";
};

// Conditions: (1) row 0 zero, (2) row N constant N/d, (3) interlacing,
// (4) unit trace steps. Additionally reports non-monotone rows as condition 5.
ValidationReport validate(const EigenstepsTable& table, double tol = 1e-9);

// Entry (n,i) pinned to 0 on every table (rank bound), 0-based indices.
bool forced_zero(const EigenstepsTable& t, int n, int i);
// Entry (n,i) pinned to N/d on every table (interlacing against row N).
bool forced_full(const EigenstepsTable& t, int n, int i);

// Strictness of every non-forced interlacing inequality (and of the
// within-row ordering) by more than `margin`. Empty interior (N < d+2)
// returns false.
bool is_interior(const EigenstepsTable& table, double margin);

// Necessary boundary condition: interior tables can never be the
// eigensteps of an orthodecomposable frame.
bool is_boundary_consistent_with_OD(const EigenstepsTable& table, double margin = 1e-9);

EigenstepsTable of_frame(const Frame& f);

struct EigenstepsPath {
  EigenstepsTable start;
  EigenstepsTable end;
  EigenstepsTable at(double t) const;
};

EigenstepsPath linear_path(const EigenstepsTable& start, const EigenstepsTable& end);

// Random table strictly inside the polytope. Sequential per-row box sampling
// with a trace projection and retries; not a uniform sampler.
EigenstepsTable sample_interior(int N, int d, Rng& rng, double margin = 1e-6);

// Deterministic variant (box midpoints), used as the fixed per-(N,d) anchor.
EigenstepsTable interior_anchor(int N, int d);

EigenstepsTable eigensteps_of_two_onbs(int d);  // N = 2d reference table

double table_distance(const EigenstepsTable& a, const EigenstepsTable& b);

}  // namespace funtf
