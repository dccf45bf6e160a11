#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "funtf/eigensteps.hpp"
#include "funtf/frames.hpp"

namespace funtf {

// Per-step combinatorics of the synthesis recursion for the step row n ->
// row n+1 (1 <= n <= N-1). Positions are 0-based into the nonincreasing
// rows; the active sets hold first-occurrence positions of the spectral
// values that lose (I, row n) or gain (J, row n+1) one multiplicity.
struct StepIndexData {
  int n = 0;
  int K = 0;
  std::vector<int> I;  // ascending positions in row n
  std::vector<int> J;  // ascending positions in row n+1
  std::vector<std::pair<double, int>> gamma_n;   // (value, multiplicity), descending
  std::vector<std::pair<double, int>> gamma_n1;  // same for row n+1
  std::vector<std::pair<double, int>> g;         // signed multiplicity difference, in {-1,0,1}
  // order-preserving matching of the positions whose eigenvalue does not
  // move: (position in row n, position in row n+1)
  std::vector<std::pair<int, int>> carry;
  std::vector<int> sigma;  // slot k -> row-n position (I first, then complement)
  std::vector<int> tau;    // slot k -> row-(n+1) position (J first, then complement)

  Mat P(int d) const;  // permutation matrix of sigma
  Mat Q(int d) const;  // permutation matrix of tau
};

// The fiber coordinates of the synthesis map: a unitary U1 and one
// block-diagonal unitary per step, blocks following the row multiplicities.
struct BaseData {
  Mat U1;
  std::vector<Mat> V;  // V[n-1] applies at step n, n = 1..N-1
};

// Values of the three rational expressions at one step. The reduced fields
// carry the endpoint-limit bookkeeping: value v(a) equals v_reduced(a) when
// v_pow(a) == 0 and is 0 when the (1-t) power is positive.
struct LiftEvaluation {
  RealVec v;  // aligned with I
  RealVec w;  // aligned with J
  RealMat W;  // K x K, rows I, cols J
  RealVec v_reduced, w_reduced;
  std::vector<int> v_pow, w_pow;
};

StepIndexData step_index_data(const EigenstepsTable& table, int n, double tau_eq = 1e-9);

LiftEvaluation eval_vwW(const EigenstepsTable& table, int n, const StepIndexData& data);

// Endpoint evaluation for degenerate tables: the segment runs from `interior`
// to `endpoint`; factors vanishing at the endpoint contribute their
// interior-table difference together with one power of the path parameter,
// and the powers must cancel to a finite limit.
LiftEvaluation eval_vwW_limit(const EigenstepsTable& interior, const EigenstepsTable& endpoint,
                              int n, const StepIndexData& data_interior);

// Equal-value position blocks of one row (the V_n block pattern).
std::vector<std::vector<int>> row_clusters(const EigenstepsTable& table, int n,
                                           double tau_eq = 1e-9);
// The block pattern common to every table of the polytope (and exactly the
// pattern of interior tables): forced zeros and forced N/d entries grouped.
std::vector<std::vector<int>> row_clusters_forced(int N, int d, int n);

BaseData identity_base_data(const EigenstepsTable& table, FieldTag field);
BaseData random_base_data(const EigenstepsTable& table, FieldTag field, Rng& rng);

// Frame synthesis from eigensteps. Interior tables evaluate directly;
// boundary tables are reached as the endpoint limit of the segment from the
// fixed interior anchor.
Frame synthesize(const EigenstepsTable& table, const BaseData& base);

// Inverse of synthesize on the fiber: base data whose synthesis reproduces
// F. Requires interior eigensteps; the gauge is fixed by making the
// supported eigenbasis coefficients of each incoming vector real and
// nonnegative.
BaseData recover_base_data(const Frame& f,
                           const std::optional<EigenstepsTable>& table_override = {});

// Continuous lifting of the linear eigensteps path from lambda(F) to target.
FramePath lift_path(const Frame& f, const EigenstepsTable& target, int steps);

// Path inside one fiber: interpolates the base data of F to that of G by
// unitary geodesics per block.
FramePath fiber_path(const Frame& f, const Frame& g, int steps);

Frame random_funtf(int N, int d, FieldTag field, Rng& rng);

}  // namespace funtf
