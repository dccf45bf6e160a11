#pragma once

#include <optional>
#include <string>
#include <vector>

#include "funtf/frames.hpp"
#include "funtf/lifting.hpp"

namespace funtf {

struct RunConfig {
  double tol = 1e-8;
  int steps = 64;
  std::uint64_t seed = 0;
  FieldTag field = FieldTag::Complex;
  std::string output;
};

struct PathReport {
  struct Row {
    double t;
    double funtf_residual;
    double od_margin;
    double eig_dev;  // deviation from the declared eigensteps path (lift legs)
  };
  std::vector<Row> rows;
  double max_funtf_residual = 0.0;
  double min_od_margin = 0.0;
  double max_lift_eig_dev = 0.0;
  double endpoint_dev_start = 0.0;
  double endpoint_dev_end = 0.0;
  bool pass = false;
  std::string permutation_note;
};

struct ConnectResult {
  FramePath path;
  PathReport report;
};

// Complex-case connectivity: OD endpoints escape by a small spin, boundary
// eigensteps are conjugated into the interior by a column reorder, then a
// lifted eigensteps path and a fiber interpolation join the endpoints.
ConnectResult connect_frames(const Frame& f, const Frame& g, const RunConfig& cfg);

// Same route restricted to NOD data: every emitted sample stays NOD because
// the traversed eigensteps remain interior (reorder applied and undone).
ConnectResult connect_frames_nod(const Frame& f, const Frame& g, const RunConfig& cfg);

struct FullSparkSummary {
  int trials = 0;
  int full_spark_count = 0;
  double ratio = 0.0;
};

FullSparkSummary experiment_fullspark(int N, int d, int trials, FieldTag field,
                                      std::uint64_t seed, double tol_rank = 1e-8);

// Block-diagonal OD FUNTF fixture: splits with matching redundancy, rotated
// by a random orthogonal/unitary change of basis.
Frame random_od_funtf(int N, int d, FieldTag field, Rng& rng);

}  // namespace funtf
