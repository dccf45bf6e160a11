#pragma once

#include <optional>
#include <string>
#include <vector>

#include "funtf/eigensteps.hpp"
#include "funtf/numerics.hpp"

namespace funtf {

// A frame of N column vectors in F^d, stored as the d x N synthesis matrix.
class Frame {
 public:
  Frame() = default;
  Frame(Mat columns, FieldTag field) : m_(std::move(columns)), field_(field) {
    if (field_ == FieldTag::Real && !entries_real(m_, 1e-9))
      raise(Err::FieldUnsupported, "Frame: REAL field with imaginary entries");
  }

  int d() const { return int(m_.rows()); }
  int N() const { return int(m_.cols()); }
  FieldTag field() const { return field_; }
  const Mat& matrix() const { return m_; }
  Mat& matrix() { return m_; }
  Vec column(int n) const { return m_.col(n); }

 private:
  Mat m_;
  FieldTag field_ = FieldTag::Real;
};

struct FuntfReport {
  double unit_norm_resid = 0.0;  // max |  ||f_n||^2 - 1 |
  double tightness_resid = 0.0;  // || FF* - (N/d) I ||_max
  bool ok = false;
};

struct CorrelationGraph {
  int vertices = 0;
  struct Edge {
    int i, j;
    double weight;  // |<f_i, f_j>|
  };
  std::vector<Edge> edges;
  bool connected() const;
};

struct SparkReport {
  int spark = 0;                 // N+1 when no dependent subset exists
  std::vector<int> witness;      // smallest dependent subset (lexicographic), empty if none
  bool full_spark = false;
};

// Sampled continuous path of frames with per-sample verification metrics.
struct FramePath {
  struct Sample {
    double t;
    Frame frame;
    double funtf_residual;  // max(unit_norm_resid, tightness_resid)
    double od_margin;
  };
  std::vector<Sample> samples;
  std::string construction;
  std::string notes;

  const Frame& front() const { return samples.front().frame; }
  const Frame& back() const { return samples.back().frame; }
  double max_funtf_residual() const;
  double min_od_margin() const;
};

Mat frame_operator(const Frame& f);
FuntfReport check_funtf(const Frame& f, double tol = 1e-8);

// FUNTF complement in dimension N-d: (d/N) F*F + ((N-d)/N) G*G = I_N.
// The representative is the spectral factorization of I - (d/N) F*F.
Frame naimark_complement(const Frame& f, double tol = 1e-6);

CorrelationGraph correlation_graph(const Frame& f, double eps = 1e-8);
bool is_od(const Frame& f, double eps = 1e-8);

// Largest tau such that the graph with edges { |<f_i,f_j>| > tau } stays
// connected: the bottleneck weight of a maximum spanning tree.
double od_margin(const Frame& f);

SparkReport spark(const Frame& f, double tol_rank = 1e-8,
                  long long budget = 5'000'000);

// Column reorder: column n of the result is f_{sigma[n]} (0-based).
Frame permute(const Frame& f, const std::vector<int>& sigma);
std::vector<int> inverse_permutation(const std::vector<int>& sigma);

// Greedy NOD-basis extraction (pick vectors neither in the span nor in the
// orthogonal complement of the chosen set). Returns sigma with the basis in
// the first d slots.
std::vector<int> nod_reorder(const Frame& f, double eps = 1e-8);

// Continuous de-orthodecomposition: rotates one orthonormal cross-block pair
// per remaining block split by `delta` radians. Frame operator is preserved
// exactly; the endpoint is NOD for delta > 0.
FramePath od_perturb_path(const Frame& f, double delta, int steps_per_stage = 16);
Frame od_perturb(const Frame& f, double delta);

// Metric annotation and path assembly helpers.
FramePath make_path(std::vector<std::pair<double, Frame>> samples, std::string construction,
                    std::string notes = "");
FramePath concat_paths(const std::vector<FramePath>& pieces, std::string construction);
Frame permute_path_sample(const Frame& f, const std::vector<int>& sigma);
FramePath permute_path(const FramePath& path, const std::vector<int>& sigma);

double frame_distance(const Frame& a, const Frame& b);  // entrywise max

EigenstepsTable eigensteps_row_table(const Frame& f);  // alias of of_frame

}  // namespace funtf
