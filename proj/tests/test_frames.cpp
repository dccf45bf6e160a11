#include <doctest.h>

#include <cmath>

#include "funtf/connect.hpp"
#include "funtf/frames.hpp"
#include "funtf/lifting.hpp"
#include "funtf/motions.hpp"

using namespace funtf;

namespace {

Frame mercedes() {
  Mat m(2, 3);
  const double a[3] = {M_PI / 2.0, M_PI + M_PI / 6.0, -M_PI / 6.0};
  for (int k = 0; k < 3; ++k) m.col(k) << std::cos(a[k]), std::sin(a[k]);
  return Frame(m, FieldTag::Real);
}

Frame duplicated_basis() {
  Mat m(2, 4);
  m << 1, 1, 0, 0, 0, 0, 1, 1;
  return Frame(m, FieldTag::Real);
}

Frame two_onbs(double theta) {
  Mat m(2, 4);
  m << 1, 0, std::cos(theta), -std::sin(theta), 0, 1, std::sin(theta), std::cos(theta);
  return Frame(m, FieldTag::Real);
}

}  // namespace

TEST_CASE("frame_operator") {
  CHECK(max_abs(frame_operator(Frame(Mat::Identity(3, 3), FieldTag::Real)) -
                Mat::Identity(3, 3)) == 0.0);

  const Frame f = mercedes();
  // oracle: direct summation of rank-one terms
  Mat s = Mat::Zero(2, 2);
  for (int n = 0; n < 3; ++n) s += f.column(n) * f.column(n).adjoint();
  CHECK(max_abs(frame_operator(f) - s) == 0.0);
  CHECK(max_abs(s - 1.5 * Mat::Identity(2, 2)) <= 1e-12);
}

TEST_CASE("check_funtf") {
  CHECK(check_funtf(two_onbs(0.7), 1e-10).ok);

  Mat m = Mat::Identity(2, 2);
  m.col(0) *= 1.1;
  const FuntfReport rep = check_funtf(Frame(m, FieldTag::Real), 1e-8);
  CHECK_FALSE(rep.ok);
  CHECK(rep.unit_norm_resid == doctest::Approx(0.21).epsilon(1e-9));
}

TEST_CASE("naimark_complement identity and properties") {
  const Frame f = mercedes();
  const Frame g = naimark_complement(f);
  CHECK(g.d() == 1);
  CHECK(g.N() == 3);
  const Mat lhs = (2.0 / 3.0) * f.matrix().adjoint() * f.matrix() +
                  (1.0 / 3.0) * g.matrix().adjoint() * g.matrix();
  CHECK(max_abs(lhs - Mat::Identity(3, 3)) <= 1e-8);
  for (int n = 0; n < 3; ++n) CHECK(std::abs(g.column(n).norm() - 1.0) <= 1e-8);

  CHECK_THROWS_AS(naimark_complement(Frame(Mat::Identity(3, 3), FieldTag::Real)), Error);
}

TEST_CASE("naimark_complement preserves the correlation graph") {
  Rng rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const Frame f = random_funtf(6, 2, FieldTag::Complex, rng);
    const Frame g = naimark_complement(f);
    const auto gf = correlation_graph(f, 1e-7);
    const auto gg = correlation_graph(g, 1e-7);
    REQUIRE(gf.edges.size() == gg.edges.size());
    for (std::size_t e = 0; e < gf.edges.size(); ++e) {
      CHECK(gf.edges[e].i == gg.edges[e].i);
      CHECK(gf.edges[e].j == gg.edges[e].j);
    }
  }
}

TEST_CASE("correlation_graph shapes") {
  CHECK(correlation_graph(Frame(Mat::Identity(3, 3), FieldTag::Real)).edges.empty());
  CHECK(correlation_graph(mercedes()).edges.size() == 3);  // complete K3
}

TEST_CASE("is_od") {
  CHECK(is_od(duplicated_basis()));
  CHECK_FALSE(is_od(mercedes()));
  // frames holding a simplex are NOD
  const RealMat h = canonical_simplex(4);
  Mat m(3, 4);
  m = h.cast<Complex>();
  CHECK_FALSE(is_od(Frame(m, FieldTag::Real)));
}

TEST_CASE("od_margin") {
  CHECK(od_margin(Frame(Mat::Identity(2, 2), FieldTag::Real)) == 0.0);
  CHECK(od_margin(mercedes()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(od_margin(two_onbs(0.0)) == 0.0);
  CHECK(od_margin(two_onbs(0.4)) > 0.0);
}

TEST_CASE("spark") {
  const SparkReport dup = spark(duplicated_basis());
  CHECK(dup.spark == 2);
  CHECK(dup.witness == std::vector<int>{0, 1});
  CHECK_FALSE(dup.full_spark);

  const SparkReport mb = spark(mercedes());
  CHECK(mb.spark == 3);
  CHECK(mb.full_spark);

  // OD with N > d is never full spark
  Rng rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const Frame od = random_od_funtf(6, 3, FieldTag::Real, rng);
    CHECK_FALSE(spark(od).full_spark);
  }
}

TEST_CASE("full spark implies NOD when N > d") {
  Rng rng(71);
  for (int rep = 0; rep < 20; ++rep) {
    const Frame f = rep % 2 == 0 ? random_funtf(6, 3, FieldTag::Complex, rng)
                                 : random_od_funtf(6, 3, FieldTag::Real, rng);
    if (spark(f).full_spark) CHECK_FALSE(is_od(f));
  }
}

TEST_CASE("spark budget guard") {
  Rng rng(4);
  const Frame f = random_funtf(8, 3, FieldTag::Real, rng);
  CHECK_THROWS_AS(spark(f, 1e-8, 10), Error);
}

TEST_CASE("permute") {
  const Frame f = mercedes();
  const Frame same = permute(f, {0, 1, 2});
  CHECK(frame_distance(f, same) == 0.0);

  const Frame g = permute(f, {2, 0, 1});
  CHECK(max_abs(frame_operator(f) - frame_operator(g)) == 0.0);
  CHECK(max_abs(g.column(0) - f.column(2)) == 0.0);

  CHECK_THROWS_AS(permute(f, {0, 0, 1}), Error);
}

TEST_CASE("nod_reorder") {
  Rng rng(59);
  const Frame f = random_funtf(6, 3, FieldTag::Real, rng);
  const std::vector<int> sigma = nod_reorder(f);
  CHECK(sigma.size() == 6);
  // generic random frames have no vanishing correlations: greedy keeps order
  CHECK(sigma[0] == 0);
  Mat basis(3, 3);
  for (int k = 0; k < 3; ++k) basis.col(k) = f.column(sigma[k]);
  Eigen::JacobiSVD<Mat> svd(basis);
  CHECK(svd.singularValues()(2) > 1e-6);
  Frame head(basis, FieldTag::Real);
  CHECK_FALSE(is_od(head));

  // interleaved union of two rotated ONBs still yields a NOD basis
  const Frame g = two_onbs(0.9);
  const Frame gi = permute(g, {0, 2, 1, 3});
  const std::vector<int> tau = nod_reorder(gi);
  Mat b2(2, 2);
  for (int k = 0; k < 2; ++k) b2.col(k) = gi.column(tau[k]);
  CHECK(std::abs(b2.determinant()) > 1e-8);

  CHECK_THROWS_AS(nod_reorder(duplicated_basis()), Error);
}

TEST_CASE("od_perturb") {
  const Frame aligned = two_onbs(0.0);
  const Frame moved = od_perturb(aligned, 1e-3);
  CHECK_FALSE(is_od(moved));
  CHECK(check_funtf(moved, 1e-8).ok);
  CHECK(max_abs(frame_operator(moved) - frame_operator(aligned)) <= 1e-8);
  CHECK(frame_distance(moved, aligned) <= 2e-3);

  const Frame untouched = od_perturb(aligned, 0.0);
  CHECK(frame_distance(untouched, aligned) == 0.0);
  CHECK(is_od(untouched));

  CHECK_THROWS_AS(od_perturb(mercedes(), 1e-3), Error);  // NotOD
}

TEST_CASE("od_perturb walks across three blocks") {
  // three orthogonal F_{2,1} blocks in R^3
  Mat m = Mat::Zero(3, 6);
  m(0, 0) = 1;
  m(0, 1) = -1;
  m(1, 2) = 1;
  m(1, 3) = 1;
  m(2, 4) = 1;
  m(2, 5) = -1;
  const Frame f(m, FieldTag::Real);
  REQUIRE(is_od(f));
  const FramePath p = od_perturb_path(f, 1e-3);
  CHECK_FALSE(is_od(p.back()));
  CHECK(p.notes.find("stages=2") != std::string::npos);
  CHECK(check_funtf(p.back(), 1e-8).ok);
}

TEST_CASE("path containers") {
  Rng rng(8);
  const Frame f = random_funtf(5, 2, FieldTag::Real, rng);
  FramePath p = make_path({{0.0, f}, {1.0, f}}, "const");
  CHECK(p.samples.size() == 2);
  CHECK(p.max_funtf_residual() <= 1e-9);
  CHECK(p.min_od_margin() > 0.0);

  const FramePath joined = concat_paths({p, p}, "two");
  CHECK(joined.samples.front().t == 0.0);
  CHECK(joined.samples.back().t == 1.0);
  CHECK(joined.samples.size() == 3);  // duplicate junction dropped
}
