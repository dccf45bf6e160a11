#include <doctest.h>

#include <cmath>
#include <set>

#include "funtf/connect.hpp"
#include "funtf/lifting.hpp"

using namespace funtf;

namespace {

std::vector<int> iota_vec(int from, int to) {  // inclusive bounds
  std::vector<int> v;
  for (int i = from; i <= to; ++i) v.push_back(i);
  return v;
}

EigenstepsTable two_onb_table(int d) { return eigensteps_of_two_onbs(d); }

}  // namespace

TEST_CASE("step_index_data matches the interior closed forms") {
  Rng rng(21);
  const int N = 8, d = 3;
  const EigenstepsTable t = sample_interior(N, d, rng);
  for (int n = 1; n <= N - 1; ++n) {
    const StepIndexData data = step_index_data(t, n);
    // I_n = [n+1] for n < d; [d] for d <= n < N-d; {k+1..d} for n = N-d+k
    if (n < d) {
      CHECK(data.I == iota_vec(0, n));
    } else if (n < N - d) {
      CHECK(data.I == iota_vec(0, d - 1));
    } else {
      const int k = n - (N - d);
      CHECK(data.I == iota_vec(k, d - 1));
    }
    // J_n = I_n for n <= N-d; {1} u {k+2..d} for n = N-d+k; J_{N-1} = {1}
    if (n <= N - d) {
      CHECK(data.J == data.I);
    } else if (n < N - 1) {
      const int k = n - (N - d);
      std::vector<int> expect{0};
      for (int i = k + 1; i <= d - 1; ++i) expect.push_back(i);
      CHECK(data.J == expect);
    } else {
      CHECK(data.J == std::vector<int>{0});
    }
    CHECK(int(data.I.size()) == data.K);
    CHECK(int(data.J.size()) == data.K);
  }
}

TEST_CASE("g_n bookkeeping on random and boundary tables") {
  Rng rng(77);
  auto check_g = [](const EigenstepsTable& t) {
    for (int n = 1; n <= t.N - 1; ++n) {
      const StepIndexData data = step_index_data(t, n);
      int sum = 0;
      for (const auto& [value, g] : data.g) {
        CHECK(std::abs(g) == 1);
        sum += g;
      }
      CHECK(sum == 0);
    }
  };
  for (int rep = 0; rep < 10; ++rep) check_g(sample_interior(6, 3, rng));
  check_g(two_onb_table(2));
  check_g(two_onb_table(3));
  for (int rep = 0; rep < 10; ++rep) check_g(of_frame(random_od_funtf(6, 3, FieldTag::Real, rng)));
}

TEST_CASE("permutation matrices of a step") {
  Rng rng(5);
  const EigenstepsTable t = sample_interior(6, 3, rng);
  const StepIndexData data = step_index_data(t, 4);
  const Mat p = data.P(3), q = data.Q(3);
  CHECK(is_unitary(p, 0.0));
  CHECK(is_unitary(q, 0.0));
}

TEST_CASE("last step is a 1x1 unimodular W") {
  Rng rng(33);
  const EigenstepsTable t = sample_interior(6, 3, rng);
  const StepIndexData data = step_index_data(t, 5);
  REQUIRE(data.K == 1);
  const LiftEvaluation ev = eval_vwW(t, 5, data);
  CHECK(std::abs(std::abs(ev.W(0, 0)) - 1.0) <= 1e-9);
  CHECK(ev.v(0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("radicands stay nonnegative across random interior tables") {
  Rng rng(123);
  for (int rep = 0; rep < 100; ++rep) {
    const EigenstepsTable t = sample_interior(6, 3, rng);
    for (int n = 1; n <= 5; ++n) {
      const StepIndexData data = step_index_data(t, n);
      CHECK_NOTHROW(eval_vwW(t, n, data));
    }
  }
}

TEST_CASE("synthesize round trip with identity and random bases") {
  Rng rng(9);
  const EigenstepsTable t = sample_interior(5, 2, rng);
  const BaseData id = identity_base_data(t, FieldTag::Real);
  const Frame f = synthesize(t, id);
  CHECK(check_funtf(f, 1e-8).ok);
  CHECK(table_distance(of_frame(f), t) <= 1e-7);
  CHECK(max_abs(f.column(0) - id.U1.col(0)) == 0.0);

  // bitwise determinism
  const Frame f2 = synthesize(t, id);
  CHECK(frame_distance(f, f2) == 0.0);

  const BaseData rb = random_base_data(t, FieldTag::Complex, rng);
  const Frame g = synthesize(t, rb);
  CHECK(table_distance(of_frame(g), t) <= 1e-7);
  CHECK(max_abs(g.column(0) - rb.U1.col(0)) == 0.0);
}

TEST_CASE("unit norm emerges from the table") {
  Rng rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    const EigenstepsTable t = sample_interior(8, 5, rng);
    const BaseData base = random_base_data(t, FieldTag::Complex, rng);
    const Frame f = synthesize(t, base);
    for (int n = 0; n < f.N(); ++n) CHECK(std::abs(f.column(n).norm() - 1.0) <= 1e-8);
  }
}

TEST_CASE("limit evaluation agrees with plain evaluation at interior targets") {
  Rng rng(82);
  const EigenstepsTable a = sample_interior(6, 3, rng);
  const EigenstepsTable b = sample_interior(6, 3, rng);
  for (int n = 1; n <= 5; ++n) {
    const StepIndexData data = step_index_data(a, n);
    const LiftEvaluation plain = eval_vwW(b, n, step_index_data(b, n));
    const LiftEvaluation lim = eval_vwW_limit(a, b, n, data);
    CHECK((plain.v - lim.v).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((plain.w - lim.w).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((plain.W - lim.W).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("limit synthesis reaches the two-ONB boundary table") {
  Rng rng(4);
  const EigenstepsTable target = two_onb_table(2);
  REQUIRE_FALSE(is_interior(target, 1e-9));
  const BaseData base = random_base_data(target, FieldTag::Complex, rng);
  const Frame f = synthesize(target, base);  // routed through the anchor limit
  CHECK(check_funtf(f, 1e-8).ok);
  CHECK(table_distance(of_frame(f), target) <= 1e-7);
}

TEST_CASE("power bookkeeping never fails on OD boundary targets") {
  Rng rng(66);
  const EigenstepsTable anchor = interior_anchor(6, 3);
  int checked = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const EigenstepsTable target = of_frame(random_od_funtf(6, 3, FieldTag::Real, rng));
    REQUIRE_FALSE(is_interior(target, 1e-9));
    for (int n = 1; n <= 5; ++n) {
      const StepIndexData data = step_index_data(anchor, n);
      CHECK_NOTHROW(eval_vwW_limit(anchor, target, n, data));
      ++checked;
    }
  }
  CHECK(checked == 250);
}

TEST_CASE("recover_base_data reproduces the frame") {
  Rng rng(31);
  for (FieldTag field : {FieldTag::Real, FieldTag::Complex}) {
    const EigenstepsTable t = sample_interior(6, 3, rng);
    const BaseData base = random_base_data(t, field, rng);
    const Frame f = synthesize(t, base);
    const BaseData rec = recover_base_data(f);
    const Frame f2 = synthesize(of_frame(f), rec);
    CHECK(frame_distance(f, f2) <= 1e-6);
    CHECK(max_abs(rec.U1.col(0) - f.column(0) / f.column(0).norm()) <= 1e-12);
  }
}

TEST_CASE("recover_base_data rejects degenerate spectra") {
  Mat m(2, 4);
  m << 1, 0, 1, 0, 0, 1, 0, 1;
  const Frame f(m, FieldTag::Real);
  CHECK_THROWS_AS(recover_base_data(f), Error);
}

TEST_CASE("lift_path with constant target") {
  Rng rng(3);
  const Frame f = random_funtf(5, 2, FieldTag::Complex, rng);
  const FramePath p = lift_path(f, of_frame(f), 8);
  CHECK(frame_distance(p.front(), f) <= 1e-6);
  for (const auto& s : p.samples) CHECK(frame_distance(s.frame, p.front()) <= 1e-9);
}

TEST_CASE("lift_path to the two-ONB table ends at a union of two ONBs") {
  Rng rng(41);
  const Frame f = random_funtf(4, 2, FieldTag::Complex, rng);
  const FramePath p = lift_path(f, two_onb_table(2), 64);
  const Frame end = p.back();
  Mat b1 = end.matrix().leftCols(2);
  Mat b2 = end.matrix().rightCols(2);
  CHECK(max_abs(b1.adjoint() * b1 - Mat::Identity(2, 2)) <= 1e-6);
  CHECK(max_abs(b2.adjoint() * b2 - Mat::Identity(2, 2)) <= 1e-6);
  for (const auto& s : p.samples) CHECK(s.funtf_residual <= 1e-7);
}

TEST_CASE("lift_path tracks the linear eigensteps path") {
  Rng rng(15);
  const Frame f = random_funtf(6, 3, FieldTag::Complex, rng);
  const EigenstepsTable target = sample_interior(6, 3, rng);
  const FramePath p = lift_path(f, target, 64);
  const EigenstepsPath ell = linear_path(of_frame(f), target);
  for (const auto& s : p.samples)
    CHECK(table_distance(of_frame(s.frame), ell.at(s.t)) <= 1e-7);
}

TEST_CASE("lift_path requires interior start") {
  Mat m(2, 4);
  m << 1, 0, 1, 0, 0, 1, 0, 1;
  const Frame f(m, FieldTag::Real);
  Rng rng(1);
  CHECK_THROWS_AS(lift_path(f, sample_interior(4, 2, rng), 8), Error);
}

TEST_CASE("lift continuity is stable under step refinement") {
  Rng rng(27);
  const Frame f = random_funtf(5, 2, FieldTag::Complex, rng);
  // a boundary table for (5,2): the middle rows carry repeated values
  EigenstepsTable target52(5, 2);
  target52.values << 0, 0, 1, 0, 1, 1, 2, 1, 2.5, 1.5, 2.5, 2.5;
  REQUIRE(validate(target52).ok);
  REQUIRE_FALSE(is_interior(target52, 1e-9));
  auto max_step = [](const FramePath& p) {
    double worst = 0.0;
    for (std::size_t k = 1; k < p.samples.size(); ++k)
      worst = std::max(worst, frame_distance(p.samples[k].frame, p.samples[k - 1].frame) /
                                  (p.samples[k].t - p.samples[k - 1].t));
    return worst;
  };
  const double c64 = max_step(lift_path(f, target52, 64));
  const double c128 = max_step(lift_path(f, target52, 128));
  CHECK(c128 <= 2.5 * c64 + 1e-9);  // no blow-up near the endpoint
}

TEST_CASE("fiber_path connects bases over a shared table") {
  Rng rng(7);
  const EigenstepsTable t = sample_interior(5, 2, rng);
  const Frame f = synthesize(t, random_base_data(t, FieldTag::Complex, rng));
  const Frame g = synthesize(t, random_base_data(t, FieldTag::Complex, rng));

  const FramePath self_path = fiber_path(f, f, 8);
  for (const auto& s : self_path.samples) CHECK(frame_distance(s.frame, f) <= 1e-6);

  const FramePath p = fiber_path(f, g, 16);
  CHECK(frame_distance(p.front(), f) <= 1e-6);
  CHECK(frame_distance(p.back(), g) <= 1e-6);
  for (const auto& s : p.samples) {
    CHECK(s.funtf_residual <= 1e-7);
    CHECK(table_distance(of_frame(s.frame), t) <= 1e-7);
  }
}

TEST_CASE("fiber orientation: column negation splits the real fiber only") {
  // negating one column keeps every partial frame operator, so F and G share
  // eigensteps; the real fiber cannot reach the flipped sign continuously,
  // the complex fiber can
  Rng rng(53);
  const EigenstepsTable t = sample_interior(5, 2, rng);

  const Frame fr = synthesize(t, random_base_data(t, FieldTag::Real, rng));
  Mat mr = fr.matrix();
  mr.col(1) *= -1.0;
  const Frame gr(mr, FieldTag::Real);
  REQUIRE(table_distance(of_frame(fr), of_frame(gr)) <= 1e-9);
  CHECK_THROWS_AS(fiber_path(fr, gr, 8), Error);  // OrientationObstruction

  const Frame fc = synthesize(t, random_base_data(t, FieldTag::Complex, rng));
  Mat mc = fc.matrix();
  mc.col(1) *= -1.0;
  const Frame gc(mc, FieldTag::Complex);
  const FramePath p = fiber_path(fc, gc, 16);
  CHECK(frame_distance(p.back(), gc) <= 1e-6);
  for (const auto& s : p.samples) CHECK(s.funtf_residual <= 1e-7);
}

TEST_CASE("real fiber_path works for compatible orientations") {
  Rng rng(54);
  const EigenstepsTable t = sample_interior(5, 2, rng);
  const Frame f = synthesize(t, random_base_data(t, FieldTag::Real, rng));
  const FramePath p = fiber_path(f, f, 8);
  for (const auto& s : p.samples) CHECK(frame_distance(s.frame, f) <= 1e-6);
}

TEST_CASE("fiber_path rejects mismatched eigensteps") {
  Rng rng(11);
  const Frame f = random_funtf(5, 2, FieldTag::Complex, rng);
  const Frame g = random_funtf(5, 2, FieldTag::Complex, rng);
  CHECK_THROWS_AS(fiber_path(f, g, 8), Error);
}

TEST_CASE("round trip across the acceptance sizes (spot check)") {
  const int cases[6][2] = {{4, 2}, {5, 2}, {5, 3}, {6, 3}, {8, 3}, {8, 5}};
  Rng rng(99);
  for (const auto& c : cases) {
    for (FieldTag field : {FieldTag::Real, FieldTag::Complex}) {
      const EigenstepsTable t = sample_interior(c[0], c[1], rng);
      const Frame f = synthesize(t, random_base_data(t, field, rng));
      CHECK(table_distance(of_frame(f), t) <= 1e-7);
    }
  }
}
