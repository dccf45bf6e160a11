#include <doctest.h>

#include <cmath>

#include "funtf/eigensteps.hpp"
#include "funtf/frames.hpp"
#include "funtf/lifting.hpp"

using namespace funtf;

namespace {

EigenstepsTable table_from(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = int(rows.size()) - 1;
  const int d = int(rows.begin()->size());
  EigenstepsTable t(n, d);
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (double v : row) t.values(r, c++) = v;
    ++r;
  }
  return t;
}

Frame mercedes() {
  Mat m(2, 3);
  const double a[3] = {M_PI / 2.0, M_PI + M_PI / 6.0, -M_PI / 6.0};  // 90, 210, 330 degrees
  for (int k = 0; k < 3; ++k) m.col(k) << std::cos(a[k]), std::sin(a[k]);
  return Frame(m, FieldTag::Real);
}

}  // namespace

TEST_CASE("validate accepts the two-ONB table and reports violations") {
  EigenstepsTable t = table_from({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}});
  CHECK(validate(t).ok);

  EigenstepsTable bad = t;
  bad.values(4, 0) += 0.1;
  const ValidationReport rep = validate(bad);
  CHECK_FALSE(rep.ok);
  bool saw_condition2 = false;
  for (const auto& v : rep.violations) saw_condition2 = saw_condition2 || v.condition == 2;
  CHECK(saw_condition2);
}

TEST_CASE("validate passes eigensteps of a random FUNTF") {
  Rng rng(101);
  const Frame f = random_funtf(5, 2, FieldTag::Real, rng);
  const EigenstepsTable t = of_frame(f);
  CHECK(validate(t, 1e-9).ok);
}

TEST_CASE("is_interior") {
  const EigenstepsTable two_onb = table_from({{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}});
  CHECK_FALSE(is_interior(two_onb, 1e-9));

  Rng rng(7);
  const EigenstepsTable a = sample_interior(5, 2, rng);
  const EigenstepsTable b = sample_interior(5, 2, rng);
  EigenstepsTable mid(5, 2);
  mid.values = 0.5 * (a.values + b.values);
  CHECK(is_interior(mid, 1e-9));

  // N = d: interior empty
  const EigenstepsTable onb3 = table_from({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
  CHECK(validate(onb3).ok);
  CHECK_FALSE(is_interior(onb3, 1e-9));
}

TEST_CASE("of_frame on the standard basis") {
  const Frame f(Mat::Identity(2, 2), FieldTag::Real);
  const EigenstepsTable t = of_frame(f);
  const EigenstepsTable expect = table_from({{0, 0}, {1, 0}, {1, 1}});
  CHECK(table_distance(t, expect) <= 1e-12);
}

TEST_CASE("of_frame on the Mercedes-Benz frame") {
  const Frame f = mercedes();
  const EigenstepsTable t = of_frame(f);
  // oracle: two unit vectors have partial spectrum 1 +- |<f1,f2>|
  const double c = std::abs((f.column(0).adjoint() * f.column(1))(0));
  CHECK(t.at(2, 0) == doctest::Approx(1.0 + c).epsilon(1e-10));
  CHECK(t.at(2, 1) == doctest::Approx(1.0 - c).epsilon(1e-10));
  CHECK(t.at(2, 0) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(t.at(3, 0) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(t.at(3, 1) == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("of_frame is invariant under left unitary action") {
  Rng rng(13);
  const Frame f = random_funtf(6, 3, FieldTag::Complex, rng);
  const Mat q = haar_unitary(3, FieldTag::Complex, rng);
  const Frame g(q * f.matrix(), FieldTag::Complex);
  CHECK(table_distance(of_frame(f), of_frame(g)) <= 1e-8);
}

TEST_CASE("partial trace row sums") {
  Rng rng(29);
  const Frame f = random_funtf(8, 3, FieldTag::Complex, rng);
  const EigenstepsTable t = of_frame(f);
  for (int k = 0; k <= 8; ++k) {
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += t.at(k, i);
    CHECK(std::abs(sum - k) <= 1e-8);
  }
}

TEST_CASE("linear_path endpoints and convexity") {
  Rng rng(41);
  const EigenstepsTable a = sample_interior(6, 3, rng);
  const EigenstepsTable b = sample_interior(6, 3, rng);

  const EigenstepsPath constant = linear_path(a, a);
  CHECK(table_distance(constant.at(0.3), a) <= 1e-12);

  const EigenstepsPath p = linear_path(a, b);
  CHECK(table_distance(p.at(0.0), a) == 0.0);
  CHECK(table_distance(p.at(1.0), b) == 0.0);
  for (double t : {0.1, 0.37, 0.5, 0.9}) CHECK(validate(p.at(t), 1e-9).ok);

  EigenstepsTable wrong(5, 3);
  CHECK_THROWS_AS(linear_path(a, wrong), Error);
}

TEST_CASE("sample_interior contract") {
  Rng rng(2);
  const EigenstepsTable t = sample_interior(5, 2, rng);
  CHECK(validate(t, 1e-9).ok);
  CHECK(is_interior(t, 1e-6));

  Rng rng2(2);
  CHECK_THROWS_AS(sample_interior(3, 2, rng2), Error);

  Rng ra(77), rb(77);
  const EigenstepsTable x = sample_interior(8, 3, ra);
  const EigenstepsTable y = sample_interior(8, 3, rb);
  CHECK(table_distance(x, y) == 0.0);  // reproducible for a fixed seed
}

TEST_CASE("sample_interior across the acceptance sizes") {
  const int cases[6][2] = {{4, 2}, {5, 2}, {5, 3}, {6, 3}, {8, 3}, {8, 5}};
  Rng rng(11);
  for (const auto& c : cases) {
    for (int rep = 0; rep < 5; ++rep) {
      const EigenstepsTable t = sample_interior(c[0], c[1], rng);
      CHECK(validate(t, 1e-9).ok);
      CHECK(is_interior(t, 1e-6));
    }
  }
}

TEST_CASE("boundary consistency with OD frames") {
  // e1,e1,e2,e2 is OD; its eigensteps must sit on the boundary
  Mat m(2, 4);
  m << 1, 1, 0, 0, 0, 0, 1, 1;
  const Frame od_frame(m, FieldTag::Real);
  CHECK(is_boundary_consistent_with_OD(of_frame(od_frame)));
  CHECK(of_frame(od_frame).at(2, 0) == doctest::Approx(of_frame(od_frame).at(3, 0)));

  Rng rng(55);
  CHECK_FALSE(is_boundary_consistent_with_OD(sample_interior(6, 3, rng)));
}
