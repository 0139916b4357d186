#include "doctest.h"

#include <random>

#include "qtwist/tensor.hpp"

using namespace qtwist;

namespace {

Mat random_mat(std::mt19937& rng, const ParamSpace& sp, int legs) {
  std::uniform_int_distribution<int> co(-3, 3), pick(0, 3);
  Mat m(sp.n(), legs);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) {
      int c = co(rng);
      switch (pick(rng)) {
        case 0: m(i, j) = Ratio(c); break;
        case 1: m(i, j) = Ratio(Scalar(c) * sp.a()); break;
        case 2: m(i, j) = Ratio(Scalar(c), Scalar(1) + sp.a()); break;
        default: m(i, j) = Ratio(sp.q(1, 2) - Scalar(c)); break;
      }
    }
  return m;
}

}  // namespace

TEST_CASE("kron on identities and matrix units") {
  ParamSpace sp(2);
  CHECK(kron(Mat::identity(2), Mat::identity(2)) == Mat::identity(2, 2));
  Mat u = kron(Mat::unit(2, 1, 1), Mat::unit(2, 2, 2));
  CHECK(u.nonzero_count() == 1);
  CHECK(u.at({1, 2}, {1, 2}).is_one());
  // big-endian: (1,2) flattens to 1, (2,1) to 2
  CHECK(u.flatten({1, 2}) == 1);
  CHECK(u.flatten({2, 1}) == 2);
  CHECK(u(1, 1).is_one());
}

TEST_CASE("mixed product and associativity") {
  std::mt19937 rng(3);
  ParamSpace sp(2);
  for (int t = 0; t < 5; ++t) {
    Mat a = random_mat(rng, sp, 1), b = random_mat(rng, sp, 1), c = random_mat(rng, sp, 1),
        d = random_mat(rng, sp, 1);
    CHECK(kron(a, b) * kron(c, d) == kron(a * c, b * d));
    CHECK(kron(kron(a, b), c) == kron(a, kron(b, c)));
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("embedding") {
  std::mt19937 rng(5);
  ParamSpace sp(2);
  Mat r = random_mat(rng, sp, 2);
  CHECK(embed(r, 1, 2, 2) == r);
  CHECK(embed(r, 1, 2, 3) == kron(r, Mat::identity(2)));
  CHECK(embed(r, 2, 3, 3) == kron(Mat::identity(2), r));
  CHECK(embed(Mat::identity(2, 2), 1, 3, 3) == Mat::identity(2, 3));
  CHECK_THROWS_AS(embed(r, 2, 1, 3), Error);
  CHECK_THROWS_AS(embed(r, 1, 4, 3), Error);

  // flip on legs 1 and 3 acts as e_i⊗e_j⊗e_k -> e_k⊗e_j⊗e_i on all 8 basis vectors
  Mat p13 = embed(flip(2), 1, 3, 3);
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        for (int x = 1; x <= 2; ++x)
          for (int y = 1; y <= 2; ++y)
            for (int z = 1; z <= 2; ++z) {
              bool expect = (x == k && y == j && z == i);
              CHECK(p13.at({x, y, z}, {i, j, k}).is_one() == expect);
            }

  Mat s = random_mat(rng, sp, 2);
  Mat r4 = embed(r, 1, 2, 4), s4 = embed(s, 3, 4, 4);
  CHECK(r4 * s4 == s4 * r4);
}

TEST_CASE("matrix polynomials") {
  ParamSpace sp(2);
  CHECK(mat_poly(Mat::identity(2), {Ratio(1)}).is_zero());
  Ratio ma = -Ratio(sp.a());
  Mat d = Mat::diagonal({Ratio(1), ma});
  CHECK(mat_poly(d, {Ratio(1), ma}).is_zero());
  CHECK_FALSE(mat_poly(d, {Ratio(1)}).is_zero());
}

TEST_CASE("inverse and json dump") {
  std::mt19937 rng(9);
  ParamSpace sp(2);
  Mat m = Mat::identity(2, 2) + Ratio(sp.a()) * Mat(kron(Mat::unit(2, 1, 2), Mat::unit(2, 2, 1)));
  CHECK(m * m.inverse() == Mat::identity(2, 2));
  CHECK_THROWS_AS(Mat(2, 1).inverse(), Error);
  auto j = m.to_json(sp);
  CHECK(j["convention"] == "big-endian");
  CHECK(j["legs"] == 2);
  CHECK(j["entries"][1][2] == "(a)/(1)");
}
