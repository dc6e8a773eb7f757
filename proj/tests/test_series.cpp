#include <doctest.h>

#include "core/series.hpp"
#include "testutil.hpp"

using namespace bitorus;
using testutil::Rng;

namespace {

Series1 random_series(Rng& rng, int order, double scale = 1.0) {
  Series1 s(order);
  for (int k = 0; k <= order; ++k)
    s[k] = Complex{testutil::uniform(rng, -scale, scale), testutil::uniform(rng, -scale, scale)};
  return s;
}

}  // namespace

TEST_CASE("mul examples") {
  int n = 8;
  Series1 a = Series1::constant(1.0, n);
  a[1] = 1.0;  // 1 + z
  Series1 b = Series1::constant(1.0, n);
  b[1] = -1.0;  // 1 - z
  Series1 p = a * b;
  CHECK(std::abs(p[0] - 1.0) < 1e-15);
  CHECK(std::abs(p[1]) < 1e-15);
  CHECK(std::abs(p[2] + 1.0) < 1e-15);
  for (int k = 3; k <= n; ++k) CHECK(std::abs(p[k]) < 1e-15);
}

TEST_CASE("div examples and round trip") {
  int n = 10;
  Series1 z = Series1::identity(n);
  Series1 one_minus = Series1::constant(1.0, n);
  one_minus[1] = -1.0;
  Series1 geo = div(z, one_minus);  // z + z^2 + ...
  CHECK(std::abs(geo[0]) < 1e-15);
  for (int k = 1; k <= n; ++k) CHECK(std::abs(geo[k] - 1.0) < 1e-14);

  Rng rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    Series1 a = random_series(rng, n);
    Series1 b = random_series(rng, n);
    b[0] += 1.5;  // keep the division well conditioned
    CHECK(div(a * b, b).max_coeff_difference(a) < 1e-10);
  }

  Series1 nonunit(n);
  nonunit[1] = 1.0;
  CHECK_THROWS_AS(div(z, nonunit), Error);
}

TEST_CASE("exp and log") {
  int n = 12;
  CHECK(exp_series(Series1(n)).max_coeff_difference(Series1::constant(1.0, n)) == 0.0);

  Series1 e = exp_series(Series1::identity(n));
  double fact = 1.0;
  for (int k = 1; k <= n; ++k) {
    fact *= k;
    CHECK(std::abs(e[k] - 1.0 / fact) < 1e-15);
  }

  Rng rng(22);
  for (int rep = 0; rep < 50; ++rep) {
    Series1 a = random_series(rng, n, 0.8);
    a[0] = Complex{testutil::uniform(rng, -0.5, 0.5), testutil::uniform(rng, -1.0, 1.0)};
    CHECK(log_series(exp_series(a)).max_coeff_difference(a) < 1e-12);
  }

  Series1 cut = Series1::constant(-1.0, n);
  CHECK_THROWS_AS(log_series(cut), Error);
}

TEST_CASE("compose examples") {
  int n = 10;
  Series1 z = Series1::identity(n);
  Series1 one_minus = Series1::constant(1.0, n);
  one_minus[1] = -1.0;
  Series1 f = div(z, one_minus);  // z/(1-z)
  Complex a{0.3, 0.4};
  Series1 az = z * a;
  Series1 comp = compose1(f, az);
  Complex ak = 1.0;
  for (int k = 1; k <= n; ++k) {
    ak *= a;
    CHECK(std::abs(comp[k] - ak) < 1e-13);
  }

  Rng rng(23);
  Series1 g = random_series(rng, n);
  CHECK(compose1(g, z).max_coeff_difference(g) < 1e-15);

  Series1 bad = Series1::constant(0.5, n);
  CHECK_THROWS_AS(compose1(g, bad), Error);
}

TEST_CASE("revert examples") {
  int n = 10;
  Series1 z = Series1::identity(n);
  Complex a{1.3, -0.4};
  CHECK(revert(z * a).max_coeff_difference(z * (1.0 / a)) < 1e-13);

  // z/(1-z) inverts to z/(1+z)
  Series1 one_minus = Series1::constant(1.0, n);
  one_minus[1] = -1.0;
  Series1 one_plus = Series1::constant(1.0, n);
  one_plus[1] = 1.0;
  CHECK(revert(div(z, one_minus)).max_coeff_difference(div(z, one_plus)) < 1e-12);

  CHECK_THROWS_AS(revert(Series1::constant(1.0, n)), Error);
  Series1 flat(n);
  flat[2] = 1.0;
  CHECK_THROWS_AS(revert(flat), Error);
}

TEST_CASE("revert of the unitary-drift exponential inverse, both routes") {
  // f = z exp((t/2)(1+z)/(1-z)) at t = 1, order 12; revert() itself
  // cross-checks the Lagrange route against the Newton route.
  int n = 12;
  double t = 1.0;
  Series1 z = Series1::identity(n);
  Series1 one_minus = Series1::constant(1.0, n);
  one_minus[1] = -1.0;
  Series1 one_plus = Series1::constant(1.0, n);
  one_plus[1] = 1.0;
  Series1 f = z * exp_series(div(one_plus, one_minus) * (t / 2.0));
  Series1 g = revert(f);
  CHECK(compose1(f, g).max_coeff_difference(z) < 1e-9);
  CHECK(compose1(g, f).max_coeff_difference(z) < 1e-9);
}

TEST_CASE("revert round trips on random series") {
  int n = 12;
  Rng rng(24);
  for (int rep = 0; rep < 30; ++rep) {
    // geometric-decay coefficients, the shape the transform pipeline produces
    Series1 f = random_series(rng, n, 0.3);
    for (int k = 2; k <= n; ++k) f[k] *= std::pow(0.6, k - 2);
    f[0] = 0.0;
    f[1] = Complex{testutil::uniform(rng, 0.8, 1.4), testutil::uniform(rng, -0.3, 0.3)};
    Series1 g = revert(f);
    Series1 z = Series1::identity(n);
    CHECK(compose1(f, g).max_coeff_difference(z) < 1e-9);
    CHECK(compose1(g, f).max_coeff_difference(z) < 1e-9);
  }
}

TEST_CASE("mul is commutative and associative at fixed order") {
  int n = 9;
  Rng rng(25);
  for (int rep = 0; rep < 30; ++rep) {
    Series1 a = random_series(rng, n), b = random_series(rng, n), c = random_series(rng, n);
    CHECK((a * b).max_coeff_difference(b * a) < 1e-14);
    CHECK(((a * b) * c).max_coeff_difference(a * (b * c)) < 1e-12);
    // determinism: repeating the same product is bit-identical
    CHECK((a * b).max_coeff_difference(a * b) == 0.0);
  }
}

TEST_CASE("two-variable arithmetic") {
  int n = 6;
  Rng rng(26);
  auto random2 = [&](double scale) {
    Series2 s(n);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q)
        s.at(p, q) =
            Complex{testutil::uniform(rng, -scale, scale), testutil::uniform(rng, -scale, scale)};
    return s;
  };
  for (int rep = 0; rep < 20; ++rep) {
    Series2 a = random2(1.0), b = random2(0.5);
    b.at(0, 0) += 1.5;  // keep the division well conditioned
    CHECK(div(a * b, b).max_coeff_difference(a) < 1e-10);
  }

  // exp of separable input factors
  Series2 ab(n);
  ab.at(1, 0) = 0.7;
  ab.at(0, 1) = Complex{0.0, -0.4};
  Series1 az = Series1::identity(n) * Complex{0.7, 0.0};
  Series1 bw = Series1::identity(n) * Complex{0.0, -0.4};
  CHECK(exp_series(ab).max_coeff_difference(outer_product(exp_series(az), exp_series(bw))) <
        1e-13);
}

TEST_CASE("compose2 against scalar evaluation") {
  int n = 8;
  Rng rng(27);
  Series2 outer(n);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q)
      outer.at(p, q) = Complex{testutil::uniform(rng, -1, 1), testutil::uniform(rng, -1, 1)};
  Series1 iz = random_series(rng, n, 0.3);
  iz[0] = 0.0;
  Series1 iw = random_series(rng, n, 0.3);
  iw[0] = 0.0;
  Series2 comp = compose2(outer, iz, iw);

  auto eval1 = [&](const Series1& s, Complex x) {
    Complex acc = 0.0;
    for (int k = s.order(); k >= 0; --k) acc = acc * x + s[k];
    return acc;
  };
  auto eval2 = [&](const Series2& s, Complex x, Complex y) {
    Complex acc = 0.0;
    for (int p = s.order(); p >= 0; --p) {
      Complex row = 0.0;
      for (int q = s.order(); q >= 0; --q) row = row * y + s.at(p, q);
      acc = acc * x + row;
    }
    return acc;
  };
  // tiny arguments so the truncation tail is negligible
  Complex x{0.01, 0.005}, y{-0.008, 0.01};
  Complex direct = eval2(outer, eval1(iz, x), eval1(iw, y));
  Complex composed = eval2(comp, x, y);
  CHECK(std::abs(direct - composed) < 1e-13);
}
