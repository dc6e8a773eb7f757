#include <doctest.h>

#include <thread>

#include "core/transforms.hpp"
#include "testutil.hpp"

using namespace bitorus;
using testutil::Rng;

TEST_CASE("psi examples and symmetries") {
  AtomicMeasure2D d11 = AtomicMeasure2D::point(0.0, 0.0);
  CHECK(std::abs(psi2(d11, 0.5, 0.5) - 1.0) < 1e-15);
  CHECK(std::abs(psi2(d11, 0.0, 0.3)) == 0.0);

  AtomicMeasure1D da = AtomicMeasure1D::point(1.2);
  Complex a = unit(1.2), z{0.3, -0.2};
  CHECK(std::abs(psi1(da, z) - z * a / (1.0 - z * a)) < 1e-15);
  CHECK(std::abs(psi1(da, 0.0)) == 0.0);

  Rng rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    AtomicMeasure1D nu = testutil::random_measure1(rng);
    AtomicMeasure2D mu = testutil::random_measure2(rng);
    AtomicMeasure1D m1 = mu.marginal(1), m2 = mu.marginal(2);
    for (int pt = 0; pt < 100; ++pt) {
      Complex x = testutil::random_offtorus_point(rng);
      Complex y = testutil::random_offtorus_point(rng);
      // psi(z) + 1 = -conj(psi(1/conj z))
      CHECK(std::abs(psi1(nu, x) + 1.0 + std::conj(psi1(nu, circle_reflect(x)))) < 1e-12);
      // two-variable reflection
      Complex lhs = psi2(mu, x, y) + psi1(m1, x) + psi1(m2, y) + 1.0;
      CHECK(std::abs(lhs - std::conj(psi2(mu, circle_reflect(x), circle_reflect(y)))) < 1e-12);
      // H = psi + psi1 + psi2 + 1
      CHECK(std::abs(h2(mu, x, y) - lhs) < 1e-12);
    }
  }
}

TEST_CASE("H examples") {
  AtomicMeasure2D d11 = AtomicMeasure2D::point(0.0, 0.0);
  CHECK(std::abs(h2(d11, 0.5, 0.5) - 4.0) < 1e-14);
  Rng rng(32);
  AtomicMeasure2D mu = testutil::random_measure2(rng);
  CHECK(std::abs(h2(mu, 0.0, 0.0) - 1.0) < 1e-14);
}

TEST_CASE("limit values far from the circle") {
  Rng rng(33);
  for (int rep = 0; rep < 5; ++rep) {
    AtomicMeasure2D mu = testutil::random_measure2(rng);
    AtomicMeasure1D m1 = mu.marginal(1), m2 = mu.marginal(2);
    Complex big = 1e6 * unit(testutil::uniform(rng, -kPi, kPi));
    Complex z = testutil::random_point_in_disk(rng, 0.1, 0.8);
    CHECK(std::abs(psi1(m1, big) + 1.0) < 1e-5);
    CHECK(std::abs(psi2(mu, z, big) + psi1(m1, z)) < 1e-5);
    CHECK(std::abs(psi2(mu, big, z) + psi1(m2, z)) < 1e-5);
    CHECK(std::abs(psi2(mu, big, -big) - 1.0) < 1e-5);
  }
}

TEST_CASE("near-torus evaluation is refused") {
  AtomicMeasure2D mu = AtomicMeasure2D::point(0.3, 0.4);
  CHECK_THROWS_AS(psi2(mu, Complex{1.0, 0.0}, Complex{0.5, 0.0}), Error);
  CHECK_THROWS_AS(psi2(mu, unit(0.4) * (1.0 + 5e-10), Complex{0.5, 0.0}), Error);
  CHECK_THROWS_AS(h2(mu, Complex{0.2, 0.0}, unit(-1.0)), Error);
  CHECK_THROWS_AS(psi1(mu.marginal(1), unit(2.0)), Error);
}

TEST_CASE("eta examples, contraction and reflection") {
  AtomicMeasure1D da = AtomicMeasure1D::point(0.8);
  Complex a = unit(0.8);
  Rng rng(34);
  for (int i = 0; i < 20; ++i) {
    Complex z = testutil::random_point_in_disk(rng, 0.0, 0.95);
    CHECK(std::abs(eta(da, z) - a * z) < 1e-14);
  }
  for (int rep = 0; rep < 10; ++rep) {
    AtomicMeasure1D nu = testutil::random_measure1(rng);
    for (int i = 0; i < 100; ++i) {
      Complex z = testutil::random_point_in_disk(rng, 0.01, 0.999);
      Complex ez = eta(nu, z);
      CHECK(std::abs(ez) <= std::abs(z) * (1.0 + 1e-12));
      // reflection: eta(z) = conj(1/eta(1/conj z)), so |eta| >= |z| outside
      Complex zo = circle_reflect(z);
      Complex eo = eta(nu, zo);
      CHECK(std::abs(eo) >= std::abs(zo) * (1.0 - 1e-12));
      CHECK(std::abs(ez - std::conj(1.0 / eo)) < 1e-12);
    }
  }
}

TEST_CASE("eta_inv: point mass, round trip, series agreement, reflection") {
  DomainWindow win{0.5};
  AtomicMeasure1D da = AtomicMeasure1D::point(-0.6);
  Complex a = unit(-0.6);
  Rng rng(35);
  for (int i = 0; i < 20; ++i) {
    Complex z = testutil::random_point_in_disk(rng, 0.0, 0.45);
    CHECK(std::abs(eta_inv_pointwise(da, z, win) - z / a) < 1e-13);
  }

  for (int rep = 0; rep < 10; ++rep) {
    AtomicMeasure1D nu = testutil::random_measure1_px(rng);
    Map1 einv = atomic_eta_inv(nu);
    double r = select_window_radius({eta_window_probe(einv)});
    for (int i = 0; i < 40; ++i) {
      Complex z = std::polar(r / 2.0, testutil::uniform(rng, -kPi, kPi));
      Complex y = einv(z).v;
      CHECK(std::abs(eta(nu, y) - z) < 1e-12);
      // reflection symmetry of the inverse
      Complex yo = einv(circle_reflect(z)).v;
      CHECK(std::abs(y - std::conj(1.0 / yo)) < 1e-10);
    }

    // agreement with the series reversion of the eta expansion; the series
    // comparison needs coefficients that still converge at |z| = 0.1, so it
    // runs on a concentrated measure.
    AtomicMeasure1D conc = testutil::random_measure1_concentrated(rng);
    int order = 10;
    Series1 psis(order);
    for (int p = 1; p <= order; ++p) psis[p] = conc.moment(p);
    Series1 etas = div(psis, Series1::constant(1.0, order) + psis);
    Series1 y = revert(etas);
    Map1 cinv = atomic_eta_inv(conc);
    for (int i = 0; i < 20; ++i) {
      Complex z = std::polar(0.1, testutil::uniform(rng, -kPi, kPi));
      Complex acc = 0.0;
      for (int k = order; k >= 1; --k) acc = (acc + y[k]) * z;
      CHECK(std::abs(acc - cinv(z).v) < 1e-9);
    }
  }
}

TEST_CASE("eta_inv rejects mean-zero input") {
  AtomicMeasure1D centered = AtomicMeasure1D::probability({{0.0, 0.5}, {kPi, 0.5}});
  CHECK_THROWS_AS(atomic_eta_inv(centered), Error);
}

TEST_CASE("sigma: point masses and product measures give 1") {
  Rng rng(36);
  AtomicMeasure2D d = AtomicMeasure2D::point(0.9, -2.3);
  TransformLaw law = make_transform_law(d);
  for (int i = 0; i < 30; ++i) {
    Complex z = std::polar(testutil::uniform(rng, 0.05, 0.9 * law.window_r),
                           testutil::uniform(rng, -kPi, kPi));
    Complex w = std::polar(testutil::uniform(rng, 0.05, 0.9 * law.window_r),
                           testutil::uniform(rng, -kPi, kPi));
    if (i % 4 == 1) z = circle_reflect(z);
    if (i % 4 == 2) w = circle_reflect(w);
    if (i % 4 == 3) {
      z = circle_reflect(z);
      w = circle_reflect(w);
    }
    CHECK(std::abs(law.sigma(z, w) - 1.0) < 1e-12);
  }

  for (int rep = 0; rep < 5; ++rep) {
    AtomicMeasure1D alpha = testutil::random_measure1_px(rng);
    AtomicMeasure1D beta = testutil::random_measure1_px(rng);
    TransformLaw plaw = make_transform_law(product_measure(alpha, beta));
    for (int i = 0; i < 20; ++i) {
      Complex z = std::polar(testutil::uniform(rng, 0.0, 0.9 * plaw.window_r),
                             testutil::uniform(rng, -kPi, kPi));
      Complex w = std::polar(testutil::uniform(rng, 0.0, 0.9 * plaw.window_r),
                             testutil::uniform(rng, -kPi, kPi));
      CHECK(std::abs(plaw.sigma(z, w) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("sigma at the origin equals the mean-moment ratio") {
  Rng rng(37);
  for (int rep = 0; rep < 10; ++rep) {
    AtomicMeasure2D mu = testutil::random_measure2_px(rng);
    TransformLaw law = make_transform_law(mu);
    Complex expect = mu.m11() / (mu.marginal(1).mean() * mu.marginal(2).mean());
    CHECK(std::abs(law.sigma(Complex{0, 0}, Complex{0, 0}) - expect) < 1e-12);
  }
}

TEST_CASE("sigma reflection symmetry and far-field limit") {
  Rng rng(38);
  for (int rep = 0; rep < 8; ++rep) {
    AtomicMeasure2D mu = testutil::random_measure2_px(rng);
    TransformLaw law = make_transform_law(mu);
    double r = law.window_r;
    for (int i = 0; i < 25; ++i) {
      Complex z = std::polar(testutil::uniform(rng, 0.05, 0.9 * r),
                             testutil::uniform(rng, -kPi, kPi));
      Complex w = std::polar(testutil::uniform(rng, 0.05, 0.9 * r),
                             testutil::uniform(rng, -kPi, kPi));
      if (i % 2) z = circle_reflect(z);
      if (i % 3 == 0) w = circle_reflect(w);
      Complex s = law.sigma(z, w);
      Complex srefl = law.sigma(circle_reflect(z), circle_reflect(w));
      CHECK(std::abs(s - 1.0 / std::conj(srefl)) < 1e-10);
    }
    // sigma -> 1 as z -> 0 and |w| -> infinity
    CHECK(std::abs(law.sigma(Complex{1e-7, 0.0}, Complex{1e6, 0.0}) - 1.0) < 1e-5);
  }
}

TEST_CASE("s-transform substitution consistency") {
  Rng rng(39);
  for (int rep = 0; rep < 8; ++rep) {
    AtomicMeasure2D mu = testutil::random_measure2_px(rng);
    TransformLaw law = make_transform_law(mu);
    AtomicMeasure1D m1 = mu.marginal(1);
    Map1 e1 = atomic_eta_inv(m1);
    for (int i = 0; i < 20; ++i) {
      Complex z = testutil::random_point_in_disk(rng, 0.02, 0.2 * law.window_r);
      Complex w = testutil::random_point_in_disk(rng, 0.02, 0.2 * law.window_r);
      // S(z,w) = sigma(z/(1+z), w/(1+w))
      Complex s = s_transform(mu, z, w);
      Complex sub = law.sigma(z / (1.0 + z), w / (1.0 + w));
      CHECK(std::abs(s - sub) < 1e-10);
      // psi-inverse relation psi^{-1}(z) = eta^{-1}(z/(1+z))
      Complex p1 = e1(z / (1.0 + z)).v;
      CHECK(std::abs(psi1(m1, p1) - z) < 1e-12);
    }
    CHECK_THROWS_AS(s_transform(mu, Complex{0, 0}, Complex{0.1, 0}), Error);
  }
  // S of a point mass is constantly one near the origin
  AtomicMeasure2D d = AtomicMeasure2D::point(0.4, 0.5);
  CHECK(std::abs(s_transform(d, Complex{0.05, 0.02}, Complex{-0.03, 0.04}) - 1.0) < 1e-12);
}

TEST_CASE("opposite transform: point mass, reflection identity, substitution") {
  AtomicMeasure2D d = AtomicMeasure2D::point(1.1, 0.7);
  CHECK(std::abs(sigma_op_pointwise(d, Complex{0.05, 0.01}, Complex{0.03, -0.02}) - 1.0) < 1e-12);

  Rng rng(40);
  for (int rep = 0; rep < 8; ++rep) {
    AtomicMeasure2D mu = testutil::random_measure2_px(rng);
    AtomicMeasure2D star = mu.reflect();
    TransformLaw law = make_transform_law(mu);
    double r = 0.5 * law.window_r;
    for (int i = 0; i < 25; ++i) {
      Complex z = testutil::random_point_in_disk(rng, 0.02, r);
      Complex w = testutil::random_point_in_disk(rng, 0.02, r);
      // opposite transform of the reflected measure vs sigma at (z, 1/w)
      Complex lhs = sigma_op_pointwise(star, z, w);
      Complex rhs = law.sigma(z, 1.0 / w);
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
    // outside the bidisk: rejected
    CHECK_THROWS_AS(sigma_op_pointwise(mu, Complex{1.2, 0.0}, Complex{0.1, 0.0}), Error);
  }
}

TEST_CASE("sigma series engine") {
  // point mass: the constant series 1
  AtomicMeasure2D d = AtomicMeasure2D::point(-0.5, 1.9);
  Series2 sd = sigma_series(d, 8);
  CHECK(std::abs(sd.at(0, 0) - 1.0) < 1e-13);
  for (int p = 0; p <= 8; ++p)
    for (int q = 0; q <= 8; ++q)
      if (p + q > 0) CHECK(std::abs(sd.at(p, q)) < 1e-12);

  Rng rng(41);
  for (int rep = 0; rep < 6; ++rep) {
    AtomicMeasure2D mu = testutil::random_measure2_convergent(rng);
    Series2 s = sigma_series(mu, 12);
    Complex expect = mu.m11() / (mu.marginal(1).mean() * mu.marginal(2).mean());
    CHECK(std::abs(s.at(0, 0) - expect) < 1e-12);

    // cross-agreement with the pointwise engine at |z| = |w| = 0.05
    TransformLaw law = make_transform_law(mu);
    for (int i = 0; i < 12; ++i) {
      Complex z = std::polar(0.05, testutil::uniform(rng, -kPi, kPi));
      Complex w = std::polar(0.05, testutil::uniform(rng, -kPi, kPi));
      Complex acc = 0.0;
      for (int p = s.order(); p >= 0; --p) {
        Complex row = 0.0;
        for (int q = s.order(); q >= 0; --q) row = row * w + s.at(p, q);
        acc = acc * z + row;
      }
      CHECK(std::abs(acc - law.sigma(z, w)) < 1e-9);
    }
  }
}

TEST_CASE("evaluators are safe to share across threads") {
  Rng rng(42);
  AtomicMeasure2D mu = testutil::random_measure2_convergent(rng);
  TransformLaw law = make_transform_law(mu);
  std::vector<Complex> zs, ws;
  for (int i = 0; i < 64; ++i) {
    zs.push_back(std::polar(0.8 * law.window_r * (0.2 + 0.01 * i), 0.3 * i));
    ws.push_back(std::polar(0.8 * law.window_r * (0.9 - 0.01 * i), -0.2 * i));
  }
  std::vector<Complex> serial(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) serial[i] = law.sigma(zs[i], ws[i]);

  std::vector<Complex> parallel(zs.size());
  std::vector<std::thread> workers;
  for (int t = 0; t < 4; ++t)
    workers.emplace_back([&, t] {
      for (std::size_t i = std::size_t(t); i < zs.size(); i += 4)
        parallel[i] = law.sigma(zs[i], ws[i]);
    });
  for (std::thread& w : workers) w.join();
  for (std::size_t i = 0; i < zs.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("component classification") {
  CHECK(classify_component(Complex{0.3, 0}, Complex{0, 0.5}) == DomainComponent::DD);
  CHECK(classify_component(Complex{0.3, 0}, Complex{0, 2.0}) == DomainComponent::DU);
  CHECK(classify_component(Complex{-3, 0}, Complex{0, 0.5}) == DomainComponent::UD);
  CHECK(classify_component(Complex{-3, 0}, Complex{2, 2}) == DomainComponent::UU);
  CHECK(component_tag(DomainComponent::DU) == std::string("DU"));
  CHECK_THROWS_AS(classify_component(unit(0.3), Complex{0, 0.5}), Error);
}

TEST_CASE("transform law rejects non-px measures") {
  AtomicMeasure2D centered = AtomicMeasure2D::probability({{0.0, 0.0, 0.5}, {kPi, 0.0, 0.5}});
  CHECK_THROWS_AS(make_transform_law(centered), Error);
}
