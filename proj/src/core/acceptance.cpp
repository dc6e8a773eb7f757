#include "core/acceptance.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "core/limits.hpp"

// Acceptance suite: one self-contained check per shipped guarantee, each with
// its tolerance pinned here. Randomized checks draw from seeded generators;
// the draw families are chosen so every pipeline stays within its certified
// window (redraws are part of the family definition, not of the tolerance).

namespace bitorus::acceptance {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Complex disk_point(Rng& rng, double rmin, double rmax) {
  return std::polar(uniform(rng, rmin, rmax), uniform(rng, -kPi, kPi));
}

Complex offtorus_point(Rng& rng) {
  Complex z = disk_point(rng, 0.05, 0.9);
  return uniform_int(rng, 0, 1) ? circle_reflect(z) : z;
}

AtomicMeasure1D random_measure1(Rng& rng, double spread = kPi, int max_atoms = 4) {
  int n = uniform_int(rng, 1, max_atoms);
  std::vector<Atom1> atoms;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = uniform(rng, 0.2, 1.0);
    atoms.push_back({uniform(rng, -spread, spread), w});
    mass += w;
  }
  for (Atom1& a : atoms) a.weight /= mass;
  return AtomicMeasure1D::probability(std::move(atoms));
}

AtomicMeasure2D random_measure2(Rng& rng, double spread = kPi, int max_atoms = 4) {
  int n = uniform_int(rng, 1, max_atoms);
  std::vector<Atom2> atoms;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = uniform(rng, 0.2, 1.0);
    atoms.push_back({uniform(rng, -spread, spread), uniform(rng, -spread, spread), w});
    mass += w;
  }
  for (Atom2& a : atoms) a.weight /= mass;
  return AtomicMeasure2D::probability(std::move(atoms));
}

// Measures with strong mean moments whose transform window certifies at the
// full starting radius; order-6 extraction then resolves 1e-9 corners.
AtomicMeasure2D random_wide_window(Rng& rng) {
  for (int tries = 0; tries < 200; ++tries) {
    AtomicMeasure2D mu = random_measure2(rng, 0.8);
    if (std::abs(mu.marginal(1).mean()) < 0.6 || std::abs(mu.marginal(2).mean()) < 0.6 ||
        std::abs(mu.m11()) < 0.5)
      continue;
    try {
      if (make_transform_law(mu).window_r >= 0.5) return mu;
    } catch (const Error&) {
    }
  }
  return AtomicMeasure2D::probability({{uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3), 1.0}});
}

AtomicMeasure2D random_px(Rng& rng) {
  for (int tries = 0; tries < 500; ++tries) {
    AtomicMeasure2D mu = random_measure2(rng);
    if (std::abs(mu.marginal(1).mean()) >= 0.3 && std::abs(mu.marginal(2).mean()) >= 0.3 &&
        std::abs(mu.m11()) >= 0.3)
      return mu;
  }
  return random_wide_window(rng);
}

AtomicMeasure1D random_measure1_strong(Rng& rng) {
  for (int tries = 0; tries < 200; ++tries) {
    AtomicMeasure1D nu = random_measure1(rng, 0.45, 3);
    if (std::abs(nu.mean()) >= 0.85) return nu;
  }
  return AtomicMeasure1D::point(uniform(rng, -0.3, 0.3));
}

// Dominant atom plus satellites totalling under half a percent: a satellite
// of mass w folds the eta-transform ~2 sqrt(w) inside the unit circle, so
// this family keeps the radius-0.8 probe circle reachable in every direction.
AtomicMeasure2D random_nearpoint(Rng& rng) {
  double w0 = uniform(rng, 0.996, 0.999);
  std::vector<Atom2> atoms{{uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4), w0}};
  int n = uniform_int(rng, 1, 2);
  for (int i = 0; i < n; ++i)
    atoms.push_back({uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi), (1.0 - w0) / n});
  return AtomicMeasure2D::probability(std::move(atoms));
}

std::pair<AtomicMeasure2D, AtomicMeasure2D> random_convolvable_pair(Rng& rng) {
  for (int tries = 0; tries < 60; ++tries) {
    AtomicMeasure2D a = random_wide_window(rng);
    AtomicMeasure2D b = random_wide_window(rng);
    try {
      if (bifree_convolve(make_transform_law(a), make_transform_law(b)).window_r >= 0.5)
        return {a, b};
    } catch (const Error&) {
    }
  }
  return {AtomicMeasure2D::point(uniform(rng, -1, 1), uniform(rng, -1, 1)),
          AtomicMeasure2D::point(uniform(rng, -1, 1), uniform(rng, -1, 1))};
}

MomentTable2D extract(const TransformLaw& law, int order, ExtractionDiagnostics* diag = nullptr,
                      int grid = 256) {
  EvaluationGrid g;
  g.size = grid;
  return extract_moments(law, g, order, diag);
}

// Sigma as the kernel quotient with no component shortcut; exercises the
// reflection symmetry as a genuine identity between independent evaluations.
Complex sigma_quotient(const AtomicMeasure2D& mu, const Map1& e1, const Map1& e2, Complex z,
                       Complex w) {
  Jet j1 = e1(z), j2 = e2(w);
  Complex u1 = std::abs(z) < 1e-14 ? j1.d : j1.v / z;
  Complex u2 = std::abs(w) < 1e-14 ? j2.d : j2.v / w;
  Complex kk = 0.0, hh = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Complex g = mu.atoms()[i].weight / ((1.0 - j1.v * mu.s_at(i)) * (1.0 - j2.v * mu.t_at(i)));
    hh += g;
    kk += g * mu.s_at(i) * mu.t_at(i);
  }
  return u1 * u2 * kk / hh;
}

struct Harness {
  std::ostream& out;
  int failures = 0;

  void run(int number, const std::string& label, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const Error& e) {
      detail = std::string("exception: ") + e.what();
    }
    out << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << label;
    if (!detail.empty()) out << " (" << detail << ")";
    out << "\n";
    out.flush();
    if (!ok) ++failures;
  }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

bool criterion_transform_identities(std::string& detail) {
  Rng rng(101);
  double worst_identity = 0.0, worst_limit = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    AtomicMeasure2D mu = random_measure2(rng);
    AtomicMeasure1D m1 = mu.marginal(1), m2 = mu.marginal(2);
    for (int i = 0; i < 100; ++i) {
      Complex z = offtorus_point(rng), w = offtorus_point(rng);
      Complex lhs = psi2(mu, z, w) + psi1(m1, z) + psi1(m2, w) + 1.0;
      worst_identity = std::max(worst_identity, std::abs(h2(mu, z, w) - lhs));
      worst_identity = std::max(
          worst_identity, std::abs(lhs - std::conj(psi2(mu, circle_reflect(z), circle_reflect(w)))));
      worst_identity = std::max(
          worst_identity, std::abs(psi1(m1, z) + 1.0 + std::conj(psi1(m1, circle_reflect(z)))));
      // eta contraction / expansion and its reflection
      Complex zi = disk_point(rng, 0.01, 0.99);
      Complex ei = eta(m1, zi), eo = eta(m1, circle_reflect(zi));
      if (std::abs(ei) > std::abs(zi) * (1.0 + 1e-12) ||
          std::abs(eo) < (1.0 / std::abs(zi)) * (1.0 - 1e-12))
        return false;
      worst_identity = std::max(worst_identity, std::abs(ei - std::conj(1.0 / eo)));
    }
    // far-field limit values
    Complex big = 1e6 * unit(uniform(rng, -kPi, kPi));
    Complex zs = disk_point(rng, 0.1, 0.8);
    worst_limit = std::max(worst_limit, std::abs(psi1(m1, big) + 1.0));
    worst_limit = std::max(worst_limit, std::abs(psi2(mu, zs, big) + psi1(m1, zs)));
    worst_limit = std::max(worst_limit, std::abs(psi2(mu, big, zs) + psi1(m2, zs)));
    worst_limit = std::max(worst_limit, std::abs(psi2(mu, big, -big) - 1.0));
  }
  // inverse-eta and sigma reflection symmetries on certified windows
  for (int rep = 0; rep < 20; ++rep) {
    AtomicMeasure2D mu = random_px(rng);
    TransformLaw law = make_transform_law(mu);
    Map1 e1 = atomic_eta_inv(mu.marginal(1)), e2 = atomic_eta_inv(mu.marginal(2));
    for (int i = 0; i < 20; ++i) {
      Complex z = std::polar(uniform(rng, 0.05, 0.9 * law.window_r), uniform(rng, -kPi, kPi));
      Complex zo = circle_reflect(z);
      // reflected inverse solves the original equation
      worst_identity = std::max(worst_identity, std::abs(eta(mu.marginal(1), e1(zo).v) - zo));
      Complex w = std::polar(uniform(rng, 0.05, 0.9 * law.window_r), uniform(rng, -kPi, kPi));
      if (i % 2) w = circle_reflect(w);
      Complex s = sigma_quotient(mu, e1, e2, z, w);
      Complex sr = sigma_quotient(mu, e1, e2, circle_reflect(z), circle_reflect(w));
      worst_identity = std::max(worst_identity, std::abs(s - 1.0 / std::conj(sr)));
    }
    worst_limit = std::max(
        worst_limit, std::abs(law.sigma(Complex{1e-7, 0.0}, Complex{1e6, 0.0}) - 1.0));
  }
  detail = "max identity residual " + fmt(worst_identity) + ", max limit residual " +
           fmt(worst_limit);
  return worst_identity <= 1e-10 && worst_limit <= 1e-5;
}

bool criterion_point_mass(std::string& detail) {
  Rng rng(102);
  double worst_moment = 0.0, worst_sigma = 0.0;
  for (int rep = 0; rep < 4; ++rep) {
    double a1 = uniform(rng, -kPi, kPi), a2 = uniform(rng, -kPi, kPi);
    AtomicMeasure2D mu = random_wide_window(rng);
    TransformLaw delta = make_transform_law(AtomicMeasure2D::point(a1, a2));
    TransformLaw conv = bifree_convolve(delta, make_transform_law(mu));
    MomentTable2D t = extract(conv, 6);
    for (long p = -6; p <= 6; ++p)
      for (long q = -6; q <= 6; ++q)
        worst_moment = std::max(
            worst_moment,
            std::abs(t.at(p, q) - unit(a1 * double(p) + a2 * double(q)) * mu.moment(p, q)));
    for (int i = 0; i < 16; ++i) {
      Complex z = std::polar(uniform(rng, 0.05, 0.45), uniform(rng, -kPi, kPi));
      Complex w = std::polar(uniform(rng, 0.05, 0.45), uniform(rng, -kPi, kPi));
      if (i % 4 == 1) z = circle_reflect(z);
      if (i % 4 == 2) w = circle_reflect(w);
      if (i % 4 == 3) {
        z = circle_reflect(z);
        w = circle_reflect(w);
      }
      worst_sigma = std::max(worst_sigma, std::abs(delta.sigma(z, w) - 1.0));
    }
  }
  detail = "max moment error " + fmt(worst_moment) + ", max |sigma - 1| " + fmt(worst_sigma);
  return worst_moment <= 1e-9 && worst_sigma <= 1e-12;
}

bool criterion_product_factorization(std::string& detail) {
  Rng rng(103);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    AtomicMeasure1D a1 = random_measure1_strong(rng), b1 = random_measure1_strong(rng);
    AtomicMeasure1D a2 = random_measure1_strong(rng), b2 = random_measure1_strong(rng);
    TransformLaw law = bifree_convolve(make_transform_law(product_measure(a1, b1)),
                                       make_transform_law(product_measure(a2, b2)));
    MomentTable2D t = extract(law, 6);
    std::vector<Complex> ma = extract_moments_1d(free_convolve(free_law(a1), free_law(a2)), 6);
    std::vector<Complex> mb = extract_moments_1d(free_convolve(free_law(b1), free_law(b2)), 6);
    auto lift = [](const std::vector<Complex>& v, long k) {
      return k >= 0 ? v[std::size_t(k)] : std::conj(v[std::size_t(-k)]);
    };
    for (long p = -6; p <= 6; ++p)
      for (long q = -6; q <= 6; ++q)
        worst = std::max(worst, std::abs(t.at(p, q) - lift(ma, p) * lift(mb, q)));
  }
  detail = "max factorization error " + fmt(worst);
  return worst <= 1e-8;
}

bool criterion_engine_agreement(std::string& detail) {
  Rng rng(104);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    auto [m1, m2] = random_convolvable_pair(rng);
    Series2 s = bifree_moments_series(m1, m2, 6);
    MomentTable2D t = extract(bifree_convolve(make_transform_law(m1), make_transform_law(m2)), 6);
    for (int p = 0; p <= 6; ++p)
      for (int q = 0; q <= 6; ++q) worst = std::max(worst, std::abs(t.at(p, q) - s.at(p, q)));
  }
  detail = "max cross-engine error " + fmt(worst);
  return worst <= 1e-8;
}

bool criterion_algebraic_laws(std::string& detail) {
  Rng rng(105);
  double worst = 0.0;
  for (int rep = 0; rep < 3; ++rep) {
    AtomicMeasure2D m1 = random_wide_window(rng);
    AtomicMeasure2D m2 = random_wide_window(rng);
    AtomicMeasure2D m3 = random_wide_window(rng);
    TransformLaw l1 = make_transform_law(m1), l2 = make_transform_law(m2),
                 l3 = make_transform_law(m3);
    MomentTable2D ab = extract(bifree_convolve(l1, l2), 4);
    MomentTable2D ba = extract(bifree_convolve(l2, l1), 4);
    worst = std::max(worst, MomentTable2D::max_difference(ab, ba));
    MomentTable2D left = extract(bifree_convolve(bifree_convolve(l1, l2), l3), 4);
    MomentTable2D right = extract(bifree_convolve(l1, bifree_convolve(l2, l3)), 4);
    worst = std::max(worst, MomentTable2D::max_difference(left, right));
  }
  detail = "max commutativity/associativity deviation " + fmt(worst);
  return worst <= 1e-8;
}

bool criterion_output_validity(std::string& detail) {
  Rng rng(106);
  double worst_herm = 0.0, worst_abs = 0.0, worst_eig = 0.0, worst_poisson = 1e300;
  for (int rep = 0; rep < 4; ++rep) {
    AtomicMeasure2D m1 = random_nearpoint(rng);
    AtomicMeasure2D m2 = random_nearpoint(rng);
    TransformLaw law = bifree_convolve(make_transform_law(m1), make_transform_law(m2));
    ExtractionDiagnostics diag;
    MomentTable2D t = extract(law, 6, &diag);
    worst_herm = std::max({worst_herm, diag.max_hermitian_residual, t.hermitian_residual()});
    worst_abs = std::max(worst_abs, t.max_abs() - 1.0);
    worst_eig = std::min(worst_eig, diag.min_moment_matrix_eigenvalue);
    worst_poisson = std::min(worst_poisson, poisson_positivity_min(law, 64, 0.8));
  }
  detail = "hermitian " + fmt(worst_herm) + ", |m|-1 " + fmt(worst_abs) + ", min eig " +
           fmt(worst_eig) + ", min poisson " + fmt(worst_poisson);
  return worst_herm <= 1e-8 && worst_abs <= 1e-8 && worst_eig >= -1e-7 && worst_poisson >= -1e-7;
}

bool criterion_opposite_suite(std::string& detail) {
  Rng rng(107);
  double worst = 0.0;
  for (int rep = 0; rep < 4; ++rep) {
    AtomicMeasure2D m1 = random_px(rng);
    AtomicMeasure2D m2 = random_px(rng);
    TransformLaw l1 = make_transform_law(m1);
    TransformLaw conv = bifree_convolve(l1, make_transform_law(m2));
    double r = 0.4 * std::min(l1.window_r, conv.window_r);
    Map2 op_reflected = opposite_convolve(m1.reflect(), m2.reflect());
    for (int i = 0; i < 25; ++i) {
      Complex z = disk_point(rng, 0.02, r);
      Complex w = disk_point(rng, 0.02, r);
      // reflected-measure opposite transform against sigma at (z, 1/w)
      worst = std::max(worst,
                       std::abs(sigma_op_pointwise(m1.reflect(), z, w) - l1.sigma(z, 1.0 / w)));
      // the reflection intertwines the two convolutions
      worst = std::max(worst, std::abs(op_reflected(z, w) - conv.sigma(z, 1.0 / w)));
    }
  }
  detail = "max reflection-identity residual " + fmt(worst);
  return worst <= 1e-9;
}

bool criterion_centered_oracle(std::string& detail) {
  // four-atom centered measures with m11 = i/2 and 1/2
  AtomicMeasure2D a = AtomicMeasure2D::probability({{0.0, kPi / 2, 0.375},
                                                    {kPi, -kPi / 2, 0.375},
                                                    {0.0, -kPi / 2, 0.125},
                                                    {kPi, kPi / 2, 0.125}});
  AtomicMeasure2D b = AtomicMeasure2D::probability(
      {{0.0, 0.0, 0.375}, {kPi, kPi, 0.375}, {0.0, kPi, 0.125}, {kPi, 0.0, 0.125}});
  HaarTestResult r = haar_test(a, b, 4);
  if (r.is_haar) return false;
  double worst = 0.0;
  Complex prod = 1.0;
  for (int p = 1; p <= 4; ++p) {
    prod *= a.m11() * b.m11();
    worst = std::max(worst, std::abs(r.diagonal[std::size_t(p - 1)] - prod));
    // the product formula for the matching alternating word
    CenteredWord word;
    for (int k = 0; k < p; ++k) {
      word.left_labels.push_back(2);
      word.left_labels.push_back(1);
      word.right_labels.push_back(2);
      word.right_labels.push_back(1);
      word.pair_covariances.push_back(b.m11());
      word.pair_covariances.push_back(a.m11());
    }
    worst =
        std::max(worst, std::abs(centered_alternating_moment(word) - r.diagonal[std::size_t(p - 1)]));
    // length mismatch kills the expectation
    CenteredWord longer = word;
    longer.right_labels.push_back(longer.right_labels.back() == 1 ? 2 : 1);
    longer.pair_covariances.push_back(Complex{1.0, 0.0});
    if (centered_alternating_moment(longer) != Complex{0.0, 0.0}) return false;
  }
  if (std::abs(r.diagonal[0] - Complex{0.0, 0.25}) > 1e-15) return false;
  if (std::abs(r.diagonal[1] - Complex{-1.0 / 16.0, 0.0}) > 1e-15) return false;

  // absorption when either diagonal moment vanishes
  AtomicMeasure2D haarish = AtomicMeasure2D::probability(
      {{0.0, kPi / 2, 0.25}, {kPi, -kPi / 2, 0.25}, {0.0, -kPi / 2, 0.25}, {kPi, kPi / 2, 0.25}});
  HaarTestResult h = haar_test(a, haarish, 4);
  if (!h.is_haar) return false;
  for (const Complex& v : h.diagonal)
    if (v != Complex{0.0, 0.0}) return false;
  detail = "closed-form diagonal residual " + fmt(worst);
  return worst <= 1e-15;  // exact up to one rounding of the complex products
}

bool criterion_normal_sweep(std::string& detail) {
  std::vector<long> levels{8, 16, 32, 64};
  TransformLaw target = id_law(normal_law_data(1.0));
  std::vector<SweepRow> rows =
      limit_sweep([](long n) { return normal_array_measure(1.0, n); }, levels, target, 4, 128);
  std::ostringstream ss;
  bool monotone = true, ratios_ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ss << (i ? " " : "") << rows[i].max_error;
    if (i) {
      monotone = monotone && rows[i].max_error < rows[i - 1].max_error;
      double ratio = rows[i - 1].max_error / rows[i].max_error;
      ratios_ok = ratios_ok && ratio >= 1.6 && ratio <= 2.4;
    }
  }
  detail = "errors " + ss.str();
  return monotone && ratios_ok && rows.back().max_error <= 5e-2;
}

bool criterion_poisson_sweep(std::string& detail) {
  std::vector<long> levels{8, 16, 32, 64};
  AtomicMeasure2D jump = default_poisson_jump();
  TransformLaw target = id_law(poisson_law_data(1.0, jump));
  std::vector<SweepRow> rows = limit_sweep(
      [&jump](long n) { return poisson_array_measure(1.0, jump, n); }, levels, target, 4, 128);
  std::ostringstream ss;
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ss << (i ? " " : "") << rows[i].max_error;
    if (i) monotone = monotone && rows[i].max_error < rows[i - 1].max_error;
  }
  detail = "errors " + ss.str();
  return monotone && rows.back().max_error <= 5e-2;
}

bool criterion_infinite_divisibility(std::string& detail) {
  double worst = 0.0;
  {
    MomentTable2D n1 = extract(id_law(normal_law_data(1.0)), 4);
    MomentTable2D n2 = extract(bifree_power(id_law(normal_law_data(0.5)), 2), 4);
    worst = std::max(worst, MomentTable2D::max_difference(n1, n2));
  }
  AtomicMeasure2D jump =
      AtomicMeasure2D::probability({{kPi / 4, -kPi / 6, 0.5}, {-kPi / 4, kPi / 5, 0.5}});
  {
    TransformLaw whole = id_law(poisson_law_data(2.0, jump));
    TransformLaw squared = bifree_power(id_law(poisson_law_data(1.0, jump)), 2);
    EvaluationGrid g;
    g.radius_z = g.radius_w = 0.45 * std::min(whole.window_r, squared.window_r);
    worst = std::max(worst, MomentTable2D::max_difference(extract_moments(whole, g, 4),
                                                          extract_moments(squared, g, 4)));
  }
  // root / reconvolution round trip on generic compatible data
  LevyData generic = poisson_law_data(1.1, jump);
  generic.a += 0.4;  // extra correlation keeps the data off the pure-jump family
  generic.gamma1 = unit(0.3);
  generic.gamma2 = unit(-0.2);
  MomentTable2D direct = extract(id_law(generic), 4);
  for (long n : {2L, 3L}) {
    MomentTable2D recon = extract(bifree_power(id_law(id_root(generic, n)), n), 4);
    worst = std::max(worst, MomentTable2D::max_difference(direct, recon));
  }
  detail = "max table difference " + fmt(worst);
  return worst <= 1e-8;
}

bool criterion_poisson_approximation(std::string& detail) {
  // atomic pairing measure supported away from the {1}-slices
  std::vector<Atom2> base{{1.1, -0.9, 0.4}, {-1.4, 2.0, 0.3}, {0.7, 1.9, 0.2}};
  std::vector<Atom2> r1, r2;
  for (const Atom2& a : base) {
    r1.push_back({a.s_angle, a.t_angle, a.weight / (1.0 - std::cos(a.t_angle))});
    r2.push_back({a.s_angle, a.t_angle, a.weight / (1.0 - std::cos(a.s_angle))});
  }
  AtomicMeasure2D rho1 = AtomicMeasure2D::finite(r1);
  AtomicMeasure2D rho2 = AtomicMeasure2D::finite(r2);
  double a = 0.35;
  LevyData ld{rho1, rho2, a, Complex{1, 0}, Complex{1, 0}};
  TransformLaw approx = id_from_levy_poisson_approx(rho1, rho2, a, 3);
  Rng rng(112);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    Complex z = disk_point(rng, 0.02, 0.4 * approx.window_r);
    Complex w = disk_point(rng, 0.02, 0.4 * approx.window_r);
    worst = std::max(worst,
                     std::abs(approx.sigma(z, w) - std::exp(f_kernel(z, w) * F_levy(ld, z, w))));
  }
  // vanishing pairing measure returns the pure normal law exactly
  TransformLaw nrm = id_from_levy_poisson_approx(AtomicMeasure2D::finite({}),
                                                 AtomicMeasure2D::finite({}), 0.8, 4);
  double worst_normal = 0.0;
  for (int i = 0; i < 20; ++i) {
    Complex z = disk_point(rng, 0.02, 0.1);
    Complex w = disk_point(rng, 0.02, 0.1);
    worst_normal = std::max(worst_normal,
                            std::abs(nrm.sigma(z, w) - std::exp(-0.8 * f_kernel(z, w))));
    Jet e = nrm.eta_inv1(z);
    Complex expect = z * std::exp(0.4 * (1.0 + z) / (1.0 - z));
    worst_normal = std::max(worst_normal, std::abs(e.v - expect));
  }
  detail = "sigma residual " + fmt(worst) + ", degenerate-case residual " + fmt(worst_normal);
  return worst <= 1e-10 && worst_normal <= 1e-13;
}

bool criterion_haar_convergence(std::string& detail) {
  AtomicMeasure2D mu = AtomicMeasure2D::probability({{0.0, 0.0, 0.9},
                                                     {kPi / 2, kPi / 2, 0.025},
                                                     {kPi / 2, -kPi / 2, 0.025},
                                                     {-kPi / 2, kPi / 2, 0.025},
                                                     {-kPi / 2, -kPi / 2, 0.025}});
  std::vector<long> levels{4, 8, 16, 32};
  std::vector<HaarCheckRow> rows =
      haar_limit_check([&mu](long) { return mu; }, levels, [](long n) { return n; }, 2, 128);
  bool ok = true;
  std::ostringstream ss;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const HaarCheckRow& r = rows[i];
    ok = ok && std::abs(r.m11_pow - std::pow(0.9, double(r.level))) < 1e-12;
    ok = ok && std::abs(r.m1_pow - std::pow(0.9, double(r.level))) < 1e-12;
    ok = ok && std::abs(r.m2_pow - std::pow(0.9, double(r.level))) < 1e-12;
    ok = ok && r.max_offcenter_moment <= 10.0 * r.envelope;
    if (i) ok = ok && r.envelope < rows[i - 1].envelope;
    ss << (i ? " " : "") << r.max_offcenter_moment << "/" << r.envelope;
  }
  ok = ok && rows.back().envelope < 0.04;
  detail = "moment/envelope " + ss.str();
  return ok;
}

bool criterion_h_function(std::string& detail) {
  Rng rng(114);
  double worst_sym = 0.0, worst_ratio = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    // near-degenerate centered measure
    std::vector<Atom1> atoms;
    int n = uniform_int(rng, 2, 3);
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      double w = uniform(rng, 0.2, 1.0);
      atoms.push_back({uniform(rng, -0.3, 0.3), w});
      mass += w;
    }
    for (Atom1& a : atoms) a.weight /= mass;
    AtomicMeasure1D nu = AtomicMeasure1D::probability(atoms);
    Complex b = centering_constant(nu, 1.0);
    for (Atom1& a : atoms) a.angle -= std::arg(b);
    AtomicMeasure1D centered = AtomicMeasure1D::probability(std::move(atoms));
    for (int i = 0; i < 100; ++i) {
      Complex z = disk_point(rng, 0.0, 0.97);
      Complex h = h_function(centered, z);
      if (h.real() <= 0.0) return false;  // positivity on the disk
      worst_sym = std::max(worst_sym,
                           std::abs(h + std::conj(h_function(centered, circle_reflect(z)))));
    }
    for (int i = 0; i < 200; ++i) {
      Complex z = disk_point(rng, 0.0, 0.5);
      Complex h = h_function(centered, z);
      if (std::abs(h.real()) > 1e-13)
        worst_ratio = std::max(worst_ratio, std::abs(h.imag()) / std::abs(h.real()));
    }
  }
  detail = "symmetry residual " + fmt(worst_sym) + ", empirical ratio bound " + fmt(worst_ratio);
  return worst_sym <= 1e-12 && worst_ratio <= 25.0;
}

}  // namespace

int run_all(std::ostream& out) {
  Harness h{out};
  h.run(1, "transform identities, symmetries and far-field limits", criterion_transform_identities);
  h.run(2, "point-mass convolution rotates moments; its sigma is 1", criterion_point_mass);
  h.run(3, "product measures factor through the marginal engines", criterion_product_factorization);
  h.run(4, "pointwise/DFT engine agrees with the formal-series engine", criterion_engine_agreement);
  h.run(5, "convolution is commutative and associative on moment tables", criterion_algebraic_laws);
  h.run(6, "extracted tables are genuine: symmetry, bounds, positivity", criterion_output_validity);
  h.run(7, "opposite-transform reflection identities", criterion_opposite_suite);
  h.run(8, "centered-word product formula and uniform-law absorption", criterion_centered_oracle);
  h.run(9, "concentrating two-atom arrays converge to the normal law", criterion_normal_sweep);
  h.run(10, "jump arrays converge to the compound-Poisson law", criterion_poisson_sweep);
  h.run(11, "infinitely divisible laws match their reconvolved roots", criterion_infinite_divisibility);
  h.run(12, "compound-Poisson approximation recovers exp(f F)", criterion_poisson_approximation);
  h.run(13, "powers with decaying mean moments approach the uniform law", criterion_haar_convergence);
  h.run(14, "h-function positivity, symmetry and ratio bound", criterion_h_function);
  return h.failures;
}

}  // namespace bitorus::acceptance
