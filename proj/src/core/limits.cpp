#include "core/limits.hpp"

#include <algorithm>
#include <cmath>

namespace bitorus {

Complex centering_constant(const AtomicMeasure1D& nu, double eps) {
  require(eps > 0.0 && eps <= 1.0, Errc::invalid_argument, "centering cutoff must be in (0,1]");
  double acc = 0.0;
  for (const Atom1& a : nu.atoms())
    if (std::abs(a.angle) < eps) acc += a.weight * a.angle;
  return unit(acc);
}

AccompanyResult accompany(std::span<const AtomicMeasure2D> row, double eps) {
  AccompanyResult out;
  out.row.reserve(row.size());
  for (const AtomicMeasure2D& mu : row) {
    Complex b1 = centering_constant(mu.marginal(1), eps);
    Complex b2 = centering_constant(mu.marginal(2), eps);
    out.row.push_back(mu.rotate_angles(-std::arg(b1), -std::arg(b2)));
    out.b1.push_back(b1);
    out.b2.push_back(b2);
  }
  return out;
}

Complex h_function(const AtomicMeasure1D& nu, Complex z) {
  reject_near_torus(z, "h_function");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    Complex x = nu.point_at(i);
    acc += nu.atoms()[i].weight * (1.0 - z) * (1.0 - x) / (1.0 - z * x);
  }
  return acc;
}

namespace {

// (1 - Re t) d rho1 as an atomic measure (weights scaled; t = 1 atoms drop).
AtomicMeasure2D weight_by(const AtomicMeasure2D& rho, bool use_t) {
  std::vector<Atom2> atoms;
  for (const Atom2& a : rho.atoms()) {
    double factor = 1.0 - std::cos(use_t ? a.t_angle : a.s_angle);
    if (a.weight * factor > 0.0) atoms.push_back({a.s_angle, a.t_angle, a.weight * factor});
  }
  return AtomicMeasure2D::finite(std::move(atoms));
}

}  // namespace

AtomicMeasure2D levy_pairing_measure(const LevyData& ld) { return weight_by(ld.rho1, true); }

void validate_levy(const LevyData& ld) {
  require(std::abs(std::abs(ld.gamma1) - 1.0) <= 1e-12 && std::abs(std::abs(ld.gamma2) - 1.0) <= 1e-12,
          Errc::invalid_argument, "gamma parameters must have unit modulus");
  AtomicMeasure2D p1 = weight_by(ld.rho1, true);
  AtomicMeasure2D p2 = weight_by(ld.rho2, false);
  require(p1.size() == p2.size(), Errc::invalid_argument,
          "incompatible Levy data: weighted measures have different supports");
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const Atom2& a = p1.atoms()[i];
    const Atom2& b = p2.atoms()[i];
    bool same_support = std::abs(normalize_angle(a.s_angle - b.s_angle)) <= 1e-9 &&
                        std::abs(normalize_angle(a.t_angle - b.t_angle)) <= 1e-9;
    require(same_support && std::abs(a.weight - b.weight) <= 1e-10, Errc::invalid_argument,
            "incompatible Levy data: (1-Re t) d rho1 != (1-Re s) d rho2");
  }
}

Complex f_kernel(Complex z, Complex w) {
  require(std::abs(1.0 - z) > 1e-14 && std::abs(1.0 - w) > 1e-14, Errc::domain,
          "f kernel: pole at 1");
  return (1.0 - z * w) / ((1.0 - z) * (1.0 - w));
}

Complex F_levy(const LevyData& ld, Complex z, Complex w) {
  reject_near_torus(z, "F");
  reject_near_torus(w, "F");
  Complex acc = -ld.a;
  for (const Atom2& at : ld.rho1.atoms()) {
    Complex s = unit(at.s_angle), t = unit(at.t_angle);
    Complex zfrac = (1.0 + z * s) / (1.0 - z * s);
    acc += at.weight * zfrac * ((1.0 + w * t) / (1.0 - w * t)) * (1.0 - std::cos(at.t_angle));
    acc -= Complex{0.0, 1.0} * at.weight * zfrac * std::sin(at.t_angle);
  }
  for (const Atom2& at : ld.rho2.atoms()) {
    Complex t = unit(at.t_angle);
    acc -= Complex{0.0, 1.0} * at.weight * ((1.0 + w * t) / (1.0 - w * t)) * std::sin(at.s_angle);
  }
  return acc;
}

Map1 exponential_eta_inv(Complex gamma, const AtomicMeasure1D& sigma) {
  require(std::abs(std::abs(gamma) - 1.0) <= 1e-12, Errc::invalid_argument,
          "gamma must have unit modulus");
  return [gamma, sigma](Complex z) -> Jet {
    reject_near_torus(z, "exponential eta_inv");
    Complex i0 = 0.0, i1 = 0.0;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
      Complex x = sigma.point_at(k);
      double wgt = sigma.atoms()[k].weight;
      Complex den = 1.0 - x * z;
      i0 += wgt * (1.0 + x * z) / den;
      i1 += wgt * 2.0 * x / (den * den);
    }
    Complex e = std::exp(i0);
    return {gamma * z * e, gamma * e * (1.0 + z * i1)};
  };
}

TransformLaw id_law(const LevyData& ld) {
  validate_levy(ld);
  Map1 e1 = exponential_eta_inv(ld.gamma1, ld.rho1.marginal(1));
  Map1 e2 = exponential_eta_inv(ld.gamma2, ld.rho2.marginal(2));
  Map2 sig = [ld](Complex z, Complex w) { return std::exp(f_kernel(z, w) * F_levy(ld, z, w)); };
  // membership in the nonzero-mean class is checked, not assumed
  require(std::abs(sig(Complex{0, 0}, Complex{0, 0})) > kPxThreshold, Errc::not_in_px,
          "id law: sigma vanishes at the origin");
  double r = select_window_radius(
      {eta_window_probe(e1), eta_window_probe(e2), sigma_eval_probe(sig)});
  return {std::move(e1), std::move(e2), std::move(sig), r, LawProvenance::id_law};
}

namespace {

AtomicMeasure2D scale_measure(const AtomicMeasure2D& mu, double factor) {
  std::vector<Atom2> atoms = mu.atoms();
  for (Atom2& a : atoms) a.weight *= factor;
  return AtomicMeasure2D::finite(std::move(atoms));
}

}  // namespace

LevyData id_root(const LevyData& ld, long n) {
  require(n >= 2, Errc::invalid_argument, "id_root: n must be >= 2");
  validate_levy(ld);
  LevyData out;
  out.rho1 = scale_measure(ld.rho1, 1.0 / double(n));
  out.rho2 = scale_measure(ld.rho2, 1.0 / double(n));
  out.a = ld.a / double(n);
  out.gamma1 = unit(std::arg(ld.gamma1) / double(n));  // principal branch
  out.gamma2 = unit(std::arg(ld.gamma2) / double(n));
  return out;
}

LevyData normal_law_data(double a) {
  LevyData ld;
  double half = std::abs(a) / 2.0;
  if (half > 0.0) {
    ld.rho1 = AtomicMeasure2D::finite({{0.0, 0.0, half}});
    ld.rho2 = ld.rho1;
  } else {
    ld.rho1 = AtomicMeasure2D::finite({});
    ld.rho2 = ld.rho1;
  }
  ld.a = a;
  return ld;
}

LevyData poisson_law_data(double rate, const AtomicMeasure2D& jump) {
  require(rate >= 0.0, Errc::invalid_argument, "poisson rate must be nonnegative");
  require(jump.is_probability(), Errc::invalid_argument, "jump distribution must be a probability");
  LevyData ld;
  std::vector<Atom2> r1, r2;
  double a = 0.0, im1 = 0.0, im2 = 0.0;
  for (const Atom2& at : jump.atoms()) {
    double w = rate * at.weight;
    double fs = 1.0 - std::cos(at.s_angle);
    double ft = 1.0 - std::cos(at.t_angle);
    if (w * fs > 0.0) r1.push_back({at.s_angle, at.t_angle, w * fs});
    if (w * ft > 0.0) r2.push_back({at.s_angle, at.t_angle, w * ft});
    a += w * std::sin(at.s_angle) * std::sin(at.t_angle);
    im1 += w * std::sin(at.s_angle);
    im2 += w * std::sin(at.t_angle);
  }
  ld.rho1 = AtomicMeasure2D::finite(std::move(r1));
  ld.rho2 = AtomicMeasure2D::finite(std::move(r2));
  ld.a = a;
  ld.gamma1 = unit(-im1);
  ld.gamma2 = unit(-im2);
  return ld;
}

TransformLaw id_from_levy_poisson_approx(const AtomicMeasure2D& rho1, const AtomicMeasure2D& rho2,
                                         double a, int m_index) {
  require(m_index >= 1, Errc::invalid_argument, "approximation index must be >= 1");
  LevyData ld{rho1, rho2, a, Complex{1.0, 0.0}, Complex{1.0, 0.0}};
  validate_levy(ld);
  AtomicMeasure2D rho = levy_pairing_measure(ld);
  if (rho.size() == 0) {
    // Support analysis: with a vanishing pairing measure, rho1 may only
    // charge {t = 1} and rho2 only {s = 1}.
    for (const Atom2& at : rho1.atoms())
      require(std::abs(at.t_angle) <= 1e-12, Errc::invalid_argument,
              "zero pairing measure with off-support rho1 mass");
    for (const Atom2& at : rho2.atoms())
      require(std::abs(at.s_angle) <= 1e-12, Errc::invalid_argument,
              "zero pairing measure with off-support rho2 mass");
    return id_law(normal_law_data(a));
  }
  const double cut = 1.0 / double(m_index);
  double rate = 0.0, am = 0.0;
  std::vector<Atom2> jump;
  for (const Atom2& at : rho.atoms()) {
    if (std::abs(at.s_angle) <= cut || std::abs(at.t_angle) <= cut) continue;
    double w = at.weight / ((1.0 - std::cos(at.s_angle)) * (1.0 - std::cos(at.t_angle)));
    rate += w;
    am += w * std::sin(at.s_angle) * std::sin(at.t_angle);
    jump.push_back({at.s_angle, at.t_angle, w});
  }
  if (rate <= 0.0) return id_law(normal_law_data(a));
  for (Atom2& at : jump) at.weight /= rate;
  TransformLaw poi = id_law(poisson_law_data(rate, AtomicMeasure2D::probability(std::move(jump))));
  TransformLaw nrm = id_law(normal_law_data(a - am));
  return bifree_convolve(poi, nrm);
}

std::vector<double> levy_sigma_density(const Map1& eta_inv, double r, int grid_size) {
  require(r > 0.0 && r < 1.0, Errc::invalid_argument, "radius must be in (0,1)");
  require(grid_size >= 4, Errc::invalid_argument, "grid too small");
  std::vector<double> out(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    Complex v = eta_inv(r * unit(2.0 * kPi * double(k) / grid_size)).v;
    out[std::size_t(k)] = std::log(std::abs(v) / r) / (2.0 * kPi);
  }
  return out;
}

std::vector<double> levy_sigma_density(const FreeLaw1D& law, double r, int grid_size) {
  return levy_sigma_density(law.eta_inv, r, grid_size);
}

double levy_sigma_integral(std::span<const double> density,
                           const std::function<double(double)>& test_fn) {
  double acc = 0.0;
  const int n = int(density.size());
  for (int k = 0; k < n; ++k) acc += density[std::size_t(k)] * test_fn(2.0 * kPi * double(k) / n);
  return acc * 2.0 * kPi / double(n);
}

RowSums limit_parameters(std::span<const AtomicMeasure2D> row, Complex lambda1, Complex lambda2,
                         double eps) {
  AccompanyResult acc = accompany(row, eps);
  RowSums out;
  std::vector<Atom2> r1, r2;
  double asum = 0.0, phase1 = 0.0, phase2 = 0.0;
  for (std::size_t k = 0; k < acc.row.size(); ++k) {
    const AtomicMeasure2D& nu = acc.row[k];
    for (const Atom2& at : nu.atoms()) {
      double ws = at.weight * (1.0 - std::cos(at.s_angle));
      double wt = at.weight * (1.0 - std::cos(at.t_angle));
      if (ws > 0.0) r1.push_back({at.s_angle, at.t_angle, ws});
      if (wt > 0.0) r2.push_back({at.s_angle, at.t_angle, wt});
      asum += at.weight * std::sin(at.s_angle) * std::sin(at.t_angle);
    }
    phase1 += nu.marginal(1).moment(1).imag() + std::arg(acc.b1[k]);
    phase2 += nu.marginal(2).moment(1).imag() + std::arg(acc.b2[k]);
  }
  out.rho1_sum = AtomicMeasure2D::finite(std::move(r1));
  out.rho2_sum = AtomicMeasure2D::finite(std::move(r2));
  out.a_sum = asum;
  out.gamma1 = std::conj(lambda1) * unit(-phase1);
  out.gamma2 = std::conj(lambda2) * unit(-phase2);
  return out;
}

AtomicMeasure2D normal_array_measure(double rate, long n) {
  require(rate > 0.0 && double(n) > rate, Errc::invalid_argument,
          "normal array needs n > rate > 0");
  double ang = std::atan2(std::sqrt(rate / double(n)), std::sqrt(1.0 - rate / double(n)));
  return AtomicMeasure2D::probability({{ang, ang, 0.5}, {-ang, -ang, 0.5}});
}

AtomicMeasure2D poisson_array_measure(double rate, const AtomicMeasure2D& jump, long n) {
  require(rate > 0.0 && double(n) > rate, Errc::invalid_argument,
          "poisson array needs n > rate > 0");
  require(jump.is_probability(), Errc::invalid_argument, "jump distribution must be a probability");
  std::vector<Atom2> atoms = jump.atoms();
  for (Atom2& a : atoms) a.weight *= rate / double(n);
  atoms.push_back({0.0, 0.0, 1.0 - rate / double(n)});
  return AtomicMeasure2D::probability(std::move(atoms));
}

AtomicMeasure2D default_poisson_jump() {
  return AtomicMeasure2D::probability({{kPi / 2.0, kPi, 0.5}, {-kPi / 2.0, kPi, 0.5}});
}

std::vector<SweepRow> limit_sweep(const std::function<AtomicMeasure2D(long)>& row_measure,
                                  std::span<const long> levels, const TransformLaw& target,
                                  int order, int grid_size) {
  require(!levels.empty(), Errc::invalid_argument, "no levels requested");
  EvaluationGrid grid;
  grid.size = grid_size;
  MomentTable2D target_table = extract_moments(target, grid, order);

  // Validate the power shortcut against repeated pairwise convolution once,
  // at the smallest requested level (capped for cost). Both extractions use
  // the same radii so the comparison carries a common noise floor.
  long v = std::min<long>(*std::min_element(levels.begin(), levels.end()), 8);
  {
    TransformLaw base = make_transform_law(row_measure(v));
    TransformLaw folded = base;
    for (long k = 1; k < v; ++k) folded = bifree_convolve(folded, base);
    TransformLaw powered = bifree_power(base, v);
    EvaluationGrid vg = grid;
    vg.radius_z = 0.45 * std::min(powered.window_r, folded.window_r);
    vg.radius_w = vg.radius_z;
    MomentTable2D a = extract_moments(powered, vg, order);
    MomentTable2D b = extract_moments(folded, vg, order);
    double dev = MomentTable2D::max_difference(a, b);
    double tol = std::max(
        1e-9, 40.0 * extraction_noise_estimate(vg.radius_z, vg.radius_z * 8.0 / 9.0, order,
                                               grid_size));
    require(dev <= tol, Errc::diagnostics,
            "power shortcut disagrees with pairwise convolution by " + fmt17(dev));
  }

  std::vector<SweepRow> out;
  for (long n : levels) {
    TransformLaw law = bifree_power(make_transform_law(row_measure(n)), n);
    MomentTable2D table = extract_moments(law, grid, order);
    out.push_back({n, MomentTable2D::max_difference(table, target_table)});
  }
  return out;
}

std::vector<HaarCheckRow> haar_limit_check(const std::function<AtomicMeasure2D(long)>& mu_n,
                                           std::span<const long> levels,
                                           const std::function<long(long)>& k_n, int order,
                                           int grid_size) {
  std::vector<HaarCheckRow> out;
  EvaluationGrid grid;
  grid.size = grid_size;
  for (long n : levels) {
    AtomicMeasure2D mu = mu_n(n);
    long k = k_n(n);
    HaarCheckRow row;
    row.level = n;
    row.m11_pow = std::pow(std::abs(mu.m11()), double(k));
    row.m1_pow = std::pow(std::abs(mu.marginal(1).mean()), double(k));
    row.m2_pow = std::pow(std::abs(mu.marginal(2).mean()), double(k));
    row.envelope = std::max({row.m11_pow, row.m1_pow, row.m2_pow});
    MomentTable2D table = extract_moments(bifree_power(make_transform_law(mu), k), grid, order);
    double worst = 0.0;
    for (long p = -order; p <= order; ++p)
      for (long q = -order; q <= order; ++q) {
        if (p == 0 && q == 0) continue;
        worst = std::max(worst, std::abs(table.at(p, q)));
      }
    row.max_offcenter_moment = worst;
    out.push_back(row);
  }
  return out;
}

}  // namespace bitorus
