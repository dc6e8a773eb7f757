#include "core/convolution.hpp"

#include <algorithm>
#include <cmath>

namespace bitorus {

namespace {

// Extraction is refused when the estimated corner-cell noise (recovery
// amplification times rounding, averaged down by the grid) would make the
// values meaningless for every consumer tolerance in use.
constexpr double kNoiseCap = 1e-3;
constexpr double kDftRounding = 1e-15;

constexpr double kQuadrantTieTol = 1e-6;

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

}  // namespace

FreeLaw1D free_law(const AtomicMeasure1D& nu) {
  Map1 e = atomic_eta_inv(nu);
  double r = select_window_radius({eta_window_probe(e)});
  return {std::move(e), r};
}

FreeLaw1D free_convolve(const FreeLaw1D& a, const FreeLaw1D& b) {
  Map1 e = product_eta_inv(a.eta_inv, b.eta_inv);
  double r = select_window_radius({eta_window_probe(e)}, std::min(a.window_r, b.window_r));
  return {std::move(e), r};
}

FreeLaw1D free_power(const FreeLaw1D& a, long n) {
  if (n == 1) return a;
  Map1 e = power_eta_inv(a.eta_inv, n);
  double r = select_window_radius({eta_window_probe(e)}, a.window_r);
  return {std::move(e), r};
}

std::vector<Complex> extract_moments_1d(const FreeLaw1D& law, int order, int grid_size,
                                        double radius) {
  require(order >= 1, Errc::invalid_argument, "order must be >= 1");
  require(power_of_two(grid_size) && grid_size >= 4 * order, Errc::invalid_argument,
          "grid size must be a power of two with at least 4 points per order");
  double r = std::min(radius, 0.45 * law.window_r);
  require(std::pow(1.0 / r, order) * kDftRounding / grid_size <= kNoiseCap,
          Errc::invalid_argument,
          "extraction refused: the top-order cell would be dominated by noise");
  ForwardEta fwd(law.eta_inv, 0.1 * law.window_r);
  const int m = grid_size;
  std::vector<Complex> psi(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    Complex y = fwd(r * unit(2.0 * kPi * double(j) / m));
    psi[std::size_t(j)] = y / (1.0 - y);
  }
  std::vector<Complex> out(std::size_t(order) + 1, Complex{0, 0});
  out[0] = 1.0;
  for (int p = 1; p <= order; ++p) {
    Complex acc = 0.0;
    for (int j = 0; j < m; ++j)
      acc += psi[std::size_t(j)] * unit(-2.0 * kPi * double(j) * double(p) / m);
    out[std::size_t(p)] = acc / (double(m) * std::pow(r, p));
  }
  return out;
}

std::vector<Complex> free_moments_series(const AtomicMeasure1D& a, const AtomicMeasure1D& b,
                                         int order) {
  const int n = order + 1;
  auto eta_series = [n](const AtomicMeasure1D& nu) {
    Series1 psi(n);
    for (int p = 1; p <= n; ++p) psi[p] = nu.moment(p);
    return div(psi, Series1::constant(1.0, n) + psi);
  };
  Series1 ya = revert(eta_series(a));
  Series1 yb = revert(eta_series(b));
  Series1 prod = ya * yb;
  Series1 yc(n);
  for (int k = 0; k < n; ++k) yc[k] = prod[k + 1];  // divide by z
  Series1 etac = revert(yc);
  Series1 psic = div(etac, Series1::constant(1.0, n) - etac);
  std::vector<Complex> out(std::size_t(order) + 1, Complex{0, 0});
  out[0] = 1.0;
  for (int p = 1; p <= order; ++p) out[std::size_t(p)] = psic[p];
  return out;
}

namespace {

TransformLaw combine_laws(Map1 e1, Map1 e2, Map2 sig, double start_r) {
  double r = select_window_radius(
      {eta_window_probe(e1), eta_window_probe(e2), sigma_eval_probe(sig)}, start_r);
  return {std::move(e1), std::move(e2), std::move(sig), r, LawProvenance::convolution};
}

}  // namespace

TransformLaw bifree_convolve(const TransformLaw& a, const TransformLaw& b) {
  Map2 sig = [sa = a.sigma, sb = b.sigma](Complex z, Complex w) { return sa(z, w) * sb(z, w); };
  return combine_laws(product_eta_inv(a.eta_inv1, b.eta_inv1),
                      product_eta_inv(a.eta_inv2, b.eta_inv2), std::move(sig),
                      std::min(a.window_r, b.window_r));
}

TransformLaw bifree_power(const TransformLaw& a, long n) {
  require(n >= 1, Errc::invalid_argument, "bifree_power: exponent must be >= 1");
  if (n == 1) return a;
  Map2 sig = [sa = a.sigma, n](Complex z, Complex w) { return std::pow(sa(z, w), double(n)); };
  return combine_laws(power_eta_inv(a.eta_inv1, n), power_eta_inv(a.eta_inv2, n), std::move(sig),
                      a.window_r);
}

TransformLaw rotate_law(const TransformLaw& a, Complex lambda1, Complex lambda2) {
  // delta point-mass factor: sigma is rotation invariant.
  TransformLaw out = a;
  out.eta_inv1 = scaled_eta_inv(a.eta_inv1, lambda1);
  out.eta_inv2 = scaled_eta_inv(a.eta_inv2, lambda2);
  return out;
}

namespace {

Complex reconstruct_from_parts(Complex y1, Complex y2, Complex sig) {
  Complex p1 = y1 / (1.0 - y1);
  Complex p2 = y2 / (1.0 - y2);
  Complex e = y1 * y2 * sig;
  require(std::abs(1.0 - e) > 1e-12, Errc::window, "psi reconstruction: 1 - eta eta sigma vanished");
  return (p1 + p2 + 1.0) * e / (1.0 - e);
}

}  // namespace

Complex psi_reconstruct(const TransformLaw& law, Complex z, Complex w) {
  ForwardEta f1(law.eta_inv1, 0.1 * law.window_r);
  ForwardEta f2(law.eta_inv2, 0.1 * law.window_r);
  Complex y1 = f1(z), y2 = f2(w);
  return reconstruct_from_parts(y1, y2, law.sigma(y1, y2));
}

double extraction_noise_estimate(double rz, double rw, int order, int grid_size) {
  return std::pow(1.0 / rz, order) * std::pow(1.0 / rw, order) * kDftRounding / grid_size;
}

std::string ExtractionDiagnostics::to_json() const {
  std::string s = "{";
  s += "\"window_radius\":" + fmt17(window_r);
  s += ",\"grid_radius_z\":" + fmt17(grid_radius_z);
  s += ",\"grid_radius_w\":" + fmt17(grid_radius_w);
  s += ",\"grid_size\":" + std::to_string(grid_size);
  s += ",\"max_hermitian_residual\":" + fmt17(max_hermitian_residual);
  s += ",\"max_marginal_discrepancy\":" + fmt17(max_marginal_discrepancy);
  s += ",\"mass_error\":" + fmt17(mass_error);
  s += ",\"min_moment_matrix_eigenvalue\":" + fmt17(min_moment_matrix_eigenvalue);
  s += "}";
  return s;
}

namespace {

// Partial DFT of an m x m sample grid: coefficients at frequencies
// 0..order and m-order..m-1 per axis, indexed here by signed values -order..order.
struct PartialDft {
  int m;
  int order;
  std::vector<Complex> c;  // (2*order+1)^2

  Complex& at(int a, int b) {
    return c[std::size_t(a + order) * std::size_t(2 * order + 1) + std::size_t(b + order)];
  }
  Complex at(int a, int b) const {
    return c[std::size_t(a + order) * std::size_t(2 * order + 1) + std::size_t(b + order)];
  }
};

PartialDft partial_dft(const std::vector<Complex>& f, int m, int order) {
  PartialDft out{m, order, std::vector<Complex>(std::size_t(2 * order + 1) * std::size_t(2 * order + 1))};
  // Stage 1: transform along the second axis for the needed frequencies.
  std::vector<Complex> stage(std::size_t(m) * std::size_t(2 * order + 1));
  std::vector<Complex> tw(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) tw[std::size_t(k)] = unit(-2.0 * kPi * double(k) / m);
  for (int j = 0; j < m; ++j) {
    const Complex* row = &f[std::size_t(j) * std::size_t(m)];
    for (int b = -order; b <= order; ++b) {
      Complex acc = 0.0;
      for (int k = 0; k < m; ++k) {
        long e = (long(k) * long((b + m) % m)) % m;
        acc += row[k] * tw[std::size_t(e)];
      }
      stage[std::size_t(j) * std::size_t(2 * order + 1) + std::size_t(b + order)] = acc;
    }
  }
  // Stage 2: transform along the first axis.
  for (int a = -order; a <= order; ++a)
    for (int b = -order; b <= order; ++b) {
      Complex acc = 0.0;
      for (int j = 0; j < m; ++j) {
        long e = (long(j) * long((a + m) % m)) % m;
        acc += stage[std::size_t(j) * std::size_t(2 * order + 1) + std::size_t(b + order)] *
               tw[std::size_t(e)];
      }
      out.at(a, b) = acc / (double(m) * double(m));
    }
  return out;
}

struct CirclePsi {
  std::vector<Complex> y;    // forward eta along the circle
  std::vector<Complex> psi;  // y/(1-y)
};

CirclePsi marginal_circle(const ForwardEta& fwd, double radius, int m) {
  CirclePsi out;
  out.y.resize(std::size_t(m));
  out.psi.resize(std::size_t(m));
  for (int j = 0; j < m; ++j) {
    Complex yj = fwd(radius * unit(2.0 * kPi * double(j) / m));
    out.y[std::size_t(j)] = yj;
    out.psi[std::size_t(j)] = yj / (1.0 - yj);
  }
  return out;
}

}  // namespace

MomentTable2D extract_moments(const TransformLaw& law, const EvaluationGrid& grid, int order,
                              ExtractionDiagnostics* diag) {
  require(order >= 1, Errc::invalid_argument, "order must be >= 1");
  const int m = grid.size;
  require(power_of_two(m) && m >= 4 * order, Errc::invalid_argument,
          "grid size must be a power of two with at least 4 points per order");
  // Radii stay at or below half the window; 0.45 r keeps them strictly
  // inside the band the window probes certified. Mirror radii must differ:
  // with rz == rw the mixed-quadrant grid hits points with z w = 1, where the
  // reconstruction quotient degenerates for near-rotation laws.
  const double rz = std::min(grid.radius_z, 0.45 * law.window_r);
  double rw = std::min(grid.radius_w, 0.45 * law.window_r);
  if (std::abs(rz - rw) < 1e-9 * rz) rw *= 8.0 / 9.0;
  require(rz > 0 && rw > 0 && rz < 1 && rw < 1, Errc::invalid_argument, "grid radii must be in (0,1)");
  require(std::pow(1.0 / rz, order) * std::pow(1.0 / rw, order) * kDftRounding / m <= kNoiseCap,
          Errc::invalid_argument,
          "extraction refused: the top-order cell would be dominated by noise");

  ForwardEta f1(law.eta_inv1, 0.1 * law.window_r);
  ForwardEta f2(law.eta_inv2, 0.1 * law.window_r);

  // One quadrant: sample psi on the product circle grid, strip the marginal
  // content, and read the mixed coefficients off the partial DFT.
  auto quadrant = [&](const CirclePsi& zc, const CirclePsi& wc, bool z_out, bool w_out) {
    std::vector<Complex> f(std::size_t(m) * std::size_t(m));
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Complex y1 = zc.y[std::size_t(j)], y2 = wc.y[std::size_t(k)];
        Complex psi = reconstruct_from_parts(y1, y2, law.sigma(y1, y2));
        if (z_out) psi += zc.psi[std::size_t(j)];
        if (w_out) psi += wc.psi[std::size_t(k)];
        if (z_out && w_out) psi += 1.0;
        f[std::size_t(j) * std::size_t(m) + std::size_t(k)] = psi;
      }
    return partial_dft(f, m, order);
  };

  // A grid can land on an isolated zero of the reconstruction denominator;
  // re-sample the whole grid at slightly shrunk radii when that happens.
  CirclePsi zin, zout, win, wout;
  PartialDft dd{}, du{}, ud{}, uu{};
  double rz_used = rz, rw_used = rw;
  for (int attempt = 0;; ++attempt) {
    try {
      zin = marginal_circle(f1, rz_used, m);
      zout = marginal_circle(f1, 1.0 / rz_used, m);
      win = marginal_circle(f2, rw_used, m);
      wout = marginal_circle(f2, 1.0 / rw_used, m);
      dd = quadrant(zin, win, false, false);
      du = quadrant(zin, wout, false, true);
      ud = quadrant(zout, win, true, false);
      uu = quadrant(zout, wout, true, true);
      break;
    } catch (const Error& e) {
      if (e.code() != Errc::window || attempt >= 2) throw;
      rz_used *= 0.91;
      rw_used *= 0.93;
    }
  }

  double herm = 0.0;
  MomentTable2D table(order);
  table.set(0, 0, 1.0);
  auto scale = [&](int p, int q) { return std::pow(rz_used, p) * std::pow(rw_used, q); };
  for (int p = 1; p <= order; ++p)
    for (int q = 1; q <= order; ++q) {
      Complex mdd = dd.at(p, q) / scale(p, q);
      Complex muu = uu.at(-p, -q) / scale(p, q);
      Complex mdu = -du.at(p, -q) / scale(p, q);
      Complex mud = -ud.at(-p, q) / scale(p, q);
      herm = std::max(herm, std::abs(mdd - std::conj(muu)));
      herm = std::max(herm, std::abs(mdu - std::conj(mud)));
      // Both quadrants estimate the same moment; keep the average.
      Complex pos = 0.5 * (mdd + std::conj(muu));
      Complex mix = 0.5 * (mdu + std::conj(mud));
      table.set(p, q, pos);
      table.set(-p, -q, std::conj(pos));
      table.set(p, -q, mix);
      table.set(-p, q, std::conj(mix));
    }
  // Opposite-quadrant estimates must agree up to the DFT noise floor of the
  // corner cell (amplification times rounding, averaged over the grid).
  double noise_floor = 50.0 * extraction_noise_estimate(rz_used, rw_used, order, m);
  require(herm <= std::max(kQuadrantTieTol, noise_floor), Errc::diagnostics,
          "quadrant cross-estimates disagree by " + fmt17(herm));

  // Marginal rows from the 1-D engine, estimated on both sides of the circle.
  double marg = 0.0;
  auto marginal_fill = [&](const CirclePsi& in, const CirclePsi& out, double r, bool first) {
    for (int p = 1; p <= order; ++p) {
      Complex cpos = 0.0, cneg = 0.0;
      for (int j = 0; j < m; ++j) {
        Complex w = unit(-2.0 * kPi * double(j) * double(p) / m);
        cpos += in.psi[std::size_t(j)] * w;
        cneg += (out.psi[std::size_t(j)] + 1.0) * std::conj(w);
      }
      Complex mpos = cpos / (double(m) * std::pow(r, p));
      Complex mneg = -cneg / (double(m) * std::pow(r, p));
      marg = std::max(marg, std::abs(mpos - std::conj(mneg)));
      Complex v = 0.5 * (mpos + std::conj(mneg));
      if (first) {
        table.set(p, 0, v);
        table.set(-p, 0, std::conj(v));
      } else {
        table.set(0, p, v);
        table.set(0, -p, std::conj(v));
      }
    }
  };
  marginal_fill(zin, zout, rz_used, true);
  marginal_fill(win, wout, rw_used, false);

  if (diag) {
    diag->window_r = law.window_r;
    diag->grid_radius_z = rz_used;
    diag->grid_radius_w = rw_used;
    diag->grid_size = m;
    diag->max_hermitian_residual = herm;
    diag->max_marginal_discrepancy = marg;
    // After subtraction the zero-frequency cell of the far quadrant carries
    // exactly (extracted mass - 1).
    diag->mass_error = std::abs(uu.at(0, 0));
    diag->min_moment_matrix_eigenvalue = table.min_moment_matrix_eigenvalue();
  }
  return table;
}

Series2 bifree_moments_series(const AtomicMeasure2D& a, const AtomicMeasure2D& b, int order) {
  require(a.in_class_px() && b.in_class_px(), Errc::not_in_px,
          "series convolution requires nonzero mean moments");
  const int n = order + 1;
  auto eta_series = [n](const AtomicMeasure1D& nu) {
    Series1 psi(n);
    for (int p = 1; p <= n; ++p) psi[p] = nu.moment(p);
    return div(psi, Series1::constant(1.0, n) + psi);
  };
  auto convolved_eta = [&](const AtomicMeasure1D& na, const AtomicMeasure1D& nb) {
    Series1 prod = revert(eta_series(na)) * revert(eta_series(nb));
    Series1 yc(n);
    for (int k = 0; k < n; ++k) yc[k] = prod[k + 1];
    return revert(yc);
  };
  Series1 eta1 = convolved_eta(a.marginal(1), b.marginal(1));
  Series1 eta2 = convolved_eta(a.marginal(2), b.marginal(2));
  Series1 one1 = Series1::constant(1.0, n);
  Series1 psi1 = div(eta1, one1 - eta1);
  Series1 psi2 = div(eta2, one1 - eta2);
  Series2 sig = sigma_series(a, n) * sigma_series(b, n);
  Series2 e = outer_product(eta1, eta2) * compose2(sig, eta1, eta2);
  Series2 one2 = Series2::constant(1.0, n);
  Series2 psi2d = div((embed_z(psi1, n) + embed_w(psi2, n) + one2) * e, one2 - e);
  Series2 out(order);
  out.at(0, 0) = 1.0;
  for (int p = 1; p <= order; ++p) {
    out.at(p, 0) = psi1[p];
    out.at(0, p) = psi2[p];
  }
  for (int p = 1; p <= order; ++p)
    for (int q = 1; q <= order; ++q) out.at(p, q) = psi2d.at(p, q);
  return out;
}

Map2 opposite_convolve(const AtomicMeasure2D& a, const AtomicMeasure2D& b) {
  require(a.in_class_px() && b.in_class_px(), Errc::not_in_px,
          "opposite convolution requires nonzero mean moments");
  Map2 sa = atomic_sigma_op(a, atomic_eta_inv(a.marginal(1)), atomic_eta_inv(a.marginal(2)));
  Map2 sb = atomic_sigma_op(b, atomic_eta_inv(b.marginal(1)), atomic_eta_inv(b.marginal(2)));
  return [sa = std::move(sa), sb = std::move(sb)](Complex z, Complex w) {
    return sa(z, w) * sb(z, w);
  };
}

Complex centered_alternating_moment(const CenteredWord& word) {
  auto check_alternating = [](const std::vector<int>& labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      require(labels[i] == 1 || labels[i] == 2, Errc::invalid_argument,
              "word labels must be 1 or 2");
      require(i == 0 || labels[i] != labels[i - 1], Errc::invalid_argument,
              "word labels must alternate");
    }
  };
  check_alternating(word.left_labels);
  check_alternating(word.right_labels);
  const std::size_t m = word.left_labels.size(), n = word.right_labels.size();
  if (m != n) return {0.0, 0.0};
  require(word.pair_covariances.size() >= m, Errc::invalid_argument,
          "one covariance per pair is required");
  Complex acc = 1.0;
  for (std::size_t k = 0; k < m; ++k) {
    if (word.left_labels[k] != word.right_labels[k]) return {0.0, 0.0};
    acc *= word.pair_covariances[k];
  }
  return acc;
}

HaarTestResult haar_test(const AtomicMeasure2D& a, const AtomicMeasure2D& b, int max_order,
                         double tau) {
  for (const AtomicMeasure2D* mu : {&a, &b})
    for (int j : {1, 2})
      require(std::abs(mu->marginal(j).mean()) <= tau, Errc::invalid_argument,
              "haar_test requires centered marginals");
  Complex c1 = a.m11(), c2 = b.m11();
  HaarTestResult out;
  out.is_haar = std::abs(c1) <= tau || std::abs(c2) <= tau;
  out.diagonal.resize(std::size_t(max_order));
  Complex running = 1.0;
  for (int p = 1; p <= max_order; ++p) {
    running *= c1 * c2;
    out.diagonal[std::size_t(p - 1)] = out.is_haar ? Complex{0.0, 0.0} : running;
  }
  return out;
}

namespace {

double poisson_positivity_impl(const std::function<Complex(Complex, Complex)>& psi,
                               const std::function<Complex(Complex)>& psi_m1,
                               const std::function<Complex(Complex)>& psi_m2, int grid_n,
                               double radius) {
  require(grid_n >= 2 && radius > 0 && radius < 1, Errc::invalid_argument,
          "poisson check: grid must be >= 2 and radius in (0,1)");
  auto g = [&](Complex z, Complex w) {
    return 4.0 * psi(z, w) + 2.0 * (psi_m1(z) + psi_m2(w)) + 1.0;
  };
  double mn = 1e300;
  for (int aidx = 0; aidx < grid_n; ++aidx)
    for (int bidx = 0; bidx < grid_n; ++bidx) {
      Complex z = radius * unit(2.0 * kPi * double(aidx) / grid_n);
      Complex w = radius * unit(2.0 * kPi * double(bidx) / grid_n);
      Complex diff = g(z, w) - g(z, circle_reflect(w));
      mn = std::min(mn, 0.5 * diff.real());
    }
  return mn;
}

}  // namespace

double poisson_positivity_min(const TransformLaw& law, int grid_n, double radius) {
  ForwardEta f1(law.eta_inv1, 0.1 * law.window_r);
  ForwardEta f2(law.eta_inv2, 0.1 * law.window_r);
  auto psi_m = [](const ForwardEta& f, Complex z) {
    Complex y = f(z);
    return y / (1.0 - y);
  };
  return poisson_positivity_impl(
      [&](Complex z, Complex w) {
        Complex y1 = f1(z), y2 = f2(w);
        return reconstruct_from_parts(y1, y2, law.sigma(y1, y2));
      },
      [&](Complex z) { return psi_m(f1, z); }, [&](Complex w) { return psi_m(f2, w); }, grid_n,
      radius);
}

double poisson_positivity_min(const AtomicMeasure2D& mu, int grid_n, double radius) {
  AtomicMeasure1D m1 = mu.marginal(1), m2 = mu.marginal(2);
  return poisson_positivity_impl(
      [&](Complex z, Complex w) { return psi2(mu, z, w); },
      [&](Complex z) { return psi1(m1, z); }, [&](Complex w) { return psi1(m2, w); }, grid_n,
      radius);
}

}  // namespace bitorus
