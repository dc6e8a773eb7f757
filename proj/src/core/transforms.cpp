#include "core/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace bitorus {

namespace {

constexpr double kNewtonTol = 1e-14;        // target residual
constexpr double kNewtonAccept = 1e-13;     // residual accepted after max iterations
constexpr int kNewtonMaxIter = 50;
constexpr double kSigmaDenomFloor = 1e-12;  // evaluation-time guard
constexpr double kSigmaDenomMargin = 0.1;   // window-probing margin

// Exact-key memo of jets; synchronized, value-stable.
struct JetCache {
  mutable std::mutex mu;
  mutable std::map<std::pair<double, double>, Jet> map;

  bool find(Complex z, Jet& out) const {
    std::lock_guard<std::mutex> lock(mu);
    auto it = map.find({z.real(), z.imag()});
    if (it == map.end()) return false;
    out = it->second;
    return true;
  }
  void store(Complex z, const Jet& j) const {
    std::lock_guard<std::mutex> lock(mu);
    map.emplace(std::pair<double, double>{z.real(), z.imag()}, j);
  }
};

}  // namespace

DomainComponent classify_component(Complex z, Complex w) {
  reject_near_torus(z, "component");
  reject_near_torus(w, "component");
  bool zin = std::abs(z) < 1.0, win = std::abs(w) < 1.0;
  if (zin && win) return DomainComponent::DD;
  if (zin) return DomainComponent::DU;
  if (win) return DomainComponent::UD;
  return DomainComponent::UU;
}

const char* component_tag(DomainComponent c) {
  switch (c) {
    case DomainComponent::DD: return "DD";
    case DomainComponent::DU: return "DU";
    case DomainComponent::UD: return "UD";
    case DomainComponent::UU: return "UU";
  }
  return "??";
}

Complex psi1(const AtomicMeasure1D& nu, Complex z) {
  reject_near_torus(z, "psi1");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    Complex zx = z * nu.point_at(i);
    acc += nu.atoms()[i].weight * zx / (1.0 - zx);
  }
  return acc;
}

Jet psi1_jet(const AtomicMeasure1D& nu, Complex z) {
  reject_near_torus(z, "psi1");
  Jet j;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    Complex x = nu.point_at(i);
    Complex den = 1.0 - z * x;
    double w = nu.atoms()[i].weight;
    j.v += w * z * x / den;
    j.d += w * x / (den * den);
  }
  return j;
}

Complex psi2(const AtomicMeasure2D& mu, Complex z, Complex w) {
  reject_near_torus(z, "psi2");
  reject_near_torus(w, "psi2");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Complex zs = z * mu.s_at(i);
    Complex wt = w * mu.t_at(i);
    acc += mu.atoms()[i].weight * (zs / (1.0 - zs)) * (wt / (1.0 - wt));
  }
  return acc;
}

Complex h2(const AtomicMeasure2D& mu, Complex z, Complex w) {
  reject_near_torus(z, "h2");
  reject_near_torus(w, "h2");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    acc += mu.atoms()[i].weight / ((1.0 - z * mu.s_at(i)) * (1.0 - w * mu.t_at(i)));
  return acc;
}

Complex eta(const AtomicMeasure1D& nu, Complex z) {
  Complex p = psi1(nu, z);
  Complex den = 1.0 + p;
  require(std::abs(den) > 1e-14, Errc::domain, "eta: pole (1 + psi vanishes)");
  return p / den;
}

Jet eta_jet(const AtomicMeasure1D& nu, Complex z) {
  Jet p = psi1_jet(nu, z);
  Complex den = 1.0 + p.v;
  require(std::abs(den) > 1e-14, Errc::domain, "eta: pole (1 + psi vanishes)");
  return {p.v / den, p.d / (den * den)};
}

namespace {

// One predictor-corrector hop from (zprev, y) to zk. Returns false when
// Newton stalls or an inner evaluation rejects the point.
bool newton_hop(const std::function<Jet(Complex)>& f, Complex zk, Complex zprev, Complex& y,
                Complex& slope) {
  if (std::abs(slope) < 1e-300) return false;
  Complex yk = y + (zk - zprev) / slope;  // Euler predictor
  try {
    double resid = 1e300;
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      if (std::abs(yk) >= 1.0 - kTorusBand) return false;
      Jet j = f(yk);
      Complex r = j.v - zk;
      resid = std::abs(r);
      if (std::abs(j.d) < 1e-300) return false;
      slope = j.d;
      yk -= r / j.d;  // converged iterates take one polishing step
      if (resid <= kNewtonTol * std::max(1.0, std::abs(zk))) break;
    }
    if (resid > kNewtonAccept * std::max(1.0, std::abs(zk))) return false;
  } catch (const Error&) {
    return false;
  }
  y = yk;
  return true;
}

}  // namespace

namespace {

// Continuation along the straight segment from z0 (where f(y0) = z0) to the
// target, with adaptive refinement where the branch bends sharply.
Complex walk_segment(const std::function<Jet(Complex)>& f, Complex z0, Complex y0, Complex target,
                     double step, const char* what) {
  Complex y = y0;
  Complex slope = f(y0).d;
  double span = std::abs(target - z0);
  if (span == 0.0) return y0;
  const int segments = std::max(1, int(std::ceil(span / step)));
  double tprev = 0.0;
  double dt = 1.0 / double(segments);
  int consecutive_failures = 0;
  int successes = 0;
  int hops = 0;
  while (tprev < 1.0) {
    require(++hops <= 100000, Errc::no_convergence,
            std::string(what) + ": continuation budget exhausted (window too large)");
    double tk = std::min(1.0, tprev + dt);
    Complex yk = y;
    Complex sk = slope;
    if (newton_hop(f, z0 + (target - z0) * tk, z0 + (target - z0) * tprev, yk, sk)) {
      y = yk;
      slope = sk;
      tprev = tk;
      consecutive_failures = 0;
      // recover the step only after the rough region is clearly behind
      if (++successes >= 3) {
        dt = std::min(dt * 2.0, 1.0 / double(segments));
        successes = 0;
      }
    } else {
      // refine the continuation where the branch is tracked too coarsely
      dt *= 0.5;
      successes = 0;
      require(++consecutive_failures <= 45, Errc::no_convergence,
              std::string(what) + ": Newton did not converge (window too large)");
    }
  }
  return y;
}

}  // namespace

Complex invert_to(const std::function<Jet(Complex)>& f, Complex target, double step,
                  const char* what) {
  if (target == Complex{0.0, 0.0}) return {0.0, 0.0};
  require(step > 0.0, Errc::invalid_argument, "invert_to: nonpositive step");
  return walk_segment(f, Complex{0.0, 0.0}, Complex{0.0, 0.0}, target, step, what);
}

namespace {

// Newton-based inverse of the eta-transform of an atomic measure, with the
// reflection symmetry providing values outside the closed unit disk.
struct AtomicEtaInv {
  AtomicMeasure1D nu;
  double step;
  std::shared_ptr<JetCache> cache = std::make_shared<JetCache>();

  Jet inner(Complex z) const {  // |z| < 1
    Jet out;
    if (cache->find(z, out)) return out;
    if (z == Complex{0.0, 0.0}) {
      out = {Complex{0.0, 0.0}, 1.0 / nu.mean()};
    } else {
      Complex y = invert_to([this](Complex u) { return eta_jet(nu, u); }, z, step,
                            "eta inversion");
      Jet ej = eta_jet(nu, y);
      out = {y, 1.0 / ej.d};
    }
    cache->store(z, out);
    return out;
  }

  Jet operator()(Complex z) const {
    reject_near_torus(z, "eta_inv");
    if (std::abs(z) < 1.0) return inner(z);
    Jet i = inner(circle_reflect(z));
    Complex fv = std::conj(i.v), fd = std::conj(i.d);
    return {1.0 / fv, fd / (z * z * fv * fv)};
  }
};

}  // namespace

Map1 atomic_eta_inv(const AtomicMeasure1D& nu, double step) {
  require(nu.is_probability(), Errc::invalid_argument, "eta_inv expects a probability measure");
  require(nu.in_class_px(), Errc::not_in_px, "eta_inv: marginal mean below threshold");
  return AtomicEtaInv{nu, step};
}

Map1 scaled_eta_inv(Map1 base, Complex divisor) {
  require(std::abs(std::abs(divisor) - 1.0) <= 1e-12, Errc::invalid_argument,
          "rotation factor must have unit modulus");
  return [base = std::move(base), divisor](Complex z) -> Jet {
    Jet b = base(z);
    return {b.v / divisor, b.d / divisor};
  };
}

Map1 product_eta_inv(Map1 a, Map1 b) {
  return [a = std::move(a), b = std::move(b)](Complex z) -> Jet {
    Jet ja = a(z), jb = b(z);
    if (std::abs(z) < 1e-14) return {Complex{0.0, 0.0}, ja.d * jb.d};
    Complex v = ja.v * jb.v / z;
    Complex d = (ja.d * jb.v + ja.v * jb.d) / z - ja.v * jb.v / (z * z);
    return {v, d};
  };
}

Map1 power_eta_inv(Map1 base, long n) {
  require(n >= 1, Errc::invalid_argument, "power_eta_inv: exponent must be >= 1");
  return [base = std::move(base), n](Complex z) -> Jet {
    Jet b = base(z);
    if (std::abs(z) < 1e-14) return {Complex{0.0, 0.0}, std::pow(b.d, double(n))};
    Complex bn1 = std::pow(b.v, double(n - 1));
    Complex zn1 = std::pow(z, double(n - 1));
    Complex v = bn1 * b.v / zn1;
    Complex d = double(n) * bn1 * b.d / zn1 - double(n - 1) * (bn1 * b.v) / (zn1 * z);
    return {v, d};
  };
}

struct ForwardEta::Impl {
  Map1 map;
  double step = 0.0;
  JetCache cache;
};

ForwardEta::ForwardEta(Map1 eta_inv, double step) : impl_(std::make_shared<Impl>()) {
  impl_->map = std::move(eta_inv);
  impl_->step = step;
}

Complex ForwardEta::operator()(Complex z) const {
  reject_near_torus(z, "forward eta");
  bool outside = std::abs(z) > 1.0;
  Complex zz = outside ? circle_reflect(z) : z;
  Jet hit;
  Complex y;
  if (impl_->cache.find(zz, hit)) {
    y = hit.v;
  } else {
    y = invert_to(impl_->map, zz, impl_->step, "forward eta");
    impl_->cache.store(zz, Jet{y, Complex{0.0, 0.0}});
  }
  return outside ? circle_reflect(y) : y;
}

namespace {

struct KernelSums {
  Complex k;  // int st / ((1 - y1 s)(1 - y2 t))
  Complex h;  // int  1 / ((1 - y1 s)(1 - y2 t))
};

KernelSums kernel_sums(const AtomicMeasure2D& mu, Complex y1, Complex y2) {
  KernelSums out{Complex{0, 0}, Complex{0, 0}};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Complex s = mu.s_at(i), t = mu.t_at(i);
    Complex g = mu.atoms()[i].weight / ((1.0 - y1 * s) * (1.0 - y2 * t));
    out.h += g;
    out.k += g * s * t;
  }
  return out;
}

struct AtomicSigma {
  AtomicMeasure2D mu;
  Map1 e1, e2;

  Complex operator()(Complex z, Complex w) const {
    DomainComponent c = classify_component(z, w);
    if (c == DomainComponent::UU)
      return 1.0 / std::conj((*this)(circle_reflect(z), circle_reflect(w)));
    Jet j1 = e1(z), j2 = e2(w);
    Complex u1 = std::abs(z) < 1e-14 ? j1.d : j1.v / z;
    Complex u2 = std::abs(w) < 1e-14 ? j2.d : j2.v / w;
    KernelSums ks = kernel_sums(mu, j1.v, j2.v);
    Complex scaled = ks.h;  // component-rescaled denominator
    if (c == DomainComponent::DU) scaled *= w;
    if (c == DomainComponent::UD) scaled *= z;
    require(std::abs(scaled) > kSigmaDenomFloor, Errc::window,
            "sigma: denominator vanished (window too large)");
    return u1 * u2 * ks.k / ks.h;
  }
};

}  // namespace

Map2 atomic_sigma(const AtomicMeasure2D& mu, Map1 eta_inv1, Map1 eta_inv2) {
  return AtomicSigma{mu, std::move(eta_inv1), std::move(eta_inv2)};
}

Map2 atomic_sigma_op(const AtomicMeasure2D& mu, Map1 eta_inv1, Map1 eta_inv2) {
  return [mu, e1 = std::move(eta_inv1), e2 = std::move(eta_inv2)](Complex z, Complex w) -> Complex {
    require(std::abs(z) < 1.0 && std::abs(w) < 1.0, Errc::domain,
            "sigma_op: defined on the bidisk only");
    reject_near_torus(z, "sigma_op");
    reject_near_torus(w, "sigma_op");
    Jet j1 = e1(z), j2 = e2(w);
    Complex u1 = std::abs(z) < 1e-14 ? j1.d : j1.v / z;
    Complex u2 = std::abs(w) < 1e-14 ? j2.d : j2.v / w;
    KernelSums ks = kernel_sums(mu, j1.v, j2.v);
    Complex num = u1 * j2.v * ks.k + 1.0 / (1.0 - z);
    Complex den = j1.v * u2 * ks.k + 1.0 / (1.0 - w);
    require(std::abs(den) > kSigmaDenomFloor, Errc::window, "sigma_op: denominator vanished");
    return num / den;
  };
}

Complex eta_inv_pointwise(const AtomicMeasure1D& nu, Complex z, DomainWindow window) {
  Map1 m = atomic_eta_inv(nu, 0.1 * window.r);
  return m(z).v;
}

Complex sigma_pointwise(const AtomicMeasure2D& mu, Complex z, Complex w, DomainWindow window) {
  require(mu.in_class_px(), Errc::not_in_px, "sigma: measure has a vanishing mean moment");
  Map1 e1 = atomic_eta_inv(mu.marginal(1), 0.1 * window.r);
  Map1 e2 = atomic_eta_inv(mu.marginal(2), 0.1 * window.r);
  return atomic_sigma(mu, std::move(e1), std::move(e2))(z, w);
}

Complex sigma_op_pointwise(const AtomicMeasure2D& mu, Complex z, Complex w) {
  require(mu.in_class_px(), Errc::not_in_px, "sigma_op: measure has a vanishing mean moment");
  Map1 e1 = atomic_eta_inv(mu.marginal(1));
  Map1 e2 = atomic_eta_inv(mu.marginal(2));
  return atomic_sigma_op(mu, std::move(e1), std::move(e2))(z, w);
}

Complex s_transform(const AtomicMeasure2D& mu, Complex z, Complex w) {
  require(std::abs(z) > 0.0 && std::abs(w) > 0.0, Errc::domain, "s_transform: z and w must be nonzero");
  require(std::abs(1.0 + z) > 1e-14 && std::abs(1.0 + w) > 1e-14, Errc::domain,
          "s_transform: pole at -1");
  require(mu.in_class_px(), Errc::not_in_px, "s_transform: measure has a vanishing mean moment");
  Map1 e1 = atomic_eta_inv(mu.marginal(1));
  Map1 e2 = atomic_eta_inv(mu.marginal(2));
  // psi^{-1}(z) = eta^{-1}(z/(1+z))
  Complex p1 = e1(z / (1.0 + z)).v;
  Complex p2 = e2(w / (1.0 + w)).v;
  Complex h = h2(mu, p1, p2);
  require(std::abs(h) > kSigmaDenomFloor, Errc::window, "s_transform: H vanished");
  return (1.0 + z) / z * (1.0 + w) / w * (1.0 - (1.0 + z + w) / h);
}

Series2 sigma_series_from_moments(const std::function<Complex(long, long)>& moment, int order) {
  const int n = order + 1;  // one guard order so the top coefficient is exact
  Series1 psi1s(n), psi2s(n);
  for (int p = 1; p <= n; ++p) {
    psi1s[p] = moment(p, 0);
    psi2s[p] = moment(0, p);
  }
  Series1 one = Series1::constant(1.0, n);
  Series1 eta1s = div(psi1s, one + psi1s);
  Series1 eta2s = div(psi2s, one + psi2s);
  Series1 y1 = revert(eta1s);
  Series1 y2 = revert(eta2s);
  Series1 u1(n), u2(n);
  for (int k = 0; k < n; ++k) {
    u1[k] = y1[k + 1];
    u2[k] = y2[k + 1];
  }
  Series2 kker(n), hker(n);
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) {
      kker.at(p, q) = moment(p + 1, q + 1);
      hker.at(p, q) = moment(p, q);
    }
  Series2 num = outer_product(u1, u2) * compose2(kker, y1, y2);
  Series2 sig = div(num, compose2(hker, y1, y2));
  Series2 out(order);
  for (int p = 0; p <= order; ++p)
    for (int q = 0; q <= order; ++q) out.at(p, q) = sig.at(p, q);
  return out;
}

Series2 sigma_series(const AtomicMeasure2D& mu, int order) {
  require(mu.in_class_px(), Errc::not_in_px, "sigma_series: measure has a vanishing mean moment");
  return sigma_series_from_moments([&mu](long p, long q) { return mu.moment(p, q); }, order);
}

double select_window_radius(const std::vector<std::function<bool(double)>>& probes, double start,
                            double min_r) {
  for (double r = start; r >= min_r; r *= 0.5) {
    bool ok = true;
    for (const auto& probe : probes)
      if (!probe(r)) {
        ok = false;
        break;
      }
    if (ok) return r;
  }
  fail(Errc::window, "window selection failed: no admissible radius above " + fmt17(min_r));
}

namespace {

constexpr int kProbeAngles = 24;

bool probe_ok(const std::function<void(double)>& body, double r) {
  try {
    body(r);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::function<bool(double)> eta_window_probe(Map1 eta_inv) {
  return [eta_inv = std::move(eta_inv)](double r) {
    return probe_ok(
        [&](double rr) {
          for (int k = 0; k < kProbeAngles; ++k) {
            double th = 2.0 * kPi * double(k) / kProbeAngles;
            Jet j = eta_inv(0.95 * rr * unit(th));
            require(std::abs(j.v) < 1.0, Errc::window, "eta_inv left the unit disk");
            eta_inv((1.0 / (0.95 * rr)) * unit(th));  // reflected side evaluable
          }
          ForwardEta fwd(eta_inv, 0.1 * rr);
          // covers the largest grid radius extraction may use (0.45 r) with slack
          for (int k = 0; k < kProbeAngles; ++k)
            fwd(0.55 * rr * unit(2.0 * kPi * double(k) / kProbeAngles));
        },
        r);
  };
}

std::function<bool(double)> sigma_margin_probe(AtomicMeasure2D mu, Map1 eta_inv1, Map1 eta_inv2) {
  return [mu = std::move(mu), e1 = std::move(eta_inv1), e2 = std::move(eta_inv2)](double r) {
    return probe_ok(
        [&](double rr) {
          for (int a = 0; a < kProbeAngles; ++a)
            for (int b = 0; b < kProbeAngles; b += 3) {
              Complex zd = 0.9 * rr * unit(2.0 * kPi * double(a) / kProbeAngles);
              Complex wd = 0.9 * rr * unit(2.0 * kPi * double(b) / kProbeAngles + 0.37);
              Complex zu = circle_reflect(zd), wu = circle_reflect(wd);
              Complex y1d = e1(zd).v, y2d = e2(wd).v;
              Complex y1u = e1(zu).v, y2u = e2(wu).v;
              require(std::abs(kernel_sums(mu, y1d, y2d).h) >= kSigmaDenomMargin, Errc::window,
                      "sigma denominator margin (bounded component)");
              require(std::abs(wu * kernel_sums(mu, y1d, y2u).h) >= kSigmaDenomMargin, Errc::window,
                      "sigma denominator margin (mixed component)");
              require(std::abs(zu * kernel_sums(mu, y1u, y2d).h) >= kSigmaDenomMargin, Errc::window,
                      "sigma denominator margin (mixed component)");
            }
        },
        r);
  };
}

std::function<bool(double)> sigma_eval_probe(Map2 sigma) {
  return [sigma = std::move(sigma)](double r) {
    return probe_ok(
        [&](double rr) {
          for (int a = 0; a < kProbeAngles; a += 2) {
            double th = 2.0 * kPi * double(a) / kProbeAngles;
            Complex zd = 0.9 * rr * unit(th);
            Complex wd = 0.9 * rr * unit(th + 0.37);
            sigma(zd, wd);
            sigma(zd, circle_reflect(wd));
            sigma(circle_reflect(zd), wd);
            sigma(circle_reflect(zd), circle_reflect(wd));
          }
        },
        r);
  };
}

TransformLaw make_transform_law(const AtomicMeasure2D& mu) {
  require(mu.is_probability(), Errc::invalid_argument, "transform law expects a probability measure");
  require(mu.in_class_px(), Errc::not_in_px,
          "transform law requires nonzero marginal means and nonzero m_{1,1}");
  Map1 e1 = atomic_eta_inv(mu.marginal(1));
  Map1 e2 = atomic_eta_inv(mu.marginal(2));
  Map2 sig = atomic_sigma(mu, e1, e2);
  double r = select_window_radius(
      {eta_window_probe(e1), eta_window_probe(e2), sigma_margin_probe(mu, e1, e2)});
  return {std::move(e1), std::move(e2), std::move(sig), r, LawProvenance::atomic};
}

}  // namespace bitorus
