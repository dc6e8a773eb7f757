#include "core/measure.hpp"

#include <algorithm>
#include <cmath>

namespace bitorus {

namespace {

// Sort, merge atoms identical in angle (within tolerance, including the +-pi
// wrap), drop empty ones. Shared by both dimensions via a key extractor.
template <class Atom, class Less, class Same, class Merge>
std::vector<Atom> canonicalize(std::vector<Atom> atoms, Less less, Same same, Merge merge) {
  for (const Atom& a : atoms)
    require(a.weight >= 0.0, Errc::invalid_argument, "negative atom weight");
  std::erase_if(atoms, [](const Atom& a) { return a.weight == 0.0; });
  std::sort(atoms.begin(), atoms.end(), less);
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    if (!out.empty() && same(out.back(), a))
      merge(out.back(), a);
    else
      out.push_back(a);
  }
  // Wrap-around merge: -pi and +pi name the same point.
  if (out.size() >= 2 && same(out.back(), out.front())) {
    merge(out.front(), out.back());
    out.pop_back();
  }
  return out;
}

bool angle_close(double a, double b) {
  double d = std::abs(normalize_angle(a - b));
  return d <= kAngleMergeTol;
}

double mass_of(const auto& atoms) {
  double m = 0.0;
  for (const auto& a : atoms) m += a.weight;
  return m;
}

}  // namespace

AtomicMeasure1D AtomicMeasure1D::finite(std::vector<Atom1> atoms) {
  for (Atom1& a : atoms) a.angle = normalize_angle(a.angle);
  AtomicMeasure1D nu;
  nu.atoms_ = canonicalize(
      std::move(atoms), [](const Atom1& a, const Atom1& b) { return a.angle < b.angle; },
      [](const Atom1& a, const Atom1& b) { return angle_close(a.angle, b.angle); },
      [](Atom1& a, const Atom1& b) { a.weight += b.weight; });
  nu.mass_ = mass_of(nu.atoms_);
  return nu;
}

AtomicMeasure1D AtomicMeasure1D::probability(std::vector<Atom1> atoms) {
  AtomicMeasure1D nu = finite(std::move(atoms));
  require(nu.is_probability(), Errc::invalid_argument,
          "probability measure must have total mass 1 (got " + fmt17(nu.mass_) + ")");
  return nu;
}

Complex AtomicMeasure1D::moment(long p) const {
  Complex acc = 0.0;
  for (const Atom1& a : atoms_) acc += a.weight * unit(double(p) * a.angle);
  return acc;
}

AtomicMeasure2D AtomicMeasure2D::finite(std::vector<Atom2> atoms) {
  for (Atom2& a : atoms) {
    a.s_angle = normalize_angle(a.s_angle);
    a.t_angle = normalize_angle(a.t_angle);
  }
  auto less = [](const Atom2& a, const Atom2& b) {
    if (a.s_angle != b.s_angle) return a.s_angle < b.s_angle;
    return a.t_angle < b.t_angle;
  };
  auto same = [](const Atom2& a, const Atom2& b) {
    return angle_close(a.s_angle, b.s_angle) && angle_close(a.t_angle, b.t_angle);
  };
  AtomicMeasure2D mu;
  mu.atoms_ = canonicalize(std::move(atoms), less, same,
                           [](Atom2& a, const Atom2& b) { a.weight += b.weight; });
  // The wrap-around pass in canonicalize only handles the first coordinate;
  // rerun a full pairwise sweep for the rare +-pi pairs in the second one.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i + 1 < mu.atoms_.size() && !merged; ++i)
      for (std::size_t j = i + 1; j < mu.atoms_.size() && !merged; ++j)
        if (same(mu.atoms_[i], mu.atoms_[j])) {
          mu.atoms_[i].weight += mu.atoms_[j].weight;
          mu.atoms_.erase(mu.atoms_.begin() + long(j));
          merged = true;
        }
  }
  mu.mass_ = mass_of(mu.atoms_);
  return mu;
}

AtomicMeasure2D AtomicMeasure2D::probability(std::vector<Atom2> atoms) {
  AtomicMeasure2D mu = finite(std::move(atoms));
  require(mu.is_probability(), Errc::invalid_argument,
          "probability measure must have total mass 1 (got " + fmt17(mu.mass_) + ")");
  return mu;
}

Complex AtomicMeasure2D::moment(long p, long q) const {
  Complex acc = 0.0;
  for (const Atom2& a : atoms_)
    acc += a.weight * unit(double(p) * a.s_angle + double(q) * a.t_angle);
  return acc;
}

AtomicMeasure1D AtomicMeasure2D::marginal(int j) const {
  require(j == 1 || j == 2, Errc::invalid_argument, "marginal index must be 1 or 2");
  std::vector<Atom1> atoms;
  atoms.reserve(atoms_.size());
  for (const Atom2& a : atoms_)
    atoms.push_back({j == 1 ? a.s_angle : a.t_angle, a.weight});
  return AtomicMeasure1D::finite(std::move(atoms));
}

AtomicMeasure2D AtomicMeasure2D::reflect() const {
  std::vector<Atom2> atoms = atoms_;
  for (Atom2& a : atoms) a.t_angle = -a.t_angle;
  return finite(std::move(atoms));
}

AtomicMeasure2D AtomicMeasure2D::rotate_angles(double a1, double a2) const {
  std::vector<Atom2> atoms = atoms_;
  for (Atom2& a : atoms) {
    a.s_angle += a1;
    a.t_angle += a2;
  }
  return finite(std::move(atoms));
}

AtomicMeasure2D AtomicMeasure2D::rotate(Complex lambda1, Complex lambda2) const {
  require(std::abs(std::abs(lambda1) - 1.0) <= 1e-12 && std::abs(std::abs(lambda2) - 1.0) <= 1e-12,
          Errc::invalid_argument, "rotation factors must have unit modulus");
  return rotate_angles(std::arg(lambda1), std::arg(lambda2));
}

bool AtomicMeasure2D::in_class_px(double tau) const {
  return std::abs(marginal(1).mean()) > tau && std::abs(marginal(2).mean()) > tau &&
         std::abs(m11()) > tau;
}

AtomicMeasure2D product_measure(const AtomicMeasure1D& alpha, const AtomicMeasure1D& beta) {
  require(alpha.is_probability() && beta.is_probability(), Errc::invalid_argument,
          "product_measure expects probability factors");
  std::vector<Atom2> atoms;
  atoms.reserve(alpha.size() * beta.size());
  for (const Atom1& a : alpha.atoms())
    for (const Atom1& b : beta.atoms()) atoms.push_back({a.angle, b.angle, a.weight * b.weight});
  return AtomicMeasure2D::probability(std::move(atoms));
}

double infinitesimality_norm(std::span<const AtomicMeasure2D> row, double eps) {
  require(eps > 0.0, Errc::invalid_argument, "eps must be positive");
  double worst = 0.0;
  for (const AtomicMeasure2D& mu : row) {
    double outside = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const Atom2& a = mu.atoms()[i];
      if (std::abs(mu.s_at(i) - 1.0) + std::abs(mu.t_at(i) - 1.0) >= eps) outside += a.weight;
    }
    worst = std::max(worst, outside);
  }
  return worst;
}

MomentTable2D::MomentTable2D(int order) : order_(order) {
  require(order >= 0, Errc::invalid_argument, "table order must be nonnegative");
  m_.assign(std::size_t(2 * order + 1) * std::size_t(2 * order + 1), Complex{0.0, 0.0});
}

std::size_t MomentTable2D::idx(long p, long q) const {
  require(std::labs(p) <= order_ && std::labs(q) <= order_, Errc::invalid_argument,
          "moment index outside table order");
  return std::size_t(p + order_) * std::size_t(2 * order_ + 1) + std::size_t(q + order_);
}

Complex MomentTable2D::at(long p, long q) const { return m_[idx(p, q)]; }
void MomentTable2D::set(long p, long q, Complex v) { m_[idx(p, q)] = v; }

MomentTable2D MomentTable2D::from_measure(const AtomicMeasure2D& mu, int order) {
  MomentTable2D t(order);
  for (long p = -order; p <= order; ++p)
    for (long q = -order; q <= order; ++q) t.set(p, q, mu.moment(p, q));
  return t;
}

double MomentTable2D::hermitian_residual() const {
  double worst = 0.0;
  for (long p = -order_; p <= order_; ++p)
    for (long q = -order_; q <= order_; ++q)
      worst = std::max(worst, std::abs(at(-p, -q) - std::conj(at(p, q))));
  return worst;
}

double MomentTable2D::max_abs() const {
  double worst = 0.0;
  for (const Complex& v : m_) worst = std::max(worst, std::abs(v));
  return worst;
}

double MomentTable2D::min_moment_matrix_eigenvalue() const {
  const int w = order_ / 2;
  const int side = 2 * w + 1;
  const int n = side * side;
  std::vector<Complex> a(std::size_t(n) * std::size_t(n));
  auto flat = [side, w](int p, int q) { return (p + w) * side + (q + w); };
  for (int p = -w; p <= w; ++p)
    for (int q = -w; q <= w; ++q)
      for (int pp = -w; pp <= w; ++pp)
        for (int qq = -w; qq <= w; ++qq)
          a[std::size_t(flat(p, q)) * std::size_t(n) + std::size_t(flat(pp, qq))] =
              at(p - pp, q - qq);
  return min_eigenvalue_hermitian(a, n);
}

std::string MomentTable2D::to_csv() const {
  std::string out = "p,q,re,im\n";
  for (long p = -order_; p <= order_; ++p)
    for (long q = -order_; q <= order_; ++q) {
      Complex v = at(p, q);
      out += std::to_string(p) + "," + std::to_string(q) + "," + fmt17(v.real()) + "," +
             fmt17(v.imag()) + "\n";
    }
  return out;
}

double MomentTable2D::max_difference(const MomentTable2D& a, const MomentTable2D& b) {
  int n = std::min(a.order(), b.order());
  double worst = 0.0;
  for (long p = -n; p <= n; ++p)
    for (long q = -n; q <= n; ++q) worst = std::max(worst, std::abs(a.at(p, q) - b.at(p, q)));
  return worst;
}

double min_eigenvalue_hermitian(const std::vector<Complex>& a, int n) {
  // Real symmetric embedding [[Re, -Im], [Im, Re]]; eigenvalues are those of
  // the Hermitian matrix, each doubled.
  const int m = 2 * n;
  std::vector<double> s(std::size_t(m) * std::size_t(m));
  auto at2 = [&](int i, int j) -> double& { return s[std::size_t(i) * std::size_t(m) + std::size_t(j)]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex v = a[std::size_t(i) * std::size_t(n) + std::size_t(j)];
      at2(i, j) = v.real();
      at2(i + n, j + n) = v.real();
      at2(i, j + n) = -v.imag();
      at2(i + n, j) = v.imag();
    }
  // Cyclic Jacobi sweeps.
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) off += at2(i, j) * at2(i, j);
    if (off < 1e-26 * double(m) * double(m)) break;
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) {
        double apq = at2(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = 0.5 * (at2(q, q) - at2(p, p)) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (int k = 0; k < m; ++k) {
          double akp = at2(k, p), akq = at2(k, q);
          at2(k, p) = c * akp - sn * akq;
          at2(k, q) = sn * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          double apk = at2(p, k), aqk = at2(q, k);
          at2(p, k) = c * apk - sn * aqk;
          at2(q, k) = sn * apk + c * aqk;
        }
      }
  }
  double mn = at2(0, 0);
  for (int i = 1; i < m; ++i) mn = std::min(mn, at2(i, i));
  return mn;
}

}  // namespace bitorus
