#include "toeplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <string>

#include "toeplab/errors.hpp"
#include "toeplab/special.hpp"

namespace toeplab {

namespace {

constexpr double kPi = std::numbers::pi;

void require_inside(const Point& z, const char* what) {
  if (z.dim() == 0) throw ParameterError(std::string(what) + ": empty point");
  const double s = z.norm_sq();
  if (!(s < 1.0)) throw DomainError(std::string(what) + ": point is not inside the unit ball");
}

void require_same_dim(const Point& z, const Point& w, const char* what) {
  if (z.dim() != w.dim()) throw ParameterError(std::string(what) + ": dimension mismatch");
}

double factorial(int k) { return std::tgamma(k + 1.0); }

// Standard normal vector of real dimension 2n, returned as n complex coordinates.
std::vector<cplx> gaussian_coords(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> g(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    g[i] = cplx(re, im);
  }
  return g;
}

// Uniform point of the unit ball of C^n.
Point uniform_unit_ball(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<cplx> g = gaussian_coords(n, rng);
  double norm = 0.0;
  for (const cplx& c : g) norm += std::norm(c);
  norm = std::sqrt(norm);
  const double radius = std::pow(unif(rng), 1.0 / (2.0 * n));
  for (cplx& c : g) c *= radius / norm;
  return Point(std::move(g));
}

Point unit_direction(int n, std::mt19937_64& rng) {
  std::vector<cplx> g = gaussian_coords(n, rng);
  double norm = 0.0;
  for (const cplx& c : g) norm += std::norm(c);
  norm = std::sqrt(norm);
  for (cplx& c : g) c /= norm;
  return Point(std::move(g));
}

// Breakpoints of [0, r] that are geometric in the distance to the unit circle,
// so that panels shrink where integrands of (1 - r|a| t) steepen.
std::vector<double> graded_breaks(double r) {
  std::vector<double> breaks{r};
  double x = 1.0 - r;
  while (true) {
    x *= 2.0;
    const double rho = 1.0 - x;
    if (rho <= 0.0) break;
    breaks.push_back(rho);
  }
  breaks.push_back(0.0);
  std::reverse(breaks.begin(), breaks.end());
  return breaks;
}

int angular_count(double rho_bound) {
  const double m = std::ceil(40.0 / -std::log(std::max(rho_bound, 1e-300)));
  return static_cast<int>(std::clamp(m, 64.0, 8192.0));
}

}  // namespace

ModelDomain::ModelDomain(int dim, WeightConvention w) : n(dim), weight(w) {
  if (dim < 1) throw ParameterError("ModelDomain: n must be at least 1");
}

double ModelDomain::volume() const { return std::pow(kPi, n) / factorial(n); }

double ModelDomain::sphere_area() const { return 2.0 * std::pow(kPi, n) / factorial(n - 1); }

double Point::norm_sq() const {
  double s = 0.0;
  for (const cplx& c : coords) s += std::norm(c);
  return s;
}

double Point::norm() const { return std::sqrt(norm_sq()); }

Point axis_point(int n, cplx t) {
  std::vector<cplx> c(static_cast<std::size_t>(n), cplx(0.0));
  c[0] = t;
  return Point(std::move(c));
}

Point along(const Point& direction, double radius) {
  const double nrm = direction.norm();
  if (!(nrm > 0.0)) throw ParameterError("along: zero direction");
  Point p = direction;
  for (cplx& c : p.coords) c *= radius / nrm;
  return p;
}

cplx inner(const Point& z, const Point& w) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < z.coords.size(); ++i) s += z.coords[i] * std::conj(w.coords[i]);
  return s;
}

double delta_from_smooth(double smooth_delta, WeightConvention w) {
  if (w == WeightConvention::smooth) return smooth_delta;
  return smooth_delta / (1.0 + std::sqrt(std::max(0.0, 1.0 - smooth_delta)));
}

double radius_for_delta(const ModelDomain& d, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ParameterError("radius_for_delta: delta must lie in (0, 1]");
  return d.weight == WeightConvention::smooth ? std::sqrt(1.0 - delta) : 1.0 - delta;
}

double boundary_distance(const ModelDomain& d, const Point& z) {
  require_inside(z, "boundary_distance");
  if (d.weight == WeightConvention::smooth) return 1.0 - z.norm_sq();
  return 1.0 - z.norm();
}

double pseudo_hyperbolic(const Point& z, const Point& w) {
  require_same_dim(z, w, "pseudo_hyperbolic");
  require_inside(z, "pseudo_hyperbolic");
  require_inside(w, "pseudo_hyperbolic");
  if (z.dim() == 1) return std::abs(z[0] - w[0]) / std::abs(1.0 - z[0] * std::conj(w[0]));
  double diff = 0.0;
  for (std::size_t i = 0; i < z.dim(); ++i) diff += std::norm(z[i] - w[i]);
  double wedge = 0.0;
  for (std::size_t i = 0; i < z.dim(); ++i)
    for (std::size_t j = i + 1; j < z.dim(); ++j) wedge += std::norm(z[i] * w[j] - z[j] * w[i]);
  const double num = std::max(0.0, diff - wedge);
  return std::min(1.0, std::sqrt(num) / std::abs(1.0 - inner(z, w)));
}

Point mobius(const Point& a, const Point& z) {
  require_same_dim(a, z, "mobius");
  require_inside(a, "mobius");
  const double a2 = a.norm_sq();
  const cplx za = inner(z, a);
  const cplx denom = 1.0 - za;
  if (z.dim() == 1) return Point((a[0] - z[0]) / denom);
  std::vector<cplx> out(z.dim());
  if (a2 == 0.0) {
    for (std::size_t i = 0; i < z.dim(); ++i) out[i] = -z[i];
    return Point(std::move(out));
  }
  const double sa = std::sqrt(1.0 - a2);
  for (std::size_t i = 0; i < z.dim(); ++i) {
    const cplx pz = za / a2 * a[i];
    const cplx qz = z[i] - pz;
    out[i] = (a[i] - pz - sa * qz) / denom;
  }
  return Point(std::move(out));
}

double kobayashi_distance(const ModelDomain& d, const Point& z, const Point& w) {
  if (static_cast<int>(z.dim()) != d.n) throw ParameterError("kobayashi_distance: dimension mismatch");
  return std::atanh(pseudo_hyperbolic(z, w));
}

KobayashiBall::KobayashiBall(Point c, double r) : center(std::move(c)), radius(r) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("KobayashiBall: radius must lie in (0, 1)");
  require_inside(center, "KobayashiBall");
}

bool KobayashiBall::contains(const Point& w) const { return pseudo_hyperbolic(center, w) < radius; }

double ball_volume_closed_form(const ModelDomain& d, const KobayashiBall& b) {
  const double a2 = b.center.norm_sq();
  const double r2 = b.radius * b.radius;
  const double s = (1.0 - a2) / (1.0 - r2 * a2);
  return d.volume() * std::pow(r2, d.n) * std::pow(s, d.n + 1);
}

double ball_volume(const ModelDomain& d, const KobayashiBall& b, double beta) {
  if (!(beta > -1.0)) throw ParameterError("ball_volume: weight exponent must exceed -1");
  if (static_cast<int>(b.center.dim()) != d.n) throw ParameterError("ball_volume: dimension mismatch");
  if (beta == 0.0) return ball_volume_closed_form(d, b);
  return ball_volume_numeric(d, b, beta);
}

double ball_volume_numeric(const ModelDomain& d, const KobayashiBall& b, double beta,
                           double support_radius) {
  if (!(beta > -1.0)) throw ParameterError("ball_volume: weight exponent must exceed -1");
  const int n = d.n;
  const double a2 = b.center.norm_sq();
  const double am = std::sqrt(a2);
  const double r = b.radius;
  const double pa = 1.0 - a2;
  // With u = rho * zeta and x = rho |a| <zeta, a/|a|>: the Jacobian of phi_a is
  // (pa / |1 - x|^2)^(n+1) and 1 - |phi_a(u)|^2 = pa (1 - rho^2) / |1 - x|^2.
  const double min_ds = support_radius < 1.0 ? 1.0 - support_radius * support_radius : 0.0;
  const GaussRule& gl = gauss_legendre(20);
  const std::vector<double> breaks = graded_breaks(r);
  // Integral over rho in [0, r] of rho^(2n-1) times the pulled-back weight along
  // the ray x = rho * c. The support condition 1 - |phi_a(rho c)|^2 >= min_ds is
  // quadratic in rho, so it cuts the ray to an interval.
  auto ray = [&](cplx c) {
    double lo_cut = 0.0, hi_cut = r;
    if (min_ds > 0.0) {
      const double A = pa + min_ds * std::norm(c);
      const double B = 2.0 * min_ds * c.real();
      const double C = pa - min_ds;
      const double disc = B * B + 4.0 * A * C;
      if (disc < 0.0) return 0.0;
      const double sq = std::sqrt(disc);
      lo_cut = std::max(lo_cut, (B - sq) / (2.0 * A));
      hi_cut = std::min(hi_cut, (B + sq) / (2.0 * A));
      if (hi_cut <= lo_cut) return 0.0;
    }
    double acc = 0.0;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
      const double lo = std::max(breaks[p], lo_cut), hi = std::min(breaks[p + 1], hi_cut);
      if (hi <= lo) continue;
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double rho = mid + half * gl.nodes[i];
        const cplx x = rho * c;
        const double q = std::norm(1.0 - x);
        double v = std::pow(pa / q, n + 1);
        if (beta != 0.0) v *= std::pow(delta_from_smooth(pa * (1.0 - rho * rho) / q, d.weight), beta);
        acc += gl.weights[i] * half * std::pow(rho, 2 * n - 1) * v;
      }
    }
    return acc;
  };
  const int m = angular_count(r * am);
  std::vector<cplx> roots(m);
  for (int k = 0; k < m; ++k) roots[k] = std::polar(1.0, 2.0 * kPi * k / m);
  if (n == 1) {
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += ray(am * roots[k]);
    return acc * (2.0 * kPi / m);
  }
  // <zeta, a/|a|> has density ((n-1)/pi)(1-|w|^2)^(n-2) on the unit disk.
  std::vector<double> tbreaks = graded_breaks(std::max(0.5, r * am));
  tbreaks.push_back(1.0);
  double disk = 0.0;
  for (std::size_t q = 0; q + 1 < tbreaks.size(); ++q) {
    const double tlo = tbreaks[q], thi = tbreaks[q + 1];
    if (thi <= tlo) continue;
    const double th = 0.5 * (thi - tlo), tm = 0.5 * (thi + tlo);
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double t = tm + th * gl.nodes[j];
      double acc = 0.0;
      for (int k = 0; k < m; ++k) acc += ray(am * t * roots[k]);
      disk += gl.weights[j] * th * t * std::pow(1.0 - t * t, n - 2) * acc * (2.0 * kPi / m);
    }
  }
  return d.sphere_area() * (n - 1) / kPi * disk;
}

std::vector<Point> sample_ball(const ModelDomain& d, const KobayashiBall& b, std::size_t count,
                               std::uint64_t seed) {
  const int n = d.n;
  if (static_cast<int>(b.center.dim()) != n) throw ParameterError("sample_ball: dimension mismatch");
  std::mt19937_64 rng(seed);
  const double a2 = b.center.norm_sq();
  const double r = b.radius;
  const double s = (1.0 - a2) / (1.0 - r * r * a2);
  const double scale_c = (1.0 - r * r) / (1.0 - r * r * a2);
  // Unit vector along the center (any unit vector when the center is 0).
  Point axis = a2 > 0.0 ? along(b.center, 1.0) : axis_point(n, 1.0);
  std::vector<Point> out;
  out.reserve(count);
  while (out.size() < count) {
    const Point u = uniform_unit_ball(n, rng);
    const cplx upar = inner(u, axis);
    std::vector<cplx> z(n);
    for (int i = 0; i < n; ++i) {
      const cplx par = upar * axis[i];
      const cplx perp = u[i] - par;
      z[i] = scale_c * b.center[i] + r * s * par + r * std::sqrt(s) * perp;
    }
    Point p(std::move(z));
    if (p.norm_sq() < 1.0 && pseudo_hyperbolic(b.center, p) < r) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> sample_truncated_domain(const ModelDomain& d, double eps, std::size_t count,
                                           std::uint64_t seed) {
  const double rmax = radius_for_delta(d, eps);
  const double tmax = std::atanh(rmax);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Point dir = unit_direction(d.n, rng);
    double radius;
    if (i % 2 == 0) {
      radius = rmax * std::pow(unif(rng), 1.0 / (2.0 * d.n));
    } else {
      radius = std::tanh(tmax * unif(rng));
    }
    out.push_back(along(dir, std::min(radius, rmax)));
  }
  return out;
}

DeltaRange delta_comparability_check(const ModelDomain& d, const Point& z0, double r,
                                     std::size_t samples) {
  if (samples < 1) throw ParameterError("delta_comparability_check: samples must be positive");
  const KobayashiBall ball(z0, r);
  const double d0 = boundary_distance(d, z0);
  DeltaRange range{INFINITY, 0.0};
  for (const Point& z : sample_ball(d, ball, samples, 0x5eedULL)) {
    const double q = boundary_distance(d, z) / d0;
    range.min = std::min(range.min, q);
    range.max = std::max(range.max, q);
  }
  return range;
}

std::vector<Point> radial_grid(const ModelDomain& d, std::size_t count, double delta_min,
                               double delta_max, const Point& direction) {
  if (!(delta_min > 0.0 && delta_max <= 1.0 && delta_min <= delta_max))
    throw ParameterError("radial_grid: need 0 < delta_min <= delta_max <= 1");
  if (static_cast<int>(direction.dim()) != d.n) throw ParameterError("radial_grid: dimension mismatch");
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const double delta = std::exp(std::log(delta_max) + f * (std::log(delta_min) - std::log(delta_max)));
    out.push_back(along(direction, radius_for_delta(d, delta)));
  }
  return out;
}

std::vector<Point> radial_grid(const ModelDomain& d, std::size_t count, double delta_min,
                               double delta_max) {
  return radial_grid(d, count, delta_min, delta_max, axis_point(d.n, 1.0));
}

// ---------------------------------------------------------------------------
// PointIndex

namespace {
constexpr std::size_t kIndexShells = 64;
}  // namespace

PointIndex::PointIndex(const std::vector<Point>& points, double bin_width)
    : size_(points.size()), bin_width_(bin_width) {
  disk_ = points.empty() || points.front().dim() == 1;
  if (!disk_) {
    dim_ = points.front().dim();
    shells_.resize(kIndexShells);
    for (std::size_t j = 0; j < shells_.size(); ++j) shells_[j].width = std::sqrt(std::ldexp(1.0, -static_cast<int>(j)));
    size_ = 0;
    for (const Point& p : points) insert(p);
    return;
  }
  flat_.reserve(points.size());
  for (const Point& p : points) {
    require_inside(p, "PointIndex");
    flat_.push_back(p[0]);
  }
  double tmax = 0.0;
  for (const cplx& c : flat_) tmax = std::max(tmax, std::atanh(std::abs(c)));
  bins_.assign(static_cast<std::size_t>(tmax / bin_width_) + 1, {});
  for (std::size_t i = 0; i < flat_.size(); ++i) {
    const std::size_t b = static_cast<std::size_t>(std::atanh(std::abs(flat_[i])) / bin_width_);
    bins_[std::min(b, bins_.size() - 1)].push_back({std::arg(flat_[i]), i});
  }
  for (auto& bin : bins_)
    std::sort(bin.begin(), bin.end(), [](const Entry& x, const Entry& y) {
      return x.angle < y.angle || (x.angle == y.angle && x.index < y.index);
    });
}

void PointIndex::query(const Point& z, double rho, std::vector<std::pair<std::size_t, double>>& out) const {
  if (size_ == 0) return;
  if (!disk_) {
    if (z.dim() != dim_) throw DomainError("PointIndex::query: dimension mismatch");
    require_inside(z, "PointIndex::query");
    const cplx* zp = z.coords.data();
    const std::size_t first = out.size();
    auto test = [&](std::size_t i) {
      const double v = distance(zp, i);
      if (v < rho) out.emplace_back(i, v);
    };
    if (rho >= 1.0) {
      for (std::size_t i = 0; i < size_; ++i) test(i);
      return;
    }
    const double z2 = z.norm_sq();
    const double rr = rho * rho;
    // 1 - |w|^2 lies within a factor (1 + rho) / (1 - rho) of 1 - |z|^2, and the
    // pseudo-hyperbolic ball lies in the Euclidean ball B(c, R).
    const double q = (1.0 + rho) / (1.0 - rho);
    const int jlo = std::max(0, static_cast<int>(std::floor(-std::log2(std::min(1.0, (1.0 - z2) * q)))) - 1);
    const int jhi = std::min(static_cast<int>(shells_.size()) - 1,
                             static_cast<int>(std::floor(-std::log2((1.0 - z2) / q))) + 1);
    const double R = rho * std::sqrt((1.0 - z2) / (1.0 - rr * z2)) * (1.0 + 1e-9) + 1e-15;
    const double shrink = (1.0 - rr) / (1.0 - rr * z2);
    const std::size_t m = 2 * dim_;
    std::vector<double> c(m);
    for (std::size_t k = 0; k < m; ++k) c[k] = shrink * (k % 2 == 0 ? z[k / 2].real() : z[k / 2].imag());
    std::vector<long long> lo(m), hi(m), idx(m);
    for (int j = jlo; j <= jhi; ++j) {
      const Shell& sh = shells_[j];
      if (sh.members.empty()) continue;
      double boxes = 1.0;
      for (std::size_t k = 0; k < m; ++k) {
        lo[k] = static_cast<long long>(std::floor((c[k] - R) / sh.width));
        hi[k] = static_cast<long long>(std::floor((c[k] + R) / sh.width));
        boxes *= static_cast<double>(hi[k] - lo[k] + 1);
      }
      if (boxes >= static_cast<double>(sh.members.size())) {
        for (std::size_t i : sh.members) test(i);
        continue;
      }
      idx = lo;
      while (true) {
        if (auto it = sh.cells.find(cell_key(j, idx)); it != sh.cells.end())
          for (std::size_t i : it->second) test(i);
        std::size_t k = 0;
        while (k < m && idx[k] == hi[k]) idx[k] = lo[k], ++k;
        if (k == m) break;
        ++idx[k];
      }
    }
    // Hash collisions can list a point twice; the output is sorted and unique.
    std::sort(out.begin() + first, out.end());
    out.erase(std::unique(out.begin() + first, out.end()), out.end());
    return;
  }
  require_inside(z, "PointIndex::query");
  const cplx zc = z[0];
  auto test = [&](std::size_t i) {
    const double v = std::abs(zc - flat_[i]) / std::abs(1.0 - zc * std::conj(flat_[i]));
    if (v < rho) out.emplace_back(i, v);
  };
  if (rho >= 1.0) {
    for (std::size_t i = 0; i < flat_.size(); ++i) test(i);
    return;
  }
  // The pseudo-hyperbolic disk is the Euclidean disk D(c, R).
  const double z2 = std::norm(zc);
  const double rr = rho * rho;
  const cplx c = zc * (1.0 - rr) / (1.0 - rr * z2);
  const double R = rho * (1.0 - z2) / (1.0 - rr * z2);
  const double cm = std::abs(c);
  const double lo = std::max(0.0, cm - R);
  const double hi = std::min(1.0, cm + R);
  const double tlo = std::atanh(lo);
  const double thi = hi >= 1.0 ? INFINITY : std::atanh(hi);
  const bool full_circle = R >= cm * (1.0 - 1e-12);
  const double half = full_circle ? kPi : std::asin(R / cm) + 1e-12;
  const double phi = std::arg(c);
  const std::size_t b0 = static_cast<std::size_t>(std::max(0.0, tlo / bin_width_ - 1e-9));
  for (std::size_t b = b0; b < bins_.size(); ++b) {
    if (b * bin_width_ > thi) break;
    const auto& bin = bins_[b];
    if (bin.empty()) continue;
    if (full_circle || half >= kPi) {
      for (const Entry& e : bin) test(e.index);
      continue;
    }
    auto scan = [&](double a0, double a1) {
      auto it = std::lower_bound(bin.begin(), bin.end(), a0,
                                 [](const Entry& e, double v) { return e.angle < v; });
      for (; it != bin.end() && it->angle <= a1; ++it) test(it->index);
    };
    double a0 = phi - half, a1 = phi + half;
    if (a0 < -kPi) {
      scan(a0 + 2 * kPi, kPi);
      scan(-kPi, a1);
    } else if (a1 > kPi) {
      scan(a0, kPi);
      scan(-kPi, a1 - 2 * kPi);
    } else {
      scan(a0, a1);
    }
  }
}

std::uint64_t PointIndex::cell_key(std::size_t shell, const std::vector<long long>& cell) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL * (shell + 1);
  for (long long v : cell) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ULL;
  }
  return h;
}

void PointIndex::cell_of(const cplx* z, double width, std::vector<long long>& cell) const {
  cell.resize(2 * dim_);
  for (std::size_t k = 0; k < 2 * dim_; ++k)
    cell[k] = static_cast<long long>(std::floor((k % 2 == 0 ? z[k / 2].real() : z[k / 2].imag()) / width));
}

double PointIndex::distance(const cplx* z, std::size_t i) const {
  const cplx* w = &flat_[i * dim_];
  double diff = 0.0, wedge = 0.0;
  cplx zw = 0.0;
  for (std::size_t a = 0; a < dim_; ++a) {
    diff += std::norm(z[a] - w[a]);
    zw += z[a] * std::conj(w[a]);
    for (std::size_t b = a + 1; b < dim_; ++b) wedge += std::norm(z[a] * w[b] - z[b] * w[a]);
  }
  return std::min(1.0, std::sqrt(std::max(0.0, diff - wedge)) / std::abs(1.0 - zw));
}

void PointIndex::insert(const Point& p) {
  if (disk_) throw ParameterError("PointIndex::insert: only supported for n >= 2");
  require_inside(p, "PointIndex");
  if (p.dim() != dim_) throw DomainError("PointIndex::insert: dimension mismatch");
  for (std::size_t a = 0; a < dim_; ++a) flat_.push_back(p[a]);
  const double d = 1.0 - p.norm_sq();
  const std::size_t j = std::min(shells_.size() - 1, static_cast<std::size_t>(std::max(0.0, std::floor(-std::log2(d)))));
  Shell& sh = shells_[j];
  std::vector<long long> cell;
  cell_of(p.coords.data(), sh.width, cell);
  sh.members.push_back(size_);
  sh.cells[cell_key(j, cell)].push_back(size_);
  ++size_;
}

// ---------------------------------------------------------------------------
// Lattices

namespace {

struct Candidates {
  std::vector<Point> points;
  double mesh = 0.0;  // Kobayashi covering radius of the candidate set (0 if unknown)
};

Candidates disk_candidates(const ModelDomain& d, double r, double eps, const LatticeOptions& options) {
  const double rmax = radius_for_delta(d, eps);
  const double tmax = std::atanh(rmax);
  const double h = 0.25 * std::atanh(r);
  const int rings = std::max(1, static_cast<int>(std::ceil(tmax / h)));
  const double step = tmax / rings;
  std::vector<int> counts(rings + 1, 1);
  std::size_t total = 1;
  for (int j = 1; j <= rings; ++j) {
    const double t = j * step;
    counts[j] = std::max(6, static_cast<int>(std::ceil(kPi * std::sinh(2.0 * t) / step)));
    total += counts[j];
  }
  if (total > options.max_candidates)
    throw ResourceError("build_lattice: the candidate grid needs " + std::to_string(total) +
                        " points, above the budget of " + std::to_string(options.max_candidates) +
                        "; raise the boundary cutoff eps or the candidate budget");
  Candidates c;
  c.mesh = step;
  c.points.reserve(total);
  c.points.emplace_back(axis_point(1, 0.0));
  for (int j = 1; j <= rings; ++j) {
    const double s = (j == rings) ? rmax * (1.0 - 1e-14) : std::tanh(j * step);
    const double offset = (j % 2 == 1) ? 0.5 : 0.0;
    for (int k = 0; k < counts[j]; ++k)
      c.points.emplace_back(cplx(std::polar(s, 2.0 * kPi * (k + offset) / counts[j])));
  }
  return c;
}

Candidates ball_candidates(const ModelDomain& d, double eps, const LatticeOptions& options) {
  Candidates c;
  const std::size_t count = options.random_candidates;
  if (count > options.max_candidates)
    throw ResourceError("build_lattice: candidate count above the budget");
  c.points.push_back(axis_point(d.n, 0.0));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double lmin = std::log(eps);
  for (std::size_t i = 1; i < count; ++i) {
    const Point dir = unit_direction(d.n, rng);
    const double delta = std::exp(lmin * unif(rng));
    double radius = radius_for_delta(d, std::max(delta, eps));
    c.points.push_back(along(dir, radius * (1.0 - 1e-14)));
  }
  return c;
}

}  // namespace

Lattice build_lattice(const ModelDomain& d, double r, double eps, const LatticeOptions& options) {
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("build_lattice: r must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("build_lattice: eps must lie in (0, 1)");
  const Candidates cand = d.n == 1 ? disk_candidates(d, r, eps, options) : ball_candidates(d, eps, options);
  const std::vector<Point>& pts = cand.points;
  const std::size_t count = pts.size();
  const double kr = std::atanh(r);
  // Candidates within Kobayashi distance kr - mesh of a center put every point of
  // the truncated domain within kr of it.
  const double stop = std::tanh(kr - (cand.mesh > 0.0 ? cand.mesh : 0.25 * kr));

  const PointIndex index(pts, d.n == 1 ? 0.25 * kr : 0.1);
  std::vector<double> dist(count, INFINITY);
  using Item = std::pair<double, long long>;  // (distance, -index): ties go to the lowest index
  std::priority_queue<Item> heap;
  for (std::size_t i = 0; i < count; ++i) heap.emplace(2.0, -static_cast<long long>(i));

  Lattice lat;
  lat.r = r;
  lat.boundary_cutoff = eps;
  lat.candidates = count;
  double last = 1.0;
  std::vector<std::pair<std::size_t, double>> hits;
  while (!heap.empty()) {
    const auto [value, neg] = heap.top();
    const std::size_t i = static_cast<std::size_t>(-neg);
    const double current = std::isinf(dist[i]) ? 2.0 : dist[i];
    if (value != current) {
      heap.pop();
      continue;
    }
    if (value <= stop) break;
    heap.pop();
    if (!lat.centers.empty()) last = std::min(last, value);
    lat.centers.push_back(pts[i]);
    dist[i] = 0.0;
    hits.clear();
    index.query(pts[i], std::min(value, 1.0), hits);  // radius 1 scans everything
    for (const auto& [j, v] : hits) {
      if (v < dist[j]) {
        dist[j] = v;
        if (v > stop) heap.emplace(v, -static_cast<long long>(j));
      }
    }
  }
  double cover = 0.0;
  for (std::size_t i = 0; i < count; ++i) cover = std::max(cover, dist[i]);
  lat.covering_radius = cover;
  lat.min_separation = lat.centers.size() > 1 ? std::atanh(last) : INFINITY;
  if (d.n > 1) {
    // Random candidates cover only themselves: points of the truncated domain
    // left uncovered become centers until a round of probes finds none.
    PointIndex centers(lat.centers, 0.05);
    for (int round = 0; round < options.repair_rounds; ++round) {
      std::size_t added = 0;
      for (const Point& z : sample_truncated_domain(d, eps, options.repair_samples, options.seed + 1 + round)) {
        hits.clear();
        centers.query(z, r, hits);
        if (hits.empty()) {
          centers.insert(z);
          lat.centers.push_back(z);
          ++added;
          continue;
        }
        double nearest = 1.0;
        for (const auto& h : hits) nearest = std::min(nearest, h.second);
        cover = std::max(cover, nearest);
      }
      lat.candidates += options.repair_samples;
      if (added == 0) break;
      if (lat.centers.size() > options.max_candidates)
        throw ResourceError("build_lattice: more than " + std::to_string(options.max_candidates) +
                            " centers; raise the boundary cutoff eps");
    }
    lat.covering_radius = cover;
  }
  const LatticeCheck chk = check_lattice(lat, pts);
  lat.overlap_bound = chk.max_overlap;
  const LatticeCheck extra = check_lattice(lat, sample_truncated_domain(d, eps, 20000, options.seed ^ 0x9e37ULL));
  lat.overlap_bound = std::max(lat.overlap_bound, extra.max_overlap);
  return lat;
}

LatticeCheck check_lattice(const Lattice& lattice, const std::vector<Point>& samples) {
  LatticeCheck out;
  out.samples = samples.size();
  const double R = 0.5 * (1.0 + lattice.r);
  const PointIndex index(lattice.centers, 0.1);
  std::vector<std::pair<std::size_t, double>> hits;
  for (const Point& z : samples) {
    hits.clear();
    index.query(z, R, hits);
    out.max_overlap = std::max(out.max_overlap, static_cast<int>(hits.size()));
    bool covered = false;
    for (const auto& h : hits) covered = covered || h.second < lattice.r;
    if (!covered) ++out.uncovered;
  }
  return out;
}

}  // namespace toeplab
