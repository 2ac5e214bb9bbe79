#include "toeplab/special.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "toeplab/errors.hpp"

namespace toeplab {

namespace {

using cplx = std::complex<double>;

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

// Maclaurin series; caller guarantees |x| <= 1/2 so terms decay at least like 2^-k
// once k exceeds the parameter magnitudes.
cplx series(double a, double b, double c, cplx x) {
  cplx sum = 1.0;
  cplx term = 1.0;
  for (int k = 0; k < 10000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
    sum += term;
    if (term == 0.0) break;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > std::abs(a) + std::abs(b)) break;
  }
  return sum;
}

}  // namespace

cplx hyp2f1(double a, double b, double c, cplx x) {
  if (is_nonpositive_integer(c)) throw ParameterError("hyp2f1: c must not be a non-positive integer");
  const double r = std::abs(x);
  if (!(r < 1.0)) throw DomainError("hyp2f1: requires |x| < 1");
  if (b == c) return std::pow(1.0 - x, -a);
  if (a == c) return std::pow(1.0 - x, -b);
  if (r <= 0.5) return series(a, b, c, x);

  // Integrate the ODE  xi(1-xi) y'' + (c - (a+b+1) xi) y' - ab y = 0  by Taylor steps.
  const cplx dir = x / r;
  cplx xi = 0.5 * dir;
  cplx y = series(a, b, c, xi);
  cplx dy = (a * b / c) * series(a + 1, b + 1, c + 1, xi);
  double travelled = 0.5;
  const double ab = a * b;
  const double q1 = -(a + b + 1.0);
  std::vector<cplx> coef;
  coef.reserve(128);
  while (travelled < r) {
    const double radius = std::min(std::abs(xi), std::abs(1.0 - xi));
    const double step = std::min(r - travelled, 0.5 * radius);
    const cplx h = step * dir;
    const cplx p0 = xi * (1.0 - xi);
    const cplx p1 = 1.0 - 2.0 * xi;
    const cplx q0 = c + q1 * xi;
    coef.assign({y, dy});
    cplx val = y + dy * h;
    cplx der = dy;
    cplx hk = h;  // h^(k+1) for the value, h^k for the derivative
    const double scale = std::abs(y) + std::abs(dy) * step;
    int small_run = 0;
    for (int k = 0; k < 2000; ++k) {
      const cplx next = -((p1 * double(k) + q0) * double(k + 1) * coef[k + 1] +
                          (-double(k) * (k - 1) + q1 * k - ab) * coef[k]) /
                        (p0 * double((k + 2) * (k + 1)));
      coef.push_back(next);
      der += double(k + 2) * next * hk;
      hk *= h;
      const cplx term = next * hk;
      val += term;
      if (std::abs(term) <= 1e-18 * scale) {
        if (++small_run >= 3) break;
      } else {
        small_run = 0;
      }
    }
    y = val;
    dy = der;
    xi += h;
    travelled += step;
  }
  return y;
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  if (n < 1) throw ParameterError("gauss_legendre: n must be positive");
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;
  auto rule = std::make_unique<GaussRule>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  auto legendre = [n](double x, double& pn, double& dpn) {
    double prev = 1.0, cur = x;
    for (int k = 2; k <= n; ++k) {
      const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
      prev = cur;
      cur = next;
    }
    pn = cur;
    dpn = n * (x * cur - prev) / (x * x - 1.0);
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pn = 0.0, dpn = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(x, pn, dpn);
      const double dx = pn / dpn;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, pn, dpn);
    const double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
    rule->nodes[i] = -x;
    rule->nodes[n - 1 - i] = x;
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
  slot = std::move(rule);
  return *slot;
}

const KronrodRule& gauss_kronrod15() {
  static const KronrodRule rule = [] {
    const double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.0};
    const double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    KronrodRule k{};
    for (int i = 0; i < 7; ++i) {
      k.nodes[i] = -xgk[i];
      k.nodes[14 - i] = xgk[i];
      k.kronrod_weights[i] = k.kronrod_weights[14 - i] = wgk[i];
      const double g = (i % 2 == 1) ? wg[i / 2] : 0.0;
      k.gauss_weights[i] = k.gauss_weights[14 - i] = g;
    }
    k.nodes[7] = 0.0;
    k.kronrod_weights[7] = wgk[7];
    k.gauss_weights[7] = wg[3];
    return k;
  }();
  return rule;
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::vector<unsigned> first_primes(std::size_t count) {
  std::vector<unsigned> primes;
  for (unsigned v = 2; primes.size() < count; ++v) {
    bool prime = true;
    for (unsigned p : primes) {
      if (p * p > v) break;
      if (v % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(v);
  }
  return primes;
}

double log_pochhammer(double x, double k) { return std::lgamma(x + k) - std::lgamma(x); }

}  // namespace toeplab
