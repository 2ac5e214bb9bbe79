#include "toeplab/fit.hpp"

#include <cmath>

#include "toeplab/errors.hpp"

namespace toeplab {

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ParameterError("fit_power_law: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t m = lx.size();
  if (m < 2) throw ParameterError("fit_power_law: need at least two positive points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw ParameterError("fit_power_law: abscissae are all equal");
  PowerFit fit;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  fit.points = m;
  return fit;
}

}  // namespace toeplab
