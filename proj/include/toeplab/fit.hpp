#pragma once

#include <cstddef>
#include <vector>

namespace toeplab {

/// Least-squares fit of log y = exponent * log x + log_prefactor.
struct PowerFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double residual = 0.0;  // root-mean-square residual in log space
  std::size_t points = 0;
};

/// Fits over the pairs with x > 0 and y > 0; throws ParameterError when fewer
/// than two such pairs remain.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace toeplab
