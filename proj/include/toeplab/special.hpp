#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace toeplab {

/// Gauss hypergeometric function 2F1(a, b; c; x) for real parameters and
/// complex |x| < 1. Uses the Maclaurin series on |x| <= 1/2 and Taylor-series
/// continuation of the hypergeometric ODE along the ray from x/(2|x|) beyond.
std::complex<double> hyp2f1(double a, double b, double c, std::complex<double> x);

/// Nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule; results are cached and shared.
const GaussRule& gauss_legendre(int n);

/// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]. Node i of
/// the Kronrod rule is a Gauss node iff i is odd (counting from -1 upward).
struct KronrodRule {
  std::array<double, 15> nodes;
  std::array<double, 15> kronrod_weights;
  std::array<double, 15> gauss_weights;  // zero at non-Gauss nodes
};

const KronrodRule& gauss_kronrod15();

/// Radical inverse of index in the given base (van der Corput sequence).
double radical_inverse(std::uint64_t index, unsigned base);

/// First count primes, used as Halton bases.
std::vector<unsigned> first_primes(std::size_t count);

/// Pochhammer symbol (x)_k as a ratio of gamma functions, evaluated in log
/// space; x and x + k must be positive.
double log_pochhammer(double x, double k);

}  // namespace toeplab
