#pragma once

#include <cstdint>

#include "histat/log_prob.hpp"
#include "histat/tail.hpp"

// Log-space special functions. Everything here is a pure function of its
// arguments: no hidden state, safe to call concurrently, bit-identical
// results for identical inputs.
namespace histat::specfun {

/// ln Gamma(x) for x > 0. Relative error <= 1e-13 over [1e-3, 1e7],
/// including the neighbourhoods of the zeros at x = 1 and x = 2.
double log_gamma(double x);

/// ln Beta(a, b) for a, b > 0.
double log_beta(double a, double b);

/// ln C(n, k). Exact integer arithmetic for n <= 60, log-gamma with
/// Stirling-error correction above (relative error <= 1e-12 for n <= 1e6).
double log_binomial(long long n, long long k);

/// Log of the regularized incomplete beta I_x(a, b), stable down to far
/// tails (I_x ~ 1e-50 and below). Continued fraction with log-space
/// prefactor; throws NumericError carrying the iteration count if the
/// fraction fails to converge within the cap.
LogProb reg_inc_beta(double x, double a, double b);

/// Log of the hypergeometric mass P(X = k) for a draw of n from a
/// population of N with K marked. Log-zero outside the support.
LogProb hypergeom_log_pmf(long long N, long long K, long long n, long long k);

/// Log of P(X >= x) or P(X <= x); x is clamped to the support, so
/// GE at or below the support minimum gives probability one.
LogProb hypergeom_tail(long long N, long long K, long long n, long long x, Tail tail);

/// Log of the Student-t upper tail P(T >= t) with df degrees of freedom.
LogProb student_t_sf(double t, double df);

/// Log of the standard normal upper tail 1 - Phi(z); accurate in the log
/// out to z = 40 and beyond.
LogProb normal_upper_tail(double z);

/// log(exp(a) + exp(b)) without leaving log space.
double log_add_exp(double a, double b);

namespace detail {
// Continued-fraction core of reg_inc_beta, exposed for the iteration-cap
// tests. Requires x below the a/b switch point.
double beta_cont_fraction(double x, double a, double b, int* iterations);
constexpr int kBetaCfMaxIter = 500;
constexpr double kBetaCfEps = 1e-15;
}  // namespace detail

}  // namespace histat::specfun
