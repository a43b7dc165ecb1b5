#pragma once

#include <map>
#include <string>
#include <vector>

#include "histat/log_prob.hpp"
#include "histat/tail.hpp"

// The historical tests, each a named procedure returning a TestResult.
// All pure functions over immutable inputs.
namespace histat::inference {

struct TestResult {
  std::string method;
  double statistic = 0.0;
  double p_value = 1.0;
  LogProb log_p = LogProb::one();
  Tail tail = Tail::GE;
  // Scalar inputs echoed for audit; re-running a scalar-parameterised method
  // on its echo reproduces the result bit-identically.
  std::map<std::string, double> params;
};

// Cournot's deviation test: P is his two-sided probability that the
// deviation is not attributable to chance, Pi = (1+P)/2 the one-sided form.
struct CournotResult {
  double deviation = 0.0;
  double P = 0.0;
  double Pi = 0.5;
  std::string normalization = "wald-null";  // sqrt(p0 (1-p0) / n) scaling
};

/// Sign test over n consecutive periods all deviating the same way:
/// p = 2^-n, exact power of two.
TestResult arbuthnot_sign_test(int n_periods);

/// Posterior probability that a latent proportion is <= threshold, under a
/// uniform prior: I_threshold(successes + 1, failures + 1).
TestResult laplace_proportion_test(long long successes, long long failures, double threshold);

/// P(p1 > p2) under independent uniform-prior Beta posteriors, by the
/// moment-matched normal approximation to the difference.
TestResult laplace_two_sample(long long s1, long long f1, long long s2, long long f2);

/// Standardized deviation of x/n from p0; P = 2 Phi(z) - 1, Pi = Phi(z).
CournotResult cournot_deviation_test(long long x, long long n, double p0);

/// Exact tail probability of an observed overlap under the hypergeometric
/// null: the Fisher exact test on séries intersections.
TestResult fisher_intersection_test(long long N, long long K, long long n, long long x, Tail tail);

enum class TVariant { POOLED, WELCH };

/// Two-sample t test; classic pooled-variance Student by default, Welch
/// behind the flag. Two-sided p = 2 min(upper, lower), capped at 1.
TestResult student_two_sample(const std::vector<double>& xs, const std::vector<double>& ys,
                              TVariant variant = TVariant::POOLED);

/// Pearson correlation with the t-transform p-value, df = n - 2, two-sided.
TestResult pearson_test(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace histat::inference
