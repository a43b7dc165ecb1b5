#include "histat/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "histat/specfun.hpp"

namespace histat::inference {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TestResult make_result(std::string method, double statistic, LogProb log_p, Tail tail,
                       std::map<std::string, double> params) {
  TestResult r;
  r.method = std::move(method);
  r.statistic = statistic;
  r.log_p = log_p;
  r.p_value = log_p.linear();
  r.tail = tail;
  r.params = std::move(params);
  return r;
}

struct SampleStats {
  double n, mean, ss;  // ss = sum of squared deviations
};

SampleStats sample_stats(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {n, mean, ss};
}

// Two-sided p from a t statistic: 2 min(upper, lower) tail, capped at 1.
LogProb two_sided_t(double t, double df) {
  if (std::isinf(t)) return LogProb::zero();
  const double lg = specfun::student_t_sf(std::fabs(t), df).log() + std::log(2.0);
  return LogProb::from_log(std::min(lg, 0.0));
}

}  // namespace

TestResult arbuthnot_sign_test(int n_periods) {
  if (n_periods < 1) throw DomainError("arbuthnot_sign_test: requires n_periods >= 1");
  TestResult r = make_result("arbuthnot-sign", static_cast<double>(n_periods),
                             LogProb::from_log(-n_periods * M_LN2), Tail::GE,
                             {{"n_periods", static_cast<double>(n_periods)}});
  r.p_value = std::exp2(static_cast<double>(-n_periods));  // exact power of two
  return r;
}

TestResult laplace_proportion_test(long long successes, long long failures, double threshold) {
  if (successes < 0 || failures < 0)
    throw DomainError("laplace_proportion_test: counts must be >= 0");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw DomainError("laplace_proportion_test: threshold must be in [0,1]");
  const LogProb p = specfun::reg_inc_beta(threshold, static_cast<double>(successes) + 1.0,
                                          static_cast<double>(failures) + 1.0);
  return make_result("laplace-proportion", static_cast<double>(successes), p, Tail::LE,
                     {{"successes", static_cast<double>(successes)},
                      {"failures", static_cast<double>(failures)},
                      {"threshold", threshold}});
}

TestResult laplace_two_sample(long long s1, long long f1, long long s2, long long f2) {
  if (s1 < 0 || f1 < 0 || s2 < 0 || f2 < 0)
    throw DomainError("laplace_two_sample: counts must be >= 0");
  if (s1 + f1 < 1 || s2 + f2 < 1)
    throw DomainError("laplace_two_sample: each group needs at least one observation");
  // Beta(s+1, f+1) posterior moments.
  auto beta_mean = [](long long s, long long f) {
    return (static_cast<double>(s) + 1.0) / (static_cast<double>(s + f) + 2.0);
  };
  auto beta_var = [&](long long s, long long f) {
    const double m = beta_mean(s, f);
    return m * (1.0 - m) / (static_cast<double>(s + f) + 3.0);
  };
  const double m1 = beta_mean(s1, f1), m2 = beta_mean(s2, f2);
  const double v = beta_var(s1, f1) + beta_var(s2, f2);
  const double d = (m1 - m2) / std::sqrt(v);
  // P(p1 > p2) = P(N(m1 - m2, v) > 0) = 1 - Phi(-d)
  const LogProb p = specfun::normal_upper_tail(-d);
  return make_result("laplace-two-sample", d, p, Tail::GE,
                     {{"s1", static_cast<double>(s1)},
                      {"f1", static_cast<double>(f1)},
                      {"s2", static_cast<double>(s2)},
                      {"f2", static_cast<double>(f2)}});
}

CournotResult cournot_deviation_test(long long x, long long n, double p0) {
  if (n < 1) throw DomainError("cournot_deviation_test: requires n >= 1");
  if (x < 0 || x > n) throw DomainError("cournot_deviation_test: requires 0 <= x <= n");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw DomainError("cournot_deviation_test: requires p0 strictly inside (0,1)");
  const double phat = static_cast<double>(x) / static_cast<double>(n);
  const double z = std::fabs(phat - p0) / std::sqrt(p0 * (1.0 - p0) / static_cast<double>(n));
  const double upper = specfun::normal_upper_tail(z).linear();
  CournotResult r;
  r.deviation = z;
  r.Pi = 1.0 - upper;       // Phi(z)
  r.P = 2.0 * r.Pi - 1.0;   // exact: (1 + P)/2 reproduces Pi bit-for-bit
  return r;
}

TestResult fisher_intersection_test(long long N, long long K, long long n, long long x,
                                    Tail tail) {
  if (tail != Tail::GE && tail != Tail::LE)
    throw DomainError("fisher_intersection_test: tail must be GE or LE");
  const LogProb p = specfun::hypergeom_tail(N, K, n, x, tail);
  return make_result("fisher-intersection", static_cast<double>(x), p, tail,
                     {{"N", static_cast<double>(N)},
                      {"K", static_cast<double>(K)},
                      {"n", static_cast<double>(n)},
                      {"x", static_cast<double>(x)},
                      {"tail", tail == Tail::GE ? 1.0 : 0.0}});
}

TestResult student_two_sample(const std::vector<double>& xs, const std::vector<double>& ys,
                              TVariant variant) {
  if (xs.size() < 2 || ys.size() < 2)
    throw DomainError("student_two_sample: each sample needs >= 2 values");
  const SampleStats a = sample_stats(xs), b = sample_stats(ys);

  double t, df;
  if (variant == TVariant::POOLED) {
    df = a.n + b.n - 2.0;
    const double sp2 = (a.ss + b.ss) / df;
    const double se = std::sqrt(sp2 * (1.0 / a.n + 1.0 / b.n));
    if (se == 0.0) {
      if (a.mean == b.mean)
        throw NumericError("student_two_sample: degenerate samples (zero pooled variance, equal means)");
      t = (a.mean > b.mean) ? kInf : -kInf;  // noise-free separation
    } else {
      t = (a.mean - b.mean) / se;
    }
  } else {
    const double va = a.ss / (a.n - 1.0) / a.n;
    const double vb = b.ss / (b.n - 1.0) / b.n;
    const double se2 = va + vb;
    if (se2 == 0.0) {
      if (a.mean == b.mean)
        throw NumericError("student_two_sample: degenerate samples (zero variance, equal means)");
      t = (a.mean > b.mean) ? kInf : -kInf;
      df = a.n + b.n - 2.0;
    } else {
      t = (a.mean - b.mean) / std::sqrt(se2);
      df = se2 * se2 / (va * va / (a.n - 1.0) + vb * vb / (b.n - 1.0));
    }
  }

  TestResult r = make_result(variant == TVariant::POOLED ? "student-pooled" : "welch", t,
                             two_sided_t(t, df), Tail::TWO_SIDED,
                             {{"n1", a.n},
                              {"n2", b.n},
                              {"mean1", a.mean},
                              {"mean2", b.mean},
                              {"df", df}});
  return r;
}

TestResult pearson_test(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DomainError("pearson_test: samples must have equal length");
  const std::size_t n = xs.size();
  if (n < 3) throw DomainError("pearson_test: requires n >= 3");
  const SampleStats a = sample_stats(xs), b = sample_stats(ys);
  if (a.ss == 0.0 || b.ss == 0.0)
    throw NumericError("pearson_test: constant input has no defined correlation");

  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) cross += (xs[i] - a.mean) * (ys[i] - b.mean);
  double r = cross / std::sqrt(a.ss * b.ss);
  r = std::clamp(r, -1.0, 1.0);

  const double df = static_cast<double>(n) - 2.0;
  const double one_minus_r2 = (1.0 - r) * (1.0 + r);
  const double t = (one_minus_r2 <= 0.0) ? (r > 0 ? kInf : -kInf) : r * std::sqrt(df / one_minus_r2);

  TestResult res = make_result("pearson", r, two_sided_t(t, df), Tail::TWO_SIDED,
                               {{"n", static_cast<double>(n)}, {"t", t}, {"df", df}});
  return res;
}

}  // namespace histat::inference
