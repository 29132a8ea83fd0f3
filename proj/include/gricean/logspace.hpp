#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace gricean {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log 0 = -inf; everything else is std::log.
inline double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

inline double safe_exp(double lp) { return lp == kNegInf ? 0.0 : std::exp(lp); }

/// log(exp(a) + exp(b)) with -inf treated as an absent term.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

/// Max-shifted log-sum-exp; -inf when every term is -inf (or the span is empty).
inline double log_sum_exp(std::span<const double> terms) {
  double hi = kNegInf;
  for (double t : terms) hi = std::max(hi, t);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double t : terms) {
    if (t != kNegInf) acc += std::exp(t - hi);
  }
  return hi + std::log(acc);
}

/// Normalizes log-weights in place. Returns false (and leaves every entry at
/// -inf) when there is no mass to normalize.
inline bool log_normalize(std::span<double> weights) {
  const double z = log_sum_exp(weights);
  if (z == kNegInf) {
    std::fill(weights.begin(), weights.end(), kNegInf);
    return false;
  }
  for (double& w : weights) {
    if (w != kNegInf) w -= z;
  }
  return true;
}

/// Difference of two logs following the convention log 0 = -inf and
/// inf - inf = 0, so two absent terms cancel.
inline double log_ratio(double log_num, double log_den) {
  if (log_num == kNegInf && log_den == kNegInf) return 0.0;
  return log_num - log_den;
}

/// Shortest round-trippable decimal; infinities as "inf"/"-inf".
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace gricean
