#pragma once

// Distributional entailment tests. Each test reads text probabilities from a
// source exposing `double log_prob(span<const UttIndex>)` and `language()`
// (TextDistribution, DirectMarginal, or a corpus estimator) and returns a
// log-scale residual, which is zero exactly when the test fires.

#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gricean/errors.hpp"
#include "gricean/logspace.hpp"
#include "gricean/marginal.hpp"
#include "gricean/semantics.hpp"
#include "gricean/speakers.hpp"

namespace gricean {

template <typename S>
concept ProbabilitySource = requires(const S& s, std::span<const UttIndex> z) {
  { s.log_prob(z) } -> std::convertible_to<double>;
  { s.language() } -> std::convertible_to<const Language&>;
};

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

inline Tokens concat(std::span<const UttIndex> a, std::span<const UttIndex> b) {
  Tokens out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Tokens concat(std::span<const UttIndex> a, UttIndex b) {
  Tokens out(a.begin(), a.end());
  out.push_back(b);
  return out;
}

namespace detail {

template <ProbabilitySource S>
double lp(const S& src, std::span<const UttIndex> a, std::span<const UttIndex> b) {
  return src.log_prob(concat(a, b));
}

template <ProbabilitySource S>
double lp(const S& src, std::span<const UttIndex> a, UttIndex b) {
  return src.log_prob(concat(a, b));
}

inline double require_positive(double log_p, const char* what) {
  if (log_p == kNegInf) throw DegenerateInputError(std::string(what) + " has probability 0");
  return log_p;
}

}  // namespace detail

/// log p(xy) - log p(xx). Zero iff [[x]] ⊆ [[y]] under a uniformly truthful
/// speaker; -inf when x and y are contradictory.
template <ProbabilitySource S>
double test_uniform(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y) {
  const double xx = detail::require_positive(detail::lp(src, x, x), "p(xx)");
  return detail::lp(src, x, y) - xx;
}

/// log p(xy) - log p(x omega).
template <ProbabilitySource S>
double test_uniform_omega(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y) {
  const double xw = detail::require_positive(detail::lp(src, x, src.language().eos()), "p(x omega)");
  return detail::lp(src, x, y) - xw;
}

/// [log p(xy) - log p(x tau)] - [log p(yy) - log p(y tau)]; zero iff
/// [[x]] ⊆ [[y]] for independently truthful speakers.
template <ProbabilitySource S>
double test_independent(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y, UttIndex tau) {
  const double xt = detail::require_positive(detail::lp(src, x, tau), "p(x tau)");
  const double yt = detail::require_positive(detail::lp(src, y, tau), "p(y tau)");
  const double yy = detail::lp(src, y, y);
  return detail::lp(src, x, y) - xt - (yy - yt);
}

/// Marginal form: [log p(xy) - log p(x)] - [log p(yy) - log p(y)].
template <ProbabilitySource S>
double test_independent_marginal(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y) {
  const double px = detail::require_positive(src.log_prob(x), "p(x)");
  const double py = detail::require_positive(src.log_prob(y), "p(y)");
  return detail::lp(src, x, y) - px - (detail::lp(src, y, y) - py);
}

/// The relation exactly as printed, p(xy)/p(y tau) = p(xx)/p(x tau). It
/// vanishes iff [[y]] ⊆ [[x]]; kept for comparison.
template <ProbabilitySource S>
double test_independent_as_stated(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y, UttIndex tau) {
  const double yt = detail::require_positive(detail::lp(src, y, tau), "p(y tau)");
  const double xx = detail::require_positive(detail::lp(src, x, x), "p(xx)");
  return detail::lp(src, x, y) - yt - (xx - detail::lp(src, x, tau));
}

/// g(x, y) = log p(xy)/p(x omega) - log p(yy)/p(y omega). -inf when p(xy) = 0;
/// NaN when a denominator vanishes.
template <ProbabilitySource S>
double gricean_score(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y) {
  const UttIndex eos = src.language().eos();
  const double xw = detail::lp(src, x, eos);
  const double yw = detail::lp(src, y, eos);
  if (xw == kNegInf || yw == kNegInf) return kUndefined;
  const double yy = detail::lp(src, y, y);
  if (yy == kNegInf) return kUndefined;
  return (detail::lp(src, x, y) - xw) - (yy - yw);
}

/// c(x) recovered as log p(x omega) - log p(xx) + c(omega).
template <ProbabilitySource S>
double cost_recovery(const S& src, std::span<const UttIndex> x, double c_omega) {
  const double xx = detail::require_positive(detail::lp(src, x, x), "p(xx)");
  return detail::lp(src, x, src.language().eos()) - xx + c_omega;
}

/// log p(x omega) - log p(xy) - c(y) + c(omega). -inf flags p(xy) = 0.
template <ProbabilitySource S>
double s_score(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y, const CostFunction& cost) {
  const double xy = detail::lp(src, x, y);
  if (xy == kNegInf) return kNegInf;
  const UttIndex eos = src.language().eos();
  return detail::lp(src, x, eos) - xy - cost.text(y) + cost(eos);
}

/// log p(x omega) - log p(xy). -inf flags p(xy) = 0.
template <ProbabilitySource S>
double u_score(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y) {
  const double xy = detail::lp(src, x, y);
  if (xy == kNegInf) return kNegInf;
  return detail::lp(src, x, src.language().eos()) - xy;
}

/// p(xy) = 0 and p(yx) != 0, with exact zeros.
template <ProbabilitySource S>
bool test_nonredundant_strict(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y) {
  return detail::lp(src, x, y) == kNegInf && detail::lp(src, y, x) != kNegInf;
}

// -- erratum condition --------------------------------------------------------

struct ErratumCondition {
  double p_Y = 0.0;       // p(Y | [[x]]) with Y = [[x]] ∩ [[y]]
  double I_Y = 0.0;       // E[exp(alpha I(y|x;w)) G(x,w) | w in Y]
  double I = 0.0;         // E[G(x,w) | w in [[x]]]
  double residual = 0.0;  // p(Y) I(Y) - I
  bool contradiction = false;

  /// log(p(Y) I(Y)) - log I, which equals g(x, y) for a Gricean speaker.
  double implied_g() const { return contradiction ? kNegInf : std::log(p_Y * I_Y) - std::log(I); }
};

/// Evaluates the corrected zero condition of the g-test from the speaker's
/// internals, with G(x, w) = p(x | w) / Z(x, w) and Z the speaker's
/// normalizer after x. Expectations are over the prior restricted to [[x]],
/// so entailment gives p(Y) = 1 and I(Y) = I. y is a single utterance.
inline ErratumCondition erratum_condition(const DynamicGriceanSpeaker& speaker, std::span<const UttIndex> x, UttIndex y) {
  const Language& lang = speaker.language();
  const WorldSpace& ws = speaker.worlds();
  const Denotation dx = text_denotation(x, lang);
  if (dx.empty()) throw DomainError("erratum condition needs a satisfiable x");
  const Denotation Y = dx & lang.denotation(y);

  ErratumCondition out;
  const double px = truth_probability(dx, ws);
  double weighted = 0.0;
  for (WorldIndex w = 0; w < ws.size(); ++w) {
    if (!dx.contains(w)) continue;
    const double lpx = text_prob_given_world(speaker, x, w);
    if (lpx == kNegInf) continue;
    const double G = std::exp(lpx - speaker.log_normalizer(x, w));
    out.I += ws.prior(w) * G;
    if (Y.contains(w)) {
      out.p_Y += ws.prior(w);
      weighted += ws.prior(w) * std::exp(speaker.alpha() * speaker.information(x, y, w)) * G;
    }
  }
  out.I /= px;
  if (Y.empty() || out.p_Y == 0.0) {
    out.p_Y = 0.0;
    out.contradiction = true;
    out.residual = -out.I;
    return out;
  }
  out.I_Y = weighted / out.p_Y;
  out.p_Y /= px;
  out.residual = out.p_Y * out.I_Y - out.I;
  return out;
}

// -- classification -----------------------------------------------------------

enum class GroundTruth { Entails, StrictlyEntails, Incomparable, Contradictory };
enum class Classification { Entails, EntailsOrNearContradiction, NotEntails };

inline const char* to_string(GroundTruth g) {
  switch (g) {
    case GroundTruth::Entails: return "entails";
    case GroundTruth::StrictlyEntails: return "strictly_entails";
    case GroundTruth::Incomparable: return "incomparable";
    case GroundTruth::Contradictory: return "contradictory";
  }
  return "unknown";
}

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Entails: return "Entails";
    case Classification::EntailsOrNearContradiction: return "EntailsOrNearContradiction";
    case Classification::NotEntails: return "NotEntails";
  }
  return "unknown";
}

/// From denotations only: equal sets entail, proper subsets strictly entail,
/// disjoint sets are contradictory, everything else is incomparable.
inline GroundTruth ground_truth(const Denotation& x, const Denotation& y) {
  if ((x & y).empty()) return GroundTruth::Contradictory;
  if (x == y) return GroundTruth::Entails;
  if (x.proper_subset_of(y)) return GroundTruth::StrictlyEntails;
  return GroundTruth::Incomparable;
}

inline bool entails(GroundTruth g) { return g == GroundTruth::Entails || g == GroundTruth::StrictlyEntails; }

struct PairScores {
  double g = kUndefined;
  double s = kUndefined;
  double u = kUndefined;
  double uniform_residual = kUndefined;
  double independent_residual = kUndefined;
};

struct EntailmentVerdict {
  Tokens x;
  Tokens y;
  GroundTruth ground_truth = GroundTruth::Incomparable;
  PairScores scores;
  /// Two-way reading of the g-test: |g| <= tolerance cannot separate
  /// entailment from near contradiction.
  Classification g_label = Classification::NotEntails;
  /// Refined with the truth-probability threshold on [[xy]].
  Classification classification = Classification::NotEntails;
  double tolerance_used = 0.0;
  double truth_threshold = 0.0;
};

struct ClassifyOptions {
  double tolerance = 1e-9;
  /// Minimum p([[xy]]) to upgrade a vanishing g to Entails. Defaults to
  /// half of min(p([[x]]), p([[y]])) when unset.
  std::optional<double> truth_threshold;
};

inline EntailmentVerdict classify(Tokens x, Tokens y, const PairScores& scores, const Language& lang, const WorldSpace& ws,
                                  const ClassifyOptions& opts = {}) {
  EntailmentVerdict v;
  const Denotation dx = text_denotation(x, lang);
  const Denotation dy = text_denotation(y, lang);
  v.ground_truth = ground_truth(dx, dy);
  v.scores = scores;
  v.tolerance_used = opts.tolerance;
  const double pxy = truth_probability(dx & dy, ws);
  v.truth_threshold = opts.truth_threshold.value_or(0.5 * std::min(truth_probability(dx, ws), truth_probability(dy, ws)));
  const bool vanishes = std::abs(scores.g) <= opts.tolerance;  // false for NaN and infinities
  v.g_label = vanishes ? Classification::EntailsOrNearContradiction : Classification::NotEntails;
  if (!vanishes) {
    v.classification = Classification::NotEntails;
  } else {
    v.classification = pxy >= v.truth_threshold ? Classification::Entails : Classification::EntailsOrNearContradiction;
  }
  v.x = std::move(x);
  v.y = std::move(y);
  return v;
}

/// Every score applicable to a generic source; degenerate inputs become NaN.
template <ProbabilitySource S>
PairScores score_pair(const S& src, std::span<const UttIndex> x, std::span<const UttIndex> y, const CostFunction& cost) {
  const auto guarded = [](auto&& fn) {
    try {
      return static_cast<double>(fn());
    } catch (const DegenerateInputError&) {
      return kUndefined;
    }
  };
  PairScores s;
  const UttIndex eos = src.language().eos();
  s.g = gricean_score(src, x, y);
  s.s = s_score(src, x, y, cost);
  s.u = u_score(src, x, y);
  s.uniform_residual = guarded([&] { return test_uniform(src, x, y); });
  s.independent_residual = guarded([&] { return test_independent(src, x, y, eos); });
  return s;
}

inline void write_verdict_header(std::ostream& out) {
  out << "x,y,ground_truth,g,s,u,uniform_residual,independent_residual,classification\n";
}

inline void write_verdict_row(std::ostream& out, const EntailmentVerdict& v, const Language& lang) {
  out << lang.format(v.x) << ',' << lang.format(v.y) << ',' << to_string(v.ground_truth) << ',' << format_double(v.scores.g) << ','
      << format_double(v.scores.s) << ',' << format_double(v.scores.u) << ',' << format_double(v.scores.uniform_residual) << ','
      << format_double(v.scores.independent_residual) << ',' << to_string(v.classification) << '\n';
}

}  // namespace gricean
