#pragma once

// Exact text probabilities: p(z | w) as a chain of next-utterance
// probabilities, p(z) marginalized over the world prior, and an exhaustive
// table of every text up to a length cap.

#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gricean/errors.hpp"
#include "gricean/logspace.hpp"
#include "gricean/semantics.hpp"
#include "gricean/speakers.hpp"

namespace gricean {

/// log p(z | w). Omega may only appear last. Short-circuits at the first zero
/// step, so speakers are never queried in states they cannot reach.
inline double text_prob_given_world(const Speaker& speaker, std::span<const UttIndex> z, WorldIndex w) {
  double lp = 0.0;
  for (std::size_t t = 0; t < z.size(); ++t) {
    const auto next = speaker.next_log_probs(z.first(t), w);
    lp += next.at(z[t]);
    if (lp == kNegInf) return kNegInf;
  }
  return lp;
}

/// log p(z) = log sum_w p(w) p(z | w).
inline double marginal_prob(const Speaker& speaker, std::span<const UttIndex> z, const WorldSpace& ws) {
  std::vector<double> terms(ws.size());
  for (WorldIndex w = 0; w < ws.size(); ++w) terms[w] = ws.log_prior(w) + text_prob_given_world(speaker, z, w);
  return log_sum_exp(terms);
}

/// On-demand marginal probabilities; the log_prob source used when a full
/// table would be too large (e.g. large generated languages).
class DirectMarginal {
 public:
  DirectMarginal(const Speaker& speaker, const WorldSpace& ws) : speaker_(&speaker), ws_(&ws) {}
  double log_prob(std::span<const UttIndex> z) const { return marginal_prob(*speaker_, z, *ws_); }
  const Language& language() const { return speaker_->language(); }

 private:
  const Speaker* speaker_;
  const WorldSpace* ws_;
};

enum class TextKind { Prefix, Complete };

inline const char* to_string(TextKind k) { return k == TextKind::Prefix ? "prefix" : "complete"; }

struct EnumerationOptions {
  std::size_t max_len = 6;
  /// Upper bound on |X|^max_len * |W|.
  double budget = 5e7;
};

/// Every text of at most max_len non-omega tokens, both as a prefix (p(z):
/// texts starting with z) and completed (p(z omega)). Zero-probability
/// branches are pruned, so an absent in-range entry means probability 0.
class TextDistribution {
 public:
  std::size_t max_len() const { return max_len_; }
  const Language& language() const { return lang_; }

  /// log p(z). Complete texts end in omega; anything else is a prefix.
  double log_prob(std::span<const UttIndex> z) const {
    const bool complete = !z.empty() && z.back() == lang_.eos();
    const std::size_t body = complete ? z.size() - 1 : z.size();
    if (body > max_len_) {
      throw DomainError("text '" + lang_.format(z) + "' is longer than the enumerated max_len " + std::to_string(max_len_));
    }
    const auto& table = complete ? complete_ : prefix_;
    auto it = table.find(Tokens(z.begin(), z.end()));
    return it == table.end() ? kNegInf : it->second;
  }

  double log_prob(const Text& t) const { return log_prob(std::span<const UttIndex>(t.tokens())); }

  const std::map<Tokens, double>& prefixes() const { return prefix_; }
  const std::map<Tokens, double>& completes() const { return complete_; }
  std::size_t entry_count() const { return prefix_.size() + complete_.size(); }

  /// |(sum of complete mass) + (frontier prefix mass not yet completed) - 1|.
  double normalization_error() const { return normalization_error_; }

  /// CSV: tokens (space-joined ids, empty for the empty text), kind, log_prob.
  void write_csv(std::ostream& out) const {
    out << "tokens,kind,log_prob\n";
    for (const auto& [z, lp] : prefix_) out << lang_.format(z) << ',' << to_string(TextKind::Prefix) << ',' << format_double(lp) << '\n';
    for (const auto& [z, lp] : complete_) out << lang_.format(z) << ',' << to_string(TextKind::Complete) << ',' << format_double(lp) << '\n';
  }

 private:
  friend TextDistribution enumerate_texts(const Speaker&, const WorldSpace&, const EnumerationOptions&);

  std::size_t max_len_ = 0;
  Language lang_;
  std::map<Tokens, double> prefix_;
  std::map<Tokens, double> complete_;
  double normalization_error_ = 0.0;
};

inline double enumeration_cost(std::size_t n_utterances, std::size_t max_len, std::size_t n_worlds) {
  return std::pow(static_cast<double>(n_utterances), static_cast<double>(max_len)) * static_cast<double>(n_worlds);
}

inline TextDistribution enumerate_texts(const Speaker& speaker, const WorldSpace& ws, const EnumerationOptions& opts = {}) {
  const Language& lang = speaker.language();
  const double cost = enumeration_cost(lang.size(), opts.max_len, ws.size());
  if (cost > opts.budget) {
    throw ResourceError("enumeration needs " + format_double(cost) + " text-world evaluations, budget is " +
                        format_double(opts.budget));
  }

  TextDistribution dist;
  dist.max_len_ = opts.max_len;
  dist.lang_ = lang;
  const std::size_t nw = ws.size();
  const UttIndex eos = lang.eos();

  std::vector<double> complete_mass;
  std::vector<double> frontier_prefix;
  std::vector<double> frontier_complete;

  // Depth-first over prefixes, carrying log p(z | w) for every world.
  Tokens z;
  auto visit = [&](auto&& self, const std::vector<double>& per_world) -> void {
    std::vector<double> joint(nw);
    for (WorldIndex w = 0; w < nw; ++w) joint[w] = ws.log_prior(w) + per_world[w];
    const double lp = log_sum_exp(joint);
    dist.prefix_.emplace(z, lp);
    if (z.size() == opts.max_len) frontier_prefix.push_back(lp);

    std::vector<std::vector<double>> next(nw);
    for (WorldIndex w = 0; w < nw; ++w) {
      if (per_world[w] != kNegInf) next[w] = speaker.next_log_probs(z, w);
    }
    for (std::size_t y = 0; y < lang.size(); ++y) {
      const bool is_eos = y == eos;
      if (!is_eos && z.size() == opts.max_len) continue;
      std::vector<double> child(nw, kNegInf);
      bool alive = false;
      for (WorldIndex w = 0; w < nw; ++w) {
        if (per_world[w] == kNegInf) continue;
        child[w] = per_world[w] + next[w][y];
        alive = alive || child[w] != kNegInf;
      }
      if (!alive) continue;
      z.push_back(static_cast<UttIndex>(y));
      if (is_eos) {
        for (WorldIndex w = 0; w < nw; ++w) joint[w] = ws.log_prior(w) + child[w];
        const double lc = log_sum_exp(joint);
        dist.complete_.emplace(z, lc);
        complete_mass.push_back(lc);
        if (z.size() - 1 == opts.max_len) frontier_complete.push_back(lc);
      } else {
        self(self, child);
      }
      z.pop_back();
    }
  };
  visit(visit, std::vector<double>(nw, 0.0));

  const double total = safe_exp(log_sum_exp(complete_mass)) + safe_exp(log_sum_exp(frontier_prefix)) -
                       safe_exp(log_sum_exp(frontier_complete));
  dist.normalization_error_ = std::abs(total - 1.0);
  return dist;
}

}  // namespace gricean
