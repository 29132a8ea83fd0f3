#pragma once

// Finite-corpus side: seeded ancestral sampling, the prefix-frequency and
// n-gram estimators, and the concentration / complexity bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gricean/errors.hpp"
#include "gricean/logspace.hpp"
#include "gricean/semantics.hpp"
#include "gricean/speakers.hpp"

namespace gricean {

// -- randomness ----------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent stream for text `index` of a corpus drawn with `seed`.
inline std::mt19937_64 text_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

/// Uniform in [0, 1) from the top 53 bits; avoids implementation-defined
/// std::uniform_real_distribution so corpora are portable.
inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// -- corpora ---------------------------------------------------------------------

struct Corpus {
  std::vector<Tokens> texts;  // complete: each ends in omega
  std::vector<WorldIndex> worlds;
  std::uint64_t seed = 0;
  std::string provenance;
  std::size_t truncated = 0;

  std::size_t size() const { return texts.size(); }
  double truncation_rate() const { return texts.empty() ? 0.0 : static_cast<double>(truncated) / static_cast<double>(texts.size()); }
};

namespace detail {

/// Prefix trie over utterance indices; node 0 is the empty text. Children are
/// kept in small unsorted lists, which suits the low branching of sampled
/// corpora.
template <typename Payload>
class PrefixTrie {
 public:
  PrefixTrie() : nodes_(1) {}

  std::uint32_t child(std::uint32_t node, UttIndex u) {
    for (const auto& [k, idx] : nodes_[node].kids) {
      if (k == u) return idx;
    }
    const auto idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_[node].kids.emplace_back(u, idx);
    nodes_.emplace_back();
    return idx;
  }

  /// Node for z, or nullopt when z was never inserted.
  std::optional<std::uint32_t> find(std::span<const UttIndex> z) const {
    std::uint32_t node = 0;
    for (UttIndex u : z) {
      bool found = false;
      for (const auto& [k, idx] : nodes_[node].kids) {
        if (k == u) {
          node = idx;
          found = true;
          break;
        }
      }
      if (!found) return std::nullopt;
    }
    return node;
  }

  Payload& operator[](std::uint32_t node) { return nodes_[node].payload; }
  const Payload& operator[](std::uint32_t node) const { return nodes_[node].payload; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Payload payload{};
    std::vector<std::pair<UttIndex, std::uint32_t>> kids;
  };
  std::vector<Node> nodes_;
};

}  // namespace detail

/// Ancestral sampler. Cumulative next-utterance tables are cached per
/// (context, world) in a context trie, or per world for context-free speakers.
class CorpusSampler {
 public:
  CorpusSampler(const Speaker& speaker, const WorldSpace& ws, std::size_t max_len_guard = 50)
      : speaker_(&speaker), guard_(max_len_guard) {
    if (guard_ == 0) throw ParameterError("max_len_guard must be positive");
    if (speaker.worlds().size() != ws.size()) throw StructuralError("sampler world space does not match the speaker");
    double acc = 0.0;
    for (double p : ws.priors()) prior_cdf_.push_back(acc += p);
  }

  /// Draws text `index` of the corpus with `seed`. Returns whether the guard
  /// truncated it.
  bool sample(std::uint64_t seed, std::uint64_t index, Tokens& text, WorldIndex& world) const {
    auto rng = text_stream(seed, index);
    world = draw(prior_cdf_, unit_double(rng));
    text.clear();
    const UttIndex eos = speaker_->language().eos();
    const bool context_free = speaker_->context_free();
    std::lock_guard lock(mutex_);
    std::uint32_t node = 0;
    while (true) {
      if (text.size() == guard_) {
        text.push_back(eos);
        return true;
      }
      const auto y = static_cast<UttIndex>(draw(cdf(node, text, world), unit_double(rng)));
      text.push_back(y);
      if (y == eos) return false;
      if (!context_free) node = cache_.child(node, y);
    }
  }

  Corpus sample_corpus(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw ParameterError("corpus size must be >= 1");
    Corpus c;
    c.seed = seed;
    c.texts.resize(n);
    c.worlds.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (sample(seed, i, c.texts[i], c.worlds[i])) ++c.truncated;
    }
    return c;
  }

 private:
  static std::size_t draw(const std::vector<double>& cdf, double u) {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    if (i >= cdf.size()) i = cdf.size() - 1;
    // Never land on a zero-mass entry because of rounding at the top.
    while (i > 0 && cdf[i] == cdf[i - 1]) --i;
    return i;
  }

  const std::vector<double>& cdf(std::uint32_t node, const Tokens& context, WorldIndex w) const {
    auto& per_world = cache_[node];
    if (per_world.empty()) per_world.resize(prior_cdf_.size());
    auto& cdf = per_world[w];
    if (cdf.empty()) {
      const auto lp = speaker_->next_log_probs(context, w);
      cdf.resize(lp.size());
      double acc = 0.0;
      for (std::size_t y = 0; y < lp.size(); ++y) cdf[y] = acc += safe_exp(lp[y]);
      if (!(acc > 0.0)) throw DomainError("speaker has no continuation for '" + speaker_->language().format(context) + "'");
    }
    return cdf;
  }

  const Speaker* speaker_;
  std::size_t guard_;
  std::vector<double> prior_cdf_;
  mutable std::mutex mutex_;
  mutable detail::PrefixTrie<std::vector<std::vector<double>>> cache_;
};

inline Corpus sample_corpus(const Speaker& speaker, const WorldSpace& ws, std::size_t n, std::uint64_t seed,
                            std::size_t max_len_guard = 50) {
  return CorpusSampler(speaker, ws, max_len_guard).sample_corpus(n, seed);
}

/// One text per line, space-separated utterance ids, omega included.
inline void write_corpus(std::ostream& out, const Corpus& corpus, const Language& lang) {
  for (const auto& t : corpus.texts) out << lang.format(t) << '\n';
}

// -- estimators ------------------------------------------------------------------

inline constexpr double kUnseenFloor = 1e-20;

/// p̂(z) = (# texts with prefix z) / n. Built incrementally so nested corpora
/// can be scored at increasing n without recounting.
class FrequencyModel {
 public:
  explicit FrequencyModel(Language lang, std::optional<double> unseen_floor = std::nullopt)
      : lang_(std::move(lang)), floor_(unseen_floor) {}

  void add(std::span<const UttIndex> text) {
    ++n_;
    std::uint32_t node = 0;
    for (UttIndex t : text) ++counts_[node = counts_.child(node, t)];
  }

  void add(const Corpus& corpus) {
    for (const auto& t : corpus.texts) add(t);
  }

  std::size_t n() const { return n_; }
  const Language& language() const { return lang_; }

  std::uint64_t count(std::span<const UttIndex> z) const {
    if (z.empty()) return n_;
    const auto node = counts_.find(z);
    return node ? counts_[*node] : 0;
  }

  /// Raw prefix frequency, no floor.
  double prefix_frequency(std::span<const UttIndex> z) const {
    if (n_ == 0) throw DegenerateInputError("frequency model is empty");
    return static_cast<double>(count(z)) / static_cast<double>(n_);
  }

  /// log p̂(z); unseen texts score log(floor) when a floor is configured.
  double log_prob(std::span<const UttIndex> z) const {
    const double p = prefix_frequency(z);
    if (p > 0.0) return std::log(p);
    return floor_ ? std::log(*floor_) : kNegInf;
  }

 private:
  Language lang_;
  std::optional<double> floor_;
  std::size_t n_ = 0;
  detail::PrefixTrie<std::uint64_t> counts_;
};

inline double prefix_frequency(const FrequencyModel& model, std::span<const UttIndex> z) { return model.prefix_frequency(z); }

/// Unsmoothed maximum-likelihood n-gram model. Texts are padded with
/// order-1 start symbols; omega doubles as the stop symbol.
class NgramModel {
 public:
  explicit NgramModel(Language lang, std::size_t order = 3, std::optional<double> unseen_floor = std::nullopt)
      : lang_(std::move(lang)), order_(order), floor_(unseen_floor) {
    if (order_ < 1 || order_ > 4) throw ParameterError("n-gram order must be in [1, 4]");
    start_ = static_cast<std::uint64_t>(lang_.size());
  }

  void add(std::span<const UttIndex> text) {
    ++n_texts_;
    std::vector<std::uint64_t> padded(order_ - 1, start_);
    padded.insert(padded.end(), text.begin(), text.end());
    for (std::size_t i = order_ - 1; i < padded.size(); ++i) {
      const std::uint64_t ctx = context_key(padded, i);
      ++context_counts_[ctx];
      ++ngram_counts_[ngram_key(ctx, padded[i])];
    }
  }

  void add(const Corpus& corpus) {
    for (const auto& t : corpus.texts) add(t);
  }

  std::size_t order() const { return order_; }
  std::size_t n() const { return n_texts_; }
  const Language& language() const { return lang_; }

  /// Number of queries that hit an unseen n-gram (or unseen context).
  std::uint64_t unseen_queries() const { return unseen_; }

  /// log of the padded chain product over z (stop included iff z ends in
  /// omega). Unseen n-grams contribute probability 0, or the floor.
  double log_prob(std::span<const UttIndex> z) const {
    std::vector<std::uint64_t> padded(order_ - 1, start_);
    padded.insert(padded.end(), z.begin(), z.end());
    double lp = 0.0;
    for (std::size_t i = order_ - 1; i < padded.size(); ++i) {
      const std::uint64_t ctx = context_key(padded, i);
      const auto c = context_counts_.find(ctx);
      const auto g = ngram_counts_.find(ngram_key(ctx, padded[i]));
      if (c == context_counts_.end() || g == ngram_counts_.end()) {
        ++unseen_;
        return floor_ ? std::log(*floor_) : kNegInf;
      }
      lp += std::log(static_cast<double>(g->second) / static_cast<double>(c->second));
    }
    return lp;
  }

  double prob(std::span<const UttIndex> z) const { return safe_exp(log_prob(z)); }

 private:
  // Symbols fit in 16 bits, so up to three context symbols pack into 48 bits.
  std::uint64_t context_key(const std::vector<std::uint64_t>& padded, std::size_t i) const {
    std::uint64_t k = 0;
    for (std::size_t j = i + 1 - order_; j < i; ++j) k = (k << 16) | padded[j];
    return k;
  }
  static std::uint64_t ngram_key(std::uint64_t ctx, std::uint64_t sym) { return (ctx << 16) | sym; }

  Language lang_;
  std::size_t order_;
  std::optional<double> floor_;
  std::uint64_t start_ = 0;
  std::size_t n_texts_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> context_counts_;
  std::unordered_map<std::uint64_t, std::uint64_t> ngram_counts_;
  mutable std::uint64_t unseen_ = 0;  // diagnostic only
};

inline NgramModel ngram_fit(const Corpus& corpus, const Language& lang, std::size_t order = 3) {
  if (corpus.texts.empty()) throw DegenerateInputError("cannot fit an n-gram model to an empty corpus");
  NgramModel m(lang, order);
  m.add(corpus);
  return m;
}

inline double ngram_prob(const NgramModel& model, std::span<const UttIndex> z) { return model.prob(z); }

// -- bounds ------------------------------------------------------------------------

struct LogBound {
  double bound = 0.0;
  double failure = 0.0;  // probability mass the bound does not cover
};

namespace detail {
inline void check_delta_n(double delta, double n) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(n >= 1.0)) throw ParameterError("n must be >= 1");
}
}  // namespace detail

/// |log p(z) - log p̂(z)| <= sqrt(K / (delta n)) except with probability
/// delta + (1 - 1/K)^n, where K = 1/p(z) (or an upper bound on it).
inline LogBound chebyshev_log_bound(double K, double delta, double n) {
  detail::check_delta_n(delta, n);
  if (!(K >= 1.0) || !std::isfinite(K)) throw ParameterError("complexity K must be finite and >= 1");
  return {std::sqrt(K / (delta * n)), delta + std::pow(1.0 - 1.0 / K, n)};
}

/// |p - p̂| <= sqrt(log(2/delta) / (2n)) with probability >= 1 - delta.
inline double hoeffding_bound(double delta, double n) {
  detail::check_delta_n(delta, n);
  return std::sqrt(std::log(2.0 / delta) / (2.0 * n));
}

/// |X| / p([[z]]), where |X| counts every utterance including omega.
inline double complexity_uniform(const Language& lang, std::span<const UttIndex> z, const WorldSpace& ws) {
  const double pz = truth_probability(text_denotation(z, lang), ws);
  if (pz <= 0.0) throw DomainError("complexity of an unsatisfiable text");
  return static_cast<double>(lang.size()) / pz;
}

/// exp(c(z)) / p([[z]]).
inline double complexity_gricean(const CostFunction& cost, const Language& lang, std::span<const UttIndex> z, const WorldSpace& ws) {
  const double pz = truth_probability(text_denotation(z, lang), ws);
  if (pz <= 0.0) throw DomainError("complexity of an unsatisfiable text");
  return std::exp(cost.text(z)) / pz;
}

struct GBound {
  double bound = 0.0;
  double s_bound = 0.0;
  double q = 0.0;
  double guaranteed_fraction = 0.0;  // 1 - delta - 4 q^n
};

/// |g_p - g_p̂| <= 8 sqrt(exp(max(c(xy), c(yy))) / p([[xy]]) / (delta n)),
/// with q = 1 - min(p(xy), p(yy)) taken from the exact model. The s-score
/// variant is 2 sqrt(exp(c(xy)) / p([[xy]]) * 2 / (delta n)).
inline GBound g_bound(std::span<const UttIndex> x, std::span<const UttIndex> y, const CostFunction& cost, const Language& lang,
                      const WorldSpace& ws, double delta, double n, double p_xy, double p_yy) {
  detail::check_delta_n(delta, n);
  Tokens xy(x.begin(), x.end());
  xy.insert(xy.end(), y.begin(), y.end());
  Tokens yy(y.begin(), y.end());
  yy.insert(yy.end(), y.begin(), y.end());
  const double truth = truth_probability(text_denotation(xy, lang), ws);
  if (truth <= 0.0) throw DomainError("g bound needs a satisfiable xy");
  GBound b;
  const double cmax = std::max(cost.text(xy), cost.text(yy));
  b.bound = 8.0 * std::sqrt(std::exp(cmax) / truth / (delta * n));
  b.s_bound = 2.0 * std::sqrt(std::exp(cost.text(xy)) / truth * 2.0 / (delta * n));
  b.q = 1.0 - std::min(p_xy, p_yy);
  b.guaranteed_fraction = 1.0 - delta - 4.0 * std::pow(b.q, n);
  return b;
}

/// 128 (S + 1)^(l + 1) / (delta eps^2).
inline double sample_complexity(double length, double delta, double epsilon, double perplexity = 20.0) {
  if (!(length >= 0.0)) throw ParameterError("sentence length must be >= 0");
  if (!(delta > 0.0) || !(epsilon > 0.0)) throw ParameterError("delta and epsilon must be positive");
  if (!(perplexity > 0.0)) throw ParameterError("perplexity must be positive");
  return 128.0 * std::pow(perplexity + 1.0, length + 1.0) / (delta * epsilon * epsilon);
}

// -- corpus statistics ---------------------------------------------------------------

struct CorpusStats {
  std::vector<std::uint64_t> utterance_counts;       // by utterance index, omega included
  std::map<std::size_t, std::uint64_t> length_counts;  // non-omega tokens per text
  std::uint64_t adjacent_pairs = 0;
  std::uint64_t adjacent_equal = 0;     // consecutive utterances with equal denotations
  std::uint64_t sentences = 0;
  std::uint64_t context_redundant = 0;  // utterances that leave the context denotation unchanged
  std::uint64_t texts_ending_in_omega = 0;
  std::size_t texts = 0;

  double redundancy_rate() const { return adjacent_pairs ? static_cast<double>(adjacent_equal) / static_cast<double>(adjacent_pairs) : 0.0; }
  double context_redundancy_rate() const { return sentences ? static_cast<double>(context_redundant) / static_cast<double>(sentences) : 0.0; }
};

inline CorpusStats corpus_stats(const Corpus& corpus, const Language& lang) {
  if (corpus.texts.empty()) throw DegenerateInputError("statistics of an empty corpus");
  CorpusStats s;
  s.utterance_counts.assign(lang.size(), 0);
  s.texts = corpus.texts.size();
  const UttIndex eos = lang.eos();
  for (const auto& t : corpus.texts) {
    std::size_t body = 0;
    Denotation ctx = Denotation::full(lang.world_count());
    for (std::size_t i = 0; i < t.size(); ++i) {
      ++s.utterance_counts.at(t[i]);
      if (t[i] == eos) continue;
      ++body;
      ++s.sentences;
      const Denotation next = ctx & lang.denotation(t[i]);
      if (next == ctx) ++s.context_redundant;
      ctx = next;
      if (i + 1 < t.size() && t[i + 1] != eos) {
        ++s.adjacent_pairs;
        if (lang.denotation(t[i]) == lang.denotation(t[i + 1])) ++s.adjacent_equal;
      }
    }
    ++s.length_counts[body];
    if (!t.empty() && t.back() == eos) ++s.texts_ending_in_omega;
  }
  return s;
}

}  // namespace gricean
