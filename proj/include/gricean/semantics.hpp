#pragma once

// Finite world spaces, utterance denotations, and the set-theoretic ground
// truth every distributional test is scored against.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gricean/errors.hpp"
#include "gricean/logspace.hpp"

namespace gricean {

inline constexpr std::size_t kMaxWorlds = 64;

using WorldIndex = std::size_t;
using UttIndex = std::uint16_t;
using Tokens = std::vector<UttIndex>;

/// A set of worlds as a bitmask; bit w set iff the world is in the set.
class Denotation {
 public:
  Denotation() = default;
  Denotation(std::uint64_t mask, std::size_t n_worlds) : mask_(mask), n_worlds_(n_worlds) {
    if (n_worlds == 0 || n_worlds > kMaxWorlds) {
      throw StructuralError("world count must be in [1, 64], got " + std::to_string(n_worlds));
    }
    if ((mask_ & ~full_mask(n_worlds)) != 0) {
      throw StructuralError("denotation has bits beyond the world space");
    }
  }

  static Denotation full(std::size_t n_worlds) { return {full_mask(n_worlds), n_worlds}; }
  static Denotation empty_set(std::size_t n_worlds) { return {0, n_worlds}; }

  /// Parses "101" style strings: character w is '1' iff world w is in the set.
  static Denotation from_bits(std::string_view bits) {
    if (bits.empty() || bits.size() > kMaxWorlds) {
      throw StructuralError("bitstring denotation must have 1..64 characters");
    }
    std::uint64_t m = 0;
    for (std::size_t w = 0; w < bits.size(); ++w) {
      if (bits[w] == '1') {
        m |= std::uint64_t{1} << w;
      } else if (bits[w] != '0') {
        throw StructuralError("bitstring denotation may only contain 0/1: " + std::string(bits));
      }
    }
    return {m, bits.size()};
  }

  std::uint64_t mask() const { return mask_; }
  std::size_t world_count() const { return n_worlds_; }
  bool contains(WorldIndex w) const { return w < n_worlds_ && ((mask_ >> w) & 1U) != 0; }
  bool empty() const { return mask_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  bool is_full() const { return mask_ == full_mask(n_worlds_); }

  bool subset_of(const Denotation& other) const { return (mask_ & ~other.mask_) == 0; }
  bool proper_subset_of(const Denotation& other) const {
    return subset_of(other) && mask_ != other.mask_;
  }

  Denotation operator&(const Denotation& other) const {
    return {mask_ & other.mask_, n_worlds_};
  }
  Denotation operator-(const Denotation& other) const {
    return {mask_ & ~other.mask_, n_worlds_};
  }
  bool operator==(const Denotation& other) const = default;

  std::string to_bits() const {
    std::string s(n_worlds_, '0');
    for (std::size_t w = 0; w < n_worlds_; ++w) {
      if (contains(w)) s[w] = '1';
    }
    return s;
  }

 private:
  static std::uint64_t full_mask(std::size_t n) {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  }

  std::uint64_t mask_ = 0;
  std::size_t n_worlds_ = 1;
};

/// Worlds 0..size-1 with a strictly positive prior summing to one.
class WorldSpace {
 public:
  WorldSpace() : WorldSpace(std::vector<double>{1.0}) {}

  explicit WorldSpace(std::vector<double> prior) : prior_(std::move(prior)) {
    if (prior_.empty() || prior_.size() > kMaxWorlds) {
      throw StructuralError("world count must be in [1, 64]");
    }
    double total = 0.0;
    for (double p : prior_) {
      if (!(p > 0.0) || !std::isfinite(p)) {
        throw StructuralError("world prior entries must be strictly positive and finite");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw StructuralError("world prior must sum to 1 (got " + format_double(total) + ")");
    }
    log_prior_.reserve(prior_.size());
    for (double p : prior_) log_prior_.push_back(std::log(p));
  }

  static WorldSpace uniform(std::size_t n) {
    if (n == 0 || n > kMaxWorlds) throw StructuralError("world count must be in [1, 64]");
    return WorldSpace(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  /// Normalizes arbitrary positive weights into a prior.
  static WorldSpace from_weights(std::span<const double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> p(weights.begin(), weights.end());
    if (!(total > 0.0)) throw StructuralError("world weights must have positive total");
    for (double& v : p) v /= total;
    // Re-normalize once more so the 1e-12 sum check is robust to rounding.
    const double again = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= again;
    return WorldSpace(std::move(p));
  }

  std::size_t size() const { return prior_.size(); }
  double prior(WorldIndex w) const { return prior_.at(w); }
  double log_prior(WorldIndex w) const { return log_prior_.at(w); }
  std::span<const double> priors() const { return prior_; }

 private:
  std::vector<double> prior_;
  std::vector<double> log_prior_;
};

struct Utterance {
  std::string id;
  Denotation denotation;
  std::string display;
};

/// Ordered utterances, one of which is the end-of-sequence token omega.
class Language {
 public:
  Language() = default;

  Language(std::vector<Utterance> utterances, UttIndex eos) : utterances_(std::move(utterances)), eos_(eos) {
    if (utterances_.empty()) throw StructuralError("a language needs at least the end-of-sequence utterance");
    if (utterances_.size() > 0xFFFF) throw StructuralError("too many utterances");
    if (eos_ >= utterances_.size()) throw StructuralError("end-of-sequence index out of range");
    const std::size_t n = utterances_.front().denotation.world_count();
    for (std::size_t i = 0; i < utterances_.size(); ++i) {
      const auto& u = utterances_[i];
      if (u.denotation.world_count() != n) throw StructuralError("utterance '" + u.id + "' has a different world count");
      if (u.denotation.empty()) throw StructuralError("utterance '" + u.id + "' is true in no world");
      if (!index_.emplace(u.id, static_cast<UttIndex>(i)).second) {
        throw StructuralError("duplicate utterance id '" + u.id + "'");
      }
    }
    if (!utterances_[eos_].denotation.is_full()) {
      throw StructuralError("end-of-sequence utterance must be true in every world");
    }
  }

  std::size_t size() const { return utterances_.size(); }
  std::size_t world_count() const { return utterances_.front().denotation.world_count(); }
  UttIndex eos() const { return eos_; }
  const Utterance& operator[](UttIndex i) const { return utterances_.at(i); }
  std::span<const Utterance> utterances() const { return utterances_; }
  const Denotation& denotation(UttIndex i) const { return utterances_.at(i).denotation; }

  UttIndex index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw StructuralError("unknown utterance id '" + std::string(id) + "'");
    return it->second;
  }

  /// Indices of every utterance except omega, in language order.
  std::vector<UttIndex> sentences() const {
    std::vector<UttIndex> out;
    for (std::size_t i = 0; i < utterances_.size(); ++i) {
      if (i != eos_) out.push_back(static_cast<UttIndex>(i));
    }
    return out;
  }

  /// Space-separated utterance ids.
  std::string format(std::span<const UttIndex> tokens) const {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) s += ' ';
      s += utterances_.at(tokens[i]).id;
    }
    return s;
  }

  Tokens parse(std::string_view text) const {
    Tokens out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) out.push_back(index_of(tok));
    return out;
  }

 private:
  std::vector<Utterance> utterances_;
  UttIndex eos_ = 0;
  std::unordered_map<std::string, UttIndex> index_;
};

/// A validated token sequence. Complete texts end in omega, which appears
/// nowhere else; incomplete texts (including the empty text) contain no omega.
class Text {
 public:
  Text() = default;
  Text(Tokens tokens, const Language& lang) : tokens_(std::move(tokens)) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (tokens_[i] >= lang.size()) {
        throw StructuralError("token index " + std::to_string(tokens_[i]) + " is not in the language");
      }
      if (tokens_[i] == lang.eos() && i + 1 != tokens_.size()) {
        throw StructuralError("end-of-sequence may only appear as the final token");
      }
    }
    complete_ = !tokens_.empty() && tokens_.back() == lang.eos();
  }

  static Text parse(std::string_view s, const Language& lang) { return Text(lang.parse(s), lang); }

  const Tokens& tokens() const { return tokens_; }
  bool complete() const { return complete_; }
  std::size_t size() const { return tokens_.size(); }
  bool operator==(const Text&) const = default;

 private:
  Tokens tokens_;
  bool complete_ = false;
};

// -- operations ---------------------------------------------------------------

/// Intersection of token denotations; the empty text denotes every world.
inline Denotation text_denotation(std::span<const UttIndex> tokens, const Language& lang) {
  Denotation d = Denotation::full(lang.world_count());
  for (UttIndex t : tokens) {
    if (t >= lang.size()) {
      throw StructuralError("token index " + std::to_string(t) + " is not in the language");
    }
    d = d & lang.denotation(t);
  }
  return d;
}

inline Denotation text_denotation(const Text& text, const Language& lang) {
  return text_denotation(text.tokens(), lang);
}

inline bool entails(const Denotation& x, const Denotation& y) { return x.subset_of(y); }
inline bool entails(const Utterance& x, const Utterance& y) { return entails(x.denotation, y.denotation); }

inline bool strictly_entails(const Denotation& x, const Denotation& y) { return x.proper_subset_of(y); }
inline bool strictly_entails(const Utterance& x, const Utterance& y) {
  return strictly_entails(x.denotation, y.denotation);
}

/// Prior mass of the worlds in d.
inline double truth_probability(const Denotation& d, const WorldSpace& ws) {
  if (d.world_count() != ws.size()) throw StructuralError("denotation and world space disagree on size");
  double p = 0.0;
  for (WorldIndex w = 0; w < ws.size(); ++w) {
    if (d.contains(w)) p += ws.prior(w);
  }
  return std::min(p, 1.0);
}

struct SyntheticLanguage {
  WorldSpace worlds;
  Language language;
};

/// One utterance per nonempty subset of n worlds, labelled by its bitstring
/// (character w is '1' iff world w is in the subset). Ordered by subset size,
/// so singletons come first; the all-ones utterance is omega. Uniform prior.
inline SyntheticLanguage make_synthetic_language(std::size_t n_worlds) {
  if (n_worlds == 0) throw StructuralError("synthetic language needs at least one world");
  if (n_worlds > 16) throw StructuralError("synthetic language enumerates 2^n - 1 subsets; n must be <= 16");
  std::vector<Denotation> subsets;
  const std::uint64_t count = (std::uint64_t{1} << n_worlds) - 1;
  for (std::uint64_t m = 1; m <= count; ++m) subsets.emplace_back(m, n_worlds);
  std::stable_sort(subsets.begin(), subsets.end(), [](const Denotation& a, const Denotation& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.to_bits() > b.to_bits();
  });
  std::vector<Utterance> utts;
  utts.reserve(subsets.size());
  for (const auto& d : subsets) utts.push_back({d.to_bits(), d, d.to_bits()});
  const auto eos = static_cast<UttIndex>(utts.size() - 1);
  return {WorldSpace::uniform(n_worlds), Language(std::move(utts), eos)};
}

}  // namespace gricean
