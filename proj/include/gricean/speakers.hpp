#pragma once

// Speaker models p(y | context, w) over a finite language, including the
// static (context-free) and dynamic RSA recursions.
//
// All probabilities are carried as natural logs; -inf marks zero mass.

#include <cmath>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gricean/errors.hpp"
#include "gricean/logspace.hpp"
#include "gricean/semantics.hpp"

namespace gricean {

/// Nonnegative per-utterance cost, additive over concatenation.
class CostFunction {
 public:
  CostFunction() = default;
  explicit CostFunction(std::vector<double> per_utterance) : cost_(std::move(per_utterance)) {
    for (double c : cost_) {
      if (!std::isfinite(c) || c < 0.0) throw ParameterError("costs must be finite and nonnegative");
    }
  }

  static CostFunction zero(const Language& lang) { return CostFunction(std::vector<double>(lang.size(), 0.0)); }

  /// c(x) = coefficient * |x| where |x| is the length of the utterance label.
  static CostFunction label_length(const Language& lang, double coefficient) {
    if (!std::isfinite(coefficient) || coefficient < 0.0) {
      throw ParameterError("cost coefficient must be finite and nonnegative");
    }
    std::vector<double> c;
    c.reserve(lang.size());
    for (const auto& u : lang.utterances()) c.push_back(coefficient * static_cast<double>(u.id.size()));
    return CostFunction(std::move(c));
  }

  double operator()(UttIndex u) const { return cost_.at(u); }
  double text(std::span<const UttIndex> tokens) const {
    double total = 0.0;
    for (UttIndex t : tokens) total += cost_.at(t);
    return total;
  }
  std::size_t size() const { return cost_.size(); }
  std::span<const double> values() const { return cost_; }

 private:
  std::vector<double> cost_;
};

enum class SpeakerKind {
  UniformTruthful,
  FactorizedTruthful,
  StaticRsa,
  DynamicGricean,
  NonredundantTruthful,
  DynamicRsa,
};

inline const char* to_string(SpeakerKind k) {
  switch (k) {
    case SpeakerKind::UniformTruthful: return "uniform";
    case SpeakerKind::FactorizedTruthful: return "factorized";
    case SpeakerKind::StaticRsa: return "static-rsa";
    case SpeakerKind::DynamicGricean: return "dynamic-gricean";
    case SpeakerKind::NonredundantTruthful: return "nonredundant";
    case SpeakerKind::DynamicRsa: return "dynamic-rsa";
  }
  return "unknown";
}

/// Conditional next-utterance distribution. Implementations are immutable
/// once constructed; any internal memoization is synchronized.
class Speaker {
 public:
  Speaker(Language lang, WorldSpace worlds) : lang_(std::move(lang)), worlds_(std::move(worlds)) {
    if (lang_.world_count() != worlds_.size()) {
      throw StructuralError("language and world space disagree on the number of worlds");
    }
  }
  virtual ~Speaker() = default;

  virtual SpeakerKind kind() const = 0;

  /// log p(y | context, w) for every utterance y, omega included. The context
  /// never contains omega.
  virtual std::vector<double> next_log_probs(std::span<const UttIndex> context, WorldIndex w) const = 0;

  /// True when the next-utterance distribution ignores the context, so
  /// callers may cache it per world.
  virtual bool context_free() const { return false; }

  const Language& language() const { return lang_; }
  const WorldSpace& worlds() const { return worlds_; }

 protected:
  Language lang_;
  WorldSpace worlds_;
};

// -- uniformly truthful -------------------------------------------------------

/// Uniform over every utterance (omega included) true in w.
class UniformTruthfulSpeaker final : public Speaker {
 public:
  UniformTruthfulSpeaker(Language lang, WorldSpace worlds) : Speaker(std::move(lang), std::move(worlds)) {
    table_.resize(worlds_.size());
    for (WorldIndex w = 0; w < worlds_.size(); ++w) {
      std::size_t n = 0;
      for (const auto& u : lang_.utterances()) n += u.denotation.contains(w) ? 1 : 0;
      const double lp = -std::log(static_cast<double>(n));
      auto& row = table_[w];
      row.resize(lang_.size());
      for (std::size_t y = 0; y < lang_.size(); ++y) {
        row[y] = lang_.denotation(static_cast<UttIndex>(y)).contains(w) ? lp : kNegInf;
      }
    }
  }

  SpeakerKind kind() const override { return SpeakerKind::UniformTruthful; }
  bool context_free() const override { return true; }
  std::vector<double> next_log_probs(std::span<const UttIndex>, WorldIndex w) const override { return table_.at(w); }

  /// n(w): the number of utterances true in w.
  std::size_t true_count(WorldIndex w) const {
    return static_cast<std::size_t>(std::llround(std::exp(-table_.at(w)[lang_.eos()])));
  }

 private:
  std::vector<std::vector<double>> table_;
};

// -- independently (factorized) truthful --------------------------------------

/// p(x | w) = [[x]](w) f(x) g(w), context ignored. The supplied g is validated
/// and then replaced by the normalizing g, which is what the speaker uses.
class FactorizedTruthfulSpeaker final : public Speaker {
 public:
  FactorizedTruthfulSpeaker(Language lang, WorldSpace worlds, std::vector<double> f, std::vector<double> g)
      : Speaker(std::move(lang), std::move(worlds)), f_(std::move(f)), supplied_g_(std::move(g)) {
    if (f_.size() != lang_.size()) throw ParameterError("f needs one weight per utterance");
    if (supplied_g_.size() != worlds_.size()) throw ParameterError("g needs one weight per world");
    for (double v : f_) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("f weights must be positive and finite");
    }
    for (double v : supplied_g_) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("g weights must be positive and finite");
    }
    effective_g_.resize(worlds_.size());
    table_.resize(worlds_.size());
    for (WorldIndex w = 0; w < worlds_.size(); ++w) {
      double z = 0.0;
      for (std::size_t x = 0; x < lang_.size(); ++x) {
        if (lang_.denotation(static_cast<UttIndex>(x)).contains(w)) z += f_[x];
      }
      effective_g_[w] = 1.0 / z;
      auto& row = table_[w];
      row.resize(lang_.size());
      for (std::size_t x = 0; x < lang_.size(); ++x) {
        row[x] = lang_.denotation(static_cast<UttIndex>(x)).contains(w) ? std::log(f_[x] * effective_g_[w]) : kNegInf;
      }
    }
  }

  /// f(x) = 1 and g(w) = 1 (before normalization).
  static FactorizedTruthfulSpeaker constant(Language lang, WorldSpace worlds) {
    std::vector<double> f(lang.size(), 1.0);
    std::vector<double> g(worlds.size(), 1.0);
    return {std::move(lang), std::move(worlds), std::move(f), std::move(g)};
  }

  SpeakerKind kind() const override { return SpeakerKind::FactorizedTruthful; }
  bool context_free() const override { return true; }
  std::vector<double> next_log_probs(std::span<const UttIndex>, WorldIndex w) const override { return table_.at(w); }

  std::span<const double> f() const { return f_; }
  std::span<const double> effective_g() const { return effective_g_; }
  std::span<const double> supplied_g() const { return supplied_g_; }

 private:
  std::vector<double> f_;
  std::vector<double> supplied_g_;
  std::vector<double> effective_g_;
  std::vector<std::vector<double>> table_;
};

// -- static (non-dynamic) RSA --------------------------------------------------

struct Factorization {
  int depth = -1;
  std::vector<double> f;  // per utterance, linear scale
  std::vector<double> g;  // per world, linear scale
  double max_relative_residual = 0.0;
};

/// Context-free RSA:
///   l_{-1}(w|x) = s_{-1}(x|w) = [[x]](w)
///   l_{n+1}(w|x) ∝ s_n(x|w) l(w)
///   s_{n+1}(x|w) ∝ l_n(w|x) exp(-c(x))
/// All levels up to the requested depth are tabulated at construction.
class StaticRsaSpeaker final : public Speaker {
 public:
  static constexpr double kFactorizationTolerance = 1e-10;

  StaticRsaSpeaker(Language lang, WorldSpace worlds, int depth, CostFunction cost, WorldSpace listener_prior)
      : Speaker(std::move(lang), std::move(worlds)),
        depth_(depth),
        cost_(std::move(cost)),
        listener_prior_(std::move(listener_prior)) {
    if (depth_ < -1) throw ParameterError("static RSA depth must be >= -1");
    if (cost_.size() != lang_.size()) throw ParameterError("cost function size does not match the language");
    if (listener_prior_.size() != worlds_.size()) throw ParameterError("listener prior size does not match the worlds");
    build();
  }

  StaticRsaSpeaker(Language lang, WorldSpace worlds, int depth, CostFunction cost)
      : StaticRsaSpeaker(lang, worlds, depth, std::move(cost), worlds) {}

  SpeakerKind kind() const override { return SpeakerKind::StaticRsa; }
  bool context_free() const override { return true; }
  std::vector<double> next_log_probs(std::span<const UttIndex>, WorldIndex w) const override {
    return speaker_level(depth_).at(w);
  }

  int depth() const { return depth_; }
  const CostFunction& cost() const { return cost_; }

  /// log s_m(x|w) as [w][x], m in [-1, depth]. Level -1 is the raw indicator.
  const std::vector<std::vector<double>>& speaker_level(int m) const { return speakers_.at(static_cast<std::size_t>(m + 1)); }
  /// log l_m(w|x) as [x][w], m in [-1, depth]. Level -1 is the raw indicator.
  const std::vector<std::vector<double>>& listener_level(int m) const { return listeners_.at(static_cast<std::size_t>(m + 1)); }

  /// f_n, g_n with s_n(x|w) = [[x]](w) f_n(x) g_n(w), tracked through the
  /// induction step by step and checked against the directly normalized
  /// speaker. Throws InternalConsistencyError past 1e-10 relative residual.
  Factorization factorization() const { return factorization_; }

 private:
  using Table = std::vector<std::vector<double>>;

  void build() {
    const std::size_t nx = lang_.size();
    const std::size_t nw = worlds_.size();
    Table s_base(nw, std::vector<double>(nx));
    Table l_base(nx, std::vector<double>(nw));
    for (std::size_t x = 0; x < nx; ++x) {
      for (WorldIndex w = 0; w < nw; ++w) {
        const double v = lang_.denotation(static_cast<UttIndex>(x)).contains(w) ? 0.0 : kNegInf;
        s_base[w][x] = v;
        l_base[x][w] = v;
      }
    }
    speakers_.push_back(std::move(s_base));
    listeners_.push_back(std::move(l_base));

    for (int m = 0; m <= depth_; ++m) {
      // l_m(w|x) ∝ s_{m-1}(x|w) l(w)
      const Table& s_prev = speakers_.back();
      Table l(nx, std::vector<double>(nw));
      for (std::size_t x = 0; x < nx; ++x) {
        for (WorldIndex w = 0; w < nw; ++w) l[x][w] = s_prev[w][x] + listener_prior_.log_prior(w);
        log_normalize(l[x]);
      }
      // s_m(x|w) ∝ l_{m-1}(w|x) exp(-c(x))
      const Table& l_prev = listeners_.back();
      Table s(nw, std::vector<double>(nx));
      for (WorldIndex w = 0; w < nw; ++w) {
        for (std::size_t x = 0; x < nx; ++x) s[w][x] = l_prev[x][w] - cost_(static_cast<UttIndex>(x));
        log_normalize(s[w]);
      }
      listeners_.push_back(std::move(l));
      speakers_.push_back(std::move(s));
    }
    build_factorization();
  }

  // Mirrors the induction: two base cases (-1 and 0), then n -> n+2 through
  // f' = f_n / sum_w' s_n(x|w') l(w'), g' = g_n l(w),
  // f_{n+2} = f' exp(-c), g_{n+2} = g' / sum_x' l_{n+1}(w|x') exp(-c(x')).
  void build_factorization() {
    const std::size_t nx = lang_.size();
    const std::size_t nw = worlds_.size();
    std::vector<std::vector<double>> log_f;  // indexed by level + 1
    std::vector<std::vector<double>> log_g;
    log_f.emplace_back(nx, 0.0);
    log_g.emplace_back(nw, 0.0);
    if (depth_ >= 0) {
      std::vector<double> f0(nx), g0(nw);
      for (std::size_t x = 0; x < nx; ++x) f0[x] = -cost_(static_cast<UttIndex>(x));
      for (WorldIndex w = 0; w < nw; ++w) {
        std::vector<double> terms;
        for (std::size_t x = 0; x < nx; ++x) {
          if (lang_.denotation(static_cast<UttIndex>(x)).contains(w)) terms.push_back(f0[x]);
        }
        g0[w] = -log_sum_exp(terms);
      }
      log_f.push_back(std::move(f0));
      log_g.push_back(std::move(g0));
    }
    for (int n = -1; n + 2 <= depth_; ++n) {
      const auto& s_n = speaker_level(n);
      const auto& l_next = listener_level(n + 1);
      const auto& fn = log_f.at(static_cast<std::size_t>(n + 1));
      const auto& gn = log_g.at(static_cast<std::size_t>(n + 1));
      std::vector<double> f2(nx), g2(nw);
      for (std::size_t x = 0; x < nx; ++x) {
        std::vector<double> terms(nw);
        for (WorldIndex w = 0; w < nw; ++w) terms[w] = s_n[w][x] + listener_prior_.log_prior(w);
        f2[x] = fn[x] - log_sum_exp(terms) - cost_(static_cast<UttIndex>(x));
      }
      for (WorldIndex w = 0; w < nw; ++w) {
        std::vector<double> terms(nx);
        for (std::size_t x = 0; x < nx; ++x) terms[x] = l_next[x][w] - cost_(static_cast<UttIndex>(x));
        g2[w] = gn[w] + listener_prior_.log_prior(w) - log_sum_exp(terms);
      }
      log_f.push_back(std::move(f2));
      log_g.push_back(std::move(g2));
    }

    const auto& lf = log_f.at(static_cast<std::size_t>(depth_ + 1));
    const auto& lg = log_g.at(static_cast<std::size_t>(depth_ + 1));
    const auto& s = speaker_level(depth_);
    double worst = 0.0;
    for (WorldIndex w = 0; w < nw; ++w) {
      for (std::size_t x = 0; x < nx; ++x) {
        if (!lang_.denotation(static_cast<UttIndex>(x)).contains(w)) {
          if (s[w][x] != kNegInf) throw InternalConsistencyError("static RSA speaker is not truthful");
          continue;
        }
        const double rel = std::abs(std::expm1(lf[x] + lg[w] - s[w][x]));
        worst = std::max(worst, rel);
      }
    }
    if (!(worst <= kFactorizationTolerance)) {
      throw InternalConsistencyError("static RSA factorization residual " + format_double(worst) + " exceeds 1e-10");
    }
    factorization_.depth = depth_;
    factorization_.max_relative_residual = worst;
    for (double v : lf) factorization_.f.push_back(std::exp(v));
    for (double v : lg) factorization_.g.push_back(std::exp(v));
  }

  int depth_;
  CostFunction cost_;
  WorldSpace listener_prior_;
  std::vector<Table> speakers_;
  std::vector<Table> listeners_;
  Factorization factorization_;
};

// -- dynamic RSA ---------------------------------------------------------------

/// Dynamic RSA, where the listener conditions on what has already been said:
///   l_{-1}(w|x) = s_{-1}(x|w) = [[x]](w)
///   l_{n+1}(w|xy) ∝ s_n(y|x,w) l_{n+1}(w|x),   l_{n+1}(w|ε) = l(w)
///   s_{n+1}(y|x,w) ∝ l_n(w|xy) exp(-c(y))
/// Levels are evaluated lazily per context and memoized.
class RsaEngine {
 public:
  RsaEngine(Language lang, WorldSpace listener_prior, CostFunction cost)
      : lang_(std::move(lang)), prior_(std::move(listener_prior)), cost_(std::move(cost)) {
    if (lang_.world_count() != prior_.size()) throw StructuralError("listener prior size does not match the language");
    if (cost_.size() != lang_.size()) throw ParameterError("cost function size does not match the language");
  }

  RsaEngine(const RsaEngine&) = delete;
  RsaEngine& operator=(const RsaEngine&) = delete;

  const Language& language() const { return lang_; }
  const WorldSpace& listener_prior() const { return prior_; }
  const CostFunction& cost() const { return cost_; }

  /// Normalized log l_depth(w | context) over worlds. Every entry is -inf when
  /// the context is unsatisfiable for this listener. At depth -1 the row is the
  /// indicator of [[context]] normalized to a uniform distribution.
  const std::vector<double>& listener(int depth, std::span<const UttIndex> context) const {
    if (depth < -1) throw ParameterError("listener depth must be >= -1");
    const std::string key = make_key('L', depth, context);
    if (const auto* hit = find(key)) return *hit;

    std::vector<double> row(prior_.size());
    if (depth == -1) {
      const Denotation d = text_denotation(context, lang_);
      for (WorldIndex w = 0; w < row.size(); ++w) row[w] = d.contains(w) ? 0.0 : kNegInf;
    } else if (context.empty()) {
      for (WorldIndex w = 0; w < row.size(); ++w) row[w] = prior_.log_prior(w);
    } else {
      const auto head = context.first(context.size() - 1);
      const UttIndex last = context.back();
      const auto& parent = listener(depth, head);
      if (depth == 0) {
        const Denotation& d = lang_.denotation(last);
        for (WorldIndex w = 0; w < row.size(); ++w) row[w] = d.contains(w) ? parent[w] : kNegInf;
      } else {
        const auto& s = speaker(depth - 1, head);
        for (WorldIndex w = 0; w < row.size(); ++w) row[w] = parent[w] + s[w][last];
      }
    }
    log_normalize(row);
    return store(key, std::move(row));
  }

  /// log s_depth(y | context, w) as [w][y]. Rows for worlds where the context
  /// cannot have been produced are all -inf. Level -1 is the raw indicator
  /// [[y]](w), which is not a distribution.
  const std::vector<std::vector<double>>& speaker(int depth, std::span<const UttIndex> context) const {
    if (depth < -1) throw ParameterError("speaker depth must be >= -1");
    const std::string key = make_key('S', depth, context);
    if (const auto* hit = find_table(key)) return *hit;

    const std::size_t nw = prior_.size();
    const std::size_t ny = lang_.size();
    std::vector<std::vector<double>> table(nw, std::vector<double>(ny, kNegInf));
    if (depth == -1) {
      for (WorldIndex w = 0; w < nw; ++w) {
        for (std::size_t y = 0; y < ny; ++y) {
          table[w][y] = lang_.denotation(static_cast<UttIndex>(y)).contains(w) ? 0.0 : kNegInf;
        }
      }
    } else {
      Tokens extended(context.begin(), context.end());
      extended.push_back(0);
      const Denotation ctx = text_denotation(context, lang_);
      for (std::size_t y = 0; y < ny; ++y) {
        extended.back() = static_cast<UttIndex>(y);
        const double cy = cost_(static_cast<UttIndex>(y));
        if (depth == 0) {
          // l_{-1}(w|xy) = [[xy]](w), unnormalized.
          const Denotation d = ctx & lang_.denotation(static_cast<UttIndex>(y));
          for (WorldIndex w = 0; w < nw; ++w) table[w][y] = d.contains(w) ? -cy : kNegInf;
        } else {
          const auto& l = listener(depth - 1, extended);
          for (WorldIndex w = 0; w < nw; ++w) table[w][y] = l[w] - cy;
        }
      }
      for (auto& row : table) log_normalize(row);
    }
    return store_table(key, std::move(table));
  }

 private:
  static std::string make_key(char tag, int depth, std::span<const UttIndex> context) {
    std::string key;
    key.reserve(2 + 2 * context.size());
    key.push_back(tag);
    key.push_back(static_cast<char>(depth + 1));
    for (UttIndex t : context) {
      key.push_back(static_cast<char>(t & 0xFF));
      key.push_back(static_cast<char>(t >> 8));
    }
    return key;
  }

  const std::vector<double>* find(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = rows_.find(key);
    return it == rows_.end() ? nullptr : &it->second;
  }
  const std::vector<double>& store(const std::string& key, std::vector<double> row) const {
    std::lock_guard lock(mutex_);
    return rows_.try_emplace(key, std::move(row)).first->second;
  }
  const std::vector<std::vector<double>>* find_table(const std::string& key) const {
    std::lock_guard lock(mutex_);
    auto it = tables_.find(key);
    return it == tables_.end() ? nullptr : &it->second;
  }
  const std::vector<std::vector<double>>& store_table(const std::string& key, std::vector<std::vector<double>> t) const {
    std::lock_guard lock(mutex_);
    return tables_.try_emplace(key, std::move(t)).first->second;
  }

  Language lang_;
  WorldSpace prior_;
  CostFunction cost_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::vector<double>> rows_;
  mutable std::unordered_map<std::string, std::vector<std::vector<double>>> tables_;
};

/// A dynamic-RSA listener fixed at one recursion depth.
class ListenerTable {
 public:
  ListenerTable(std::shared_ptr<const RsaEngine> engine, int depth) : engine_(std::move(engine)), depth_(depth) {
    if (!engine_) throw ParameterError("listener table needs an engine");
    if (depth_ < -1) throw ParameterError("listener depth must be >= -1");
  }

  int depth() const { return depth_; }
  const RsaEngine& engine() const { return *engine_; }
  const std::shared_ptr<const RsaEngine>& engine_ptr() const { return engine_; }

  bool satisfiable(std::span<const UttIndex> context) const {
    for (double v : engine_->listener(depth_, context)) {
      if (v != kNegInf) return true;
    }
    return false;
  }

  /// Normalized log posterior; DomainError for contexts this listener rules out.
  const std::vector<double>& log_posterior(std::span<const UttIndex> context) const {
    const auto& row = engine_->listener(depth_, context);
    for (double v : row) {
      if (v != kNegInf) return row;
    }
    throw DomainError("listener queried on an unsatisfiable context '" + engine_->language().format(context) + "'");
  }

  std::vector<double> posterior(std::span<const UttIndex> context) const {
    std::vector<double> p;
    for (double v : log_posterior(context)) p.push_back(safe_exp(v));
    return p;
  }

  /// log l(w | context), -inf allowed, no satisfiability requirement.
  double log_at(std::span<const UttIndex> context, WorldIndex w) const { return engine_->listener(depth_, context).at(w); }

 private:
  std::shared_ptr<const RsaEngine> engine_;
  int depth_;
};

inline ListenerTable dynamic_rsa_listener(int depth, const Language& lang, const WorldSpace& prior, const CostFunction& cost) {
  return ListenerTable(std::make_shared<const RsaEngine>(lang, prior, cost), depth);
}

/// I_l(y | x; w) = log l(w | xy) - log l(w | x), with log 0 = -inf and
/// (-inf) - (-inf) = 0.
inline double conditional_information(const ListenerTable& listener, std::span<const UttIndex> x, UttIndex y, WorldIndex w) {
  Tokens xy(x.begin(), x.end());
  xy.push_back(y);
  return log_ratio(listener.log_at(xy, w), listener.log_at(x, w));
}

/// s_depth from the dynamic recursion, exposed as a text speaker.
class DynamicRsaSpeaker final : public Speaker {
 public:
  DynamicRsaSpeaker(std::shared_ptr<const RsaEngine> engine, WorldSpace worlds, int depth)
      : Speaker(engine->language(), std::move(worlds)), engine_(std::move(engine)), depth_(depth) {
    if (depth_ < 0) throw ParameterError("a dynamic RSA text speaker needs depth >= 0");
  }

  SpeakerKind kind() const override { return SpeakerKind::DynamicRsa; }
  std::vector<double> next_log_probs(std::span<const UttIndex> context, WorldIndex w) const override {
    return engine_->speaker(depth_, context).at(w);
  }
  int depth() const { return depth_; }

 private:
  std::shared_ptr<const RsaEngine> engine_;
  int depth_;
};

// -- Gricean -------------------------------------------------------------------

/// p(y | x, w) ∝ exp(alpha I_l(y | x; w) - c(y)), normalized per sentence.
class DynamicGriceanSpeaker final : public Speaker {
 public:
  DynamicGriceanSpeaker(WorldSpace worlds, double alpha, CostFunction cost, ListenerTable listener)
      : Speaker(listener.engine().language(), std::move(worlds)),
        alpha_(alpha),
        cost_(std::move(cost)),
        listener_(std::move(listener)) {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) throw ParameterError("Gricean rationality alpha must be finite and > 0");
    if (cost_.size() != lang_.size()) throw ParameterError("cost function size does not match the language");
  }

  SpeakerKind kind() const override { return SpeakerKind::DynamicGricean; }

  std::vector<double> next_log_probs(std::span<const UttIndex> context, WorldIndex w) const override {
    auto weights = unnormalized(context, w);
    log_normalize(weights);
    return weights;
  }

  /// log sum_y exp(alpha I(y|x;w) - c(y)).
  double log_normalizer(std::span<const UttIndex> context, WorldIndex w) const {
    const auto weights = unnormalized(context, w);
    return log_sum_exp(weights);
  }

  double information(std::span<const UttIndex> context, UttIndex y, WorldIndex w) const {
    return conditional_information(listener_, context, y, w);
  }

  double alpha() const { return alpha_; }
  const CostFunction& cost() const { return cost_; }
  const ListenerTable& listener() const { return listener_; }

 private:
  std::vector<double> unnormalized(std::span<const UttIndex> context, WorldIndex w) const {
    if (!text_denotation(context, lang_).contains(w)) {
      throw DomainError("Gricean speaker asked to continue '" + lang_.format(context) + "' in a world where it is false");
    }
    const double base = listener_.log_at(context, w);
    if (base == kNegInf) throw DomainError("listener assigns zero mass to the speaker's own world");
    Tokens extended(context.begin(), context.end());
    extended.push_back(0);
    std::vector<double> weights(lang_.size());
    for (std::size_t y = 0; y < lang_.size(); ++y) {
      extended.back() = static_cast<UttIndex>(y);
      const double info = listener_.log_at(extended, w) - base;
      weights[y] = info == kNegInf ? kNegInf : alpha_ * info - cost_(static_cast<UttIndex>(y));
    }
    return weights;
  }

  double alpha_;
  CostFunction cost_;
  ListenerTable listener_;
};

// -- nonredundantly truthful ----------------------------------------------------

/// Uniform over utterances that are true in w and strictly shrink the context
/// denotation. Omega never shrinks it but is always kept in the support, so
/// texts terminate.
class NonredundantSpeaker final : public Speaker {
 public:
  NonredundantSpeaker(Language lang, WorldSpace worlds) : Speaker(std::move(lang), std::move(worlds)) {}

  SpeakerKind kind() const override { return SpeakerKind::NonredundantTruthful; }

  std::vector<double> next_log_probs(std::span<const UttIndex> context, WorldIndex w) const override {
    const Denotation ctx = text_denotation(context, lang_);
    std::vector<double> out(lang_.size(), kNegInf);
    std::size_t n = 0;
    for (std::size_t y = 0; y < lang_.size(); ++y) {
      if (allowed(ctx, static_cast<UttIndex>(y), w)) ++n;
    }
    const double lp = -std::log(static_cast<double>(n));
    for (std::size_t y = 0; y < lang_.size(); ++y) {
      if (allowed(ctx, static_cast<UttIndex>(y), w)) out[y] = lp;
    }
    return out;
  }

 private:
  bool allowed(const Denotation& ctx, UttIndex y, WorldIndex w) const {
    if (y == lang_.eos()) return true;
    const Denotation& d = lang_.denotation(y);
    return d.contains(w) && (ctx & d) != ctx;
  }
};

}  // namespace gricean
