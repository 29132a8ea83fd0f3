#pragma once

// The experiment runners behind the CLI. Each returns an ExperimentOutput:
// a '#'-prefixed metadata header (config hash, seed, version, truncation
// stats, check summaries) followed by a deterministic CSV body.

#include <algorithm>
#include <array>
#include <chrono>
#include <deque>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gricean/config.hpp"
#include "gricean/enttest.hpp"
#include "gricean/estimate.hpp"
#include "gricean/marginal.hpp"
#include "gricean/semantics.hpp"
#include "gricean/speakers.hpp"

namespace gricean {

struct ExperimentOutput {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string body;
  std::size_t violations = 0;

  void add(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }

  void write(std::ostream& out) const {
    for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
    out << body;
  }
};

inline ExperimentOutput begin_output(const ExperimentConfig& c) {
  ExperimentOutput out;
  out.add("tool", std::string("gricean-lab ") + kToolVersion);
  out.add("experiment", to_string(c.kind));
  out.add("config_hash", c.hash());
  out.add("seed", std::to_string(c.seed));
  out.add("config", c.resolved().dump());
  return out;
}

inline void add_truncation(ExperimentOutput& out, std::size_t truncated, std::size_t total) {
  out.add("truncated_texts", std::to_string(truncated) + " of " + std::to_string(total));
  if (total > 0 && static_cast<double>(truncated) > 0.01 * static_cast<double>(total)) {
    out.add("warning", "more than 1% of texts hit max_len_guard and were truncated");
  }
}

// -- exhaustive tests ------------------------------------------------------------

/// Separation required of non-entailing pairs in the exact dichotomy checks.
inline constexpr double kSeparation = 1e-6;

struct CheckTally {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t degenerate = 0;

  void record(bool ok) {
    ++checked;
    if (!ok) ++violations;
  }
};

struct ExhaustiveResult {
  std::vector<EntailmentVerdict> verdicts;
  std::deque<CheckTally> checks;  // deque: tally() hands out stable references
  double normalization_error = 0.0;
  std::size_t violations() const {
    std::size_t v = 0;
    for (const auto& c : checks) v += c.violations;
    return v;
  }
};

namespace detail {

inline bool dichotomy_ok(bool entailing, double residual, double tol) {
  if (std::isnan(residual)) return false;
  return entailing ? std::abs(residual) < tol : std::abs(residual) > kSeparation;
}

inline CheckTally& tally(std::deque<CheckTally>& checks, const std::string& name) {
  for (auto& c : checks) {
    if (c.name == name) return c;
  }
  checks.push_back({name});
  return checks.back();
}

}  // namespace detail

/// Every ordered pair of single utterances (omega included) against the
/// theorem matching the speaker kind. Pairs involving omega where a test is
/// undefined are counted as degenerate rather than scored.
inline ExhaustiveResult exhaustive_test(const ExperimentConfig& c) {
  const auto L = load_language(c.language_doc);
  const auto built = build_speaker(c.speaker, L);
  const Language& lang = L.language;
  const UttIndex eos = lang.eos();
  const auto dist = enumerate_texts(*built.speaker, L.worlds, {c.max_len, c.enumeration_budget});
  const double tol = c.tolerance;
  const SpeakerKind kind = built.speaker->kind();

  ExhaustiveResult res;
  res.normalization_error = dist.normalization_error();
  detail::tally(res.checks, "normalization").record(dist.normalization_error() < tol);

  if (kind == SpeakerKind::DynamicGricean || kind == SpeakerKind::DynamicRsa) {
    auto& t = detail::tally(res.checks, "cost_identity");
    for (std::size_t x = 0; x < lang.size(); ++x) {
      const Tokens tx{static_cast<UttIndex>(x)};
      // log p(x omega) - log p(xx) with (-inf) - (-inf) = 0, so x = omega reads 0 = 0.
      const double lhs = log_ratio(dist.log_prob(concat(tx, eos)), dist.log_prob(concat(tx, tx)));
      const double rhs = built.cost(static_cast<UttIndex>(x)) - built.cost(eos);
      t.record(std::abs(lhs - rhs) < tol);
    }
  }

  ClassifyOptions copts{tol, c.truth_threshold};
  for (std::size_t xi = 0; xi < lang.size(); ++xi) {
    for (std::size_t yi = 0; yi < lang.size(); ++yi) {
      const Tokens x{static_cast<UttIndex>(xi)};
      const Tokens y{static_cast<UttIndex>(yi)};
      const bool x_eos = xi == eos;
      const bool y_eos = yi == eos;
      const auto scores = score_pair(dist, x, y, built.cost);
      auto verdict = classify(x, y, scores, lang, L.worlds, copts);
      const bool ent = entails(lang.denotation(x[0]), lang.denotation(y[0]));

      switch (kind) {
        case SpeakerKind::UniformTruthful: {
          auto& t1 = detail::tally(res.checks, "uniform");
          auto& t2 = detail::tally(res.checks, "uniform_omega");
          if (x_eos) {
            ++t1.degenerate;
            ++t2.degenerate;
            break;
          }
          t1.record(detail::dichotomy_ok(ent, scores.uniform_residual, tol));
          t2.record(detail::dichotomy_ok(ent, test_uniform_omega(dist, x, y), tol));
          break;
        }
        case SpeakerKind::FactorizedTruthful:
        case SpeakerKind::StaticRsa: {
          auto& tt = detail::tally(res.checks, "independent_tau");
          auto& tm = detail::tally(res.checks, "independent_marginal");
          auto& ta = detail::tally(res.checks, "independent_agreement");
          if (x_eos || y_eos) {
            ++tt.degenerate;
            ++tm.degenerate;
            ++ta.degenerate;
            break;
          }
          const double tau = scores.independent_residual;
          const double marg = test_independent_marginal(dist, x, y);
          tt.record(detail::dichotomy_ok(ent, tau, tol));
          tm.record(detail::dichotomy_ok(ent, marg, tol));
          ta.record((tau == kNegInf && marg == kNegInf) || std::abs(tau - marg) < tol);
          break;
        }
        case SpeakerKind::DynamicGricean:
        case SpeakerKind::DynamicRsa: {
          auto& tg = detail::tally(res.checks, "gricean_entailing");
          auto& te = detail::tally(res.checks, "gricean_erratum");
          if (x_eos || y_eos) {
            ++tg.degenerate;
            ++te.degenerate;
            break;
          }
          const bool vanishes = std::abs(scores.g) < tol;
          if (ent) tg.record(vanishes);
          if (built.gricean) {
            const auto cond = erratum_condition(*built.gricean, x, y[0]);
            if (!ent && vanishes) te.record(std::abs(cond.residual) < tol * cond.I);
            auto& ti = detail::tally(res.checks, "erratum_identity");
            if (std::isfinite(scores.g)) {
              ti.record(std::abs(cond.implied_g() - scores.g) < tol * std::max(1.0, std::abs(scores.g)));
            } else {
              ti.record(cond.contradiction && scores.g == kNegInf);
            }
          }
          break;
        }
        case SpeakerKind::NonredundantTruthful: {
          auto& t = detail::tally(res.checks, "nonredundant_strict");
          if (x_eos || y_eos) {
            ++t.degenerate;
            break;
          }
          t.record(test_nonredundant_strict(dist, x, y) == strictly_entails(lang.denotation(x[0]), lang.denotation(y[0])));
          break;
        }
      }
      res.verdicts.push_back(std::move(verdict));
    }
  }
  return res;
}

inline ExperimentOutput run_exhaustive_test(const ExperimentConfig& c) {
  auto out = begin_output(c);
  const auto res = exhaustive_test(c);
  const auto L = load_language(c.language_doc);
  add_truncation(out, 0, 0);
  out.add("normalization_error", format_double(res.normalization_error));
  for (const auto& t : res.checks) {
    out.add("check " + t.name, "checked=" + std::to_string(t.checked) + " violations=" + std::to_string(t.violations) +
                                   " degenerate=" + std::to_string(t.degenerate));
  }
  std::ostringstream body;
  write_verdict_header(body);
  for (const auto& v : res.verdicts) write_verdict_row(body, v, L.language);
  out.body = body.str();
  out.violations = res.violations();
  return out;
}

// -- counterexample sweep --------------------------------------------------------

struct CounterexamplePoint {
  std::size_t k = 0;
  std::string y;
  double g = 0.0;
  ErratumCondition erratum;
  GroundTruth ground_truth = GroundTruth::Incomparable;
  Classification g_label = Classification::NotEntails;
  Classification classification = Classification::NotEntails;
};

struct CounterexampleResult {
  std::string x;
  std::vector<CounterexamplePoint> points;
  std::size_t zeros = 0;         // |g| <= tol before the endpoint
  std::size_t sign_changes = 0;  // between consecutive finite nonzero values before the endpoint
  bool endpoint_neg_inf = false;
  double max_identity_gap = 0.0;  // max |g - log(p(Y) I(Y)) + log I| / max(1, |g|) over finite points

  /// Points where the curve meets zero: touching zeros plus strict sign changes.
  std::size_t crossings() const { return zeros + sign_changes; }
};

/// x is true everywhere but world 0. The y-variants drop worlds from [[x]] one
/// at a time (common worlds first, then rare ones), so |[[x]] \ [[y]]| = k.
/// At k = |[[x]]|, y is the complement of x. Speaker: Gricean over the full
/// power-set language, literal listener.
inline CounterexampleResult counterexample_sweep(const CounterexampleParams& p, double tol) {
  const std::size_t n = p.common_worlds + p.rare_worlds;
  auto synth = make_synthetic_language(n);
  std::vector<double> weights(p.common_worlds, 1.0);
  weights.insert(weights.end(), p.rare_worlds, p.rare_weight);
  const WorldSpace ws = WorldSpace::from_weights(weights);
  const Language& lang = synth.language;
  const CostFunction cost = CostFunction::label_length(lang, p.cost_coefficient);
  DynamicGriceanSpeaker speaker(ws, p.alpha, cost, dynamic_rsa_listener(0, lang, ws, cost));
  const DirectMarginal src(speaker, ws);

  const std::uint64_t full = (n >= 64) ? ~0ULL : ((1ULL << n) - 1);
  const std::uint64_t xmask = full & ~1ULL;
  const Tokens x{lang.index_of(Denotation(xmask, n).to_bits())};

  CounterexampleResult res;
  res.x = lang[x[0]].id;
  const std::size_t kmax = n - 1;
  for (std::size_t k = 0; k <= kmax; ++k) {
    std::uint64_t ymask = xmask;
    for (std::size_t j = 1; j <= k; ++j) ymask &= ~(1ULL << j);
    if (ymask == 0) ymask = full & ~xmask;
    const Tokens y{lang.index_of(Denotation(ymask, n).to_bits())};
    CounterexamplePoint pt;
    pt.k = k;
    pt.y = lang[y[0]].id;
    pt.g = gricean_score(src, x, y);
    pt.erratum = erratum_condition(speaker, x, y[0]);
    const PairScores sc{pt.g};
    const auto v = classify(x, y, sc, lang, ws, {tol, std::nullopt});
    pt.ground_truth = v.ground_truth;
    pt.g_label = v.g_label;
    pt.classification = v.classification;
    if (std::isfinite(pt.g)) {
      const double gap = std::abs(pt.g - pt.erratum.implied_g()) / std::max(1.0, std::abs(pt.g));
      res.max_identity_gap = std::max(res.max_identity_gap, gap);
    }
    res.points.push_back(pt);
  }

  res.endpoint_neg_inf = res.points.back().g == kNegInf;
  int last_sign = 0;
  for (std::size_t i = 0; i + 1 < res.points.size(); ++i) {
    const double g = res.points[i].g;
    if (!std::isfinite(g)) continue;
    if (std::abs(g) <= tol) {
      ++res.zeros;
      continue;
    }
    const int s = g > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++res.sign_changes;
    last_sign = s;
  }
  return res;
}

inline ExperimentOutput run_counterexample_sweep(const ExperimentConfig& c) {
  auto out = begin_output(c);
  const auto& p = c.counterexample;
  const auto res = counterexample_sweep(p, c.tolerance);
  add_truncation(out, 0, 0);
  out.add("worlds", std::to_string(p.common_worlds + p.rare_worlds) + " (" + std::to_string(p.common_worlds) + " common weight 1, " +
                        std::to_string(p.rare_worlds) + " rare weight " + format_double(p.rare_weight) + ", normalized)");
  out.add("speaker", "dynamic-gricean alpha=" + format_double(p.alpha) + " cost=" + format_double(p.cost_coefficient) +
                         "*|label| literal listener, power-set language");
  out.add("x", res.x);
  out.add("zeros_before_endpoint", std::to_string(res.zeros));
  out.add("sign_changes_before_endpoint", std::to_string(res.sign_changes));
  out.add("crossings", std::to_string(res.crossings()));
  out.add("endpoint", res.endpoint_neg_inf ? "-inf" : "finite");
  out.add("max_erratum_identity_gap", format_double(res.max_identity_gap));

  std::ostringstream body;
  body << "k,y,ground_truth,g,p_Y,I_Y,I,erratum_residual,implied_g,g_label,classification\n";
  for (const auto& pt : res.points) {
    body << pt.k << ',' << pt.y << ',' << to_string(pt.ground_truth) << ',' << format_double(pt.g) << ',' << format_double(pt.erratum.p_Y)
         << ',' << format_double(pt.erratum.I_Y) << ',' << format_double(pt.erratum.I) << ',' << format_double(pt.erratum.residual) << ','
         << format_double(pt.erratum.implied_g()) << ',' << to_string(pt.g_label) << ',' << to_string(pt.classification) << '\n';
  }
  out.body = body.str();
  if (!(res.max_identity_gap < c.tolerance)) ++out.violations;
  return out;
}

// -- corpus sweep ------------------------------------------------------------------

/// Halving grid from max down to min (min always included), ascending.
inline std::vector<std::size_t> corpus_grid(std::size_t max_size, std::size_t min_size) {
  std::vector<std::size_t> grid;
  for (std::size_t n = max_size; n >= min_size && n > 0; n /= 2) grid.push_back(n);
  if (grid.empty() || grid.back() != min_size) grid.push_back(min_size);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

/// Satisfiable texts of 1..max_len sentences (omega excluded), in
/// lexicographic order of utterance index.
inline std::vector<Tokens> satisfiable_texts(const Language& lang, std::size_t max_len) {
  std::vector<Tokens> out;
  Tokens cur;
  auto rec = [&](auto&& self, const Denotation& d) -> void {
    for (UttIndex s : lang.sentences()) {
      const Denotation next = d & lang.denotation(s);
      if (next.empty()) continue;
      cur.push_back(s);
      out.push_back(cur);
      if (cur.size() < max_len) self(self, next);
      cur.pop_back();
    }
  };
  rec(rec, Denotation::full(lang.world_count()));
  std::sort(out.begin(), out.end(), [](const Tokens& a, const Tokens& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

struct SweepRow {
  std::string seed;  // a seed number, or "mean" for the across-seed average
  std::size_t n = 0;
  std::string estimator;
  std::string xy_len;  // |x| + |y|, or "all"
  bool entailed = false;
  std::size_t count = 0;  // pairs averaged (per-seed rows) or seeds averaged (mean rows)
  double mean_abs_g = 0.0;
};

struct SweepResult {
  std::vector<std::size_t> grid;
  std::vector<SweepRow> rows;
  std::size_t seeds_requested = 0;
  std::size_t seeds_completed = 0;
  std::size_t truncated = 0;
  std::size_t texts = 0;
  std::size_t pairs_total = 0;

  /// The across-seed mean for one cell; NaN when absent.
  double mean(std::size_t n, const std::string& estimator, bool entailed, const std::string& xy_len = "all") const {
    for (const auto& r : rows) {
      if (r.seed == "mean" && r.n == n && r.estimator == estimator && r.entailed == entailed && r.xy_len == xy_len) return r.mean_abs_g;
    }
    return kUndefined;
  }
};

/// Mean |g_p̂(x, y)| on nested corpora (the first n texts of one seeded
/// sample), for the prefix-frequency and n-gram estimators. Pairs with both
/// xy and yy absent from the corpus are skipped; identical pairs are left
/// out since g vanishes on them for any estimator.
inline SweepResult corpus_sweep(const ExperimentConfig& c, const Speaker& speaker, const WorldSpace& ws) {
  const auto& p = c.sweep;
  const Language& lang = speaker.language();
  SweepResult res;
  res.grid = corpus_grid(p.max_corpus_size, p.min_corpus_size);
  res.seeds_requested = p.seeds;

  const auto texts = satisfiable_texts(lang, p.pair_max_len);
  struct Pair {
    Tokens x, y, xy, yy;
    bool entailed;
    std::size_t len;
  };
  std::vector<Pair> pairs;
  for (const auto& x : texts) {
    for (const auto& y : texts) {
      if (x == y) continue;
      pairs.push_back({x, y, concat(x, y), concat(y, y), entails(text_denotation(x, lang), text_denotation(y, lang)), x.size() + y.size()});
    }
  }
  res.pairs_total = pairs.size();
  const std::size_t max_len = 2 * p.pair_max_len;
  const std::string estimators[2] = {"frequency", p.ngram_order == 3 ? "trigram" : std::to_string(p.ngram_order) + "-gram"};

  // Accumulators indexed [estimator][len or 0 = all][entailed] for the mean rows.
  struct Acc {
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::tuple<std::size_t, int, std::size_t, int>, Acc> across;  // (n, est, len, entailed)

  const auto start = std::chrono::steady_clock::now();
  CorpusSampler sampler(speaker, ws, c.max_len_guard);
  Tokens text;
  WorldIndex world = 0;
  for (std::size_t seed_i = 0; seed_i < p.seeds; ++seed_i) {
    if (c.budget_seconds > 0 && seed_i > 0) {
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (elapsed > c.budget_seconds) break;
    }
    const std::uint64_t seed = c.seed + seed_i;
    FrequencyModel freq(lang, p.unseen_floor);
    NgramModel ngram(lang, p.ngram_order, p.unseen_floor);
    std::size_t next_grid = 0;
    for (std::size_t i = 0; i < res.grid.back(); ++i) {
      if (sampler.sample(seed, i, text, world)) ++res.truncated;
      ++res.texts;
      freq.add(text);
      ngram.add(text);
      if (i + 1 != res.grid[next_grid]) continue;
      const std::size_t n = res.grid[next_grid++];

      std::vector<std::vector<std::array<Acc, 2>>> acc(2, std::vector<std::array<Acc, 2>>(max_len + 1));
      for (const auto& pr : pairs) {
        if (freq.count(pr.xy) == 0 && freq.count(pr.yy) == 0) continue;
        const double gs[2] = {gricean_score(freq, pr.x, pr.y), gricean_score(ngram, pr.x, pr.y)};
        for (int e = 0; e < 2; ++e) {
          if (std::isnan(gs[e])) continue;
          for (std::size_t b : {std::size_t{0}, pr.len}) {
            auto& a = acc[e][b][pr.entailed ? 1 : 0];
            a.sum += std::abs(gs[e]);
            ++a.count;
          }
        }
      }
      for (int e = 0; e < 2; ++e) {
        for (std::size_t b = 0; b <= max_len; ++b) {
          if (b == 1) continue;
          for (int ent = 1; ent >= 0; --ent) {
            const auto& a = acc[e][b][ent];
            if (a.count == 0) continue;
            const double m = a.sum / static_cast<double>(a.count);
            res.rows.push_back({std::to_string(seed), n, estimators[e], b == 0 ? "all" : std::to_string(b), ent == 1, a.count, m});
            auto& x = across[{n, e, b, ent}];
            x.sum += m;
            ++x.count;
          }
        }
      }
    }
    ++res.seeds_completed;
  }

  for (const auto& [key, a] : across) {
    const auto& [n, e, b, ent] = key;
    res.rows.push_back({"mean", n, estimators[e], b == 0 ? "all" : std::to_string(b), ent == 1, a.count, a.sum / static_cast<double>(a.count)});
  }
  return res;
}

inline ExperimentOutput run_corpus_sweep(const ExperimentConfig& c) {
  auto out = begin_output(c);
  const auto L = load_language(c.language_doc);
  const auto built = build_speaker(c.speaker, L);
  const auto res = corpus_sweep(c, *built.speaker, L.worlds);
  add_truncation(out, res.truncated, res.texts);
  out.add("grid", std::to_string(res.grid.front()) + ".." + std::to_string(res.grid.back()) + " (" + std::to_string(res.grid.size()) +
                      " halving points)");
  out.add("pairs", std::to_string(res.pairs_total) + " ordered pairs of distinct satisfiable texts, 1.." +
                       std::to_string(c.sweep.pair_max_len) + " sentences each");
  out.add("exclusion", "pairs with both xy and yy absent from the corpus are skipped");
  out.add("unseen_floor", format_double(c.sweep.unseen_floor));
  out.add("seeds_completed", std::to_string(res.seeds_completed) + " of " + std::to_string(res.seeds_requested));
  if (res.seeds_completed < res.seeds_requested) out.add("budget_trimmed", "yes (budget_seconds=" + format_double(c.budget_seconds) + ")");

  std::ostringstream body;
  body << "seed,n,estimator,xy_len,entailed,count,mean_abs_g\n";  // count: pairs (per-seed rows) or seeds (mean rows)
  for (const auto& r : res.rows) {
    body << r.seed << ',' << r.n << ',' << r.estimator << ',' << r.xy_len << ',' << (r.entailed ? 1 : 0) << ',' << r.count << ','
         << format_double(r.mean_abs_g) << '\n';
  }
  out.body = body.str();
  return out;
}

// -- complexity curve ----------------------------------------------------------------

inline ExperimentOutput run_complexity_curve(const ExperimentConfig& c) {
  auto out = begin_output(c);
  add_truncation(out, 0, 0);
  const auto& p = c.complexity;
  std::ostringstream body;
  body << "length,delta,epsilon,perplexity,n\n";
  for (double l : p.lengths) {
    body << format_double(l) << ',' << format_double(p.delta) << ',' << format_double(p.epsilon) << ',' << format_double(p.perplexity) << ','
         << format_double(sample_complexity(l, p.delta, p.epsilon, p.perplexity)) << '\n';
  }
  out.body = body.str();
  return out;
}

// -- corpus statistics / sampling ------------------------------------------------------

inline ExperimentOutput run_corpus_stats(const ExperimentConfig& c) {
  auto out = begin_output(c);
  const auto L = load_language(c.language_doc);
  const auto built = build_speaker(c.speaker, L);
  const auto corpus = sample_corpus(*built.speaker, L.worlds, c.corpus_size, c.seed, c.max_len_guard);
  add_truncation(out, corpus.truncated, corpus.size());
  const auto s = corpus_stats(corpus, L.language);
  std::ostringstream body;
  body << "section,key,value\n";
  for (std::size_t u = 0; u < s.utterance_counts.size(); ++u) {
    body << "utterance," << L.language[static_cast<UttIndex>(u)].id << ',' << s.utterance_counts[u] << '\n';
  }
  for (const auto& [len, count] : s.length_counts) body << "length," << len << ',' << count << '\n';
  body << "rate,adjacent_equal_denotation," << format_double(s.redundancy_rate()) << '\n';
  body << "rate,context_redundant," << format_double(s.context_redundancy_rate()) << '\n';
  body << "rate,ends_in_omega," << format_double(static_cast<double>(s.texts_ending_in_omega) / static_cast<double>(s.texts)) << '\n';
  out.body = body.str();
  return out;
}

inline ExperimentOutput run_sample(const ExperimentConfig& c) {
  auto out = begin_output(c);
  const auto L = load_language(c.language_doc);
  const auto built = build_speaker(c.speaker, L);
  const auto corpus = sample_corpus(*built.speaker, L.worlds, c.corpus_size, c.seed, c.max_len_guard);
  add_truncation(out, corpus.truncated, corpus.size());
  std::ostringstream body;
  write_corpus(body, corpus, L.language);
  out.body = body.str();
  return out;
}

inline ExperimentOutput run_experiment(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::ExhaustiveTest: return run_exhaustive_test(c);
    case ExperimentKind::CorpusSweep: return run_corpus_sweep(c);
    case ExperimentKind::CounterexampleSweep: return run_counterexample_sweep(c);
    case ExperimentKind::ComplexityCurve: return run_complexity_curve(c);
    case ExperimentKind::CorpusStats: return run_corpus_stats(c);
    case ExperimentKind::Sample: return run_sample(c);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace gricean
