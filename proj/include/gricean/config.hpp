#pragma once

// JSON configuration: language documents, speaker specs, and the validated
// experiment config. Unknown keys are rejected at every level, and the
// resolved config (defaults filled in) is what gets hashed into output
// metadata.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gricean/errors.hpp"
#include "gricean/estimate.hpp"
#include "gricean/semantics.hpp"
#include "gricean/speakers.hpp"

namespace gricean {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace cfg {

inline void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw ConfigError("unknown field '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const Json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

inline double positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive and finite");
  return v;
}

inline double nonnegative(double v, const std::string& what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be nonnegative and finite");
  return v;
}

}  // namespace cfg

// -- language ----------------------------------------------------------------------

struct LoadedLanguage {
  WorldSpace worlds;
  Language language;
  std::vector<std::optional<double>> cost_overrides;  // per utterance
};

/// {"synthetic": n} or {"worlds": n, "prior": [...]?, "utterances": [{"id",
/// "denotation": "0101", "cost"?}], "eos": "<id>"}. Character w of a
/// denotation string is world w.
inline LoadedLanguage load_language(const Json& doc) {
  if (doc.contains("synthetic")) {
    cfg::reject_unknown(doc, "language", {"synthetic"});
    const auto n = cfg::get_or<long long>(doc, "synthetic", 3, "language");
    if (n < 1 || n > 16) throw ConfigError("language.synthetic must be in [1, 16]");
    auto s = make_synthetic_language(static_cast<std::size_t>(n));
    std::vector<std::optional<double>> none(s.language.size());
    return {std::move(s.worlds), std::move(s.language), std::move(none)};
  }
  cfg::reject_unknown(doc, "language", {"worlds", "prior", "utterances", "eos"});
  if (!doc.contains("worlds") || !doc.contains("utterances") || !doc.contains("eos")) {
    throw ConfigError("language needs 'worlds', 'utterances' and 'eos' (or 'synthetic')");
  }
  const auto n = cfg::get_or<long long>(doc, "worlds", 0, "language");
  if (n < 1 || n > static_cast<long long>(kMaxWorlds)) throw ConfigError("language.worlds must be in [1, 64]");
  try {
    WorldSpace ws = doc.contains("prior") ? WorldSpace::from_weights(doc.at("prior").get<std::vector<double>>())
                                          : WorldSpace::uniform(static_cast<std::size_t>(n));
    if (ws.size() != static_cast<std::size_t>(n)) throw ConfigError("language.prior must have one entry per world");
    std::vector<Utterance> utts;
    std::vector<std::optional<double>> costs;
    for (const auto& u : doc.at("utterances")) {
      cfg::reject_unknown(u, "language.utterances[]", {"id", "denotation", "cost", "display"});
      const auto id = u.at("id").get<std::string>();
      const auto bits = u.at("denotation").get<std::string>();
      if (bits.size() != static_cast<std::size_t>(n)) throw ConfigError("denotation of '" + id + "' must have one character per world");
      utts.push_back({id, Denotation::from_bits(bits), u.value("display", id)});
      costs.push_back(u.contains("cost") ? std::optional<double>(cfg::nonnegative(u.at("cost").get<double>(), "cost of '" + id + "'"))
                                         : std::nullopt);
    }
    const auto eos_id = doc.at("eos").get<std::string>();
    std::optional<UttIndex> eos;
    for (std::size_t i = 0; i < utts.size(); ++i) {
      if (utts[i].id == eos_id) eos = static_cast<UttIndex>(i);
    }
    if (!eos) throw ConfigError("language.eos names no utterance");
    Language lang(std::move(utts), *eos);
    return {std::move(ws), std::move(lang), std::move(costs)};
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("language: ") + e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("language: ") + e.what());
  }
}

// -- speaker -----------------------------------------------------------------------

struct SpeakerSpec {
  SpeakerKind kind = SpeakerKind::DynamicGricean;
  double alpha = 5.0;
  int depth = 1;
  double cost_coefficient = 0.1;
  std::vector<double> f;  // factorized speaker; empty = all ones
  std::vector<double> g;

  Json to_json() const {
    Json j{{"kind", to_string(kind)}, {"alpha", alpha}, {"depth", depth}, {"cost_coefficient", cost_coefficient}};
    if (!f.empty()) j["f"] = f;
    if (!g.empty()) j["g"] = g;
    return j;
  }
};

inline SpeakerKind parse_speaker_kind(const std::string& s) {
  for (auto k : {SpeakerKind::UniformTruthful, SpeakerKind::FactorizedTruthful, SpeakerKind::StaticRsa, SpeakerKind::DynamicGricean,
                 SpeakerKind::NonredundantTruthful, SpeakerKind::DynamicRsa}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown speaker kind '" + s + "'");
}

inline SpeakerSpec parse_speaker(const Json& doc) {
  cfg::reject_unknown(doc, "speaker", {"kind", "alpha", "depth", "cost_coefficient", "f", "g"});
  SpeakerSpec s;
  s.kind = parse_speaker_kind(cfg::get_or<std::string>(doc, "kind", to_string(s.kind), "speaker"));
  s.alpha = cfg::get_or<double>(doc, "alpha", s.alpha, "speaker");
  if (!(s.alpha > 0.0) || !std::isfinite(s.alpha)) {
    throw ConfigError("speaker.alpha must be > 0: a Gricean speaker is defined for some alpha > 0");
  }
  s.depth = cfg::get_or<int>(doc, "depth", s.depth, "speaker");
  if (s.depth < -1 || s.depth > 16) throw ConfigError("speaker.depth must be in [-1, 16]");
  if ((s.kind == SpeakerKind::DynamicGricean || s.kind == SpeakerKind::DynamicRsa) && s.depth < 0) {
    throw ConfigError("dynamic speakers need depth >= 0");
  }
  s.cost_coefficient = cfg::nonnegative(cfg::get_or<double>(doc, "cost_coefficient", s.cost_coefficient, "speaker"), "speaker.cost_coefficient");
  s.f = cfg::get_or<std::vector<double>>(doc, "f", {}, "speaker");
  s.g = cfg::get_or<std::vector<double>>(doc, "g", {}, "speaker");
  return s;
}

inline CostFunction build_cost(const LoadedLanguage& lang, double coefficient) {
  auto base = CostFunction::label_length(lang.language, coefficient);
  std::vector<double> c(base.values().begin(), base.values().end());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < lang.cost_overrides.size() && lang.cost_overrides[i]) c[i] = *lang.cost_overrides[i];
  }
  return CostFunction(std::move(c));
}

struct BuiltSpeaker {
  std::shared_ptr<const Speaker> speaker;
  CostFunction cost;
  const DynamicGriceanSpeaker* gricean = nullptr;  // non-null for Gricean speakers
};

/// Gricean depth d is the speaker's depth: it reasons about the dynamic RSA
/// listener of depth d - 1 (depth 1 = literal listener l_0).
inline BuiltSpeaker build_speaker(const SpeakerSpec& spec, const LoadedLanguage& lang) {
  BuiltSpeaker out;
  out.cost = build_cost(lang, spec.cost_coefficient);
  try {
    switch (spec.kind) {
      case SpeakerKind::UniformTruthful:
        out.speaker = std::make_shared<UniformTruthfulSpeaker>(lang.language, lang.worlds);
        break;
      case SpeakerKind::FactorizedTruthful: {
        auto f = spec.f.empty() ? std::vector<double>(lang.language.size(), 1.0) : spec.f;
        auto g = spec.g.empty() ? std::vector<double>(lang.worlds.size(), 1.0) : spec.g;
        out.speaker = std::make_shared<FactorizedTruthfulSpeaker>(lang.language, lang.worlds, std::move(f), std::move(g));
        break;
      }
      case SpeakerKind::StaticRsa:
        out.speaker = std::make_shared<StaticRsaSpeaker>(lang.language, lang.worlds, spec.depth, out.cost);
        break;
      case SpeakerKind::DynamicGricean: {
        auto listener = dynamic_rsa_listener(spec.depth - 1, lang.language, lang.worlds, out.cost);
        auto sp = std::make_shared<DynamicGriceanSpeaker>(lang.worlds, spec.alpha, out.cost, std::move(listener));
        out.gricean = sp.get();
        out.speaker = std::move(sp);
        break;
      }
      case SpeakerKind::NonredundantTruthful:
        out.speaker = std::make_shared<NonredundantSpeaker>(lang.language, lang.worlds);
        break;
      case SpeakerKind::DynamicRsa: {
        auto engine = std::make_shared<const RsaEngine>(lang.language, lang.worlds, out.cost);
        out.speaker = std::make_shared<DynamicRsaSpeaker>(std::move(engine), lang.worlds, spec.depth);
        break;
      }
    }
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("speaker: ") + e.what());
  }
  return out;
}

// -- experiment config -------------------------------------------------------------

enum class ExperimentKind { ExhaustiveTest, CorpusSweep, CounterexampleSweep, ComplexityCurve, CorpusStats, Sample };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::ExhaustiveTest: return "exhaustive-test";
    case ExperimentKind::CorpusSweep: return "corpus-sweep";
    case ExperimentKind::CounterexampleSweep: return "counterexample-sweep";
    case ExperimentKind::ComplexityCurve: return "complexity-curve";
    case ExperimentKind::CorpusStats: return "corpus-stats";
    case ExperimentKind::Sample: return "sample";
  }
  return "unknown";
}

struct SweepParams {
  std::size_t max_corpus_size = 1000000;
  std::size_t min_corpus_size = 2;
  std::size_t seeds = 10;
  std::size_t pair_max_len = 2;  // x and y range over texts of 1..pair_max_len sentences
  double unseen_floor = kUnseenFloor;
  std::size_t ngram_order = 3;
};

struct CounterexampleParams {
  std::size_t common_worlds = 9;
  std::size_t rare_worlds = 3;
  double rare_weight = 0.05;
  double alpha = 5.0;
  double cost_coefficient = 0.1;
};

struct ComplexityParams {
  std::vector<double> lengths{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double delta = 0.1;
  double epsilon = 1.0;
  double perplexity = 20.0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ExhaustiveTest;
  Json language_doc = Json{{"synthetic", 3}};
  SpeakerSpec speaker;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  std::optional<double> truth_threshold;
  std::size_t max_len = 6;
  double enumeration_budget = 5e7;
  std::size_t max_len_guard = 50;
  std::size_t corpus_size = 10000;  // stats / sample
  double budget_seconds = 0.0;      // 0 = unlimited
  SweepParams sweep;
  CounterexampleParams counterexample;
  ComplexityParams complexity;

  /// Fully resolved document; every default is spelled out.
  Json resolved() const {
    Json j;
    j["experiment"] = to_string(kind);
    j["language"] = language_doc;
    j["speaker"] = speaker.to_json();
    j["seed"] = seed;
    j["tolerance"] = tolerance;
    j["truth_threshold"] = truth_threshold ? Json(*truth_threshold) : Json(nullptr);
    j["max_len"] = max_len;
    j["enumeration_budget"] = enumeration_budget;
    j["max_len_guard"] = max_len_guard;
    j["corpus_size"] = corpus_size;
    j["budget_seconds"] = budget_seconds;
    j["sweep"] = {{"max_corpus_size", sweep.max_corpus_size}, {"min_corpus_size", sweep.min_corpus_size}, {"seeds", sweep.seeds},
                  {"pair_max_len", sweep.pair_max_len},       {"unseen_floor", sweep.unseen_floor},        {"ngram_order", sweep.ngram_order}};
    j["counterexample"] = {{"common_worlds", counterexample.common_worlds}, {"rare_worlds", counterexample.rare_worlds},
                           {"rare_weight", counterexample.rare_weight},     {"alpha", counterexample.alpha},
                           {"cost_coefficient", counterexample.cost_coefficient}};
    j["complexity"] = {{"lengths", complexity.lengths}, {"delta", complexity.delta}, {"epsilon", complexity.epsilon}, {"perplexity", complexity.perplexity}};
    return j;
  }

  std::string hash() const { return hex64(fnv1a(resolved().dump())); }
};

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::ExhaustiveTest, ExperimentKind::CorpusSweep, ExperimentKind::CounterexampleSweep,
                 ExperimentKind::ComplexityCurve, ExperimentKind::CorpusStats, ExperimentKind::Sample}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown experiment '" + s + "'");
}

namespace cfg {
inline std::size_t count(const Json& obj, const char* key, std::size_t fallback, const std::string& where, std::size_t min = 0) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == std::floor(v.get<double>()))) {
    throw ConfigError(where + "." + key + " must be an integer");
  }
  const double d = v.get<double>();
  if (d < static_cast<double>(min)) throw ConfigError(where + "." + key + " must be >= " + std::to_string(min));
  return static_cast<std::size_t>(d);
}
}  // namespace cfg

/// Validates a config document. Everything is checked before any
/// computation starts.
inline ExperimentConfig validate_config(const Json& doc) {
  cfg::reject_unknown(doc, "config",
                      {"experiment", "language", "speaker", "seed", "tolerance", "truth_threshold", "max_len", "enumeration_budget",
                       "max_len_guard", "corpus_size", "budget_seconds", "sweep", "counterexample", "complexity"});
  ExperimentConfig c;
  const std::string top = "config";
  if (doc.contains("experiment")) c.kind = parse_experiment_kind(cfg::get_or<std::string>(doc, "experiment", "", top));
  if (doc.contains("language")) c.language_doc = doc.at("language");
  load_language(c.language_doc);  // validate eagerly
  if (doc.contains("speaker")) c.speaker = parse_speaker(doc.at("speaker"));
  c.seed = cfg::count(doc, "seed", 0, top);
  c.tolerance = cfg::positive(cfg::get_or<double>(doc, "tolerance", c.tolerance, top), "tolerance");
  if (doc.contains("truth_threshold") && !doc.at("truth_threshold").is_null()) {
    c.truth_threshold = cfg::nonnegative(cfg::get_or<double>(doc, "truth_threshold", 0.0, top), "truth_threshold");
  }
  c.max_len = cfg::count(doc, "max_len", c.max_len, top);
  c.enumeration_budget = cfg::positive(cfg::get_or<double>(doc, "enumeration_budget", c.enumeration_budget, top), "enumeration_budget");
  c.max_len_guard = cfg::count(doc, "max_len_guard", c.max_len_guard, top, 1);
  c.corpus_size = cfg::count(doc, "corpus_size", c.corpus_size, top, 1);
  c.budget_seconds = cfg::nonnegative(cfg::get_or<double>(doc, "budget_seconds", c.budget_seconds, top), "budget_seconds");

  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    cfg::reject_unknown(s, "sweep", {"max_corpus_size", "min_corpus_size", "seeds", "pair_max_len", "unseen_floor", "ngram_order"});
    c.sweep.max_corpus_size = cfg::count(s, "max_corpus_size", c.sweep.max_corpus_size, "sweep", 1);
    c.sweep.min_corpus_size = cfg::count(s, "min_corpus_size", c.sweep.min_corpus_size, "sweep", 1);
    c.sweep.seeds = cfg::count(s, "seeds", c.sweep.seeds, "sweep", 1);
    c.sweep.pair_max_len = cfg::count(s, "pair_max_len", c.sweep.pair_max_len, "sweep", 1);
    c.sweep.unseen_floor = cfg::positive(cfg::get_or<double>(s, "unseen_floor", c.sweep.unseen_floor, "sweep"), "sweep.unseen_floor");
    c.sweep.ngram_order = cfg::count(s, "ngram_order", c.sweep.ngram_order, "sweep", 1);
    if (c.sweep.ngram_order > 4) throw ConfigError("sweep.ngram_order must be <= 4");
    if (c.sweep.min_corpus_size > c.sweep.max_corpus_size) throw ConfigError("sweep.min_corpus_size exceeds max_corpus_size");
  }
  if (doc.contains("counterexample")) {
    const auto& s = doc.at("counterexample");
    cfg::reject_unknown(s, "counterexample", {"common_worlds", "rare_worlds", "rare_weight", "alpha", "cost_coefficient"});
    auto& p = c.counterexample;
    p.common_worlds = cfg::count(s, "common_worlds", p.common_worlds, "counterexample", 2);
    p.rare_worlds = cfg::count(s, "rare_worlds", p.rare_worlds, "counterexample", 0);
    if (p.common_worlds + p.rare_worlds > 14) throw ConfigError("counterexample world space is limited to 14 worlds (2^n - 1 utterances)");
    p.rare_weight = cfg::positive(cfg::get_or<double>(s, "rare_weight", p.rare_weight, "counterexample"), "counterexample.rare_weight");
    p.alpha = cfg::positive(cfg::get_or<double>(s, "alpha", p.alpha, "counterexample"), "counterexample.alpha");
    p.cost_coefficient =
        cfg::nonnegative(cfg::get_or<double>(s, "cost_coefficient", p.cost_coefficient, "counterexample"), "counterexample.cost_coefficient");
  }
  if (doc.contains("complexity")) {
    const auto& s = doc.at("complexity");
    cfg::reject_unknown(s, "complexity", {"lengths", "delta", "epsilon", "perplexity"});
    auto& p = c.complexity;
    p.lengths = cfg::get_or<std::vector<double>>(s, "lengths", p.lengths, "complexity");
    for (double l : p.lengths) cfg::nonnegative(l, "complexity.lengths[]");
    p.delta = cfg::positive(cfg::get_or<double>(s, "delta", p.delta, "complexity"), "complexity.delta");
    p.epsilon = cfg::positive(cfg::get_or<double>(s, "epsilon", p.epsilon, "complexity"), "complexity.epsilon");
    p.perplexity = cfg::positive(cfg::get_or<double>(s, "perplexity", p.perplexity, "complexity"), "complexity.perplexity");
  }
  return c;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace gricean
