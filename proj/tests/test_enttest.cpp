#include <gtest/gtest.h>

#include <cmath>

#include "gricean/enttest.hpp"

using namespace gricean;

namespace {

// Closed-form prefix probabilities for a uniformly truthful speaker:
// p(z) = sum_w p(w) prod_t [t true in w] / n(w). No enumeration involved.
struct UniformOracle {
  Language lang;
  WorldSpace ws;

  double log_prob(std::span<const UttIndex> z) const {
    double p = 0.0;
    for (WorldIndex w = 0; w < ws.size(); ++w) {
      double n = 0;
      for (std::size_t u = 0; u < lang.size(); ++u) n += lang.denotation(static_cast<UttIndex>(u)).contains(w);
      double pw = ws.prior(w);
      for (UttIndex t : z) pw *= lang.denotation(t).contains(w) ? 1.0 / n : 0.0;
      p += pw;
    }
    return p > 0 ? std::log(p) : kNegInf;
  }
  const Language& language() const { return lang; }
};
static_assert(ProbabilitySource<UniformOracle>);

struct Synthetic {
  SyntheticLanguage s = make_synthetic_language(3);
  Tokens t(const char* text) const { return s.language.parse(text); }
  bool entails_xy(const Tokens& x, const Tokens& y) const {
    return text_denotation(x, s.language).subset_of(text_denotation(y, s.language));
  }
};

struct GriceanTable : Synthetic {
  CostFunction cost;
  std::shared_ptr<DynamicGriceanSpeaker> speaker;
  std::shared_ptr<TextDistribution> dist;

  explicit GriceanTable(double coef = 0.1, double alpha = 5.0) : cost(CostFunction::label_length(s.language, coef)) {
    speaker = std::make_shared<DynamicGriceanSpeaker>(s.worlds, alpha, cost, dynamic_rsa_listener(0, s.language, s.worlds, cost));
    dist = std::make_shared<TextDistribution>(enumerate_texts(*speaker, s.worlds));
  }
};

const GriceanTable& shared_table() {
  static const GriceanTable table;
  return table;
}

// Omega never repeats, so pairs involving it are degenerate for these tests.
std::vector<Tokens> single_sentences(const Language& lang) {
  std::vector<Tokens> out;
  for (UttIndex u : lang.sentences()) out.push_back({u});
  return out;
}

}  // namespace

TEST(TestUniform, Examples) {
  Synthetic f;
  UniformOracle src{f.s.language, f.s.worlds};
  EXPECT_NEAR(test_uniform(src, f.t("100"), f.t("110")), 0.0, 1e-12);
  EXPECT_EQ(test_uniform(src, f.t("110"), f.t("110")), 0.0);
  EXPECT_NEAR(test_uniform(src, f.t("110"), f.t("100")), -std::log(2.0), 1e-12);
  EXPECT_EQ(test_uniform(src, f.t("100"), f.t("010")), kNegInf);
}

TEST(TestUniform, LibraryTableAgreesWithOracle) {
  Synthetic f;
  UniformOracle oracle{f.s.language, f.s.worlds};
  UniformTruthfulSpeaker sp(f.s.language, f.s.worlds);
  const auto table = enumerate_texts(sp, f.s.worlds, {2});
  for (const auto& x : single_sentences(f.s.language)) {
    for (const auto& y : single_sentences(f.s.language)) {
      const double a = test_uniform(oracle, x, y), b = test_uniform(table, x, y);
      if (a == kNegInf) {
        EXPECT_EQ(b, kNegInf);
      } else {
        EXPECT_NEAR(a, b, 1e-12);
      }
    }
  }
}

TEST(TestUniformOmega, Dichotomy) {
  Synthetic f;
  UniformOracle src{f.s.language, f.s.worlds};
  EXPECT_NEAR(test_uniform_omega(src, f.t("100"), f.t("110")), 0.0, 1e-12);
  EXPECT_NEAR(test_uniform_omega(src, f.t("101"), f.t("101")), 0.0, 1e-12);
  EXPECT_GT(std::abs(test_uniform_omega(src, f.t("110"), f.t("011"))), 1e-6);
}

TEST(TestIndependent, StaticRsaExamples) {
  Synthetic f;
  const auto cost = CostFunction::label_length(f.s.language, 0.1);
  StaticRsaSpeaker sp(f.s.language, f.s.worlds, 1, cost);
  const auto d = enumerate_texts(sp, f.s.worlds, {2});
  const UttIndex eos = f.s.language.eos();
  EXPECT_NEAR(test_independent(d, f.t("100"), f.t("110"), eos), 0.0, 1e-9);
  EXPECT_NEAR(test_independent_marginal(d, f.t("100"), f.t("110")), 0.0, 1e-9);
  EXPECT_NEAR(test_independent(d, f.t("011"), f.t("011"), eos), 0.0, 1e-12);
  EXPECT_GT(std::abs(test_independent(d, f.t("110"), f.t("011"), eos)), 1e-6);
  EXPECT_GT(std::abs(test_independent_marginal(d, f.t("110"), f.t("011"))), 1e-6);
}

// The relation in its printed orientation vanishes on reverse entailment.
TEST(TestIndependent, AsStatedFormDetectsReverseEntailment) {
  Synthetic f;
  std::vector<double> fw{1.0, 2.0, 3.0, 0.5, 1.5, 2.5, 1.0};
  FactorizedTruthfulSpeaker sp(f.s.language, f.s.worlds, fw, {1.0, 1.0, 1.0});
  const auto d = enumerate_texts(sp, f.s.worlds, {2});
  const UttIndex eos = f.s.language.eos();
  for (const auto& x : single_sentences(f.s.language)) {
    for (const auto& y : single_sentences(f.s.language)) {
      if (text_denotation(concat(x, y), f.s.language).empty()) continue;
      const bool forward = f.entails_xy(x, y), reverse = f.entails_xy(y, x);
      EXPECT_EQ(std::abs(test_independent(d, x, y, eos)) < 1e-9, forward) << f.s.language.format(x) << " " << f.s.language.format(y);
      EXPECT_EQ(std::abs(test_independent_as_stated(d, x, y, eos)) < 1e-9, reverse)
          << f.s.language.format(x) << " " << f.s.language.format(y);
    }
  }
}

// With a skewed prior the per-world normalizer is no longer constant: the tau
// form still vanishes on entailment, the marginal form does not.
TEST(TestIndependent, MarginalFormNeedsConstantWorldFactor) {
  Synthetic f;
  const auto ws = WorldSpace::from_weights(std::vector<double>{0.6, 0.3, 0.1});
  StaticRsaSpeaker sp(f.s.language, ws, 1, CostFunction::label_length(f.s.language, 0.1));
  const auto d = enumerate_texts(sp, ws, {2});
  const UttIndex eos = f.s.language.eos();
  std::size_t marginal_misses = 0;
  for (const auto& x : single_sentences(f.s.language)) {
    for (const auto& y : single_sentences(f.s.language)) {
      if (!f.entails_xy(x, y)) continue;
      EXPECT_NEAR(test_independent(d, x, y, eos), 0.0, 1e-9);
      marginal_misses += std::abs(test_independent_marginal(d, x, y)) > 1e-3;
    }
  }
  EXPECT_GT(marginal_misses, 0u);
  EXPECT_NEAR(test_independent_marginal(d, f.t("001"), f.t("101")), -1.02, 0.01);
}

TEST(TestIndependent, DegenerateDenominator) {
  Synthetic f;
  UniformOracle src{f.s.language, f.s.worlds};
  // A text that is itself false everywhere makes p(x tau) vanish.
  EXPECT_THROW(test_independent(src, f.t("100 010"), f.t("110"), f.s.language.eos()), DegenerateInputError);
  EXPECT_THROW(test_uniform(src, f.t("100 010"), f.t("110")), DegenerateInputError);
}

TEST(GriceanScore, Examples) {
  const auto& G = shared_table();
  EXPECT_EQ(gricean_score(*G.dist, G.t("110"), G.t("110")), 0.0);
  EXPECT_LT(std::abs(gricean_score(*G.dist, G.t("100"), G.t("110"))), 1e-9);
  EXPECT_EQ(gricean_score(*G.dist, G.t("100"), G.t("010")), kNegInf);
  EXPECT_GT(std::abs(gricean_score(*G.dist, G.t("110"), G.t("100"))), 1e-6);
}

TEST(CostRecovery, GriceanRecoversConfiguredCost) {
  const auto& G = shared_table();
  const double c_omega = G.cost(G.s.language.eos());
  for (const auto& x : single_sentences(G.s.language)) {
    EXPECT_NEAR(cost_recovery(*G.dist, x, c_omega), G.cost.text(x), 1e-9) << G.s.language.format(x);
  }
  EXPECT_NEAR(cost_recovery(*G.dist, G.t("100"), 0.3), 0.3, 1e-9);
}

TEST(CostRecovery, UniformSpeakerRecoversOmegaCost) {
  Synthetic f;
  UniformOracle src{f.s.language, f.s.worlds};
  for (const auto& x : single_sentences(f.s.language)) EXPECT_NEAR(cost_recovery(src, x, 0.7), 0.7, 1e-12);
}

TEST(CostRecovery, ScalesWithCostCoefficient) {
  // Per-utterance costs that differ, so c(x) - c(omega) is not identically zero.
  Synthetic f;
  const std::vector<double> base{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.25};
  for (double k : {1.0, 2.0}) {
    std::vector<double> c = base;
    for (double& v : c) v *= k;
    const CostFunction cost(c);
    DynamicGriceanSpeaker sp(f.s.worlds, 5.0, cost, dynamic_rsa_listener(0, f.s.language, f.s.worlds, cost));
    const auto d = enumerate_texts(sp, f.s.worlds, {3});
    const double c_omega = cost(f.s.language.eos());
    for (const auto& x : single_sentences(f.s.language)) {
      const double recovered = cost_recovery(d, x, 0.0);  // c(x) - c(omega)
      EXPECT_NEAR(recovered, k * (base[x[0]] - base.back()), 1e-9);
      EXPECT_NEAR(cost_recovery(d, x, c_omega), cost.text(x), 1e-9);
    }
  }
}

TEST(SScore, Examples) {
  const auto& G = shared_table();
  EXPECT_LT(std::abs(s_score(*G.dist, G.t("100"), G.t("110"), G.cost)), 1e-9);
  EXPECT_LT(std::abs(s_score(*G.dist, G.t("011"), G.t("011"), G.cost)), 1e-9);
  EXPECT_EQ(s_score(*G.dist, G.t("100"), G.t("010"), G.cost), kNegInf);
}

TEST(UScore, Examples) {
  Synthetic f;
  UniformOracle src{f.s.language, f.s.worlds};
  EXPECT_NEAR(u_score(src, f.t("100"), f.t("110")), 0.0, 1e-12);
  EXPECT_NEAR(u_score(src, f.t("110"), f.t("110")), 0.0, 1e-12);
  EXPECT_GT(u_score(src, f.t("110"), f.t("011")), 1e-6);
  EXPECT_EQ(u_score(src, f.t("100"), f.t("010")), kNegInf);
}

TEST(NonredundantStrict, ExhaustiveAgainstDenotations) {
  Synthetic f;
  NonredundantSpeaker sp(f.s.language, f.s.worlds);
  const auto d = enumerate_texts(sp, f.s.worlds, {2});
  EXPECT_TRUE(test_nonredundant_strict(d, f.t("100"), f.t("110")));
  EXPECT_FALSE(test_nonredundant_strict(d, f.t("110"), f.t("110")));
  EXPECT_FALSE(test_nonredundant_strict(d, f.t("100"), f.t("010")));
  for (const auto& x : single_sentences(f.s.language)) {
    for (const auto& y : single_sentences(f.s.language)) {
      const bool strict = text_denotation(x, f.s.language).proper_subset_of(text_denotation(y, f.s.language));
      EXPECT_EQ(test_nonredundant_strict(d, x, y), strict) << f.s.language.format(x) << " " << f.s.language.format(y);
    }
  }
}

TEST(ErratumCondition, EntailmentAndContradiction) {
  const auto& G = shared_table();
  const auto ent = erratum_condition(*G.speaker, G.t("100"), G.s.language.index_of("110"));
  EXPECT_FALSE(ent.contradiction);
  EXPECT_NEAR(ent.p_Y, 1.0, 1e-15);
  EXPECT_NEAR(ent.I_Y, ent.I, 1e-12 * ent.I);
  EXPECT_NEAR(ent.residual, 0.0, 1e-12 * ent.I);

  const auto con = erratum_condition(*G.speaker, G.t("100"), G.s.language.index_of("010"));
  EXPECT_TRUE(con.contradiction);
  EXPECT_GT(con.I, 0.0);
  EXPECT_EQ(con.residual, -con.I);
  EXPECT_EQ(con.implied_g(), kNegInf);

  EXPECT_THROW(erratum_condition(*G.speaker, G.t("100 010"), 0), DomainError);
}

TEST(ErratumCondition, ImpliedScoreMatchesTable) {
  const auto& G = shared_table();
  for (const auto& x : single_sentences(G.s.language)) {
    for (UttIndex yu : G.s.language.sentences()) {
      const auto e = erratum_condition(*G.speaker, x, yu);
      const double g = gricean_score(*G.dist, x, Tokens{yu});
      if (e.contradiction) {
        EXPECT_EQ(g, kNegInf);
        continue;
      }
      EXPECT_NEAR(e.implied_g(), g, 1e-9) << G.s.language.format(x) << " " << yu;
      EXPECT_EQ(std::abs(e.residual) < 1e-9 * e.I, std::abs(g) < 1e-9);
    }
  }
}

TEST(Classify, Labels) {
  const auto& G = shared_table();
  const auto& L = G.s.language;
  const auto verdict = [&](const char* x, const char* y, const PairScores& s, ClassifyOptions o = {}) {
    return classify(G.t(x), G.t(y), s, L, G.s.worlds, o);
  };
  const auto ent = verdict("100", "110", score_pair(*G.dist, G.t("100"), G.t("110"), G.cost));
  EXPECT_EQ(ent.ground_truth, GroundTruth::StrictlyEntails);
  EXPECT_EQ(ent.g_label, Classification::EntailsOrNearContradiction);
  EXPECT_EQ(ent.classification, Classification::Entails);

  const auto non = verdict("110", "100", score_pair(*G.dist, G.t("110"), G.t("100"), G.cost));
  EXPECT_EQ(non.ground_truth, GroundTruth::Incomparable);
  EXPECT_EQ(non.classification, Classification::NotEntails);

  // A vanishing score on an incomparable pair whose overlap is small.
  PairScores near;
  near.g = 0.0;
  const auto nc = verdict("110", "011", near, {1e-9, 0.5});
  EXPECT_EQ(nc.ground_truth, GroundTruth::Incomparable);
  EXPECT_EQ(nc.classification, Classification::EntailsOrNearContradiction);
  EXPECT_DOUBLE_EQ(nc.truth_threshold, 0.5);

  const auto con = verdict("100", "010", score_pair(*G.dist, G.t("100"), G.t("010"), G.cost));
  EXPECT_EQ(con.ground_truth, GroundTruth::Contradictory);
  EXPECT_EQ(con.classification, Classification::NotEntails);

  EXPECT_EQ(verdict("110", "110", {}).ground_truth, GroundTruth::Entails);
  EXPECT_EQ(verdict("110", "110", {}).classification, Classification::NotEntails);  // NaN never vanishes
}

TEST(Classify, VerdictCsv) {
  const auto& G = shared_table();
  std::ostringstream out;
  write_verdict_header(out);
  write_verdict_row(out, classify(G.t("100"), G.t("010"), score_pair(*G.dist, G.t("100"), G.t("010"), G.cost), G.s.language, G.s.worlds),
                    G.s.language);
  const std::string csv = out.str();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,y,ground_truth,g,s,u,uniform_residual,independent_residual,classification");
  EXPECT_NE(csv.find("100,010,contradictory,-inf"), std::string::npos);
  EXPECT_NE(csv.find(",NotEntails\n"), std::string::npos);
}
