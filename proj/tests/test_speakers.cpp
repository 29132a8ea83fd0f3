#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gricean/speakers.hpp"

using namespace gricean;

namespace {

struct Fixture {
  SyntheticLanguage s = make_synthetic_language(3);
  CostFunction cost = CostFunction::label_length(s.language, 0.1);
  UttIndex u(const char* id) const { return s.language.index_of(id); }
  Tokens t(const char* text) const { return s.language.parse(text); }
};

double total(const std::vector<double>& lp) {
  double p = 0.0;
  for (double v : lp) p += safe_exp(v);
  return p;
}

}  // namespace

TEST(Cost, LabelLength) {
  Fixture f;
  EXPECT_DOUBLE_EQ(f.cost(f.u("100")), 0.1 * 3);
  EXPECT_DOUBLE_EQ(f.cost.text(f.t("100 110")), 0.6);
  EXPECT_THROW(CostFunction({-1.0}), ParameterError);
  EXPECT_THROW(CostFunction::label_length(f.s.language, -0.1), ParameterError);
}

TEST(UniformTruthful, UniformOverTrueUtterances) {
  Fixture f;
  UniformTruthfulSpeaker sp(f.s.language, f.s.worlds);
  // World 0 makes 100, 110, 101 and 111 true.
  const auto lp = sp.next_log_probs({}, 0);
  EXPECT_NEAR(std::exp(lp[f.u("100")]), 0.25, 1e-15);
  EXPECT_NEAR(std::exp(lp[f.u("111")]), 0.25, 1e-15);
  EXPECT_EQ(lp[f.u("010")], kNegInf);
  EXPECT_EQ(sp.true_count(0), 4u);
  for (WorldIndex w = 0; w < 3; ++w) EXPECT_NEAR(total(sp.next_log_probs({}, w)), 1.0, 1e-15);
  EXPECT_TRUE(sp.context_free());
}

TEST(FactorizedTruthful, WeightsAndNormalization) {
  Fixture f;
  std::vector<double> fw(7, 1.0);
  fw[f.u("100")] = 2.0;
  FactorizedTruthfulSpeaker sp(f.s.language, f.s.worlds, fw, std::vector<double>(3, 1.0));
  // In world 0: weights 2, 1, 1, 1 over 100, 110, 101, 111.
  EXPECT_NEAR(std::exp(sp.next_log_probs({}, 0)[f.u("100")]), 2.0 / 5.0, 1e-15);
  EXPECT_NEAR(sp.effective_g()[0], 1.0 / 5.0, 1e-15);
  EXPECT_NEAR(sp.effective_g()[1], 1.0 / 4.0, 1e-15);
  EXPECT_THROW(FactorizedTruthfulSpeaker(f.s.language, f.s.worlds, std::vector<double>(7, 0.0), std::vector<double>(3, 1.0)),
               ParameterError);
  EXPECT_THROW(FactorizedTruthfulSpeaker(f.s.language, f.s.worlds, std::vector<double>(7, 1.0), std::vector<double>(3, -1.0)),
               ParameterError);
}

// Naive static RSA with plain doubles, written independently of the library.
std::vector<std::vector<double>> naive_static_rsa(const Fixture& f, int depth) {
  const auto& L = f.s.language;
  const std::size_t nx = L.size(), nw = 3;
  std::vector<std::vector<double>> s(nw, std::vector<double>(nx)), l(nx, std::vector<double>(nw));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t w = 0; w < nw; ++w) s[w][x] = l[x][w] = L.denotation(static_cast<UttIndex>(x)).contains(w) ? 1.0 : 0.0;
  }
  for (int m = 0; m <= depth; ++m) {
    std::vector<std::vector<double>> nl(nx, std::vector<double>(nw)), ns(nw, std::vector<double>(nx));
    for (std::size_t x = 0; x < nx; ++x) {
      double z = 0;
      for (std::size_t w = 0; w < nw; ++w) z += nl[x][w] = s[w][x] * f.s.worlds.prior(w);
      for (auto& v : nl[x]) v /= z;
    }
    for (std::size_t w = 0; w < nw; ++w) {
      double z = 0;
      for (std::size_t x = 0; x < nx; ++x) z += ns[w][x] = l[x][w] * std::exp(-f.cost(static_cast<UttIndex>(x)));
      for (auto& v : ns[w]) v /= z;
    }
    s = ns;
    l = nl;
  }
  return s;
}

TEST(StaticRsa, MatchesNaiveRecursionAndFactorizes) {
  Fixture f;
  for (int depth = 0; depth <= 4; ++depth) {
    StaticRsaSpeaker sp(f.s.language, f.s.worlds, depth, f.cost);
    const auto oracle = naive_static_rsa(f, depth);
    for (WorldIndex w = 0; w < 3; ++w) {
      const auto lp = sp.next_log_probs({}, w);
      for (std::size_t x = 0; x < 7; ++x) EXPECT_NEAR(safe_exp(lp[x]), oracle[w][x], 1e-14) << depth;
    }
    const auto fac = sp.factorization();
    EXPECT_LE(fac.max_relative_residual, 1e-10);
    // s(x|w) = [[x]](w) f(x) g(w), checked directly.
    for (WorldIndex w = 0; w < 3; ++w) {
      for (std::size_t x = 0; x < 7; ++x) {
        const double expected = f.s.language.denotation(static_cast<UttIndex>(x)).contains(w) ? fac.f[x] * fac.g[w] : 0.0;
        EXPECT_NEAR(oracle[w][x], expected, 1e-12);
      }
    }
  }
  StaticRsaSpeaker base(f.s.language, f.s.worlds, -1, f.cost);
  EXPECT_EQ(base.factorization().f, std::vector<double>(7, 1.0));
  EXPECT_THROW(StaticRsaSpeaker(f.s.language, f.s.worlds, -2, f.cost), ParameterError);
}

TEST(DynamicRsa, LiteralListenerAndBaseSpeaker) {
  Fixture f;
  auto listener = dynamic_rsa_listener(0, f.s.language, f.s.worlds, f.cost);
  const auto post = listener.posterior(f.t("110"));
  EXPECT_NEAR(post[0], 0.5, 1e-15);
  EXPECT_NEAR(post[1], 0.5, 1e-15);
  EXPECT_EQ(post[2], 0.0);
  EXPECT_FALSE(listener.satisfiable(f.t("100 010")));
  EXPECT_THROW(listener.log_posterior(f.t("100 010")), DomainError);

  // s_0(y | z, w) ∝ [[zy]](w) exp(-c(y)); all costs are equal here.
  const auto& s0 = listener.engine().speaker(0, f.t("110"));
  EXPECT_NEAR(std::exp(s0[0][f.u("100")]), 1.0 / 4.0, 1e-15);  // 100, 110, 101, 111 continue "110" in world 0
  EXPECT_EQ(s0[2][f.u("001")], kNegInf);                         // world 2 cannot have produced "110"

  // Depth -1 rows are the normalized indicator.
  const auto& lm1 = listener.engine().listener(-1, f.t("110"));
  EXPECT_NEAR(std::exp(lm1[0]), 0.5, 1e-15);
}

TEST(ConditionalInformation, Examples) {
  Fixture f;
  auto l0 = dynamic_rsa_listener(0, f.s.language, f.s.worlds, f.cost);
  EXPECT_NEAR(conditional_information(l0, Tokens{}, f.u("100"), 0), std::log(3.0), 1e-15);
  EXPECT_NEAR(conditional_information(l0, f.t("110"), f.u("100"), 0), std::log(2.0), 1e-15);
  EXPECT_EQ(conditional_information(l0, f.t("110"), f.u("100"), 1), kNegInf);
  EXPECT_EQ(conditional_information(l0, f.t("100"), f.u("010"), 2), 0.0);  // (-inf) - (-inf)
}

// The pointwise reading of the listener axiom fails (x=110, y=100 in world 0
// carries log 2 of information); the quantified form holds.
TEST(ConditionalInformation, QuantifiedListenerAxiom) {
  Fixture f;
  auto l0 = dynamic_rsa_listener(0, f.s.language, f.s.worlds, f.cost);
  for (UttIndex x : f.s.language.sentences()) {
    for (UttIndex y : f.s.language.sentences()) {
      const Tokens tx{x};
      bool all_zero = true;
      for (WorldIndex w = 0; w < 3; ++w) {
        if (!f.s.language.denotation(x).contains(w)) continue;
        const double info = conditional_information(l0, tx, y, w);
        all_zero = all_zero && info == 0.0;
        EXPECT_EQ(info == kNegInf, !f.s.language.denotation(y).contains(w));
      }
      EXPECT_EQ(all_zero, entails(f.s.language.denotation(x), f.s.language.denotation(y)));
    }
  }
}

TEST(DynamicGricean, InformativeSpeakerIsRsaOneLevelUp) {
  Fixture f;
  auto engine = std::make_shared<const RsaEngine>(f.s.language, f.s.worlds, f.cost);
  for (int n = 0; n <= 2; ++n) {
    DynamicGriceanSpeaker g(f.s.worlds, 1.0, f.cost, ListenerTable(engine, n));
    DynamicRsaSpeaker rsa(engine, f.s.worlds, n + 1);
    for (const char* ctx : {"", "110", "110 011"}) {
      const auto z = f.t(ctx);
      for (WorldIndex w = 0; w < 3; ++w) {
        if (!text_denotation(z, f.s.language).contains(w)) continue;
        const auto a = g.next_log_probs(z, w);
        const auto b = rsa.next_log_probs(z, w);
        for (std::size_t y = 0; y < a.size(); ++y) {
          if (b[y] == kNegInf) {
            EXPECT_EQ(a[y], kNegInf);
          } else {
            EXPECT_NEAR(a[y], b[y], 1e-12) << n << " '" << ctx << "' " << w << " " << y;
          }
        }
      }
    }
  }
}

TEST(DynamicGricean, DistributionAndDomain) {
  Fixture f;
  DynamicGriceanSpeaker g(f.s.worlds, 5.0, f.cost, dynamic_rsa_listener(0, f.s.language, f.s.worlds, f.cost));
  const auto lp = g.next_log_probs({}, 0);
  EXPECT_NEAR(total(lp), 1.0, 1e-14);
  // Empty context, world 0: weights exp(5 I - 0.3) with I = log 3 (singleton), log 1.5 (pairs), 0 (omega).
  const double w1 = std::pow(3.0, 5), w2 = std::pow(1.5, 5), w0 = 1.0;
  EXPECT_NEAR(std::exp(lp[f.u("100")]), w1 / (w1 + 2 * w2 + w0), 1e-14);
  EXPECT_THROW(g.next_log_probs(f.t("010"), 0), DomainError);
  EXPECT_THROW(DynamicGriceanSpeaker(f.s.worlds, 0.0, f.cost, dynamic_rsa_listener(0, f.s.language, f.s.worlds, f.cost)),
               ParameterError);
}

TEST(Nonredundant, SupportShrinksContext) {
  Fixture f;
  NonredundantSpeaker sp(f.s.language, f.s.worlds);
  // Empty context, world 0: 100, 110, 101 shrink the full set, plus omega.
  auto lp = sp.next_log_probs({}, 0);
  EXPECT_NEAR(std::exp(lp[f.u("110")]), 0.25, 1e-15);
  // After "110" in world 0 only 100 and 101 still shrink {0, 1}; omega is exempt.
  lp = sp.next_log_probs(f.t("110"), 0);
  EXPECT_NEAR(std::exp(lp[f.u("100")]), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(std::exp(lp[f.u("101")]), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(lp[f.u("110")], kNegInf);
  // After "100" nothing shrinks {0}: omega is certain.
  lp = sp.next_log_probs(f.t("100"), 0);
  EXPECT_EQ(lp[f.s.language.eos()], 0.0);
}
