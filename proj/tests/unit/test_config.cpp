#include <gtest/gtest.h>

#include "ptkr/config.hpp"
#include "ptkr/errors.hpp"

namespace {

TEST(Config, EmptyTextGivesDefaults) {
  const auto c = ptkr::parse_config("");
  EXPECT_EQ(c.params.kick_strength, 5.0);
  EXPECT_EQ(c.params.hbar_eff, 1.0);
  EXPECT_EQ(c.params.lambda, 0.01);
  EXPECT_EQ(c.params.epsilon, 0.0);
  EXPECT_EQ(c.params.lattice_size, 512);
  EXPECT_EQ(c.params.n_kicks, 1000);
  EXPECT_FALSE(c.sweep);
  EXPECT_EQ(c.grid().size(), 1u);
  EXPECT_EQ(c.workers, 1);
  EXPECT_EQ(c.format, ptkr::OutputFormat::Csv);
}

TEST(Config, CommentsAndWhitespace) {
  const auto c = ptkr::parse_config("# header\n  kick_strength = 3.5   # trailing\n\n\tn_kicks=20\n");
  EXPECT_EQ(c.params.kick_strength, 3.5);
  EXPECT_EQ(c.params.n_kicks, 20);
}

TEST(Config, NegativeLambdaIsRejectedByKey) {
  try {
    ptkr::parse_config("lambda = -0.5");
    FAIL() << "expected ValidationError";
  } catch (const ptkr::ValidationError& e) {
    EXPECT_EQ(e.key(), "lambda");
  }
}

TEST(Config, EpsilonListMakesFourPointSweep) {
  const auto c = ptkr::parse_config("epsilon = 0, 0.2, 1, 5");
  EXPECT_TRUE(c.sweep);
  const auto g = c.grid();
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[1].epsilon, 0.2);
  EXPECT_EQ(g[3].epsilon, 5.0);
  for (const auto& p : g) EXPECT_EQ(p.lambda, 0.01);
}

TEST(Config, Ranges) {
  const auto c = ptkr::parse_config("lambda_logrange = 1e-4, 1e-2, 3\nepsilon_range = 0, 1, 5");
  ASSERT_EQ(c.lambdas.size(), 3u);
  EXPECT_NEAR(c.lambdas[1], 1e-3, 1e-15);
  ASSERT_EQ(c.epsilons.size(), 5u);
  EXPECT_DOUBLE_EQ(c.epsilons[2], 0.5);
  EXPECT_EQ(c.grid().size(), 15u);
}

TEST(Config, ParseErrorsCarryLineNumber) {
  try {
    ptkr::parse_config("n_kicks = 10\nthis line is broken\n");
    FAIL();
  } catch (const ptkr::ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(ptkr::parse_config("n_kicks = 10\nn_kicks = 20"), ptkr::ParseError);
  EXPECT_THROW(ptkr::parse_config("= 3"), ptkr::ParseError);
  EXPECT_THROW(ptkr::parse_config("lambda ="), ptkr::ParseError);
}

TEST(Config, ValidationErrorsNameTheKey) {
  auto key_of = [](const std::string& text) {
    try {
      ptkr::parse_config(text);
    } catch (const ptkr::ValidationError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(key_of("colour = red"), "colour");
  EXPECT_EQ(key_of("lattice_size = 15"), "lattice_size");
  EXPECT_EQ(key_of("n_kicks = abc"), "n_kicks");
  EXPECT_EQ(key_of("workers = 0"), "workers");
  EXPECT_EQ(key_of("norm_margin = 0"), "norm_margin");
  EXPECT_EQ(key_of("width_ratio = -1"), "width_ratio");
  EXPECT_EQ(key_of("format = xml"), "format");
  EXPECT_EQ(key_of("recenter = maybe"), "recenter");
  EXPECT_EQ(key_of("lambda = 0.1\nlambda_range = 0, 1, 3"), "lambda");
  EXPECT_EQ(key_of("hbar_eff = 0"), "hbar_eff");
}

TEST(Config, OverridesReplaceFileValues) {
  const auto c = ptkr::parse_config("lambda_range = 0, 1, 5\nn_kicks = 10", {"lambda=0.3", "n_kicks=20", "format=json"});
  EXPECT_EQ(c.lambdas, std::vector<double>{0.3});
  EXPECT_EQ(c.params.n_kicks, 20);
  EXPECT_EQ(c.format, ptkr::OutputFormat::Json);
  EXPECT_THROW(ptkr::parse_config("", {"lambda"}), ptkr::ParseError);
}

TEST(Config, AnalysisOptionsCarryThresholdsAndSchedule) {
  const auto c = ptkr::parse_config(
      "norm_margin = 0.05\nentropy_every = 3\nmarginal_kicks = 100, 500\nfit_window_start = 200\nrecenter = off");
  const auto a = c.analysis_options();
  EXPECT_EQ(a.thresholds.norm_margin, 0.05);
  EXPECT_EQ(a.evolve.schedule.entropy_every, 3);
  EXPECT_EQ(a.evolve.schedule.marginal_kicks, (std::vector<long>{100, 500}));
  EXPECT_EQ(a.window_start, 200);
  EXPECT_FALSE(a.evolve.recenter);
}

TEST(Config, KeyListIsComplete) {
  for (const auto& k : ptkr::config_keys()) {
    EXPECT_NO_THROW({
      try {
        ptkr::parse_config(k + " = 1");
      } catch (const ptkr::ValidationError& e) {
        if (e.key() == k && std::string(e.what()).find("unknown") != std::string::npos) throw;
      }
    }) << k;
  }
}

}  // namespace
