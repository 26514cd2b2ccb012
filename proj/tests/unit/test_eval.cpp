#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sidebp/eval.hpp"
#include "sidebp/random.hpp"
#include "sidebp/sampling.hpp"

using namespace sidebp;
using namespace sidebp::eval;

namespace {

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string& header) {
  std::istringstream in(text);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(EmpiricalSuccess, Oracles) {
  const std::vector<Spin> truth = {1, 1, -1, -1, -1};
  EXPECT_EQ(empirical_success(truth, truth).estimate, 1.0);
  const std::vector<Spin> constant(5, kPlus);
  EXPECT_EQ(empirical_success(constant, truth).estimate, 0.0);
  const std::vector<Spin> flipped = {-1, -1, 1, 1, 1};
  EXPECT_EQ(empirical_success(flipped, truth).estimate, -1.0);
  EXPECT_EQ(overlap_up_to_flip(flipped, truth), 1.0);
  EXPECT_THROW(empirical_success(truth, constant), ValidationError);
  EXPECT_THROW(empirical_success(std::vector<Spin>{1}, truth), ValidationError);
}

TEST(EmpiricalSuccess, IndependentGuessesScoreZero) {
  Rng rng = make_rng(6);
  const std::size_t n = 10000;
  std::vector<Spin> truth(n), guess(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = uniform01(rng) < 0.3 ? kPlus : kMinus;
    guess[i] = uniform01(rng) < 0.5 ? kPlus : kMinus;
  }
  const auto s = empirical_success(guess, truth);
  EXPECT_NEAR(s.estimate, 0.0, 4.0 * s.standard_error);
  EXPECT_GT(s.standard_error, 0.0);
}

TEST(LabelBaseline, Oracles) {
  const auto params = params_from_scaling({0.5, 0.8, 0.2}, 100000);
  const LabelModel reveal({"plus", "minus"}, {1.0, 0.0}, {0.0, 1.0});
  const auto g1 = sample_sbm(params, reveal, 1);
  EXPECT_EQ(empirical_success(label_only_baseline(g1, reveal), g1.spins()).estimate, 1.0);

  const auto noisy = LabelModel::noisy(0.85);
  const auto g2 = sample_sbm(params, noisy, 2);
  const auto s = empirical_success(label_only_baseline(g2, noisy), g2.spins());
  EXPECT_NEAR(s.estimate, dtv_labels(noisy), 4.0 * s.standard_error);
  EXPECT_NEAR(dtv_labels(noisy), 0.7, 1e-15);

  const auto flat = LabelModel::noisy(0.5);
  const auto g3 = sample_sbm(params, flat, 3);
  const auto f = empirical_success(label_only_baseline(g3, flat), g3.spins());
  EXPECT_NEAR(f.estimate, 0.0, 4.0 * f.standard_error + 1e-12);
}

TEST(TreeMoments, UninformativeLabelsCenterOnZeroAtDepthOne) {
  TreeMomentSpec spec;
  spec.scaling = {0.5, 0.8, 0.05};
  spec.labels = LabelModel::noisy(0.5);
  spec.depth = 1;
  spec.trials = 20000;
  spec.seed = 3;
  const auto report = tree_moment_check(spec);
  EXPECT_EQ(report.alpha, 0.0);
  // gamma_1 sums d Poisson-many terms of f(w) = 0 at p = 1/2 and U = 0.
  EXPECT_NEAR(report.plus.gamma.mean, 0.0, 3.0 * report.plus.gamma.standard_error + 1e-12);
  EXPECT_NEAR(report.minus.gamma.mean, 0.0, 3.0 * report.minus.gamma.standard_error + 1e-12);
}

TEST(TreeMoments, IndependentOfThreadCount) {
  TreeMomentSpec spec;
  spec.scaling = {0.4, 0.8, 0.1};
  spec.labels = LabelModel::noisy(0.8);
  spec.depth = 2;
  spec.trials = 5000;
  spec.seed = 21;
  spec.threads = 1;
  const auto one = tree_moment_check(spec);
  spec.threads = 3;
  const auto three = tree_moment_check(spec);
  EXPECT_EQ(one.plus.gamma.mean, three.plus.gamma.mean);
  EXPECT_EQ(one.minus.gamma.variance, three.minus.gamma.variance);
  EXPECT_EQ(one.sign_rule.estimate, three.sign_rule.estimate);
}

TEST(EndToEnd, RevealedLabelsGiveExactRecovery) {
  EndToEndSpec spec;
  spec.scaling = {0.5, 0.8, 0.2};
  spec.n = 5000;
  spec.labels = LabelModel({"plus", "minus"}, {1.0, 0.0}, {0.0, 1.0});
  spec.bp.depth = 1;
  spec.graphs = 2;
  const auto report = sbm_end_to_end(spec);
  ASSERT_EQ(report.trials.size(), 2u);
  for (const auto& t : report.trials) EXPECT_EQ(t.bp.estimate, 1.0);
  EXPECT_EQ(report.dtv, 1.0);
}

TEST(Example1, RegimeChecks) {
  EXPECT_NO_THROW(check_example1_regime(6, 1));
  try {
    check_example1_regime(9, 1);
    FAIL() << "expected RegimeError";
  } catch (const RegimeError& e) {
    EXPECT_EQ(e.lower, 20.0);
    EXPECT_EQ(e.middle, 64.0);
    EXPECT_EQ(e.upper, 40.0);
    EXPECT_NE(std::string(e.what()).find("64"), std::string::npos);
  }
  EXPECT_THROW(check_example1_regime(2, 1), RegimeError);
}

TEST(Example1, GraphStructure) {
  const auto g = example1_graph(6, 1, 800, 5);
  ASSERT_EQ(g.num_vertices(), 800u);
  for (VertexId v = 0; v < 800; ++v) {
    const auto block = v / 200;
    EXPECT_EQ(g.label(v), block < 2 ? 0u : 1u);
    EXPECT_EQ(g.spin(v), block % 2 == 0 ? kPlus : kMinus);
  }
  // Mean degree (2a + 2b + 2(a+b)) / 4 = a + b.
  EXPECT_NEAR(2.0 * g.num_edges() / 800, 7.0, 4.0 * std::sqrt(2.0 * 7.0 / 800));
  EXPECT_THROW(example1_graph(6, 1, 802, 5), ValidationError);
}

TEST(Example1, SeededBpBeatsControl) {
  Example1Spec spec;
  spec.n = 4000;
  spec.graphs = 2;
  spec.detector = Example1Detector::kSeededBp;
  const auto report = example1_experiment(spec);
  EXPECT_GT(report.overlap.mean, 0.3);
  EXPECT_LT(std::abs(report.control.mean), 0.1);
}

TEST(Figures, GCurveStartsAtClosedForm) {
  FigureSpec spec;
  spec.base.p = 0.5;
  spec.base.lambda = 0.8;
  spec.base.labels = LabelModel::noisy(0.85);
  spec.from = 0.0;
  spec.to = 3.2;
  spec.steps = 5;
  std::ostringstream out;
  figure_sweep(FigureKind::kGCurve, spec, out);
  std::string header;
  const auto rows = parse_csv(out.str(), header);
  EXPECT_EQ(header, "alpha,G,G_minus_alpha");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0][0], 0.0);
  EXPECT_NEAR(rows[0][1], 1.568, 1e-10);
}

TEST(Figures, SuccessVsLambdaIsMonotone) {
  FigureSpec spec;
  spec.base.p = 0.05;
  spec.base.labels = LabelModel::noisy(0.7);
  spec.from = 0.1;
  spec.to = 2.0;
  spec.steps = 12;
  std::ostringstream out;
  figure_sweep(FigureKind::kSuccVsLambda, spec, out);
  std::string header;
  const auto rows = parse_csv(out.str(), header);
  EXPECT_EQ(header.substr(0, 7), "lambda,");
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_GE(rows[k][3], rows[k - 1][3] - 1e-9);
}

TEST(Figures, BpBeatsLabelsOnly) {
  FigureSpec spec;
  spec.base.p = 0.5;
  spec.base.lambda = 0.8;
  spec.from = 0.5;
  spec.to = 1.0;
  spec.steps = 11;
  std::ostringstream out;
  figure_sweep(FigureKind::kBpVsLabels, spec, out);
  std::string header;
  const auto rows = parse_csv(out.str(), header);
  EXPECT_EQ(header, "beta,alpha_bp,success_bp,success_labels,success_opt");
  for (const auto& row : rows) EXPECT_GE(row[2], row[3] - 1e-12) << "beta " << row[0];
  EXPECT_THROW(parse_figure_kind("nope"), ValidationError);
  EXPECT_EQ(to_string(parse_figure_kind("succ_vs_p")), "succ_vs_p");
}
