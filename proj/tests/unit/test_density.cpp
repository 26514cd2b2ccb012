#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sidebp/density.hpp"
#include "sidebp/error.hpp"
#include "sidebp/random.hpp"

using namespace sidebp;
using namespace sidebp::density;

namespace {

DensityParams cell(double p, double lambda, const LabelModel& labels) {
  DensityParams params;
  params.p = p;
  params.lambda = lambda;
  params.labels = labels;
  return params;
}

}  // namespace

TEST(QFunction, Oracles) {
  EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
  EXPECT_NEAR(q_function(1.6448536269514722), 0.05, 1e-15);
  EXPECT_EQ(q_function(-std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_EQ(q_function(std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_NEAR(q_function(-1.0) + q_function(1.0), 1.0, 1e-15);
}

TEST(BigG, Oracles) {
  EXPECT_EQ(big_g(0.0, cell(0.5, 0.8, LabelModel::uninformative())), 0.0);
  EXPECT_NEAR(big_g(2.0, cell(0.5, 0.8, LabelModel::noisy(0.5))), big_g(2.0, cell(0.5, 0.8, LabelModel::uninformative())), 1e-14);
  EXPECT_NEAR(big_g(0.0, cell(0.5, 0.8, LabelModel::noisy(0.85))), 1.568, 1e-12);
  EXPECT_NEAR(big_g(0.0, cell(0.05, 0.8, LabelModel::noisy(0.5))), 0.0, 1e-15);
  EXPECT_THROW(big_g(-1.0, cell(0.5, 0.8, LabelModel::noisy(0.85))), ValidationError);
  EXPECT_THROW(big_g(0.0, cell(1.0, 0.8, LabelModel::noisy(0.85))), ValidationError);
}

TEST(BigG, ClosedFormAtZero) {
  EXPECT_EQ(alpha1_closed_form(cell(0.5, 0.8, LabelModel::uninformative())), 0.0);
  EXPECT_NEAR(alpha1_closed_form(cell(0.5, 0.8, LabelModel::noisy(0.85))), 1.568, 1e-14);
  Rng rng = make_rng(20);
  for (int draw = 0; draw < 20; ++draw) {
    const std::size_t size = 2 + static_cast<std::size_t>(uniform01(rng) * 3);
    std::vector<double> mu(size), nu(size);
    double smu = 0, snu = 0;
    for (std::size_t l = 0; l < size; ++l) {
      mu[l] = 0.05 + uniform01(rng);
      nu[l] = 0.05 + uniform01(rng);
      smu += mu[l];
      snu += nu[l];
    }
    std::vector<std::string> names;
    for (std::size_t l = 0; l < size; ++l) {
      mu[l] /= smu;
      nu[l] /= snu;
      names.push_back("l" + std::to_string(l));
    }
    // Renormalize the last entry so both sums are 1 to rounding.
    double rest_mu = 1.0, rest_nu = 1.0;
    for (std::size_t l = 0; l + 1 < size; ++l) {
      rest_mu -= mu[l];
      rest_nu -= nu[l];
    }
    mu.back() = rest_mu;
    nu.back() = rest_nu;
    const auto params = cell(0.05 + 0.9 * uniform01(rng), 0.1 + 2.0 * uniform01(rng),
                             LabelModel(names, mu, nu));
    const double closed = alpha1_closed_form(params);
    EXPECT_NEAR(big_g(0.0, params), closed, 1e-8 * closed) << "draw " << draw;
  }
}

TEST(BigG, BoundedByRevealedValue) {
  const auto params = cell(0.05, 0.8, LabelModel::noisy(0.7));
  const double tilde = tilde_alpha1(0.8, 0.05);
  double previous = big_g(0.0, params);
  for (double alpha = 0.25; alpha <= 2 * tilde; alpha += 0.25) {
    const double g = big_g(alpha, params);
    EXPECT_GE(g, previous - 1e-10);
    EXPECT_LE(g, tilde + 1e-10);
    previous = g;
  }
}

TEST(TildeAlpha, Oracles) {
  EXPECT_NEAR(tilde_alpha1(0.8, 0.5), 3.2, 1e-15);
  EXPECT_NEAR(tilde_alpha1(0.8, 0.05), 16.842105263157894, 1e-12);
  EXPECT_NEAR(tilde_alpha1(1e-300, 0.5), 0.0, 1e-299);
}

TEST(Evolve, ZeroSignalStaysAtZero) {
  const auto trace = evolve(0.0, cell(0.5, 0.8, LabelModel::uninformative()));
  EXPECT_TRUE(trace.converged);
  for (double a : trace.alpha) EXPECT_EQ(a, 0.0);
  EXPECT_EQ(trace.limit, 0.0);
  EXPECT_THROW(evolve(-1.0, cell(0.5, 0.8, LabelModel::uninformative())), ValidationError);
}

TEST(Evolve, FirstStepIsClosedForm) {
  EvolveOptions options;
  options.max_steps = 1;
  options.tolerance = -1.0;
  const auto trace = evolve(0.0, cell(0.5, 0.8, LabelModel::noisy(0.85)), options);
  ASSERT_EQ(trace.alpha.size(), 2u);
  EXPECT_NEAR(trace.alpha[1], 1.568, 1e-12);
}

TEST(FixedPoints, SymmetricCellsHaveOne) {
  const auto none = find_fixed_points(cell(0.5, 0.8, LabelModel::uninformative()));
  ASSERT_EQ(none.points.size(), 1u);
  EXPECT_EQ(none.points[0].alpha, 0.0);
  for (double beta : {0.48, 0.4, 0.3}) {
    const auto report = find_fixed_points(cell(0.5, 0.8, LabelModel::noisy(beta)));
    EXPECT_EQ(report.points.size(), 1u) << "beta " << beta;
  }
}

TEST(FixedPoints, AsymmetricCellHasThree) {
  const auto params = cell(0.05, 0.8, LabelModel::noisy(0.5));
  const auto report = find_fixed_points(params);
  ASSERT_EQ(report.points.size(), 3u);
  EXPECT_EQ(report.points[0].stability, Stability::kStable);
  EXPECT_EQ(report.points[1].stability, Stability::kUnstable);
  EXPECT_EQ(report.points[2].stability, Stability::kStable);
  for (const auto& fp : report.points) EXPECT_LE(fp.residual, 1e-8);

  const auto low = evolve(0.0, params);
  const auto high = evolve(tilde_alpha1(0.8, 0.05), params);
  EXPECT_NEAR(low.limit, report.points.front().alpha, 1e-8);
  EXPECT_NEAR(high.limit, report.points.back().alpha, 1e-8);
  for (std::size_t k = 1; k < high.alpha.size(); ++k) EXPECT_LE(high.alpha[k], high.alpha[k - 1] + 1e-12);
}

TEST(PredictedSuccess, Oracles) {
  const auto noisy = cell(0.5, 0.8, LabelModel::noisy(0.85));
  EXPECT_NEAR(predicted_success(0.0, noisy, false), 0.7, 1e-12);
  const auto flat = cell(0.5, 0.8, LabelModel::uninformative());
  EXPECT_NEAR(predicted_success(1.568, flat, false), std::erf(std::sqrt(1.568) / 2.0 / std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(predicted_success(1.568, flat, false), 0.46876, 1e-5);
  EXPECT_NEAR(predicted_success(1e4, noisy, true), 1.0, 1e-12);
  EXPECT_EQ(predicted_success(0.0, flat, false), 0.0);
  // At p = 1/2 the prior term vanishes.
  EXPECT_EQ(predicted_success(1.2, noisy, true), predicted_success(1.2, noisy, false));
}

TEST(PredictedSuccess, IncreasesWithAlpha) {
  const auto params = cell(0.3, 0.8, LabelModel::noisy(0.7));
  double previous = predicted_success(0.01, params, false);
  for (double alpha = 0.1; alpha < 30.0; alpha *= 1.5) {
    const double s = predicted_success(alpha, params, false);
    EXPECT_GE(s, previous - 1e-12);
    previous = s;
  }
}

TEST(Sweep, SymmetricBetaGridReachesOptimum) {
  SweepSpec spec;
  spec.variable = SweepVariable::kBeta;
  spec.from = 0.5;
  spec.to = 0.95;
  spec.steps = 10;
  spec.base = cell(0.5, 0.8, LabelModel::uninformative());
  spec.label_family = [](double beta) { return LabelModel::noisy(beta); };
  for (const auto& row : predict_bp_curve(spec)) {
    // At beta = 1/2 the map contracts to 0 only linearly (G'(0) = lambda), so
    // evolve stops ~1e-9 short of it and success, ~sqrt(alpha), inherits ~1e-5.
    EXPECT_NEAR(row.alpha_bp, row.alpha_opt, 1e-8) << "beta " << row.value;
    EXPECT_NEAR(row.success_bp, row.success_opt, 1e-4) << "beta " << row.value;
  }
}

TEST(Sweep, AsymmetricCellLeavesGap) {
  SweepSpec spec;
  spec.variable = SweepVariable::kP;
  spec.from = 0.05;
  spec.to = 0.05;
  spec.steps = 1;
  spec.base = cell(0.05, 0.8, LabelModel::noisy(0.5));
  const auto rows = predict_bp_curve(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LT(rows[0].success_bp, rows[0].success_opt - 0.1);
  EXPECT_EQ(rows[0].fixed_point_count, 3u);

  std::ostringstream csv;
  write_sweep_csv(csv, SweepVariable::kP, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "p,alpha_bp,alpha_opt,success_bp,success_opt,fixed_point_count");
}

TEST(Sweep, ParsesVariables) {
  EXPECT_EQ(parse_sweep_variable("lambda"), SweepVariable::kLambda);
  EXPECT_EQ(to_string(SweepVariable::kBeta), "beta");
  EXPECT_THROW(parse_sweep_variable("q"), ValidationError);
}
