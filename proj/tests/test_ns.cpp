#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "besovns/ns/checkpoint.hpp"
#include "besovns/ns/pressure.hpp"
#include "besovns/ns/solver.hpp"
#include "besovns/ns/state.hpp"
#include "support.hpp"

using namespace besovns;
using namespace besovns::ns;
using besovns::testing::convolution_oracle;
using besovns::testing::max_abs;
using besovns::testing::max_diff;
using besovns::testing::rel_diff;

namespace {
constexpr double pi = std::numbers::pi;

SpectralVectorField from_samples(const Grid& g, double (*f1)(double, double, double),
                                 double (*f2)(double, double, double), double (*f3)(double, double, double)) {
  return {forward_transform(RealField::sample(g, f1)), forward_transform(RealField::sample(g, f2)),
          forward_transform(RealField::sample(g, f3))};
}

double zero(double, double, double) { return 0.0; }

double relative_divergence(const SpectralVectorField& u) {
  return std::sqrt(l2_norm_sq(divergence(u)) / derivative_norm_sq(u, 1));
}

}  // namespace

TEST(Init, TaylorGreenMatchesSamples) {
  Grid g(16);
  const auto tg = taylor_green_init(g);
  const auto ref = from_samples(
      g, [](double x, double y, double z) { return std::sin(x) * std::cos(y) * std::cos(z); },
      [](double x, double y, double z) { return -std::cos(x) * std::sin(y) * std::cos(z); }, zero);
  EXPECT_LT(max_diff(tg.u, ref), 1e-15);
  EXPECT_EQ(max_abs(divergence(tg.u)), 0.0);
  EXPECT_EQ(max_abs(tg.u[2]), 0.0);
  EXPECT_LT(rel_diff(l2_norm_sq(tg.u), 2 * pi * pi * pi), 1e-14);
}

TEST(Init, RandomIsDeterministicDivergenceFreeAndScaled) {
  Grid g(32);
  const auto a = random_divfree_init(g, 5, -2.0, 0.5);
  const auto b = random_divfree_init(g, 5, -2.0, 0.5);
  EXPECT_EQ(max_diff(a.u, b.u), 0.0);
  EXPECT_LT(max_abs(divergence(a.u)) / max_abs(a.u), 1e-12);
  for (const auto& c : a.u) EXPECT_EQ(c[0], Complex(0.0));
  const auto c = random_divfree_init(g, 5, -2.0, 1.0);
  EXPECT_LT(std::abs(l2_norm_sq(c.u) / l2_norm_sq(a.u) - 4.0), 1e-12);
  EXPECT_LT(rel_diff(l2_norm_sq(a.u), 0.25 * Grid::volume()), 1e-12);
  EXPECT_GT(max_diff(random_divfree_init(g, 6, -2.0, 0.5).u, a.u), 0.0);
}

TEST(Nonlinear, ShearIsAnnihilated) {
  Grid g(16);
  const auto u = from_samples(g, [](double, double y, double) { return std::sin(y); }, zero, zero);
  EXPECT_LT(max_abs(convection(u)), 1e-15);
  EXPECT_LT(max_abs(nonlinear_term(u)), 1e-15);
}

TEST(Nonlinear, EnergyNeutral) {
  Grid g(32);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto u = random_divfree_init(g, seed, -1.0, 1.0, 10.0).u;
    const double scale = std::sqrt(l2_norm_sq(u)) * std::sqrt(derivative_norm_sq(u, 1)) *
                         lp_norm(magnitude(inverse_transform(u)), kInf);
    EXPECT_LT(std::abs(inner_product(nonlinear_term(u), u)) / scale, 1e-10);
  }
  const auto tg = taylor_green_init(g);
  EXPECT_LT(std::abs(inner_product(nonlinear_term(tg.u), tg.u)), 1e-12);
}

TEST(Nonlinear, MatchesConvolutionOracleTaylorGreen) {
  Grid g(16);
  const auto u = taylor_green_init(g).u;
  const auto N = nonlinear_term(u);
  EXPECT_LT(max_diff(N, convolution_oracle(u)), 1e-10);
  EXPECT_GT(max_abs(N), 0.01);
}

TEST(Nonlinear, MatchesConvolutionOracleRandom) {
  Grid g(16);
  const auto u = random_divfree_init(g, 3, -1.0, 1.0, 3.0).u;
  EXPECT_LT(max_diff(nonlinear_term(u), convolution_oracle(u)) / max_abs(nonlinear_term(u)), 1e-10);
}

TEST(Step, ZeroIsFixedPoint) {
  Grid g(16);
  const auto s = step({0.0, SpectralVectorField(g)}, 0.01, 0.1);
  EXPECT_EQ(max_abs(s.u), 0.0);
  EXPECT_DOUBLE_EQ(s.t, 0.01);
}

TEST(Step, StokesDecayExactForShear) {
  Grid g(16);
  const double nu = 0.3, dt = 0.05;
  // Unidirectional flow u = (f(x2, x3), 0, 0) has (u.grad)u = 0 exactly.
  const auto u0 = from_samples(
      g, [](double, double y, double z) { return std::sin(y) + std::cos(2 * z) + 0.5 * std::sin(3 * y - z); }, zero,
      zero);
  FlowState s{0.0, u0};
  for (int i = 0; i < 40; ++i) s = step(s, dt, nu);
  double worst = 0.0;
  g.for_each_mode([&](std::size_t i, const Wavevector& k) {
    const double e = std::exp(-nu * k.norm_sq() * s.t);
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(s.u[c][i] - e * u0[c][i]));
  });
  EXPECT_LT(worst / max_abs(u0), 1e-10);
}

TEST(Step, StokesDecayAtVanishingAmplitude) {
  Grid g(32);
  const double nu = 0.1, dt = 0.01;
  const auto u0 = random_divfree_init(g, 9, -2.0, 1e-12).u;
  FlowState s{0.0, u0};
  for (int i = 0; i < 100; ++i) s = step(s, dt, nu);
  double worst = 0.0;
  g.for_each_mode([&](std::size_t i, const Wavevector& k) {
    const double e = std::exp(-nu * k.norm_sq() * s.t);
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(s.u[c][i] - e * u0[c][i]));
  });
  EXPECT_LT(worst / max_abs(u0), 1e-10);
}

TEST(Step, BeltramiFlowDecaysExactly) {
  // ABC flow with |k| = 1: (u.grad)u is a gradient, so only viscosity acts.
  Grid g(16);
  const double A = 1.0, B = 0.7, C = 0.4, nu = 0.05;
  SpectralVectorField u0 = {
      forward_transform(RealField::sample(g, [&](double, double y, double z) { return A * std::sin(z) + C * std::cos(y); })),
      forward_transform(RealField::sample(g, [&](double x, double, double z) { return B * std::sin(x) + A * std::cos(z); })),
      forward_transform(RealField::sample(g, [&](double x, double y, double) { return C * std::sin(y) + B * std::cos(x); }))};
  FlowState s{0.0, u0};
  for (int i = 0; i < 50; ++i) s = step(s, 0.02, nu);
  const auto expected = std::exp(-nu * s.t) * u0;
  EXPECT_LT(max_diff(s.u, expected) / max_abs(u0), 1e-12);
}

TEST(Step, RichardsonOrder) {
  Grid g(16);
  const double nu = 0.1, T = 0.8;
  auto solve = [&](double dt) {
    FlowState s = taylor_green_init(g);
    const int n = static_cast<int>(std::lround(T / dt));
    for (int i = 0; i < n; ++i) s = step(s, dt, nu);
    return s.u;
  };
  const auto a = solve(0.1), b = solve(0.05), c = solve(0.025);
  const double order = std::log2(max_diff(a, b) / max_diff(b, c));
  EXPECT_GE(order, 3.9) << order;
}

TEST(Step, PreservesDivergenceAndMean) {
  Grid g(32);
  FlowState s = random_divfree_init(g, 2, -2.0, 0.5);
  for (int i = 0; i < 5; ++i) s = step(s, 0.01, 0.1);
  EXPECT_LT(relative_divergence(s.u), 1e-10);
  for (const auto& c : s.u) EXPECT_EQ(c[0], Complex(0.0));
}

TEST(Run, ZeroEndTimeGivesInitialSample) {
  SolverConfig c;
  c.n = 16;
  c.T = 0.0;
  const auto tr = run(c);
  ASSERT_EQ(tr.samples.size(), 1u);
  EXPECT_EQ(tr.samples[0].t(), 0.0);
  EXPECT_FALSE(tr.aborted);
  EXPECT_EQ(tr.budget.defect(), 0.0);
}

TEST(Run, StrideAndFinalSample) {
  SolverConfig c;
  c.n = 16;
  c.dt = 0.01;
  c.T = 0.105;
  c.stride = 3;
  const auto tr = run(c);
  ASSERT_FALSE(tr.aborted);
  // steps 0, 3, 6, 9, 11 (the last, shortened step)
  ASSERT_EQ(tr.samples.size(), 5u);
  EXPECT_EQ(tr.samples[3].step, 9);
  EXPECT_DOUBLE_EQ(tr.samples.back().t(), 0.105);
  for (const auto& s : tr.samples) {
    ASSERT_TRUE(s.pressure.has_value());
    EXPECT_LT(rel_diff(s.diag.omega_l2 * s.diag.omega_l2, s.diag.grad_sq), 1e-10);
    EXPECT_LT(s.diag.divergence, 1e-10);
  }
}

TEST(Run, TaylorGreenEnergyBudget) {
  SolverConfig c;  // n=32, nu=0.1, dt=1e-3, T=1
  c.stride = 50;
  const auto tr = run(c);
  ASSERT_FALSE(tr.aborted);
  EXPECT_TRUE(tr.warnings.empty());
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    EXPECT_LT(tr.samples[i].diag.energy, tr.samples[i - 1].diag.energy);
  }
  EXPECT_LT(tr.budget.relative_defect(), 1e-6) << tr.budget.defect();
}

TEST(Run, StabilityWarning) {
  SolverConfig c;
  c.n = 16;
  c.dt = 0.3;
  c.T = 0.3;
  const auto tr = run(c);
  ASSERT_EQ(tr.warnings.size(), 1u);
  EXPECT_NE(tr.warnings[0].find("stability"), std::string::npos);
}

TEST(Run, BlowUpAbortsWithPartialTrajectory) {
  SolverConfig c;
  c.n = 16;
  c.init = InitialCondition::Random;
  c.amplitude = 200.0;
  c.nu = 1e-4;
  c.dt = 0.5;
  c.T = 50.0;
  c.stride = 1;
  const auto tr = run(c);
  EXPECT_TRUE(tr.aborted);
  EXPECT_FALSE(tr.abort_reason.empty());
  EXPECT_GE(tr.samples.size(), 1u);
}

TEST(Run, ConfigValidation) {
  SolverConfig c;
  c.nu = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.dt = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.n = 12 + 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Pressure, ZeroVelocity) {
  Grid g(16);
  EXPECT_EQ(max_abs(pressure_solve(SpectralVectorField(g))), 0.0);
}

TEST(Pressure, TaylorGreenClosedForm) {
  // +(1/16)(cos 2x1 + cos 2x2)(cos 2x3 + 2), checked symbolically against -Lap p = d_i d_j(u_i u_j).
  for (int n : {16, 32}) {
    Grid g(n);
    const auto p = pressure_solve(taylor_green_init(g).u);
    const auto ref = RealField::sample(g, [](double x, double y, double z) {
      return (std::cos(2 * x) + std::cos(2 * y)) * (std::cos(2 * z) + 2.0) / 16.0;
    });
    EXPECT_LT(max_diff(p, ref), 1e-10);
  }
}

TEST(Pressure, ProjectionConsistency) {
  Grid g(32);
  const auto u = random_divfree_init(g, 4, -2.0, 1.0).u;
  const auto conv = dealias(convection(u));
  const auto p = pressure_coefficients(u);
  const auto residual = divergence(conv + gradient(p));
  EXPECT_LT(max_abs(residual) / max_abs(divergence(conv)), 1e-10);
  // and the projected term is conv + grad p
  EXPECT_LT(max_diff(nonlinear_term(u), conv + gradient(p)) / max_abs(conv), 1e-10);
}

TEST(Pressure, EstimatesOnTaylorGreen) {
  double prev_grad = 0.0, prev_val = 0.0;
  for (int n : {16, 32}) {
    const auto r = check_pressure_estimates(taylor_green_init(Grid(n)).u, {1.5, 2.0, 4.0});
    ASSERT_EQ(r.size(), 3u);
    const auto& q2 = r[1];
    EXPECT_FALSE(q2.gradient.skipped);
    EXPECT_LT(q2.gradient.value, 10.0);
    EXPECT_LT(q2.value.value, 10.0);
    if (n == 32) {
      EXPECT_LT(rel_diff(q2.gradient.value, prev_grad), 0.1);
      EXPECT_LT(rel_diff(q2.value.value, prev_val), 0.1);
    }
    prev_grad = q2.gradient.value;
    prev_val = q2.value.value;
  }
}

TEST(Pressure, EstimatesSkipOnZeroAndRejectBadQ) {
  Grid g(16);
  const auto r = check_pressure_estimates(SpectralVectorField(g), {2.0});
  EXPECT_TRUE(r[0].gradient.skipped);
  EXPECT_TRUE(r[0].value.skipped);
  EXPECT_THROW(check_pressure_estimates(SpectralVectorField(g), {1.0}), std::invalid_argument);
}

TEST(Checkpoint, RoundTripAndBitExactResume) {
  const auto dir = std::filesystem::temp_directory_path() / "besovns_ckpt_test";
  std::filesystem::create_directories(dir);
  SolverConfig c;
  c.n = 16;
  c.init = InitialCondition::Random;
  c.seed = 8;
  c.dt = 0.01;
  c.T = 0.2;
  const auto full = run(c);

  SolverConfig half = c;
  half.T = 0.1;
  const auto first = run(half);
  write_checkpoint(dir / "mid.bin", first.samples.back().state, c.nu);
  const auto ck = read_checkpoint(dir / "mid.bin");
  EXPECT_EQ(ck.nu, c.nu);
  EXPECT_EQ(ck.state.t, first.samples.back().t());
  EXPECT_EQ(max_diff(ck.state.u, first.samples.back().state.u), 0.0);
  const auto second = run_from(ck.state, half);
  EXPECT_EQ(max_diff(second.samples.back().state.u, full.samples.back().state.u), 0.0);
  EXPECT_EQ(std::filesystem::file_size(dir / "mid.bin"), 8u + 4u + 8u + 8u + 3u * 16u * 16u * 16u * 16u);
  std::filesystem::remove_all(dir);
}

TEST(Checkpoint, RejectsGarbage) {
  const auto path = std::filesystem::temp_directory_path() / "besovns_bad_ckpt.bin";
  {
    std::ofstream os(path, std::ios::binary);
    os << "not a checkpoint";
  }
  EXPECT_THROW(read_checkpoint(path), Error);
  std::filesystem::remove(path);
}
