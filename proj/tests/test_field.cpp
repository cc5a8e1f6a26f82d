#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "besovns/fft.hpp"
#include "besovns/norms.hpp"
#include "besovns/operators.hpp"
#include "besovns/random.hpp"
#include "support.hpp"

using namespace besovns;
using besovns::testing::max_abs;
using besovns::testing::max_diff;
using besovns::testing::rel_diff;

namespace {
constexpr double pi = std::numbers::pi;

SpectralVectorField random_divfree(const Grid& g, std::uint64_t seed) {
  return leray_project(random_spectral_vector(g, seed, {-1.0, 10.0}));
}
}  // namespace

TEST(Grid, RejectsOddOrSmall) {
  EXPECT_THROW(Grid(7), std::invalid_argument);
  EXPECT_THROW(Grid(6), std::invalid_argument);
  EXPECT_THROW(Grid(17), std::invalid_argument);
  EXPECT_NO_THROW(Grid(8));
}

TEST(Grid, WavenumberLayout) {
  Grid g(8);
  EXPECT_EQ(g.wavenumber(0), 0);
  EXPECT_EQ(g.wavenumber(4), 4);
  EXPECT_EQ(g.wavenumber(5), -3);
  EXPECT_EQ(g.wavenumber(7), -1);
  EXPECT_DOUBLE_EQ(g.spacing(), 2 * pi / 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(g.flat_of(g.wavevector(i)), i);
    EXPECT_EQ(g.conjugate_index(g.conjugate_index(i)), i);
  }
}

TEST(Transform, ConstantFieldHasOnlyMean) {
  Grid g(16);
  auto F = forward_transform(RealField::sample(g, [](double, double, double) { return 2.5; }));
  EXPECT_NEAR(F[0].real(), 2.5, 1e-14);
  EXPECT_NEAR(F[0].imag(), 0.0, 1e-14);
  F[0] = 0.0;
  EXPECT_LT(max_abs(F), 1e-14);
}

TEST(Transform, CosineHasTwoModes) {
  Grid g(16);
  auto F = forward_transform(RealField::sample(g, [](double x, double, double) { return std::cos(x); }));
  EXPECT_NEAR(std::abs(F.at({1, 0, 0}) - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(F.at({-1, 0, 0}) - 0.5), 0.0, 1e-14);
  int nonzero = 0;
  for (const auto& c : F.values()) nonzero += std::abs(c) > 1e-12;
  EXPECT_EQ(nonzero, 2);
}

TEST(Transform, RoundTripRandomSamples) {
  Grid g(32);
  const auto f = white_noise(g, 7);
  const auto back = inverse_transform(forward_transform(f));
  EXPECT_LT(max_diff(f, back) / max_abs(f), 1e-12);
}

TEST(Transform, RoundTripRandomCoefficients) {
  Grid g(32);
  const auto F = random_spectral_field(g, 3, 0, {-1.0, 15.0});
  const auto back = forward_transform(inverse_transform(F));
  EXPECT_LT(max_diff(F, back) / max_abs(F), 1e-12);
}

TEST(Transform, ZeroCoefficientsGiveZeroField) {
  Grid g(8);
  EXPECT_EQ(max_abs(inverse_transform(SpectralField(g))), 0.0);
}

TEST(Transform, ConjugatePairGivesCosine) {
  Grid g(16);
  SpectralField F(g);
  F.at({1, 1, 0}) = 0.5;
  F.at({-1, -1, 0}) = 0.5;
  const auto f = inverse_transform(F);
  const auto ref = RealField::sample(g, [](double x, double y, double) { return std::cos(x + y); });
  EXPECT_LT(max_diff(f, ref), 1e-14);
}

TEST(Transform, NonFiniteSampleRejectedWithIndex) {
  Grid g(8);
  RealField f(g);
  f[g.flat(1, 2, 3)] = std::nan("");
  try {
    forward_transform(f);
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_EQ(e.index(), g.flat(1, 2, 3));
    EXPECT_NE(std::string(e.what()).find("(1,2,3)"), std::string::npos);
  }
}

TEST(Transform, HermitianViolationNamesWorstMode) {
  Grid g(8);
  SpectralField F(g);
  F.at({2, 1, 0}) = Complex{1.0, 0.0};
  try {
    inverse_transform(F);
    FAIL() << "expected HermitianError";
  } catch (const HermitianError& e) {
    const int* k = e.worst_mode();
    const bool either = (k[0] == 2 && k[1] == 1 && k[2] == 0) || (k[0] == -2 && k[1] == -1 && k[2] == 0);
    EXPECT_TRUE(either);
  }
}

TEST(Transform, PlancherelMatchesQuadrature) {
  Grid g(32);
  const auto f = white_noise(g, 11);
  const auto F = forward_transform(f);
  const double l2 = lp_norm(f, 2.0);
  EXPECT_LT(rel_diff(l2 * l2, l2_norm_sq(F)), 1e-12);
}

TEST(Operators, DerivativeOfCosine) {
  Grid g(16);
  const auto F = forward_transform(RealField::sample(g, [](double x, double, double) { return std::cos(x); }));
  const auto d = inverse_transform(partial_derivative(F, 1));
  const auto ref = RealField::sample(g, [](double x, double, double) { return -std::sin(x); });
  EXPECT_LT(max_diff(d, ref), 1e-13);
}

TEST(Operators, DerivativeAlongConstantAxisVanishes) {
  Grid g(16);
  const auto F = forward_transform(
      RealField::sample(g, [](double x, double y, double) { return std::sin(2 * x) * std::cos(y); }));
  EXPECT_EQ(max_abs(partial_derivative(F, 3)), 0.0);
  EXPECT_THROW(partial_derivative(F, 0), std::invalid_argument);
  EXPECT_THROW(partial_derivative(F, 4), std::invalid_argument);
}

TEST(Operators, NyquistPlaneDerivativeIsZero) {
  Grid g(8);
  SpectralField F(g);
  F.at({4, 0, 0}) = 1.0;
  EXPECT_EQ(max_abs(partial_derivative(F, 1)), 0.0);
}

TEST(Operators, DerivativesCommute) {
  Grid g(32);
  const auto F = random_spectral_field(g, 5, 0, {-1.0, 15.0});
  const auto a = partial_derivative(partial_derivative(F, 1), 2);
  const auto b = partial_derivative(partial_derivative(F, 2), 1);
  EXPECT_LT(max_diff(a, b) / max_abs(a), 1e-12);
}

TEST(Operators, CurlOfGradientVanishes) {
  Grid g(32);
  const auto F = random_spectral_field(g, 9, 0, {-1.0, 15.0});
  const auto grad = gradient(F);
  EXPECT_LT(max_abs(curl(grad)) / max_abs(grad), 1e-12);
}

TEST(Operators, DivergenceOfCurlVanishes) {
  Grid g(32);
  const auto v = random_spectral_vector(g, 13, {-1.0, 15.0});
  const auto w = curl(v);
  EXPECT_LT(max_abs(divergence(w)) / max_abs(w), 1e-12);
}

TEST(Operators, LaplacianIsMinusCurlCurl) {
  Grid g(32);
  const auto u = random_divfree(g, 17);
  const auto lap = laplacian(u);
  const auto cc = curl(curl(u));
  EXPECT_LT(max_abs(lap + cc) / max_abs(lap), 1e-12);
}

TEST(Operators, HorizontalLaplacian) {
  Grid g(16);
  const auto F = forward_transform(RealField::sample(
      g, [](double x, double y, double z) { return std::cos(x) * std::sin(2 * y) * std::cos(3 * z); }));
  const auto [d1, d2] = horizontal_gradient(F);
  const auto lh = partial_derivative(d1, 1) + partial_derivative(d2, 2);
  EXPECT_LT(max_diff(lh, horizontal_laplacian(F)), 1e-13);
  EXPECT_LT(max_diff(horizontal_laplacian(F), -5.0 * F), 1e-13);
}

TEST(Operators, MixedGridVectorRejected) {
  EXPECT_THROW(SpectralVectorField(SpectralField(Grid(8)), SpectralField(Grid(8)), SpectralField(Grid(16))),
               GridMismatchError);
}

TEST(Leray, DivergenceFreeInputUnchanged) {
  Grid g(32);
  const auto u = random_divfree(g, 21);
  EXPECT_LT(max_diff(leray_project(u), u) / max_abs(u), 1e-12);
}

TEST(Leray, GradientIsAnnihilated) {
  Grid g(32);
  const auto grad = gradient(random_spectral_field(g, 23, 0, {-1.0, 15.0}));
  EXPECT_LT(max_abs(leray_project(grad)) / max_abs(grad), 1e-12);
}

TEST(Leray, OutputIsDivergenceFreeAndIdempotent) {
  Grid g(32);
  const auto v = random_spectral_vector(g, 29, {-1.0, 15.0});
  const auto p = leray_project(v);
  EXPECT_LT(max_abs(divergence(p)) / max_abs(v), 1e-12);
  EXPECT_LT(max_diff(leray_project(p), p) / max_abs(p), 1e-12);
}

TEST(Leray, MeanModeUntouched) {
  Grid g(8);
  SpectralVectorField v(g);
  v[0][0] = 3.0;
  v[2][0] = -1.0;
  const auto p = leray_project(v);
  EXPECT_EQ(p[0][0], Complex(3.0));
  EXPECT_EQ(p[2][0], Complex(-1.0));
}

TEST(Norms, ConstantField) {
  Grid g(16);
  const auto one = RealField::sample(g, [](double, double, double) { return 1.0; });
  EXPECT_NEAR(lp_norm(one, 2.0), std::pow(2 * pi, 1.5), 1e-12);
  EXPECT_NEAR(lp_norm(one, kInf), 1.0, 0.0);
}

TEST(Norms, CosineL2MatchesClosedForm) {
  Grid g(16);
  const auto f = RealField::sample(g, [](double x, double, double) { return std::cos(x); });
  const double l2 = lp_norm(f, 2.0);
  EXPECT_LT(rel_diff(l2 * l2, std::pow(2 * pi, 3) / 2), 1e-13);
}

TEST(Norms, SupOfCosine) {
  Grid g(16);
  const auto f = RealField::sample(g, [](double x, double y, double) { return std::cos(x + y); });
  EXPECT_NEAR(lp_norm(f, kInf), 1.0, 1e-15);
}

TEST(Norms, RejectsExponentBelowOne) {
  Grid g(8);
  EXPECT_THROW(lp_norm(RealField(g), 0.5), std::invalid_argument);
}

TEST(Norms, LpMonotoneInExponentOnProbabilityScale) {
  // On a finite measure space ||f||_p / |box|^(1/p) is nondecreasing in p.
  Grid g(16);
  const auto f = white_noise(g, 3);
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 10.0}) {
    const double scaled = lp_norm(f, p) / std::pow(Grid::volume(), 1.0 / p);
    EXPECT_GE(scaled, prev * (1 - 1e-14));
    prev = scaled;
  }
  EXPECT_LE(prev, lp_norm(f, kInf));
}

TEST(Identities, VorticityAndGradientNormsAgree) {
  Grid g(32);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u = random_divfree(g, seed);
    const double grad = derivative_norm_sq(u, 1);
    EXPECT_LT(rel_diff(l2_norm_sq(curl(u)), grad), 1e-12);
    const double lap = l2_norm_sq(laplacian(u));
    EXPECT_LT(rel_diff(derivative_norm_sq(curl(u), 1), lap), 1e-12);
    EXPECT_LT(rel_diff(derivative_norm_sq(u, 2), lap), 1e-12);
  }
}

TEST(Random, DeterministicAndGridIndependent) {
  const auto a = random_spectral_field(Grid(16), 42, 1);
  const auto b = random_spectral_field(Grid(16), 42, 1);
  EXPECT_EQ(max_diff(a, b), 0.0);
  const auto c = random_spectral_field(Grid(32), 42, 1);
  Grid(16).for_each_mode([&](std::size_t i, const Wavevector& k) { EXPECT_EQ(a[i], c.at(k)); });
  EXPECT_EQ(a[0], Complex(0.0));
  EXPECT_LT(hermitian_violation(a).violation, 1e-16);
}
