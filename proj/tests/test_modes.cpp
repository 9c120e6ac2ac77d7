#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <numbers>
#include <vector>

#include "param_names.hpp"
#include "qfid/errors.hpp"
#include "qfid/modes.hpp"
#include "qfid/oracle.hpp"
#include "qfid/xy_model.hpp"

namespace {

using qfid::Params;
constexpr double kPi = std::numbers::pi;
const Params kGammaI{-2.0, 0.8};

// Roots in (-1, 1) of (1 - eta_i eta_f) c^2 + (h_i + h_f) c + h_i h_f + eta_i eta_f,
// the XY k_c condition written in c = cos k.
std::vector<double> quadratic_cos_roots(const Params& gi, const Params& gf) {
  const double a = 1.0 - gi[1] * gf[1];
  const double b = gi[0] + gf[0];
  const double c = gi[0] * gf[0] + gi[1] * gf[1];
  std::vector<double> out;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  for (double sign : {-1.0, 1.0}) {
    const double r = (-b + sign * std::sqrt(disc)) / (2.0 * a);
    if (r > -1.0 && r < 1.0) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> cosines(const std::vector<double>& ks) {
  std::vector<double> out;
  for (double k : ks) out.push_back(std::cos(k));
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Classify, Thresholds) {
  EXPECT_EQ(qfid::classify_fidelity(std::sqrt(0.5)), qfid::ModeClass::Kc);
  EXPECT_EQ(qfid::classify_fidelity(0.0), qfid::ModeClass::K0);
  EXPECT_EQ(qfid::classify_fidelity(1.0), qfid::ModeClass::K1);
  EXPECT_EQ(qfid::classify_fidelity(0.5), qfid::ModeClass::Generic);
  EXPECT_EQ(qfid::classify_fidelity(1e-7), qfid::ModeClass::Generic);
  EXPECT_STREQ(qfid::to_string(qfid::ModeClass::Kc), "kc");
}

struct QuartetCase {
  double h_f;
  bool dqpt;
  int n_kc;
  int n_k0;
  int n_k1;
};

class Quartet : public ::testing::TestWithParam<QuartetCase> {};

TEST_P(Quartet, CountsAndRootsMatchQuadratic) {
  const QuartetCase c = GetParam();
  const Params gf{c.h_f, -2.0};
  const qfid::ModeReport r = qfid::analyze_modes(qfid::xy_model(), kGammaI, gf);
  EXPECT_EQ(r.n_kc, c.n_kc);
  EXPECT_EQ(r.n_k0, c.n_k0);
  EXPECT_EQ(r.n_k1, c.n_k1);
  EXPECT_EQ(qfid::dqpt_exists(qfid::xy_model(), kGammaI, gf), c.dqpt);
  const auto expected = quadratic_cos_roots(kGammaI, gf);
  const auto got = cosines(r.kc_roots);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[j], expected[j], 1e-9);
}

INSTANTIATE_TEST_SUITE_P(EtaFMinusTwo, Quartet,
                         ::testing::Values(QuartetCase{-2.0, false, 0, 0, 2},
                                           QuartetCase{-1.1, true, 2, 0, 2},
                                           QuartetCase{0.0, true, 1, 1, 1},
                                           QuartetCase{2.0, false, 0, 3, 0},
                                           QuartetCase{1.25, false, 0, 2, 0}),
                         [](const auto& info) { return hf_name(info.param.h_f); });

TEST(Roots, FrozenCosines) {
  const auto r1 = cosines(qfid::find_kc_roots(qfid::xy_model(), kGammaI, {-1.1, -2.0}).roots);
  ASSERT_EQ(r1.size(), 2u);
  EXPECT_NEAR(r1[0], 0.24312, 5e-6);
  EXPECT_NEAR(r1[1], 0.94918, 1e-5);
  const auto r2 = cosines(qfid::find_kc_roots(qfid::xy_model(), kGammaI, {0.0, -2.0}).roots);
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_NEAR(r2[0], -0.48906, 5e-6);
}

TEST(Roots, InteriorAntiparallelRootIsLinearInCosine) {
  // Collinearity in the XY plane: (h_i + c) eta_f = eta_i (h_f + c).
  const Params gf{2.0, -2.0};
  const auto m = qfid::find_k0_k1_roots(qfid::xy_model(), kGammaI, gf);
  ASSERT_EQ(m.k0.size(), 1u);
  EXPECT_TRUE(m.k1.empty());
  const double c = (kGammaI[1] * gf[0] - gf[1] * kGammaI[0]) / (gf[1] - kGammaI[1]);
  EXPECT_NEAR(std::cos(m.k0[0]), c, 1e-10);
}

TEST(Roots, RandomQuenchesAgreeWithQuadratic) {
  qfid::Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Params gi{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Params gf{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const auto expected = quadratic_cos_roots(gi, gf);
    // Skip near-tangent cases where two roots sit closer than the grid can split.
    if (expected.size() == 2 && expected[1] - expected[0] < 1e-3) continue;
    const auto got = cosines(qfid::find_kc_roots(qfid::xy_model(), gi, gf).roots);
    ASSERT_EQ(got.size(), expected.size()) << gi[0] << " " << gi[1] << " " << gf[0] << " " << gf[1];
    for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[j], expected[j], 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 250);
}

TEST(Roots, SwapSymmetry) {
  const Params gf{-1.1, -2.0};
  const auto a = qfid::find_kc_roots(qfid::xy_model(), kGammaI, gf).roots;
  const auto b = qfid::find_kc_roots(qfid::xy_model(), gf, kGammaI).roots;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-9);
}

TEST(Roots, IdenticalQuenchIsParallelContinuum) {
  const auto m = qfid::find_k0_k1_roots(qfid::xy_model(), kGammaI, kGammaI);
  EXPECT_EQ(m.continuum, qfid::Continuum::K1);
  EXPECT_TRUE(qfid::find_kc_roots(qfid::xy_model(), kGammaI, kGammaI).roots.empty());
}

TEST(Roots, ResolutionFloor) {
  EXPECT_THROW(qfid::find_kc_roots(qfid::xy_model(), kGammaI, {0.0, -2.0}, 16),
               qfid::DomainError);
}

TEST(Alignment, GaplessThrows) {
  EXPECT_THROW(qfid::alignment({0, 0, 0, 0}, {1, 0, 0, 0}), qfid::GapClosed);
  EXPECT_DOUBLE_EQ(qfid::alignment({2, 0, 0, 0}, {-3, 0, 0, 0}), -1.0);
}

TEST(SufficientCondition, ImpliesDqptOnRandomQuenches) {
  qfid::Rng rng(32);
  int premises = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Params gi{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Params gf{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const auto r = qfid::analyze_modes(qfid::xy_model(), gi, gf, 1024);
    if (qfid::sufficient_condition_holds(r)) {
      ++premises;
      EXPECT_GE(r.n_kc, 1);
    }
  }
  EXPECT_GT(premises, 20);
}

TEST(Scan, AxisValues) {
  const qfid::ScanAxis axis{0, -3.0, 3.0, 7};
  EXPECT_DOUBLE_EQ(axis.value(0), -3.0);
  EXPECT_DOUBLE_EQ(axis.value(3), 0.0);
  EXPECT_DOUBLE_EQ(axis.value(6), 3.0);
  EXPECT_DOUBLE_EQ((qfid::ScanAxis{1, 0.5, 2.0, 1}.value(0)), 0.5);
}

TEST(Scan, CellsMatchDirectEvaluation) {
  const qfid::ScanAxis a1{0, -2.0, 2.0, 5};
  const qfid::ScanAxis a2{1, -2.0, 1.0, 4};
  qfid::ScanOptions opts;
  opts.resolution = 1024;
  opts.threads = 3;
  const auto result = qfid::scan_phase_diagram(qfid::xy_model(), kGammaI, a1, a2, opts);
  ASSERT_EQ(result.cells.size(), 20u);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 4; ++j) {
      const auto& cell = result.at(i, j);
      EXPECT_DOUBLE_EQ(cell.value1, a1.value(i));
      EXPECT_DOUBLE_EQ(cell.value2, a2.value(j));
      const Params gf{cell.value1, cell.value2};
      if (cell.status != qfid::CellStatus::Ok) {
        EXPECT_TRUE(qfid::xy_model().is_critical(gf));
        continue;
      }
      EXPECT_EQ(cell.summary->dqpt_exists, qfid::dqpt_exists(qfid::xy_model(), kGammaI, gf, 1024));
    }
  }
}

TEST(Scan, CriticalCellsAreFlagged) {
  qfid::ScanOptions opts;
  const auto on_line = qfid::evaluate_cell(qfid::xy_model(), kGammaI, {1.0, -2.0}, opts);
  EXPECT_EQ(on_line.status, qfid::CellStatus::Critical);
  EXPECT_FALSE(on_line.summary.has_value());
  const auto isotropic = qfid::evaluate_cell(qfid::xy_model(), kGammaI, {0.0, 0.0}, opts);
  EXPECT_NE(isotropic.status, qfid::CellStatus::Ok);
}

TEST(Scan, ThreadCountDoesNotChangeResults) {
  const qfid::ScanAxis a1{0, -3.0, 3.0, 9};
  const qfid::ScanAxis a2{1, -3.0, 3.0, 9};
  qfid::ScanOptions one;
  one.resolution = 512;
  one.rates = qfid::RateMode::FiniteSize;
  qfid::ScanOptions many = one;
  many.threads = 4;
  const auto r1 = qfid::scan_phase_diagram(qfid::xy_model(), kGammaI, a1, a2, one);
  const auto r2 = qfid::scan_phase_diagram(qfid::xy_model(), kGammaI, a1, a2, many);
  for (std::size_t n = 0; n < r1.cells.size(); ++n) {
    EXPECT_EQ(r1.cells[n].status, r2.cells[n].status);
    EXPECT_EQ(r1.cells[n].message, r2.cells[n].message);
    if (r1.cells[n].summary) {
      EXPECT_EQ(r1.cells[n].summary->n_kc, r2.cells[n].summary->n_kc);
      EXPECT_EQ(r1.cells[n].summary->lbar_rate, r2.cells[n].summary->lbar_rate);
    }
  }
}

}  // namespace
