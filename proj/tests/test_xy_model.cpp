#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <numbers>
#include <tuple>
#include <vector>

#include "param_names.hpp"
#include "qfid/errors.hpp"
#include "qfid/model.hpp"
#include "qfid/modes.hpp"
#include "qfid/oracle.hpp"
#include "qfid/quench.hpp"
#include "qfid/xy_model.hpp"

namespace {

using qfid::XYParams;
constexpr double kPi = std::numbers::pi;

TEST(XYModel, DVectorComponents) {
  const qfid::DVector d = qfid::xy_dvector({0.3, -1.2}, 0.7);
  EXPECT_DOUBLE_EQ(d.x, -0.6 - 2.0 * std::cos(0.7));
  EXPECT_DOUBLE_EQ(d.y, 2.4 * std::sin(0.7));
  EXPECT_EQ(d.z, 0.0);
  EXPECT_EQ(d.d0, 0.0);
}

TEST(XYModel, Registered) {
  const qfid::ModelSpec& m = qfid::find_model("xy");
  EXPECT_EQ(m.name, "xy");
  EXPECT_EQ(m.at(std::vector<double>{0.3, -1.2}, 0.7).y, qfid::xy_dvector({0.3, -1.2}, 0.7).y);
  EXPECT_EQ(m.arity(), 2u);
  EXPECT_EQ(m.parameter_index("eta"), 1u);
  EXPECT_TRUE(m.planar);
  EXPECT_THROW(m.parameter_index("J"), qfid::DomainError);
  EXPECT_THROW(qfid::find_model("ising3d"), qfid::DomainError);
  EXPECT_THROW(qfid::register_model(qfid::xy_model()), qfid::DomainError);
}

TEST(XYModel, ClosedFormsMatchGenericPath) {
  qfid::Rng rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    const XYParams pi{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const XYParams pf{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double k = rng.uniform(0.0, kPi);
    const auto di = qfid::xy_dvector(pi, k);
    const auto df = qfid::xy_dvector(pf, k);
    EXPECT_NEAR(qfid::xy_lbar_closed_form(pi, pf, k), qfid::lbar_k(di, df), 1e-12);
    EXPECT_NEAR(qfid::xy_fidelity_closed_form(pi, pf, k),
                qfid::overlap_modulus(qfid::ground_state(di), qfid::ground_state(df)), 1e-12);
  }
}

struct BoundaryCase {
  double h_f;
  int f0;
  int fpi;
};

class Boundary : public ::testing::TestWithParam<BoundaryCase> {};

TEST_P(Boundary, FidelitiesFromHminusTwo) {
  const auto c = GetParam();
  const auto b = qfid::xy_boundary_fidelities({-2.0, 0.8}, {c.h_f, -2.0});
  EXPECT_EQ(b.f0, c.f0);
  EXPECT_EQ(b.fpi, c.fpi);
}

INSTANTIATE_TEST_SUITE_P(Quartet, Boundary,
                         ::testing::Values(BoundaryCase{-2.0, 1, 1}, BoundaryCase{0.0, 0, 1},
                                           BoundaryCase{2.0, 0, 0}),
                         [](const auto& info) { return hf_name(info.param.h_f); });

TEST(XYModel, BoundaryFidelitiesMatchGroundStatesNearEdges) {
  // Just inside the zone the k-mode overlap tends to the boundary value.
  const XYParams pi{-2.0, 0.8};
  for (const auto& [hf, f0, fpi] : {std::tuple{-2.0, 1, 1}, {0.0, 0, 1}, {2.0, 0, 0}}) {
    const XYParams pf{hf, -2.0};
    EXPECT_NEAR(qfid::xy_fidelity_closed_form(pi, pf, 1e-7), f0, 1e-6);
    EXPECT_NEAR(qfid::xy_fidelity_closed_form(pi, pf, kPi - 1e-7), fpi, 1e-6);
  }
}

TEST(XYModel, BoundaryFidelitiesThrowOnCriticalField) {
  EXPECT_THROW(qfid::xy_boundary_fidelities({-2.0, 0.8}, {1.0, 0.3}), qfid::CriticalBoundary);
  EXPECT_THROW(qfid::xy_boundary_fidelities({-1.0, 0.8}, {0.0, 0.3}), qfid::CriticalBoundary);
}

TEST(XYModel, WindingNumbers) {
  EXPECT_EQ(qfid::xy_winding_number({0.0, 1.0}), 1);
  EXPECT_EQ(qfid::xy_winding_number({0.5, -0.3}), -1);
  EXPECT_EQ(qfid::xy_winding_number({-2.0, 0.8}), 0);
  EXPECT_EQ(qfid::xy_winding_number({2.5, -2.0}), 0);
  EXPECT_THROW(qfid::xy_winding_number({0.0, 0.0}), qfid::GapClosed);
}

TEST(XYModel, WindingIntegralConverges) {
  // Close to the critical point the loop passes near the origin and a coarse
  // trapezoid rule is visibly off.
  const XYParams p{0.999, 0.001};
  const double coarse = qfid::xy_winding_integral(p, 256);
  const double fine = qfid::xy_winding_integral(p, 1 << 18);
  EXPECT_NEAR(fine, 1.0, 1e-9);
  EXPECT_GT(std::abs(coarse - 1.0), 1e-3);
}

TEST(XYModel, EquilibriumPhases) {
  EXPECT_EQ(qfid::xy_equilibrium_phase({-2.0, 0.8}).region, 0);
  EXPECT_EQ(qfid::xy_equilibrium_phase({0.0, 0.8}).region, 1);
  EXPECT_EQ(qfid::xy_equilibrium_phase({0.0, -0.8}).region, 2);
  EXPECT_EQ(qfid::xy_equilibrium_phase({2.0, 0.0}).region, 3);
  EXPECT_TRUE(qfid::xy_equilibrium_phase({1.0, 0.5}).is_critical());
  EXPECT_TRUE(qfid::xy_equilibrium_phase({-1.0, 0.5}).is_critical());
  EXPECT_TRUE(qfid::xy_equilibrium_phase({0.2, 0.0}).is_critical());
}

TEST(XYModel, KcLinePutsRootAtRequestedMomentum) {
  const XYParams pi{-2.0, 0.8};
  for (double k : {0.3, 1.2, 2.5}) {
    for (double hf : {-2.5, 0.0, 1.7}) {
      const auto eta = qfid::xy_kc_line_eta(pi, k, hf);
      ASSERT_TRUE(eta.has_value());
      const XYParams pf{hf, *eta};
      EXPECT_NEAR(qfid::lbar_k(qfid::xy_dvector(pi, k), qfid::xy_dvector(pf, k)), 0.0, 1e-20);
    }
  }
  EXPECT_FALSE(qfid::xy_kc_line_eta(pi, 0.0, 0.5).has_value());
}

TEST(XYModel, AlignedLineGivesCollinearVectors) {
  const XYParams pi{-2.0, 0.8};
  for (double k : {0.4, 1.5, 2.8}) {
    for (double hf : {-3.0, 0.5, 2.2}) {
      const auto a = qfid::xy_aligned_line_eta(pi, k, hf);
      ASSERT_TRUE(a.has_value());
      const double f = qfid::quench_fidelity_k(qfid::xy_dvector(pi, k),
                                               qfid::xy_dvector({hf, a->eta_f}, k));
      EXPECT_NEAR(f, a->parallel ? 1.0 : 0.0, 1e-7);
    }
  }
}

}  // namespace
