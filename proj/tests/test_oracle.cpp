#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qfid/errors.hpp"
#include "qfid/oracle.hpp"
#include "qfid/quench.hpp"

namespace {

using qfid::DVector;
using qfid::OracleProperty;

TEST(Rng, DeterministicAndInRange) {
  qfid::Rng a(5), b(5);
  for (int n = 0; n < 100; ++n) {
    const double x = a.uniform(-2.0, 3.0);
    EXPECT_EQ(x, b.uniform(-2.0, 3.0));
    EXPECT_GE(x, -2.0);
    EXPECT_LT(x, 3.0);
  }
  qfid::Rng c(6);
  for (int n = 0; n < 100; ++n) {
    const auto [di, df] = c.perpendicular_pair();
    const double dot = di.x * df.x + di.y * df.y + di.z * df.z;
    EXPECT_LT(std::abs(dot) / (di.norm() * df.norm()), 1e-14);
    EXPECT_NEAR(c.spinor().norm(), 1.0, 1e-14);
  }
}

TEST(NumericLbar, MatchesTimeMinimum) {
  qfid::Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const DVector di = rng.dvector(3.0, 1.0);
    const DVector df = rng.dvector(3.0, 1.0);
    const auto m = qfid::numeric_lbar_minimum(di, df);
    EXPECT_NEAR(m.value, qfid::lbar_k(di, df), 1e-10);
    EXPECT_NEAR(m.time * df.norm(), std::numbers::pi / 2, 1e-5);
  }
  EXPECT_THROW(qfid::numeric_lbar({1, 0, 0, 0}, {0, 1, 0, 0}, 100), qfid::DomainError);
}

TEST(PerpendicularPairChecks, PassOnPerpendicularPairs) {
  qfid::Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [di, df] = rng.perpendicular_pair();
    EXPECT_TRUE(qfid::check_state_mapping(di, df).pass);
    EXPECT_TRUE(qfid::check_expectations(di, df).pass);
    const auto anti = qfid::check_anticommutator(di, df);
    EXPECT_TRUE(anti.pass);
    EXPECT_NEAR(anti.tolerance, 1e-10 * di.norm() * df.norm(), 1e-24);
  }
}

TEST(PerpendicularPairChecks, RejectNonPerpendicularInput) {
  const DVector di{1, 0, 0, 0};
  const DVector df{1, 1, 0, 0};
  EXPECT_THROW(qfid::check_state_mapping(di, df), qfid::PreconditionFailed);
  EXPECT_THROW(qfid::check_anticommutator(di, df), qfid::PreconditionFailed);
  EXPECT_THROW(qfid::check_state_mapping(di, {0, 1, 0, 0.5}), qfid::PreconditionFailed);
}

TEST(PropertySuite, AllPassWithDefaultSeed) {
  qfid::SuiteOptions opts;
  opts.trials = 200;
  const auto reports = qfid::run_property_suite(opts);
  EXPECT_EQ(reports.size(), 18u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass) << qfid::to_string(r.property) << " deviation " << r.max_deviation;
    EXPECT_GE(r.trials, 1u);
  }
}

TEST(PropertySuite, InjectedFaultIsCaught) {
  qfid::SuiteOptions opts;
  opts.trials = 50;
  opts.inject_fault = true;
  const auto reports = qfid::run_property_suite(opts);
  bool relation_failed = false;
  for (const auto& r : reports) {
    if (r.property == OracleProperty::RelationIdentity) {
      relation_failed = !r.pass;
      ASSERT_TRUE(r.witness.has_value());
    }
  }
  EXPECT_TRUE(relation_failed);
}

TEST(PropertySuite, ReproducibleForASeed) {
  qfid::SuiteOptions opts;
  opts.trials = 40;
  opts.seed = 99;
  const auto a = qfid::run_property_suite(opts);
  const auto b = qfid::run_property_suite(opts);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    EXPECT_EQ(a[n].max_deviation, b[n].max_deviation);
    EXPECT_EQ(a[n].seed, b[n].seed);
  }
}

TEST(OracleReport, ObserveKeepsWorst) {
  qfid::OracleReport r;
  r.tolerance = 1e-3;
  r.observe(1e-5, {0.1, std::nullopt, {}});
  r.observe(1e-2, {0.2, 1.0, {}});
  r.observe(1e-4, {0.3, std::nullopt, {}});
  r.finalize();
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.max_deviation, 1e-2);
  EXPECT_EQ(*r.witness->k, 0.2);
}

}  // namespace
