#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hcn/model/trees.hpp"
#include "hcn/mp/factors.hpp"
#include "hcn/mp/oracle.hpp"

using hcn::mp::FactorKind;
using hcn::mp::IndeterminateForm;
using hcn::mp::kInf;
using hcn::mp::oracle_factor_update;

namespace {

std::vector<double> random_messages(std::mt19937_64& gen, std::size_t n, bool with_inf) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> v(n);
  for (auto& x : v) {
    x = u(gen);
    if (with_inf && gen() % 6 == 0) x = gen() % 2 ? kInf : -kInf;
  }
  return v;
}

void expect_same(const std::vector<double>& a, const std::vector<double>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isinf(a[i]) || std::isinf(b[i]))
      EXPECT_EQ(a[i], b[i]) << "slot " << i;
    else
      EXPECT_NEAR(a[i], b[i], 1e-9) << "slot " << i;
  }
}

}  // namespace

TEST(AndOrTree, AllZeroGivesZero) {
  std::vector<double> in(7, 0.0), out(7, 1.0);
  hcn::model::andor_tree_update(in, out);
  for (double m : out) EXPECT_EQ(m, 0.0);
}

TEST(AndOrTree, SingleChildComposesPrimitives) {
  const double r = 0.8, s = -1.1, w = 2.4;
  std::vector<double> in{r, s, w}, out(3);
  hcn::model::andor_tree_update(in, out);

  std::vector<double> or_out(1);
  hcn::mp::or_update(std::vector<double>{0.0}, r, or_out);
  const auto and_msgs = hcn::mp::and_update(s, w, or_out[0]);
  EXPECT_NEAR(out[1], and_msgs.top1, 1e-12);
  EXPECT_NEAR(out[2], and_msgs.top2, 1e-12);
  EXPECT_NEAR(out[0], hcn::mp::and_to_bottom(s, w), 1e-12);
}

TEST(AndOrTree, ThreeChildrenMatchOracle) {
  std::mt19937_64 gen(5);
  const auto in = random_messages(gen, 7, false);
  std::vector<double> out(7);
  hcn::model::andor_tree_update(in, out);
  expect_same(out, oracle_factor_update(FactorKind::AndOrTree, in));
}

TEST(AndOrTree, MatchesOracleUpToSixChildren) {
  std::mt19937_64 gen(17);
  for (std::size_t children = 1; children <= 6; ++children) {
    const std::size_t n = 1 + 2 * children;
    for (int rep = 0; rep < 300; ++rep) {
      const auto in = random_messages(gen, n, false);
      std::vector<double> out(n);
      hcn::model::andor_tree_update(in, out);
      expect_same(out, oracle_factor_update(FactorKind::AndOrTree, in));
    }
  }
}

TEST(AndOrTree, InfiniteMessagesMatchOracle) {
  std::mt19937_64 gen(19);
  int compared = 0;
  for (std::size_t children = 1; children <= 5; ++children) {
    const std::size_t n = 1 + 2 * children;
    for (int rep = 0; rep < 300; ++rep) {
      const auto in = random_messages(gen, n, true);
      std::vector<double> expected;
      try {
        expected = oracle_factor_update(FactorKind::AndOrTree, in);
      } catch (const IndeterminateForm&) {
        continue;
      }
      std::vector<double> out(n);
      hcn::model::andor_tree_update(in, out);
      expect_same(out, expected);
      ++compared;
    }
  }
  EXPECT_GT(compared, 500);
}

TEST(ClassTree, SingleTemplateIsForcedOn) {
  std::vector<double> in{0.0, -3.0}, out(2);
  hcn::model::class_tree_update(in, 1, out);
  EXPECT_EQ(out[1], kInf);
}

TEST(ClassTree, TwoClassesDifferByEvidenceGap) {
  std::vector<double> in{0.0, 0.0, 3.0, 1.0}, out(4);
  hcn::model::class_tree_update(in, 1, out);
  // Binary class variables: belief(c1) is the best score with class 1 minus the best with class 2.
  EXPECT_NEAR(out[0], 2.0, 1e-12);
  EXPECT_NEAR(out[1], -2.0, 1e-12);
  const auto oracle = oracle_factor_update(FactorKind::ClassTree, in, 1);
  EXPECT_NEAR(oracle[0], 2.0, 1e-12);
}

TEST(ClassTree, ClampedLabelSilencesOtherClass) {
  // K = 2, J = 2: class 2 observed.
  std::vector<double> in{-kInf, kInf, 0.5, -0.7, 1.2, 0.1}, out(6);
  hcn::model::class_tree_update(in, 2, out);
  EXPECT_EQ(out[2], -kInf);
  EXPECT_EQ(out[3], -kInf);
  EXPECT_TRUE(std::isfinite(out[4]));
}

TEST(ClassTree, MatchesOracle) {
  std::mt19937_64 gen(23);
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t j = 1; j <= 3; ++j) {
      const std::size_t n = k + k * j;
      if (n > hcn::mp::kMaxOracleArity) continue;
      for (int rep = 0; rep < 100; ++rep) {
        const auto in = random_messages(gen, n, rep % 2 == 1);
        std::vector<double> expected;
        try {
          expected = oracle_factor_update(FactorKind::ClassTree, in, j);
        } catch (const IndeterminateForm&) {
          continue;
        }
        std::vector<double> out(n);
        hcn::model::class_tree_update(in, j, out);
        expect_same(out, expected);
      }
    }
  }
}
