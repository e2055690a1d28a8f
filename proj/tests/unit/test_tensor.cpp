#include <gtest/gtest.h>

#include <random>

#include "hcn/model/bconv.hpp"
#include "hcn/model/pooling.hpp"
#include "hcn/model/tensor.hpp"

using hcn::model::BinaryTensor3;
using hcn::model::BinaryTensor4;
using hcn::model::bconv;

TEST(BitArray, SetGetCountAcrossWords) {
  hcn::model::BitArray b(130);
  b.set(0, true);
  b.set(63, true);
  b.set(64, true);
  b.set(129, true);
  EXPECT_EQ(b.count(), 4u);
  EXPECT_TRUE(b.get(63));
  EXPECT_FALSE(b.get(62));
  b.set(63, false);
  EXPECT_EQ(b.count(), 3u);
  b.fill(true);
  EXPECT_EQ(b.count(), 130u);
}

TEST(Tensor, IndexLayout) {
  BinaryTensor3 t(2, 3, 4);
  t.set(1, 2, 3, true);
  EXPECT_EQ(t.index(1, 2, 3), t.size() - 1);
  EXPECT_TRUE(t.at(t.size() - 1));

  BinaryTensor4 w(2, 3, 2, 2);
  EXPECT_EQ(w.index(1, 0, 0, 0), 3u * 2 * 2);
  w.set(1, 2, 1, 1, true);
  w.set(0, 2, 0, 0, true);
  w.set(0, 1, 0, 0, true);
  EXPECT_EQ(w.feature_count(2), 2u);
  EXPECT_EQ(w.feature_count(0), 0u);
}

TEST(Tensor, ThresholdIsStrict) {
  hcn::model::RealTensor3 b(1, 1, 3);
  b.data = {2.3, -0.1, 0.0};
  const BinaryTensor3 t = hcn::model::threshold(b);
  EXPECT_TRUE(t(0, 0, 0));
  EXPECT_FALSE(t(0, 0, 1));
  EXPECT_FALSE(t(0, 0, 2));
}

TEST(Bconv, ZeroSparsificationGivesZero) {
  BinaryTensor3 s(2, 4, 4);
  BinaryTensor4 w(1, 2, 3, 3);
  w.set(0, 0, 1, 1, true);
  const BinaryTensor3 r = bconv(s, w);
  EXPECT_EQ(r.rows(), 6u);
  EXPECT_EQ(r.cols(), 6u);
  EXPECT_EQ(r.count(), 0u);
}

TEST(Bconv, IdentityKernel) {
  std::mt19937_64 gen(3);
  BinaryTensor3 s(1, 5, 7);
  for (std::size_t i = 0; i < s.size(); ++i) s.set(i, gen() % 2);
  BinaryTensor4 w(1, 1, 1, 1);
  w.set(0, 0, 0, 0, true);
  EXPECT_EQ(bconv(s, w), s);
}

TEST(Bconv, OverlapSaturates) {
  BinaryTensor3 s(1, 2, 2);
  s.set(0, 0, 0, true);
  s.set(0, 1, 1, true);
  BinaryTensor4 w(1, 1, 2, 2);
  for (std::size_t i = 0; i < w.size(); ++i) w.set(i, true);
  const BinaryTensor3 r = bconv(s, w);
  ASSERT_EQ(r.rows(), 3u);
  ASSERT_EQ(r.cols(), 3u);
  // sum: [[1,1,0],[1,2,1],[0,1,1]]
  const int expect[3][3] = {{1, 1, 0}, {1, 1, 1}, {0, 1, 1}};
  for (std::size_t r_ = 0; r_ < 3; ++r_)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(r(0, r_, c), expect[r_][c] == 1) << r_ << "," << c;
}

TEST(Bconv, TopLeftPlacementAndChannels) {
  BinaryTensor3 s(1, 3, 3);
  s.set(0, 2, 1, true);
  BinaryTensor4 w(2, 1, 2, 2);
  w.set(0, 0, 0, 1, true);
  w.set(1, 0, 1, 0, true);
  const BinaryTensor3 r = bconv(s, w);
  ASSERT_EQ(r.features(), 2u);
  EXPECT_EQ(r.count(), 2u);
  EXPECT_TRUE(r(0, 2, 2));
  EXPECT_TRUE(r(1, 3, 1));
}

TEST(Bconv, Monotone) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    BinaryTensor3 s(2, 4, 4);
    BinaryTensor4 w(1, 2, 3, 3);
    for (std::size_t i = 0; i < s.size(); ++i) s.set(i, gen() % 4 == 0);
    for (std::size_t i = 0; i < w.size(); ++i) w.set(i, gen() % 2);
    const BinaryTensor3 before = bconv(s, w);
    s.set(gen() % s.size(), true);
    const BinaryTensor3 after = bconv(s, w);
    for (std::size_t i = 0; i < before.size(); ++i)
      if (before.at(i)) EXPECT_TRUE(after.at(i));
  }
}

TEST(Bconv, FeatureMismatchThrows) {
  EXPECT_THROW(bconv(BinaryTensor3(2, 3, 3), BinaryTensor4(1, 3, 2, 2)), hcn::model::ShapeError);
}

TEST(Pooling, OneByOneIsIdentity) {
  const auto m = hcn::model::pooling_connectivity({2, 3, 3}, 1, 1);
  ASSERT_EQ(m.num_links(), 18u);
  for (std::size_t i = 0; i < 18; ++i) {
    EXPECT_EQ(m.pool_size(i), 1u);
    EXPECT_EQ(m.link_target[m.source_begin[i]], i);
    EXPECT_EQ(m.or_size(i), 1u);
  }
}

TEST(Pooling, BorderArity) {
  const auto m = hcn::model::pooling_connectivity({1, 5, 5}, 3, 3);
  EXPECT_EQ(m.pool_size(2 * 5 + 2), 9u);
  EXPECT_EQ(m.pool_size(0), 4u);
  EXPECT_EQ(m.pool_size(2), 6u);
  EXPECT_EQ(m.or_size(0), 4u);
  EXPECT_EQ(m.or_size(12), 9u);
}

TEST(Pooling, SharedTargetCollectsInWindowSources) {
  const auto m = hcn::model::pooling_connectivity({1, 1, 4}, 1, 3);
  // cell 1 is reachable from sources 0, 1, 2
  EXPECT_EQ(m.or_size(1), 3u);
  EXPECT_EQ(m.or_size(0), 2u);
  for (std::size_t k = m.target_begin[1]; k < m.target_begin[2]; ++k)
    EXPECT_EQ(m.link_target[m.target_link[k]], 1u);
}

TEST(Pooling, ShiftCodes) {
  const auto m = hcn::model::pooling_connectivity({1, 3, 3}, 3, 3);
  const std::size_t centre = 4;
  for (std::size_t k = m.source_begin[centre]; k < m.source_begin[centre + 1]; ++k) {
    const int dr = m.link_shift[k] / 3 - 1, dc = m.link_shift[k] % 3 - 1;
    EXPECT_EQ(m.link_target[k], static_cast<std::uint32_t>((1 + dr) * 3 + 1 + dc));
  }
  EXPECT_EQ(m.center_shift(), 4);
}

TEST(Pooling, EvenPoolThrows) {
  EXPECT_THROW(hcn::model::pooling_connectivity({1, 3, 3}, 2, 3), hcn::model::ShapeError);
}
