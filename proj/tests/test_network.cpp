#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "reluapprox/builder.hpp"
#include "reluapprox/error.hpp"
#include "reluapprox/network.hpp"
#include "reluapprox/serialize.hpp"
#include "test_util.hpp"

namespace reluapprox {
namespace {

using testing::identity_net;
using testing::random_net;

NetworkGraph shifted_relu(double shift) {
  Layer l;
  l.units.push_back({{{{NodeRef::input(0), 1.0}}, -shift}});
  return NetworkGraph(1, {l}, {LinearForm{{{NodeRef{0, 0}, 1.0}}, 0.0}});
}

NetworkGraph scaling_net(double factor) {
  return NetworkGraph(1, {}, {LinearForm{{{NodeRef::input(0), factor}}, 0.0}});
}

// Stack of `depth` identity layers carrying x through s(x), s(-x) pairs.
NetworkGraph deep_identity(int depth) {
  NetworkGraph net = identity_net();
  for (int i = 1; i < depth; ++i) net = compose(identity_net(), net);
  return net;
}

double eval1(const NetworkGraph& net, double x, int output = 0) {
  const double p[] = {x};
  return net.evaluate_scalar(p, output);
}

TEST(Evaluate, SingleUnitPositiveBranch) { EXPECT_EQ(eval1(shifted_relu(1.0), 3.0), 2.0); }

TEST(Evaluate, SingleUnitNegativeBranch) { EXPECT_EQ(eval1(shifted_relu(1.0), 0.0), 0.0); }

TEST(Evaluate, IdentityFromTwoUnits) { EXPECT_EQ(eval1(identity_net(), -2.5), -2.5); }

TEST(Evaluate, DimensionMismatchThrows) {
  const double p[] = {1.0, 2.0};
  EXPECT_THROW(identity_net().evaluate(p), InputError);
}

TEST(Evaluate, ForwardReferenceRejected) {
  Layer l0, l1;
  l0.units.push_back({{{{NodeRef{1, 0}, 1.0}}, 0.0}});
  l1.units.push_back({{{{NodeRef::input(0), 1.0}}, 0.0}});
  EXPECT_THROW(NetworkGraph(1, {l0, l1}, {LinearForm{}}), ConstructionError);
}

TEST(Evaluate, SameLayerReferenceRejected) {
  Layer l0;
  l0.units.push_back({{{{NodeRef::input(0), 1.0}}, 0.0}});
  l0.units.push_back({{{{NodeRef{0, 0}, 1.0}}, 0.0}});
  EXPECT_THROW(NetworkGraph(1, {l0}, {LinearForm{}}), ConstructionError);
}

TEST(Evaluate, SkipConnectionAllowed) {
  Layer l0, l1;
  l0.units.push_back({{{{NodeRef::input(0), 1.0}}, 0.0}});
  l1.units.push_back({{{{NodeRef{0, 0}, 2.0}, {NodeRef::input(0), 1.0}}, 0.0}});
  const NetworkGraph net(1, {l0, l1},
                         {LinearForm{{{NodeRef{1, 0}, 1.0}, {NodeRef{0, 0}, 1.0}}, 0.5}});
  // s(2 s(x) + x) + s(x) + 0.5 at x = 2: 6 + 2 + 0.5
  EXPECT_EQ(eval1(net, 2.0), 8.5);
}

TEST(Compose, IdentityTwice) {
  const NetworkGraph net = compose(identity_net(), identity_net());
  EXPECT_EQ(eval1(net, 1.0), 1.0);
  EXPECT_EQ(net.depth(), 2);
  EXPECT_EQ(net.size(), 4);
}

TEST(Compose, ShiftAfterScaling) {
  EXPECT_EQ(eval1(compose(shifted_relu(1.0), scaling_net(2.0)), 1.0), 1.0);
}

TEST(Compose, ArityMismatchThrows) {
  Rng rng(3);
  const NetworkGraph two_out = random_net(rng, 1, 2, 3, false, 2);
  EXPECT_THROW(compose(identity_net(), two_out), ConstructionError);
}

TEST(Parallel, IdentityPair) {
  const std::vector<NetworkGraph> nets{identity_net(), identity_net()};
  const double p[] = {3.0};
  EXPECT_EQ(parallel(nets).evaluate(p), (std::vector<double>{3.0, 3.0}));
}

TEST(Parallel, DepthIsMaxSizeIsSum) {
  const std::vector<NetworkGraph> nets{deep_identity(2), deep_identity(5)};
  EXPECT_EQ(parallel(nets).depth(), 5);
  const std::vector<NetworkGraph> sized{deep_identity(2), deep_identity(3)};
  EXPECT_EQ(sized[0].size(), 4);
  EXPECT_EQ(sized[1].size(), 6);
  EXPECT_EQ(parallel(sized).size(), 10);
}

TEST(LinearCombine, AffineOfIdentity) {
  const std::vector<NetworkGraph> nets{identity_net()};
  const double c[] = {2.0};
  EXPECT_EQ(eval1(linear_combine(nets, c, 1.0), 3.0), 7.0);
}

TEST(LinearCombine, Cancellation) {
  const std::vector<NetworkGraph> nets{identity_net(), identity_net()};
  const double c[] = {1.0, -1.0};
  const NetworkGraph net = linear_combine(nets, c, 0.0);
  for (double x : {-3.25, -1.0, 0.0, 0.7, 12.5}) EXPECT_EQ(eval1(net, x), 0.0);
  EXPECT_EQ(net.size(), 4);
}

TEST(LinearCombine, RejectsVectorValuedNets) {
  Rng rng(5);
  const std::vector<NetworkGraph> nets{random_net(rng, 1, 2, 2, false, 2)};
  const double c[] = {1.0};
  EXPECT_THROW(linear_combine(nets, c, 0.0), ConstructionError);
}

TEST(PrecomposeAffine, HalfScaling) {
  const double A[] = {0.5};
  const double b[] = {0.0};
  EXPECT_EQ(eval1(precompose_affine(identity_net(), A, b, 1), 4.0), 2.0);
}

TEST(PrecomposeAffine, DotProduct) {
  const NetworkGraph net = shifted_relu(-0.25);
  const double A[] = {0.75, -2.0};
  const double b[] = {0.0};
  const NetworkGraph pre = precompose_affine(net, A, b, 2);
  const double x[] = {1.0, 1.0};
  EXPECT_EQ(pre.evaluate_scalar(x), eval1(net, 0.75 - 2.0));
  EXPECT_EQ(pre.depth(), net.depth());
  EXPECT_EQ(pre.size(), net.size());
}

// Depth/size arithmetic and evaluation identities on random graphs.
class RandomGraphs : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(RandomGraphs, CombinatorBookkeeping) {
  Rng rng(GetParam());
  const NetworkGraph a = random_net(rng, 2, 1 + rng.next_u64() % 4, 4, false);
  const NetworkGraph b = random_net(rng, 2, 1 + rng.next_u64() % 4, 4, false);
  const NetworkGraph inner = random_net(rng, 2, 1 + rng.next_u64() % 3, 3, false, 2);
  const std::vector<NetworkGraph> ab{a, b};
  const double coeffs[] = {0.5, -1.25};

  const NetworkGraph c = compose(a, inner);
  EXPECT_EQ(c.depth(), a.depth() + inner.depth());
  EXPECT_EQ(c.size(), a.size() + inner.size());

  const NetworkGraph p = parallel(ab);
  EXPECT_EQ(p.depth(), std::max(a.depth(), b.depth()));
  EXPECT_EQ(p.size(), a.size() + b.size());

  const NetworkGraph l = linear_combine(ab, coeffs, 0.125);
  EXPECT_EQ(l.depth(), p.depth());
  EXPECT_EQ(l.size(), p.size());

  const double A[] = {1.0, -0.5, 0.25, 2.0};
  const double shift[] = {0.1, -0.2};
  const NetworkGraph pre = precompose_affine(a, A, shift, 2);
  EXPECT_EQ(pre.depth(), a.depth());
  EXPECT_EQ(pre.size(), a.size());

  for (int t = 0; t < 20; ++t) {
    const double x[] = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const auto mid = inner.evaluate(x);
    EXPECT_NEAR(c.evaluate_scalar(x), a.evaluate_scalar(mid), 1e-12);
    const auto both = p.evaluate(x);
    EXPECT_EQ(both[0], a.evaluate_scalar(x));
    EXPECT_EQ(both[1], b.evaluate_scalar(x));
    EXPECT_NEAR(l.evaluate_scalar(x),
                0.125 + 0.5 * a.evaluate_scalar(x) - 1.25 * b.evaluate_scalar(x), 1e-12);
    const double y[] = {x[0] - 0.5 * x[1] + 0.1, 0.25 * x[0] + 2.0 * x[1] - 0.2};
    EXPECT_NEAR(pre.evaluate_scalar(x), a.evaluate_scalar(y), 1e-12);
  }
}

TEST_P(RandomGraphs, PositiveHomogeneityWithoutBias) {
  Rng rng(GetParam() + 1000);
  const NetworkGraph net = random_net(rng, 3, 1 + rng.next_u64() % 5, 5, true, 2);
  for (int t = 0; t < 20; ++t) {
    const double x[] = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    // Powers of two keep the scaling exact in floating point.
    for (double lambda : {0.25, 2.0, 8.0}) {
      const double y[] = {lambda * x[0], lambda * x[1], lambda * x[2]};
      const auto fx = net.evaluate(x);
      const auto fy = net.evaluate(y);
      for (std::size_t o = 0; o < fx.size(); ++o) EXPECT_EQ(fy[o], lambda * fx[o]);
    }
    const double lambda = rng.uniform(0.1, 10.0);
    const double y[] = {lambda * x[0], lambda * x[1], lambda * x[2]};
    EXPECT_NEAR(net.evaluate_scalar(y), lambda * net.evaluate_scalar(x),
                1e-12 * (1.0 + lambda));
  }
}

TEST_P(RandomGraphs, JsonRoundTripIsBitExact) {
  Rng rng(GetParam() + 2000);
  const NetworkGraph net = random_net(rng, 2, 1 + rng.next_u64() % 5, 4, false, 2);
  const NetworkGraph back = network_from_json(network_to_json(net));
  EXPECT_EQ(back.depth(), net.depth());
  EXPECT_EQ(back.size(), net.size());
  EXPECT_EQ(network_to_json(back), network_to_json(net));
  for (int t = 0; t < 10; ++t) {
    const double x[] = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
    EXPECT_EQ(back.evaluate(x), net.evaluate(x));
  }
}

TEST_P(RandomGraphs, BatchMatchesPointwise) {
  Rng rng(GetParam() + 3000);
  const NetworkGraph net = random_net(rng, 2, 3, 4, false, 2);
  std::vector<double> pts;
  for (int i = 0; i < 16; ++i) pts.push_back(rng.uniform(-1, 1));
  const auto batch = net.evaluate_batch(pts, 1);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    EXPECT_EQ(batch[i], net.evaluate_scalar(std::span(pts).subspan(2 * i, 2), 1));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomGraphs, ::testing::Range<std::uint64_t>(1, 26));

TEST(Serialize, SingleOutputObjectAccepted) {
  const char* text = R"({"input_dim": 1, "layers": [[{"weights": [{"layer": -1, "unit": 0, "coeff": 1}], "bias": -1}]],
                         "output": {"weights": [{"layer": 0, "unit": 0, "coeff": 2}], "bias": 0.5}})";
  const NetworkGraph net = network_from_json(text);
  EXPECT_EQ(eval1(net, 3.0), 4.5);
}

TEST(Serialize, MalformedDocumentThrows) {
  EXPECT_THROW(network_from_json("{\"layers\": 3}"), FormatError);
  EXPECT_THROW(network_from_json("not json"), FormatError);
}

TEST(Builder, InterleavedDifferenceCancelsExactly) {
  NetworkBuilder b(1);
  const LinearForm x = b.input(0);
  const LinearForm p = b.relu(scaled(x, 0.1));
  const LinearForm q = b.relu(scaled(x, 0.1));
  const LinearForm diff =
      interleaved_difference(add(p, x, 0.3), add(q, x, 0.3), 1.7);
  const NetworkGraph net = std::move(b).finish({diff});
  for (double v : {-0.3, 0.1, 0.7, 1e10}) EXPECT_EQ(eval1(net, v), 0.0);
}

TEST(Builder, NormalizedMergesRepeatedSources) {
  LinearForm f{{{NodeRef::input(0), 1.0}, {NodeRef::input(1), 2.0}, {NodeRef::input(0), -1.0}},
               0.5};
  const LinearForm n = normalized(f);
  ASSERT_EQ(n.terms.size(), 1u);
  EXPECT_EQ(n.terms[0].source, NodeRef::input(1));
  EXPECT_EQ(n.bias, 0.5);
}

}  // namespace
}  // namespace reluapprox
