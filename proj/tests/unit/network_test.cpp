#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "reluinv/errors.hpp"
#include "reluinv/instance_lab.hpp"
#include "reluinv/network.hpp"
#include "test_oracles.hpp"
#include "test_util.hpp"

namespace reluinv {
namespace {

using test::scalar;
using test::vec;

Network single_relu() {
  Layer hidden{Matrix::Ones(1, 1), Vector::Zero(1), Activation::Relu};
  Layer out{Matrix::Ones(1, 1), Vector::Zero(1), Activation::Linear};
  return Network(1, {hidden, out});
}

std::vector<bool> bits(const ActivationPattern& p) {
  std::vector<bool> b(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) b[j] = p.is_active(j);
  return b;
}

TEST(Forward, SingleNeuronClampsNegative) {
  const ForwardResult r = forward(single_relu(), scalar(-2.0));
  EXPECT_EQ(r.trace.pre[0][0], -2.0);
  EXPECT_EQ(r.trace.post[0][0], 0.0);
  EXPECT_EQ(r.output[0], 0.0);
}

TEST(Forward, SingleNeuronPassesPositive) {
  const ForwardResult r = forward(single_relu(), scalar(3.0));
  EXPECT_EQ(r.trace.post[0][0], 3.0);
  EXPECT_EQ(r.output[0], 3.0);
}

TEST(Forward, ToyNetworkAtTwoAndHalf) {
  EXPECT_DOUBLE_EQ(forward(toy_network_1d(), scalar(2.5)).output[0], 0.5);
}

TEST(Forward, ToyNetworkMatchesClosedFormOnGrid) {
  const Network net = toy_network_1d();
  for (int i = 0; i <= 5000; ++i) {
    const double x = 5.0 * i / 5000.0;
    ASSERT_NEAR(forward(net, scalar(x)).output[0], oracle::toy_f(x), 1e-12) << "x=" << x;
  }
  EXPECT_EQ(forward(net, scalar(0.0)).output[0], 0.0);
  EXPECT_EQ(forward(net, scalar(2.0)).output[0], 1.0);
  EXPECT_EQ(forward(net, scalar(3.0)).output[0], 0.0);
  EXPECT_EQ(forward(net, scalar(4.0)).output[0], 1.0);
}

TEST(Forward, TraceInvariantsOnRandomNets) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Network net = oracle::random_network({3, 8, 6, 2}, rng);
    const Vector x = oracle::uniform_box(rng, Vector::Constant(3, -2.0), Vector::Constant(3, 2.0));
    const ForwardResult r = forward(net, x);
    for (std::size_t l = 0; l + 1 < net.layer_count(); ++l) {
      for (Eigen::Index i = 0; i < r.trace.pre[l].size(); ++i) {
        const double a = r.trace.pre[l][i];
        const double t = r.trace.post[l][i];
        EXPECT_EQ(t, std::max(0.0, a));
        EXPECT_EQ(t * (t - a), 0.0);
      }
    }
    EXPECT_LT((r.output - oracle::output(net, x)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Forward, RejectsWrongDimension) {
  EXPECT_THROW(forward(toy_network_1d(), vec({1.0, 2.0})), InvalidInput);
}

TEST(NetworkConstruction, RejectsMismatchedLayers) {
  Layer a{Matrix::Ones(3, 2), Vector::Zero(3), Activation::Relu};
  Layer b{Matrix::Ones(1, 4), Vector::Zero(1), Activation::Linear};
  EXPECT_THROW(Network(2, {a, b}), InvalidInput);
}

TEST(NetworkConstruction, RejectsReluOutput) {
  Layer a{Matrix::Ones(1, 2), Vector::Zero(1), Activation::Relu};
  EXPECT_THROW(Network(2, {a}), InvalidInput);
}

TEST(NetworkConstruction, RejectsNonFinite) {
  Layer a{Matrix::Ones(1, 1), Vector::Zero(1), Activation::Relu};
  a.weights(0, 0) = std::numeric_limits<double>::quiet_NaN();
  Layer b{Matrix::Ones(1, 1), Vector::Zero(1), Activation::Linear};
  EXPECT_THROW(Network(1, {a, b}), InvalidInput);
}

TEST(NetworkConstruction, NeuronIndicesIncreaseWithDepth) {
  std::mt19937_64 rng(3);
  const Network net = oracle::random_network({2, 4, 3, 1}, rng);
  EXPECT_EQ(net.relu_count(), 7u);
  EXPECT_EQ(net.relu_offset(0), 0u);
  EXPECT_EQ(net.relu_offset(1), 4u);
  EXPECT_LT(net.neuron_offset(0), net.neuron_offset(1));
  EXPECT_LT(net.neuron_offset(1), net.neuron_offset(2));
  EXPECT_EQ(net.locate_relu(5).layer, 1u);
  EXPECT_EQ(net.locate_relu(5).row, 1u);
}

TEST(Loss, IdentityNetworkZeroResidual) {
  Layer id{Matrix::Identity(3, 3), Vector::Zero(3), Activation::Linear};
  const Network net(3, {id});
  const Vector x = vec({0.3, -1.0, 2.0});
  const LossGradient lg = loss_and_gradient(net, LossSpec{x}, x);
  EXPECT_EQ(lg.value, 0.0);
  EXPECT_EQ(lg.gradient.norm(), 0.0);
}

TEST(Loss, ToyNetworkValueAndGradient) {
  const Network net = toy_network_1d();
  const LossSpec loss{scalar(0.0)};
  const LossGradient lg = loss_and_gradient(net, loss, scalar(2.5));
  EXPECT_DOUBLE_EQ(lg.value, 0.25);
  EXPECT_DOUBLE_EQ(lg.gradient[0], -1.0);
  const Vector fd = oracle::fd_gradient(
      [&](const Vector& x) { return oracle::loss(net, loss.target, x); }, scalar(2.5), 1e-6);
  EXPECT_NEAR(lg.gradient[0], fd[0], 1e-4 * std::max(1.0, std::abs(fd[0])));
}

TEST(Loss, GradientMatchesFiniteDifferencesOnRandomNets) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Network net = oracle::random_network({4, 12, 10, 3}, rng);
    const Vector x = oracle::uniform_box(rng, Vector::Constant(4, -1.0), Vector::Constant(4, 1.0));
    if (!pattern_of(net, x, 1e-6).boundary.empty()) continue;
    const Vector t = oracle::uniform_box(rng, Vector::Zero(3), Vector::Ones(3));
    const LossGradient lg = loss_and_gradient(net, LossSpec{t}, x);
    const Vector fd = oracle::fd_gradient(
        [&](const Vector& u) { return oracle::loss(net, t, u); }, x, 1e-6);
    const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
    EXPECT_LE((lg.gradient - fd).cwiseAbs().maxCoeff() / scale, 1e-4);
    EXPECT_NEAR(lg.value, oracle::loss(net, t, x), 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(Loss, ZeroPreactivationTreatedInactive) {
  // at x = 1 the first hidden neuron has a = 0 exactly
  const Network net = toy_network_1d();
  const LossGradient lg = loss_and_gradient(net, LossSpec{scalar(-1.0)}, scalar(1.0));
  EXPECT_EQ(lg.gradient[0], 0.0);
}

TEST(Loss, NonNegativeAndZeroOnlyAtTarget) {
  std::mt19937_64 rng(9);
  const Network net = oracle::random_network({2, 5, 2}, rng);
  for (int i = 0; i < 100; ++i) {
    const Vector x = oracle::uniform_box(rng, Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
    const Vector y = forward(net, x).output;
    const LossSpec other{y + Vector::Constant(2, 0.1)};
    EXPECT_GT(other.value(y), 0.0);
    EXPECT_EQ(LossSpec{y}.value(y), 0.0);
  }
}

TEST(GradientInPattern, EqualsTraceGradientInInterior) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = oracle::random_network({3, 7, 5, 2}, rng);
    const Vector x = oracle::uniform_box(rng, Vector::Constant(3, -1.0), Vector::Constant(3, 1.0));
    const PatternAndBoundary pb = pattern_of(net, x);
    if (!pb.boundary.empty()) continue;
    const LossSpec loss{Vector::Constant(2, 0.2)};
    EXPECT_EQ(gradient_in_pattern(net, loss, x, pb.pattern), loss_and_gradient(net, loss, x).gradient);
  }
}

TEST(GradientInPattern, OneSidedSlopesAtKnots) {
  const Network net = toy_network_1d();
  const LossSpec loss{scalar(0.0)};
  const ActivationPattern left = pattern_of(net, scalar(1.5)).pattern;   // (1,2)
  const ActivationPattern right = pattern_of(net, scalar(2.5)).pattern;  // (2,3)
  // x = 2, f = 1: g = f^2 has slope 2 f f'
  EXPECT_DOUBLE_EQ(gradient_in_pattern(net, loss, scalar(2.0), left)[0], 2.0);
  EXPECT_DOUBLE_EQ(gradient_in_pattern(net, loss, scalar(2.0), right)[0], -2.0);
  auto g = [&](const Vector& u) { return oracle::loss(net, loss.target, u); };
  const double h = 1e-6;
  EXPECT_NEAR((g(scalar(2.0)) - g(scalar(2.0 - h))) / h, 2.0, 1e-4);
  EXPECT_NEAR((g(scalar(2.0 + h)) - g(scalar(2.0))) / h, -2.0, 1e-4);
  // x = 3, f = 0: both one-sided slopes vanish
  const ActivationPattern p34 = pattern_of(net, scalar(3.5)).pattern;
  EXPECT_EQ(gradient_in_pattern(net, loss, scalar(3.0), right)[0], 0.0);
  EXPECT_EQ(gradient_in_pattern(net, loss, scalar(3.0), p34)[0], 0.0);
}

TEST(GradientInPattern, AllInactiveSingleHiddenLayerIsFlat) {
  std::mt19937_64 rng(2);
  const Network net = oracle::random_network({3, 6, 2}, rng);
  const ActivationPattern none(net.relu_count());
  const Vector x = vec({0.1, 0.2, 0.3});
  EXPECT_EQ(gradient_in_pattern(net, LossSpec{vec({5.0, -5.0})}, x, none).norm(), 0.0);
}

TEST(PatternOf, ToyInteriorPoint) {
  const PatternAndBoundary pb = pattern_of(toy_network_1d(), scalar(2.5), 1e-6);
  EXPECT_EQ(pb.pattern.active_neurons(), (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(pb.boundary.empty());
}

TEST(PatternOf, ToyKnot) {
  const PatternAndBoundary pb = pattern_of(toy_network_1d(), scalar(3.0), 1e-6);
  EXPECT_EQ(pb.boundary.neurons, (std::vector<std::size_t>{2}));
  EXPECT_FALSE(pb.pattern.is_active(2));
}

TEST(PatternOf, MembershipFollowsTolerance) {
  std::mt19937_64 rng(8);
  const Network net = oracle::random_network({2, 10, 10, 1}, rng);
  for (int i = 0; i < 500; ++i) {
    const Vector x = oracle::uniform_box(rng, Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
    const std::vector<double> pre = oracle::relu_preactivations(net, x);
    for (double tau : {0.0, 1e-6, 0.3}) {
      const PatternAndBoundary pb = pattern_of(net, x, tau);
      for (std::size_t j = 0; j < pre.size(); ++j) {
        EXPECT_EQ(pb.pattern.is_active(j), pre[j] > tau);
        EXPECT_EQ(pb.boundary.contains(j), std::abs(pre[j]) <= tau);
      }
      if (tau == 0.0) EXPECT_TRUE(pb.boundary.empty());
    }
  }
}

TEST(PatternOf, EqualSignVectorsGiveEqualPatterns) {
  std::mt19937_64 rng(17);
  const Network net = oracle::random_network({2, 6, 6, 1}, rng);
  for (int i = 0; i < 300; ++i) {
    const Vector a = oracle::uniform_box(rng, Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
    const Vector b = oracle::uniform_box(rng, Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
    if (oracle::sign_pattern(net, a) == oracle::sign_pattern(net, b)) {
      EXPECT_EQ(pattern_of(net, a, 0.0).pattern, pattern_of(net, b, 0.0).pattern);
    }
  }
}

TEST(ActivationPatternType, EqualityHashAndText) {
  const std::vector<std::size_t> act = {1, 3};
  const ActivationPattern p = ActivationPattern::from_active(4, act);
  ActivationPattern q(4);
  q.set(3, true);
  q.set(1, true);
  EXPECT_EQ(p, q);
  EXPECT_EQ(ActivationPatternHash{}(p), ActivationPatternHash{}(q));
  EXPECT_EQ(p.to_string(), "0101");
  EXPECT_EQ(p.active_count(), 2u);
  q.set(0, true);
  EXPECT_FALSE(p == q);
}

TEST(MaskedAffine, FirstLayerIgnoresPattern) {
  std::mt19937_64 rng(4);
  const Network net = oracle::random_network({3, 4, 4, 1}, rng);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 20; ++t) {
    ActivationPattern p(net.relu_count());
    for (std::size_t j = 0; j < p.size(); ++j) p.set(j, coin(rng));
    for (std::size_t j = 0; j < 4; ++j) {
      const AffineForm f = masked_affine(net, p, j);
      EXPECT_EQ(f.row, Vector(net.layer(0).weights.row(static_cast<Eigen::Index>(j)).transpose()));
      EXPECT_EQ(f.offset, net.layer(0).bias[static_cast<Eigen::Index>(j)]);
    }
  }
}

TEST(MaskedAffine, AllActiveTwoLayerComposition) {
  std::mt19937_64 rng(6);
  const Network net = oracle::random_network({3, 4, 5, 1}, rng);
  ActivationPattern all(net.relu_count());
  for (std::size_t j = 0; j < all.size(); ++j) all.set(j, true);
  const Matrix w = net.layer(1).weights * net.layer(0).weights;
  const Vector b = net.layer(1).weights * net.layer(0).bias + net.layer(1).bias;
  for (std::size_t i = 0; i < 5; ++i) {
    const AffineForm f = masked_affine(net, all, 4 + i);
    const auto ii = static_cast<Eigen::Index>(i);
    EXPECT_LT((f.row - w.row(ii).transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(f.offset, b[ii], 1e-12);
  }
}

TEST(MaskedAffine, AgreesWithMaskedForwardOracle) {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 300; ++t) {
    const Network net = oracle::random_network({2, 3, 2, 1}, rng);
    ActivationPattern p(net.relu_count());
    for (std::size_t j = 0; j < p.size(); ++j) p.set(j, coin(rng));
    const Vector x = oracle::uniform_box(rng, Vector::Constant(2, -3.0), Vector::Constant(2, 3.0));
    const std::vector<bool> mask = bits(p);
    const std::vector<double> pre = oracle::relu_preactivations(net, x, &mask);
    const std::vector<AffineForm> all = masked_affine_all(net, p);
    for (std::size_t j = 0; j < net.relu_count(); ++j) {
      EXPECT_NEAR(masked_affine(net, p, j).evaluate(x), pre[j], 1e-10);
      EXPECT_NEAR(all[j].evaluate(x), pre[j], 1e-10);
    }
    const std::vector<AffineForm> out = masked_output_affine(net, p);
    EXPECT_NEAR(out[0].evaluate(x), oracle::output(net, x, &mask)[0], 1e-10);
  }
}

TEST(MaskedAffine, OutputFormReproducesForward) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const Network net = oracle::random_network({3, 6, 4, 2}, rng);
    const Vector x = oracle::uniform_box(rng, Vector::Constant(3, -1.0), Vector::Constant(3, 1.0));
    const PatternAndBoundary pb = pattern_of(net, x);
    if (!pb.boundary.empty()) continue;
    const std::vector<AffineForm> out = masked_output_affine(net, pb.pattern);
    const Vector y = forward(net, x).output;
    for (std::size_t o = 0; o < out.size(); ++o) {
      EXPECT_NEAR(out[o].evaluate(x), y[static_cast<Eigen::Index>(o)], 1e-10);
    }
  }
}

TEST(ForwardInPattern, MatchesForwardInsideAndExtendsOutside) {
  const Network net = toy_network_1d();
  const ActivationPattern p23 = pattern_of(net, scalar(2.5)).pattern;
  EXPECT_DOUBLE_EQ(forward_in_pattern(net, scalar(2.7), p23).output[0], forward(net, scalar(2.7)).output[0]);
  // the (2,3) piece is 3 - x; its extension at 3.5 gives -0.5
  EXPECT_DOUBLE_EQ(forward_in_pattern(net, scalar(3.5), p23).output[0], -0.5);
}

}  // namespace
}  // namespace reluinv
