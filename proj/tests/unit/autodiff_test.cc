// tests/unit/autodiff_test.cc

// Copyright 2026 The interp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "oracles.h"
#include "interp/autodiff/ops.h"
#include "interp/autodiff/tape.h"
#include "interp/errors.h"
#include "interp/random.h"

namespace interp::ad {
namespace {

using testing::RelativeError;

Tensor RandomTensor(Rng& rng, Shape shape, double lo = -2.0, double hi = 2.0) {
  std::vector<double> data(NumElements(shape));
  for (double& v : data) v = lo + (hi - lo) * rng.Uniform();
  return Tensor(std::move(shape), std::move(data));
}

void ExpectNear(const Tensor& actual, const Tensor& expected, double tol) {
  ASSERT_EQ(actual.shape(), expected.shape());
  for (std::size_t i = 0; i < actual.size(); ++i) {
    EXPECT_NEAR(actual[i], expected[i], tol) << "index " << i;
  }
}

TEST(Ops, MatMulByIdentity) {
  Tape tape;
  const Tensor a = Tensor::FromRows({{1, 2}, {3, 4}});
  const Var out = MatMul(tape.Constant(a), tape.Constant(Tensor::Identity(2)));
  EXPECT_EQ(out.value(), a);
}

TEST(Ops, Relu) {
  Tape tape;
  const Var out = Relu(tape.Constant(Tensor::Vector({-1, 0, 2})));
  EXPECT_EQ(out.value(), Tensor::Vector({0, 0, 2}));
}

TEST(Ops, Mean) {
  Tape tape;
  EXPECT_EQ(Mean(tape.Constant(Tensor::Vector({2, 4, 6}))).value().item(), 4.0);
}

TEST(Ops, ShapeMismatchNamesBothShapes) {
  Tape tape;
  const Var a = tape.Constant(Tensor::Zeros({2, 3}));
  const Var b = tape.Constant(Tensor::Zeros({3, 2}));
  try {
    Add(a, b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("[2, 3]"), std::string::npos);
    EXPECT_NE(what.find("[3, 2]"), std::string::npos);
  }
  EXPECT_THROW(MatMul(a, a), ShapeError);
}

TEST(Ops, ScalarBroadcast) {
  Tape tape;
  const Var x = tape.Constant(Tensor::FromRows({{1, 2}, {3, 4}}));
  const Var s = tape.Constant(Tensor::Scalar(10));
  EXPECT_EQ(Add(x, s).value(), Tensor::FromRows({{11, 12}, {13, 14}}));
  EXPECT_EQ(Mul(s, x).value(), Tensor::FromRows({{10, 20}, {30, 40}}));
}

TEST(Softmax, Symmetric) {
  Tape tape;
  const Var p = Softmax(tape.Constant(Tensor::Vector({0, 0})), 0);
  EXPECT_EQ(p.value(), Tensor::Vector({0.5, 0.5}));
}

TEST(Softmax, LargeLogitsDoNotOverflow) {
  Tape tape;
  const Var p = Softmax(tape.Constant(Tensor::Vector({1000, 0})), 0);
  EXPECT_TRUE(p.value().AllFinite());
  EXPECT_NEAR(p.value()[0], 1.0, 1e-12);
  EXPECT_NEAR(p.value()[1], 0.0, 1e-12);
}

TEST(Softmax, LogTwo) {
  Tape tape;
  const Var p = Softmax(tape.Constant(Tensor::Vector({std::log(2.0), 0})), 0);
  EXPECT_NEAR(p.value()[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.value()[1], 1.0 / 3.0, 1e-15);
}

TEST(Softmax, SlicesSumToOne) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Tape tape;
    const Tensor x = RandomTensor(rng, {4, 5}, -30, 30);
    for (std::size_t axis : {0, 1}) {
      const Tensor p = Softmax(tape.Constant(x), axis).value();
      const std::size_t outer = axis == 1 ? 4 : 5;
      const std::size_t inner = axis == 1 ? 5 : 4;
      for (std::size_t o = 0; o < outer; ++o) {
        double total = 0.0;
        for (std::size_t i = 0; i < inner; ++i) {
          const double v = axis == 1 ? p.at(o, i) : p.at(i, o);
          EXPECT_GT(v, 0.0);
          total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

TEST(CrossEntropy, Examples) {
  Tape tape;
  EXPECT_EQ(CrossEntropy(tape.Constant(Tensor::Vector({1.0, 0.0})), 0).value().item(), 0.0);
  EXPECT_NEAR(CrossEntropy(tape.Constant(Tensor::Vector({0.5, 0.5})), 1).value().item(),
              std::log(2.0), 1e-15);
  // log-sum-exp minus the target logit.
  const double expected = std::log(std::exp(2.0) + std::exp(1.0) + std::exp(0.0)) - 2.0;
  const Var p = Softmax(tape.Constant(Tensor::Vector({2, 1, 0})), 0);
  EXPECT_NEAR(CrossEntropy(p, 0).value().item(), expected, 1e-14);
}

TEST(CrossEntropy, NonNegative) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Tape tape;
    const Var p = Softmax(tape.Constant(RandomTensor(rng, {1, 4}, -50, 50)), 1);
    EXPECT_GE(CrossEntropy(p, rng.UniformInt(4)).value().item(), 0.0);
  }
}

TEST(CrossEntropy, IndexOutOfRange) {
  Tape tape;
  EXPECT_THROW(CrossEntropy(tape.Constant(Tensor::Vector({0.5, 0.5})), 2), IndexError);
}

TEST(GatherRows, FirstRow) {
  Tape tape;
  const Tensor e = Tensor::FromRows({{1, 2}, {3, 4}, {5, 6}});
  const std::vector<std::size_t> idx = {0};
  EXPECT_EQ(GatherRows(tape.Constant(e), idx).value(), Tensor::FromRows({{1, 2}}));
}

TEST(GatherRows, RepeatedIndexAccumulates) {
  const Tensor e = Tensor::FromRows({{1, 2}, {3, 4}, {5, 6}, {7, 8}});
  auto grad_for = [&](std::vector<std::size_t> idx) {
    Tape tape;
    const Var p = tape.Parameter(e);
    const Var loss = Sum(Tanh(GatherRows(p, idx)));
    return tape.Backward(loss).At(p);
  };
  const Tensor once = grad_for({3});
  const Tensor twice = grad_for({3, 3});
  for (std::size_t c = 0; c < 2; ++c) {
    EXPECT_EQ(twice.at(3, c), 2.0 * once.at(3, c));
    EXPECT_EQ(twice.at(0, c), 0.0);
  }
}

TEST(GatherRows, IndexOutOfRange) {
  Tape tape;
  const std::vector<std::size_t> idx = {0, 4};
  EXPECT_THROW(GatherRows(tape.Constant(Tensor::Zeros({4, 2})), idx), IndexError);
}

TEST(GatherRows, JacobianVectorProduct) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Tensor e = RandomTensor(rng, {6, 3});
    std::vector<std::size_t> idx(1 + rng.UniformInt(6));
    for (auto& i : idx) i = rng.UniformInt(6);
    const Tensor r = RandomTensor(rng, {idx.size(), 3});
    const Tensor v = RandomTensor(rng, {6, 3});
    auto loss_at = [&](double t) {
      Tape tape;
      Tensor shifted = e;
      for (std::size_t i = 0; i < e.size(); ++i) shifted[i] += t * v[i];
      return Sum(Mul(Tanh(GatherRows(tape.Constant(shifted), idx)), tape.Constant(r)))
          .value()
          .item();
    };
    Tape tape;
    const Var p = tape.Parameter(e);
    const Var loss = Sum(Mul(Tanh(GatherRows(p, idx)), tape.Constant(r)));
    const Tensor g = tape.Backward(loss).At(p);
    double analytic = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) analytic += g[i] * v[i];
    EXPECT_NEAR(analytic, testing::CentralDifference(loss_at, 0.0), 1e-6);
  }
}

TEST(Backward, MeanGivesOneOverN) {
  Tape tape;
  const Var x = tape.Parameter(Tensor::Vector({1, 2, 3, 4}));
  const Tensor g = tape.Backward(Mean(x)).At(x);
  EXPECT_EQ(g, Tensor::Filled({4}, 0.25));
}

TEST(Backward, LossGradientIsOne) {
  Tape tape;
  const Var x = tape.Parameter(Tensor::Vector({1, 2}));
  const Var loss = Sum(x);
  tape.Watch(loss);
  EXPECT_EQ(tape.Backward(loss).At(loss).item(), 1.0);
}

TEST(Backward, ConstantHasNoGradients) {
  Tape tape;
  const Var c = tape.Constant(Tensor::Scalar(3.0));
  const Gradients grads = tape.Backward(c);
  for (const auto& [id, g] : grads.entries()) {
    for (double v : g.data()) EXPECT_EQ(v, 0.0);
  }
  EXPECT_THROW(grads.At(c), IndexError);
}

TEST(Backward, UnreachedParameterGetsZeros) {
  Tape tape;
  const Var x = tape.Parameter(Tensor::Vector({1, 2}));
  const Var unused = tape.Parameter(Tensor::Vector({3, 4, 5}));
  const Gradients grads = tape.Backward(Sum(x));
  EXPECT_EQ(grads.At(unused), Tensor::Zeros({3}));
}

TEST(Backward, NonScalarLossIsContractError) {
  Tape tape;
  const Var x = tape.Parameter(Tensor::Vector({1, 2}));
  EXPECT_THROW(tape.Backward(Tanh(x)), ContractError);
}

TEST(Backward, ReusedTapeIsRejected) {
  Tape tape;
  const Var x = tape.Parameter(Tensor::Vector({1, 2}));
  const Var loss = Sum(x);
  tape.Backward(loss);
  EXPECT_TRUE(tape.consumed());
  EXPECT_THROW(tape.Backward(loss), TapeConsumedError);
}

TEST(Backward, HookSeesWatchedGradient) {
  Tape tape;
  const Var x = tape.Parameter(Tensor::FromRows({{0.5, -1.0}, {2.0, 0.25}}));
  const Var h = Tanh(MatMul(x, x));
  tape.Watch(h);
  Tensor captured;
  int calls = 0;
  tape.AddHook(h.id(), [&](const Tensor& g) {
    captured = g;
    ++calls;
  });
  const Gradients grads = tape.Backward(Sum(Mul(h, h)));
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(captured, grads.At(h));
}

TEST(Backward, RemovedHookDoesNotFire) {
  Tape tape;
  const Var x = tape.Parameter(Tensor::Vector({1, 2}));
  const Var h = Tanh(x);
  int calls = 0;
  const auto id = tape.AddHook(h.id(), [&](const Tensor&) { ++calls; });
  tape.RemoveHook(id);
  tape.Backward(Sum(h));
  EXPECT_EQ(calls, 0);
}

class OpGradient : public ::testing::TestWithParam<testing::OpCase> {};

TEST_P(OpGradient, MatchesCentralDifferences) {
  Rng rng(1234);
  double worst = 0.0;
  for (int point = 0; point < 100; ++point) {
    worst = std::max(worst, testing::OpMaxRelativeError(GetParam(), rng));
  }
  EXPECT_LT(worst, 1e-4) << GetParam().name;
}

INSTANTIATE_TEST_SUITE_P(AllOps, OpGradient, ::testing::ValuesIn(testing::AllOps()),
                         [](const auto& info) { return std::string(info.param.name); });

Tensor GradientOf(const Tensor& x, double a, double b) {
  Tape tape;
  const Var p = tape.Parameter(x);
  const Var w = tape.Constant(Tensor::FromRows({{0.3, -0.2}, {0.1, 0.7}, {-0.5, 0.4}}));
  const Var f = Sum(Tanh(MatMul(p, w)));
  const Var g = Mean(Mul(p, p));
  const Var loss = Add(Scale(f, a), Scale(g, b));
  return tape.Backward(loss).At(p);
}

TEST(Backward, Linearity) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor x = RandomTensor(rng, {2, 3});
    const double a = rng.Normal();
    const double b = rng.Normal();
    const Tensor combined = GradientOf(x, a, b);
    const Tensor fg = GradientOf(x, 1, 0);
    const Tensor gg = GradientOf(x, 0, 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(combined[i], a * fg[i] + b * gg[i], 1e-12);
    }
  }
}

TEST(Backward, Deterministic) {
  Rng rng(23);
  const Tensor x = RandomTensor(rng, {2, 3});
  EXPECT_EQ(GradientOf(x, 0.7, -1.3), GradientOf(x, 0.7, -1.3));
}

}  // namespace
}  // namespace interp::ad
