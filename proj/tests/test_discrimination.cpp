#include <doctest.h>

#include "core/discrimination.hpp"
#include "core/memcert.hpp"
#include "helpers.hpp"

using namespace combforge;
using namespace combforge::testing;

namespace {

Instrument binary_povm_tester(const Mat& p0, const CombSignature& sig) {
  Mat p1 = Mat::Identity(p0.rows(), p0.cols()) - p0;
  std::vector<LabeledOperator> povm{
      LabeledOperator({qw("1", static_cast<int>(p0.rows()))}, p0),
      LabeledOperator({qw("1", static_cast<int>(p0.rows()))}, p1)};
  return povm_tester(povm, sig);
}

}  // namespace

TEST_CASE("error_prob: equal combs, orthogonal states, oracle check") {
  Rng rng(3);
  Mat rho = random_density(rng, 2);
  CombValue s = state_comb(rho);
  auto tester = binary_povm_tester(Mat(rng.haar_unitary(2).col(0) * rng.haar_unitary(2).col(0).adjoint()),
                                   s.sig);
  CHECK(error_prob(s, s, tester) == doctest::Approx(0.5).epsilon(1e-10));

  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CombValue s0 = state_comb(p0), s1 = state_comb(p1);
  auto proj = binary_povm_tester(p0, s0.sig);
  CHECK(error_prob(s0, s1, proj) == doctest::Approx(0.0).epsilon(1e-12));

  // p_e agrees with the outcome probabilities of each comb separately
  CombValue a = state_comb(random_density(rng, 2));
  CombValue b = state_comb(random_density(rng, 2));
  Mat u = rng.haar_unitary(2);
  auto t = binary_povm_tester(Mat(u.col(0) * u.col(0).adjoint()), a.sig);
  double pe = error_prob(a, b, t);
  auto pa = tester_probs(t, a);
  auto pb = tester_probs(t, b);
  CHECK(pe == doctest::Approx(0.5 * (pb[0] + pa[1])).epsilon(1e-11));
  CHECK(pe >= -1e-9);
  CHECK(pe <= 0.5 + 1e-9);
}

TEST_CASE("helstrom closed form") {
  Rng rng(5);
  Mat rho = random_density(rng, 3);
  LabeledOperator r({qw("x", 3)}, rho);
  CHECK(helstrom_pe(r, r) == doctest::Approx(0.5));

  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(helstrom_pe(LabeledOperator({qw("x", 2)}, p0), LabeledOperator({qw("x", 2)}, p1)) ==
        doctest::Approx(0.0));

  // qubit pair at trace distance 0.6
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 0.8;
  a(1, 1) = 0.2;
  b(0, 0) = 0.5;
  b(1, 1) = 0.5;
  CHECK(helstrom_pe(LabeledOperator({qw("x", 2)}, a), LabeledOperator({qw("x", 2)}, b)) ==
        doctest::Approx(0.35).epsilon(1e-12));
}

TEST_CASE("opnorm_lower_bound: states reach the Helstrom value in one round") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Mat r0 = random_density(rng, 2), r1 = random_density(rng, 2);
    CombValue c0 = state_comb(r0), c1 = state_comb(r1);
    OpnormOptions opts;
    opts.iters = 1;
    opts.seed = trial;
    auto bound = opnorm_lower_bound(c0, c1, opts);
    double helstrom = 1.0 - 2.0 * helstrom_pe(LabeledOperator({qw("1", 2)}, r0),
                                              LabeledOperator({qw("1", 2)}, r1));
    CHECK(bound.value == doctest::Approx(helstrom).epsilon(1e-9));
    CHECK(bound.best_pe == doctest::Approx(0.5 * (1 - bound.value)).epsilon(1e-12));
  }
}

TEST_CASE("opnorm_lower_bound: identical combs give zero") {
  Rng rng(9);
  CombValue comb = random_comb(rng, {{2, 2}, {2, 2}}, {2});
  OpnormOptions opts;
  opts.iters = 5;
  CHECK(opnorm_lower_bound(comb, comb, opts).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("opnorm_lower_bound: unitary qubit channels against the entangled-input oracle") {
  double theta = 0.7;
  Mat u0 = Mat::Identity(2, 2);
  Mat u1 = Mat::Identity(2, 2);
  u1(1, 1) = std::exp(cxd(0, theta));
  auto choi = [](const Mat& u) {
    Vec k = vec(u);
    return LabeledOperator({qw("1", 2), qw("0", 2)}, Mat(k * k.adjoint()));
  };
  CombValue c0(CombSignature::chain({{2, 2}}), choi(u0));
  CombValue c1(CombSignature::chain({{2, 2}}), choi(u1));

  // oracle: Helstrom value on the outputs for the maximally entangled input
  ChoiMap e0(tensor(choi(u0), identity_channel(qw("r", 2), qw("r'", 2)).op), {"0", "r"},
             {"1", "r'"});
  ChoiMap e1(tensor(choi(u1), identity_channel(qw("r", 2), qw("r'", 2)).op), {"0", "r"},
             {"1", "r'"});
  Vec phi = vec(Mat::Identity(2, 2)) / std::sqrt(2.0);
  LabeledOperator input({qw("0", 2), qw("r", 2)}, Mat(phi * phi.adjoint()));
  double oracle = 0.5 * trace_norm(apply(e0, input) - apply(e1, input));
  CHECK(oracle == doctest::Approx(std::abs(std::sin(theta / 2))).epsilon(1e-12));

  OpnormOptions opts;
  opts.iters = 40;
  opts.seed = 11;
  auto bound = opnorm_lower_bound(c0, c1, opts);
  CHECK(bound.value == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("opnorm_lower_bound is monotone in iterations and bounded") {
  Rng rng(13);
  CombValue a = random_comb(rng, {{2, 2}}, {});
  CombValue b = random_comb(rng, {{2, 2}}, {});
  double prev = -1.0;
  for (int iters : {1, 2, 4, 8}) {
    OpnormOptions opts;
    opts.iters = iters;
    opts.seed = 99;
    double v = opnorm_lower_bound(a, b, opts).value;
    CHECK(v >= prev - 1e-12);
    CHECK(v <= 2.0);
    prev = v;
  }
  OpnormOptions sopts;
  sopts.method = OpnormMethod::Sampled;
  sopts.iters = 60;
  sopts.seed = 5;
  auto sampled = opnorm_lower_bound(a, b, sopts);
  CHECK(sampled.value <= prev + 1e-9);  // sampled never beats the converged seesaw here
  CHECK(sampled.value >= 0.0);
}
