#ifndef COMBFORGE_TESTS_HELPERS_HPP
#define COMBFORGE_TESTS_HELPERS_HPP

#include <string>
#include <utility>
#include <vector>

#include "core/choi.hpp"
#include "core/comb.hpp"
#include "core/linalg.hpp"
#include "core/memcert.hpp"
#include "core/rng.hpp"
#include "core/symmetry.hpp"

namespace combforge::testing {

inline Wire qw(const std::string& label, int dim) { return {label, dim, WireKind::Quantum}; }

inline double diff_norm(const LabeledOperator& a, const LabeledOperator& b) {
  return (a - b).max_abs();
}

inline Mat random_density(Rng& rng, long d) {
  Mat g = rng.ginibre(d, d);
  Mat m = g * g.adjoint();
  return m / m.trace();
}

// Random CP-TP Choi operator from a Haar isometry into (out x env).
inline ChoiMap random_cptp(Rng& rng, const std::vector<Wire>& ins, const std::vector<Wire>& outs,
                           long env_dim = 0) {
  long din = 1, dout = 1;
  for (const auto& w : ins) din *= w.dim;
  for (const auto& w : outs) dout *= w.dim;
  long denv = env_dim > 0 ? env_dim : din;
  Mat v = rng.haar_isometry(dout * denv, din);
  std::vector<Mat> kraus;
  for (long e = 0; e < denv; ++e) {
    Mat k(dout, din);
    for (long o = 0; o < dout; ++o) k.row(o) = v.row(o * denv + e);
    kraus.push_back(std::move(k));
  }
  return choi_from_kraus(kraus, ins, outs);
}

// N-step comb built by linking random CP-TP channels through ancillas.
inline CombValue random_comb(Rng& rng, const std::vector<std::pair<int, int>>& dims,
                             const std::vector<int>& anc_dims) {
  int n = static_cast<int>(dims.size());
  if (static_cast<int>(anc_dims.size()) != n - 1)
    throw Error(ErrorCode::Argument, "random_comb: need N-1 ancilla dims");
  CombSignature sig = CombSignature::chain(dims);
  std::vector<ChoiMap> channels;
  for (int k = 1; k <= n; ++k) {
    std::vector<Wire> ins{sig.steps[k - 1].inputs.front()};
    std::vector<Wire> outs{sig.steps[k - 1].outputs.front()};
    if (k > 1) ins.push_back(qw("anc" + std::to_string(k - 1), anc_dims[k - 2]));
    if (k < n) outs.push_back(qw("anc" + std::to_string(k), anc_dims[k - 1]));
    channels.push_back(random_cptp(rng, ins, outs));
  }
  ChoiMap acc = channels.front();
  for (int k = 1; k < n; ++k) acc = link(acc, channels[k]);
  return CombValue(sig, acc.op);
}

// State as a one-step comb with a trivial input wire.
inline CombValue state_comb(const Mat& rho) {
  CombSignature sig = CombSignature::chain({{1, static_cast<int>(rho.rows())}});
  LabeledOperator op =
      LabeledOperator({qw("1", static_cast<int>(rho.rows()))}, rho).embedded(sig.all_wires());
  return CombValue(sig, op);
}

// Channel Choi viewed as the two-step strategy (encode, decode).
inline CombValue channel_as_comb(const ChoiMap& c) {
  if (c.ins.size() != 1 || c.outs.size() != 1)
    throw Error(ErrorCode::Argument, "channel_as_comb: expects single in/out wires");
  Wire in = c.in_wires().front();
  Wire out = c.out_wires().front();
  CombSignature sig = CombSignature::chain({{in.dim, 1}, {1, out.dim}});
  LabeledOperator relabeled(
      {qw("0", in.dim), qw("3", out.dim)},
      c.op.aligned_to({in, out}).mat());
  return CombValue(sig, relabeled.embedded(sig.all_wires()));
}

// The four Bell projectors on two wires of dimension 2.
inline std::vector<LabeledOperator> bell_projectors(const Wire& a, const Wire& b) {
  auto ket = [](std::initializer_list<cxd> xs) {
    Vec v(4);
    long i = 0;
    for (cxd x : xs) v(i++) = x;
    return v;
  };
  double s = 1.0 / std::sqrt(2.0);
  std::vector<Vec> bells{ket({s, 0, 0, s}), ket({s, 0, 0, -s}), ket({0, s, s, 0}),
                         ket({0, s, -s, 0})};
  std::vector<LabeledOperator> out;
  for (const auto& v : bells) out.emplace_back(std::vector<Wire>{a, b}, Mat(v * v.adjoint()));
  return out;
}

// Pauli group acting as sigma (x) sigma^* on two wires of dimension 2.
inline GroupRep pauli_uu_star(const Wire& a, const Wire& b) {
  Mat id = Mat::Identity(2, 2);
  Mat x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cxd(0, -1), cxd(0, 1), 0;
  z << 1, 0, 0, -1;
  GroupRep rep;
  for (const Mat& s : {id, x, y, z}) {
    Mat u(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) u.block(2 * i, 2 * j, 2, 2) = s(i, j) * s.conjugate();
    rep.elements.emplace_back(std::vector<Wire>{a, b}, std::move(u));
  }
  return rep;
}

// Bell-diagonal two-step comb sum_i q_i B_i (x) C_i with sum q_i = 2.
inline CombValue bell_diagonal_comb(Rng& rng, const std::vector<double>& weights) {
  CombSignature sig = CombSignature::chain({{2, 2}, {2, 2}});
  auto bells = bell_projectors(qw("0", 2), qw("1", 2));
  LabeledOperator acc = LabeledOperator::zero(sig.all_wires());
  for (size_t i = 0; i < 4; ++i) {
    ChoiMap c = random_cptp(rng, {qw("2", 2)}, {qw("3", 2)});
    acc = acc + tensor(bells[i].scaled(weights[i]), c.op);
  }
  return CombValue(sig, acc);
}

}  // namespace combforge::testing

#endif
