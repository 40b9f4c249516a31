#include "core/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/linalg.hpp"
#include "core/rng.hpp"

namespace combforge {

double error_prob(const CombValue& r0, const CombValue& r1, const Instrument& tester) {
  if (tester.branches.size() != 2)
    throw Error(ErrorCode::Argument, "error_prob: tester must have exactly two branches");
  std::set<std::string> l0, l1;
  for (const auto& w : r0.sig.all_wires()) l0.insert(w.label);
  for (const auto& w : r1.sig.all_wires()) l1.insert(w.label);
  if (l0 != l1) throw Error(ErrorCode::WireMismatch, "error_prob: combs have different wires");

  LabeledOperator a = link_operators(r1.op, tester.branches[0].second.op);
  LabeledOperator b = link_operators(r0.op, tester.branches[1].second.op);
  if (a.dim() != 1 || b.dim() != 1)
    throw Error(ErrorCode::WireMismatch, "error_prob: tester does not close the comb wires");
  return 0.5 * (a.mat()(0, 0).real() + b.mat()(0, 0).real());
}

double helstrom_pe(const LabeledOperator& rho0, const LabeledOperator& rho1) {
  LabeledOperator diff = rho0 - rho1;
  return 0.5 * (1.0 - 0.5 * trace_norm(diff.hermitized()));
}

namespace {

struct ChannelView {
  ChoiMap diff;                   // Choi of the difference map, all ins -> all outs
  std::vector<Wire> in_wires;     // comb inputs (original order)
  std::vector<Wire> out_wires;    // comb outputs
  std::vector<std::string> in_labels;
  std::vector<Wire> probe_wires;  // inputs + reference (when nontrivial)
  long probe_dim = 1;
};

ChannelView make_view(const CombValue& r0, const CombValue& r1) {
  ChannelView v{ChoiMap(r0.op - r1.op.aligned_to(r0.sig.all_wires()), r0.sig.input_labels(),
                        r0.sig.output_labels()),
                {}, {}, {}, {}, 1};
  for (int k = 1; k <= r0.sig.num_steps(); ++k) {
    for (const auto& w : r0.sig.steps[k - 1].inputs) v.in_wires.push_back(w);
    for (const auto& w : r0.sig.steps[k - 1].outputs) v.out_wires.push_back(w);
  }
  v.in_labels = r0.sig.input_labels();
  long din = 1;
  for (const auto& w : v.in_wires) din *= w.dim;
  v.probe_wires = v.in_wires;
  if (din > 1) v.probe_wires.push_back({"tester.ref", static_cast<int>(din), WireKind::Quantum});
  v.probe_dim = din * (din > 1 ? din : 1);
  return v;
}

// (Delta (x) Id_ref)(rho) for rho on inputs (x) reference.
LabeledOperator extended_apply(const ChannelView& v, const LabeledOperator& rho) {
  std::vector<Wire> stage = v.diff.op.wires();
  for (const auto& w : rho.wires())
    if (!v.diff.op.has_wire(w.label)) stage.push_back(w);
  LabeledOperator rt = rho.partial_transpose(v.in_labels).embedded(stage);
  LabeledOperator de = v.diff.op.embedded(stage);
  return (rt * de).partial_trace(v.in_labels);
}

// Adjoint on a measurement operator y over outputs (x) reference:
// M = (Tr_outs[D Y])^{T_ins}, so that Tr[Y (Delta (x) Id)(rho)] = Tr[M rho].
// The product order and the transpose scope matter because y and the map
// share the reference factor.
LabeledOperator extended_apply_adjoint(const ChannelView& v, const LabeledOperator& y) {
  std::vector<Wire> stage = v.diff.op.wires();
  for (const auto& w : y.wires())
    if (!v.diff.op.has_wire(w.label)) stage.push_back(w);
  LabeledOperator ye = y.embedded(stage);
  LabeledOperator contracted = (v.diff.op.embedded(stage) * ye).partial_trace(v.diff.outs);
  return contracted.partial_transpose(v.in_labels);
}

Mat positive_projector(const Eigh& e) {
  Mat p = Mat::Zero(e.vectors.rows(), e.vectors.rows());
  for (long i = 0; i < e.values.size(); ++i)
    if (e.values(i) > 0.0) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
  return p;
}

}  // namespace

OpnormBound opnorm_lower_bound(const CombValue& r0, const CombValue& r1,
                               const OpnormOptions& opts) {
  std::set<std::string> l0, l1;
  for (const auto& w : r0.sig.all_wires()) l0.insert(w.label);
  for (const auto& w : r1.sig.all_wires()) l1.insert(w.label);
  if (l0 != l1)
    throw Error(ErrorCode::WireMismatch, "opnorm_lower_bound: combs have different wires");
  if (opts.iters < 1) throw Error(ErrorCode::Argument, "opnorm_lower_bound: iters < 1");

  ChannelView view = make_view(r0, r1);
  Rng rng(opts.seed);

  OpnormBound best;
  best.value = 0.0;
  best.best_pe = 0.5;

  auto consider = [&](const Vec& psi) {
    LabeledOperator rho(view.probe_wires, Mat(psi * psi.adjoint()));
    LabeledOperator x = extended_apply(view, rho).hermitized();
    auto e = eigh(x);
    double v = 0.5 * e.values.cwiseAbs().sum();
    if (v > best.value) {
      best.value = v;
      best.best_pe = 0.5 * (1.0 - v);
      best.input_state = psi;
      best.measurement = positive_projector(e);
    }
    return x;
  };

  if (opts.method == OpnormMethod::Seesaw) {
    best.method_note = "seesaw over non-adaptive testers (exact for states and single-step combs)";
    Vec psi = view.probe_dim == 1 ? Vec::Ones(1) : rng.haar_ket(view.probe_dim);
    for (int it = 0; it < opts.iters; ++it) {
      LabeledOperator x = consider(psi);
      if (view.probe_dim == 1) break;
      // input update: largest-|eigenvalue| eigenvector of the pulled-back
      // objective for the current Helstrom measurement
      LabeledOperator p(x.wires(), positive_projector(eigh(x)));
      LabeledOperator m = extended_apply_adjoint(view, p).hermitized();
      auto em = eigh(m);
      long arg = 0;
      for (long i = 1; i < em.values.size(); ++i)
        if (std::abs(em.values(i)) > std::abs(em.values(arg))) arg = i;
      Vec next = em.vectors.col(arg);
      if (it > 0 && 1.0 - std::abs(next.dot(psi)) < 1e-14) break;  // converged (up to phase)
      psi = next;
    }
    consider(psi);
  } else {
    best.method_note = "Haar-sampled inputs and projective binary measurements";
    for (int it = 0; it < opts.iters; ++it) {
      Vec psi = view.probe_dim == 1 ? Vec::Ones(1) : rng.haar_ket(view.probe_dim);
      LabeledOperator rho(view.probe_wires, Mat(psi * psi.adjoint()));
      LabeledOperator x = extended_apply(view, rho).hermitized();
      long dout = x.dim();
      Mat basis = rng.haar_unitary(dout);
      Mat p = Mat::Zero(dout, dout);
      for (long i = 0; i < dout; ++i)
        if (rng.integer(2) == 0) p += basis.col(i) * basis.col(i).adjoint();
      double s = (p * x.mat()).trace().real();
      double v = std::abs(s);  // swapping outcome labels flips the sign
      if (v > best.value) {
        best.value = v;
        best.best_pe = 0.5 * (1.0 - v);
        best.input_state = psi;
        best.measurement = s >= 0 ? p : Mat(Mat::Identity(dout, dout) - p);
      }
    }
  }
  return best;
}

}  // namespace combforge
