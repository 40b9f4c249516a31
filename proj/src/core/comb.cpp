#include "core/comb.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/linalg.hpp"

namespace combforge {

// ---------------------------------------------------------------- signature

CombSignature CombSignature::chain(const std::vector<std::pair<int, int>>& dims) {
  CombSignature sig;
  for (size_t k = 0; k < dims.size(); ++k) {
    CombStep step;
    step.inputs.push_back({std::to_string(2 * k), dims[k].first, WireKind::Quantum});
    step.outputs.push_back({std::to_string(2 * k + 1), dims[k].second, WireKind::Quantum});
    sig.steps.push_back(std::move(step));
  }
  sig.validate();
  return sig;
}

long CombSignature::input_dim(int k) const {
  long d = 1;
  for (const auto& w : steps.at(k - 1).inputs) d *= w.dim;
  return d;
}

long CombSignature::output_dim(int k) const {
  long d = 1;
  for (const auto& w : steps.at(k - 1).outputs) d *= w.dim;
  return d;
}

long CombSignature::total_input_dim() const {
  long d = 1;
  for (int k = 1; k <= num_steps(); ++k) d *= input_dim(k);
  return d;
}

std::vector<Wire> CombSignature::step_wires(int k) const {
  std::vector<Wire> out = steps.at(k - 1).inputs;
  out.insert(out.end(), steps.at(k - 1).outputs.begin(), steps.at(k - 1).outputs.end());
  return out;
}

std::vector<Wire> CombSignature::wires_up_to(int k) const {
  std::vector<Wire> out;
  for (int j = 1; j <= k; ++j) {
    auto sw = step_wires(j);
    out.insert(out.end(), sw.begin(), sw.end());
  }
  return out;
}

std::vector<Wire> CombSignature::wires_after(int k) const {
  std::vector<Wire> out;
  for (int j = k + 1; j <= num_steps(); ++j) {
    auto sw = step_wires(j);
    out.insert(out.end(), sw.begin(), sw.end());
  }
  return out;
}

std::vector<Wire> CombSignature::all_wires() const { return wires_up_to(num_steps()); }

std::vector<std::string> CombSignature::labels_up_to(int k) const {
  std::vector<std::string> out;
  for (const auto& w : wires_up_to(k)) out.push_back(w.label);
  return out;
}

std::vector<std::string> CombSignature::input_labels() const {
  std::vector<std::string> out;
  for (const auto& s : steps)
    for (const auto& w : s.inputs) out.push_back(w.label);
  return out;
}

std::vector<std::string> CombSignature::output_labels() const {
  std::vector<std::string> out;
  for (const auto& s : steps)
    for (const auto& w : s.outputs) out.push_back(w.label);
  return out;
}

CombSignature CombSignature::prefix(int k) const {
  CombSignature sig;
  sig.steps.assign(steps.begin(), steps.begin() + k);
  return sig;
}

CombSignature CombSignature::suffix(int k) const {
  CombSignature sig;
  sig.steps.assign(steps.begin() + k, steps.end());
  return sig;
}

void CombSignature::validate() const {
  std::set<std::string> seen;
  for (const auto& s : steps)
    for (const auto* slot : {&s.inputs, &s.outputs})
      for (const auto& w : *slot) {
        if (w.dim < 1)
          throw Error(ErrorCode::WireMismatch, "wire '" + w.label + "' has dim < 1");
        if (!seen.insert(w.label).second)
          throw Error(ErrorCode::WireMismatch, "duplicate wire label '" + w.label + "'");
      }
}

// -------------------------------------------------------------------- value

CombValue::CombValue(CombSignature s, const LabeledOperator& o)
    : sig(std::move(s)), op(o.aligned_to(sig.all_wires())) {
  sig.validate();
}

ChoiMap CombValue::as_choi() const { return ChoiMap(op, sig.input_labels(), sig.output_labels()); }

namespace {

// Divisor-rule reduction of an arbitrary operator on the comb's wires.
LabeledOperator reduce_op(const LabeledOperator& q, const CombSignature& sig, int k) {
  std::vector<std::string> traced;
  double divisor = 1.0;
  for (int j = k + 1; j <= sig.num_steps(); ++j) {
    for (const auto& w : sig.step_wires(j)) traced.push_back(w.label);
    divisor *= static_cast<double>(sig.input_dim(j));
  }
  LabeledOperator t = traced.empty() ? q : q.partial_trace(traced);
  return t.scaled(1.0 / divisor);
}

std::vector<std::string> wire_labels(const std::vector<Wire>& wires) {
  std::vector<std::string> out;
  out.reserve(wires.size());
  for (const auto& w : wires) out.push_back(w.label);
  return out;
}

}  // namespace

CombValue reduce(const CombValue& r, int k) {
  if (k < 0 || k > r.sig.num_steps())
    throw Error(ErrorCode::Argument, "reduce: k out of range");
  return CombValue(r.sig.prefix(k), reduce_op(r.op, r.sig, k));
}

// --------------------------------------------------------------- validation

bool ValidationReport::pass() const { return worst() <= tol; }

double ValidationReport::worst() const {
  double w = std::max({hermiticity_defect, psd_defect, trace_defect, classical_defect});
  for (double d : step_defects) w = std::max(w, d);
  return w;
}

ValidationReport validate_deterministic(const CombValue& r, double tol) {
  ValidationReport rep;
  rep.tol = tol;
  rep.hermiticity_defect = r.op.hermiticity_defect();

  LabeledOperator h = r.op.hermitized();
  rep.psd_defect = std::max(0.0, -eigh(h).values.minCoeff());
  rep.trace_defect =
      std::abs(h.trace_value() - cxd(static_cast<double>(r.sig.total_input_dim()), 0.0));

  int n = r.sig.num_steps();
  rep.step_defects.assign(n, 0.0);
  LabeledOperator level = h;  // R^(k), walking k = N..1
  for (int k = n; k >= 1; --k) {
    LabeledOperator traced = level.partial_trace(wire_labels(r.sig.steps[k - 1].outputs));
    LabeledOperator lower =
        k > 1 ? reduce_op(h, r.sig, k - 1)
              : LabeledOperator::scalar(1.0);  // R^(0) = 1 by definition
    LabeledOperator expected =
        tensor(LabeledOperator::identity(r.sig.steps[k - 1].inputs), lower)
            .aligned_to(traced.wires());
    rep.step_defects[k - 1] = (traced - expected).max_abs();
    if (k > 1) level = reduce_op(h, r.sig, k - 1);
  }

  for (const auto& w : r.sig.all_wires())
    if (w.kind == WireKind::Classical)
      rep.classical_defect =
          std::max(rep.classical_defect, (r.op - r.op.dephased(w.label)).max_abs());
  return rep;
}

bool validate_probabilistic(const CombValue& s, const CombValue& r, double tol) {
  if (!validate_deterministic(r, tol).pass()) return false;
  LabeledOperator diff = r.op - s.op;
  return min_eigenvalue(s.op.hermitized()) >= -tol &&
         min_eigenvalue(diff.hermitized()) >= -tol;
}

CombValue Instrument::branch_sum() const {
  if (branches.empty()) throw Error(ErrorCode::Argument, "instrument has no branches");
  LabeledOperator total = branches.front().second.op;
  for (size_t i = 1; i < branches.size(); ++i) total = total + branches[i].second.op;
  return CombValue(branches.front().second.sig, total);
}

bool validate_instrument(const Instrument& instr, double tol) {
  CombValue total = instr.branch_sum();
  for (const auto& [label, branch] : instr.branches) {
    (void)label;
    if (!validate_probabilistic(branch, total, tol)) return false;
  }
  return validate_deterministic(total, tol).pass();
}

std::vector<double> tester_probs(const Instrument& tester, const CombValue& r) {
  std::vector<double> probs;
  probs.reserve(tester.branches.size());
  for (const auto& [label, branch] : tester.branches) {
    (void)label;
    LabeledOperator res = link_operators(r.op, branch.op);
    if (res.dim() != 1)
      throw Error(ErrorCode::WireMismatch, "tester does not close all wires of the comb");
    probs.push_back(res.mat()(0, 0).real());
  }
  return probs;
}

Instrument povm_tester(const std::vector<LabeledOperator>& povm, const CombSignature& target_sig) {
  for (int k = 1; k <= target_sig.num_steps(); ++k)
    if (target_sig.input_dim(k) != 1)
      throw Error(ErrorCode::Argument,
                  "povm_tester: target comb must have trivial inputs (state-like)");
  if (povm.empty()) throw Error(ErrorCode::Argument, "povm_tester: empty POVM");

  // Tester signature: preparation step with the comb's (trivial) inputs as
  // outputs, then a measurement step consuming every comb output.
  CombSignature tsig;
  CombStep prep;
  prep.inputs.push_back({"tester.in", 1, WireKind::Quantum});
  for (int k = 1; k <= target_sig.num_steps(); ++k)
    for (const auto& w : target_sig.steps[k - 1].inputs) prep.outputs.push_back(w);
  CombStep meas;
  for (int k = 1; k <= target_sig.num_steps(); ++k)
    for (const auto& w : target_sig.steps[k - 1].outputs) meas.inputs.push_back(w);
  meas.outputs.push_back({"tester.out", 1, WireKind::Quantum});
  tsig.steps = {prep, meas};

  Instrument out;
  auto full = tsig.all_wires();
  for (size_t i = 0; i < povm.size(); ++i) {
    // Choi of the measurement map X -> Tr[P X] is P^T on the measured wires.
    LabeledOperator branch = povm[i].partial_transpose(povm[i].labels()).embedded(full);
    out.branches.emplace_back(std::to_string(i), CombValue(tsig, branch));
  }
  return out;
}

// --------------------------------------------------------------- split_at

namespace {

std::string unique_label(const std::string& base, const std::set<std::string>& taken) {
  std::string label = base;
  while (taken.count(label)) label += "'";
  return label;
}

}  // namespace

namespace {

SplitResult split_at_impl(const CombValue& r, int k, const std::vector<LabeledOperator>& parts,
                          double tol, bool certify);

}  // namespace

SplitResult split_at(const CombValue& r, int k, const std::vector<LabeledOperator>& parts,
                     double tol) {
  return split_at_impl(r, k, parts, tol, true);
}

namespace {

SplitResult split_at_impl(const CombValue& r, int k, const std::vector<LabeledOperator>& parts,
                          double tol, bool certify) {
  int n = r.sig.num_steps();
  if (k < 1 || k >= n) throw Error(ErrorCode::Argument, "split_at: need 1 <= k < N");
  if (parts.empty()) throw Error(ErrorCode::Argument, "split_at: empty decomposition");

  auto w1 = r.sig.wires_up_to(k);
  auto w2 = r.sig.wires_after(k);
  std::vector<Wire> w12 = w1;
  w12.insert(w12.end(), w2.begin(), w2.end());

  // Local certification: parts sum to R, each PSD and deterministic after k.
  if (certify) {
    LabeledOperator total = parts.front().aligned_to(w12);
    for (size_t j = 1; j < parts.size(); ++j) total = total + parts[j].aligned_to(w12);
    double sum_defect = (total - r.op.aligned_to(w12)).max_abs();
    if (sum_defect > tol)
      throw Error(ErrorCode::Verification,
                  "split_at: decomposition does not sum to the comb (defect " +
                      std::to_string(sum_defect) + ")");
    for (const auto& q : parts) {
      if (min_eigenvalue(q.hermitized()) < -tol)
        throw Error(ErrorCode::Verification, "split_at: decomposition part is not PSD");
      for (double d : det_after_defects(q, r.sig, k))
        if (d > tol)
          throw Error(ErrorCode::Verification,
                      "split_at: part is not deterministic after step " + std::to_string(k));
    }
  }

  long d1 = 1;
  for (const auto& w : w1) d1 *= w.dim;
  long d2 = 1;
  for (const auto& w : w2) d2 *= w.dim;
  long n_parts = static_cast<long>(parts.size());

  // Eigendecompositions of the reduced parts; memory dim = max rank.
  struct PartData {
    std::vector<double> evals;  // selected, descending
    Mat evecs;                  // matching columns
  };
  std::vector<PartData> pds;
  int d_mem = 1;
  for (const auto& q : parts) {
    LabeledOperator qk = reduce_op(q.aligned_to(w12), r.sig, k);
    auto e = eigh(qk.hermitized());
    double cut = Tol::rank * std::max(1.0, e.values.cwiseAbs().maxCoeff());
    PartData pd;
    std::vector<long> idx;
    for (long i = e.values.size() - 1; i >= 0; --i)
      if (e.values(i) > cut) idx.push_back(i);
    pd.evecs.resize(d1, static_cast<long>(idx.size()));
    for (size_t c = 0; c < idx.size(); ++c) {
      pd.evals.push_back(e.values(idx[c]));
      pd.evecs.col(static_cast<long>(c)) = e.vectors.col(idx[c]);
    }
    d_mem = std::max(d_mem, static_cast<int>(idx.size()));
    pds.push_back(std::move(pd));
  }

  std::set<std::string> taken;
  for (const auto& w : r.sig.all_wires()) taken.insert(w.label);
  Wire aq{unique_label("mem.q@" + std::to_string(k), taken), d_mem, WireKind::Quantum};
  taken.insert(aq.label);
  Wire ac{unique_label("mem.c@" + std::to_string(k), taken), static_cast<int>(n_parts),
          WireKind::Classical};

  // before = sum_j |psi_j><psi_j| (x) |j><j| on [w1..., aq, ac]
  long ds = d1 * d_mem * n_parts;
  Mat s_mat = Mat::Zero(ds, ds);
  for (long j = 0; j < n_parts; ++j) {
    const auto& pd = pds[j];
    Vec psi = Vec::Zero(d1 * d_mem);
    for (size_t a = 0; a < pd.evals.size(); ++a)
      for (long row = 0; row < d1; ++row)
        psi(row * d_mem + static_cast<long>(a)) = std::sqrt(pd.evals[a]) * pd.evecs(row, a);
    for (long p = 0; p < d1 * d_mem; ++p)
      for (long q = 0; q < d1 * d_mem; ++q)
        s_mat(p * n_parts + j, q * n_parts + j) = psi(p) * std::conj(psi(q));
  }
  std::vector<Wire> s_wires = w1;
  s_wires.push_back(aq);
  s_wires.push_back(ac);
  CombSignature s_sig = r.sig.prefix(k);
  s_sig.steps.back().outputs.push_back(aq);
  s_sig.steps.back().outputs.push_back(ac);
  CombValue before(s_sig, LabeledOperator(s_wires, std::move(s_mat)));

  // after = sum_j |j><j| (x) (B_j^+ (x) I) Q_j (B_j^+dag (x) I), completed on
  // the unused memory subspace with maximally mixed outputs.
  double out_dims = 1.0;
  for (int l = k + 1; l <= n; ++l) out_dims *= static_cast<double>(r.sig.output_dim(l));
  long dt = n_parts * d_mem * d2;
  Mat t_mat = Mat::Zero(dt, dt);
  for (long j = 0; j < n_parts; ++j) {
    const auto& pd = pds[j];
    long rj = static_cast<long>(pd.evals.size());
    Mat bplus(d_mem, d1);  // rows lambda^{-1/2} v^dag, zero past the rank
    bplus.setZero();
    for (long a = 0; a < rj; ++a)
      bplus.row(a) = pd.evecs.col(a).adjoint() / std::sqrt(pd.evals[a]);

    Mat q = parts[j].aligned_to(w12).mat();
    // (B^+ (x) I_{d2}) Q (B^+dag (x) I_{d2}) by block accumulation; only the
    // first rj rows of B^+ are nonzero.
    Mat m1 = Mat::Zero(rj * d2, d1 * d2);
    for (long a = 0; a < rj; ++a)
      for (long b = 0; b < d1; ++b)
        m1.middleRows(a * d2, d2) += bplus(a, b) * q.middleRows(b * d2, d2);
    Mat tj = Mat::Zero(d_mem * d2, d_mem * d2);
    for (long a = 0; a < rj; ++a)
      for (long b = 0; b < d1; ++b)
        tj.block(0, a * d2, rj * d2, d2) += std::conj(bplus(a, b)) * m1.middleCols(b * d2, d2);
    for (long a = rj; a < d_mem; ++a)  // kernel completion
      tj.block(a * d2, a * d2, d2, d2) += Mat::Identity(d2, d2) / out_dims;
    t_mat.block(j * d_mem * d2, j * d_mem * d2, d_mem * d2, d_mem * d2) = tj;
  }
  std::vector<Wire> t_wires{ac, aq};
  t_wires.insert(t_wires.end(), w2.begin(), w2.end());
  CombSignature t_sig = r.sig.suffix(k);
  t_sig.steps.front().inputs.insert(t_sig.steps.front().inputs.begin(), {ac, aq});
  CombValue after(t_sig, LabeledOperator(t_wires, std::move(t_mat)));

  return SplitResult{std::move(before), std::move(after), aq, ac,
                     "kernel completed with maximally mixed outputs"};
}

}  // namespace

// ---------------------------------------------------------------- realize

Realization realize(const CombValue& r, double tol) {
  auto rep = validate_deterministic(r, tol);
  if (!rep.pass())
    throw Error(ErrorCode::Verification,
                "realize: not a deterministic comb (worst defect " + std::to_string(rep.worst()) +
                    ")");
  Realization out;
  out.completion_note = "kernel completed with maximally mixed outputs";
  int n = r.sig.num_steps();
  std::vector<ChoiMap> rev;
  CombValue cur = r;
  for (int k = n - 1; k >= 1; --k) {
    // cur is deterministic (validated input, preserved by construction), so
    // the trivial decomposition {cur} certifies itself; skip the re-check.
    SplitResult sp = split_at_impl(cur, k, {cur.op}, tol, false);
    rev.push_back(sp.after.as_choi());
    out.memory_dims.emplace_back(sp.quantum_memory.dim, sp.classical_memory.dim);
    cur = sp.before;
  }
  rev.push_back(cur.as_choi());
  std::reverse(rev.begin(), rev.end());
  std::reverse(out.memory_dims.begin(), out.memory_dims.end());
  out.channels = std::move(rev);
  return out;
}

LabeledOperator link_chain(const std::vector<ChoiMap>& channels) {
  if (channels.empty()) throw Error(ErrorCode::Argument, "link_chain: no channels");
  ChoiMap acc = channels.front();
  for (size_t i = 1; i < channels.size(); ++i) acc = link(acc, channels[i]);
  return acc.op;
}

// ------------------------------------------------- deterministic after step k

std::vector<double> det_after_defects(const LabeledOperator& q, const CombSignature& sig, int k) {
  int n = sig.num_steps();
  std::vector<double> defects;
  LabeledOperator h = q.hermitized().aligned_to(sig.all_wires());
  for (int l = n; l >= k + 1; --l) {
    LabeledOperator level = reduce_op(h, sig, l);
    LabeledOperator traced = level.partial_trace(wire_labels(sig.steps[l - 1].outputs));
    // Q^(0) = 1 is pinned (full determinism); higher reductions follow the
    // divisor rule, under which the conditions fix only the relative scales.
    LabeledOperator lower =
        l > 1 ? reduce_op(h, sig, l - 1) : LabeledOperator::scalar(1.0);
    LabeledOperator expected =
        tensor(LabeledOperator::identity(sig.steps[l - 1].inputs), lower).aligned_to(traced.wires());
    defects.push_back((traced - expected).max_abs());
  }
  return defects;
}

}  // namespace combforge
