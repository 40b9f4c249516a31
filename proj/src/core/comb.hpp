#ifndef COMBFORGE_CORE_COMB_HPP
#define COMBFORGE_CORE_COMB_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/choi.hpp"
#include "core/labeled_operator.hpp"

namespace combforge {

/// Wire layout of an N-step strategy. The canonical single-wire layout labels
/// the input of step k as wire 2k-2 and its output as 2k-1 (dim 1 encodes a
/// missing wire); steps may carry several wires per slot, which is how memory
/// wires appear after a split.
struct CombStep {
  std::vector<Wire> inputs;
  std::vector<Wire> outputs;
};

struct CombSignature {
  std::vector<CombStep> steps;

  /// N steps with wires labeled "0".."2N-1", dims[k] = {in dim, out dim}.
  static CombSignature chain(const std::vector<std::pair<int, int>>& dims);

  int num_steps() const { return static_cast<int>(steps.size()); }
  long input_dim(int k) const;   // k in 1..N
  long output_dim(int k) const;
  long total_input_dim() const;

  std::vector<Wire> step_wires(int k) const;      // inputs then outputs of step k
  std::vector<Wire> wires_up_to(int k) const;     // steps 1..k, canonical order
  std::vector<Wire> wires_after(int k) const;     // steps k+1..N
  std::vector<Wire> all_wires() const;
  std::vector<std::string> labels_up_to(int k) const;
  std::vector<std::string> input_labels() const;
  std::vector<std::string> output_labels() const;

  CombSignature prefix(int k) const;
  /// Steps k+1..N renumbered as 1..N-k.
  CombSignature suffix(int k) const;

  void validate() const;  // distinct labels, dims >= 1
};

/// A comb: an operator on the wires of a signature. The operator is stored
/// aligned to the canonical signature order.
struct CombValue {
  CombSignature sig;
  LabeledOperator op;

  CombValue(CombSignature s, const LabeledOperator& o);

  /// View the comb as one big map from all inputs to all outputs.
  ChoiMap as_choi() const;
};

/// Reduced k-step comb R^(k) = Tr_{steps > k}[R] / prod_{j>k} dim(in_j).
/// k = 0 gives the 1x1 operator Tr[R] / prod_j dim(in_j), which equals 1 for
/// deterministic combs.
CombValue reduce(const CombValue& r, int k);

struct ValidationReport {
  double hermiticity_defect = 0.0;
  double psd_defect = 0.0;           // max(0, -min eigenvalue)
  double trace_defect = 0.0;         // |Tr R - prod dim(in)|
  std::vector<double> step_defects;  // k = 1..N, recursive normalization
  double classical_defect = 0.0;     // diagonality on classical wires
  double tol = Tol::check;

  bool pass() const;
  double worst() const;
};

ValidationReport validate_deterministic(const CombValue& r, double tol = Tol::check);

/// 0 <= S <= R with R a valid deterministic comb.
bool validate_probabilistic(const CombValue& s, const CombValue& r, double tol = Tol::check);

struct Instrument {
  std::vector<std::pair<std::string, CombValue>> branches;  // (outcome label, comb)

  CombValue branch_sum() const;
};

/// The branch sum must be a deterministic comb.
bool validate_instrument(const Instrument& instr, double tol = Tol::check);

/// Outcome probabilities of a tester contracted against a comb; the tester
/// branches must live on a wire set containing the comb's wires, with every
/// non-shared tester wire of dimension 1.
std::vector<double> tester_probs(const Instrument& tester, const CombValue& r);

/// Tester whose branches are POVM elements measured on the listed wires of a
/// state-like comb (branch operators are the Choi operators P^T of the
/// measurement maps).
Instrument povm_tester(const std::vector<LabeledOperator>& povm, const CombSignature& target_sig);

struct SplitResult {
  CombValue before;   // steps 1..k, last output extended by the memory wires
  CombValue after;    // steps k+1..N, first input extended by the memory wires
  Wire quantum_memory;
  Wire classical_memory;
  std::string completion_note;  // how `after` was completed on the kernel
};

/// Constructive split of a comb at step k against a decomposition {Q_j} that
/// certifies it: before = sum_j |Q_j^(k) 1/2>><<Q_j^(k) 1/2| (x) |j><j| with
/// the support compressed into a quantum memory of dimension max_j
/// rank(Q_j^(k)), and after = sum_j |j><j| (x) B_j^+ Q_j B_j^+dag, completed
/// on the unused memory subspace with a channel emitting maximally mixed
/// outputs so `after` is trace preserving.
SplitResult split_at(const CombValue& r, int k, const std::vector<LabeledOperator>& parts,
                     double tol = Tol::check);

/// Normalization defects of the "deterministic after step k" conditions
/// Tr_out_l[Q^(l)] = I_in_l (x) Q^(l-1) for l = N..k+1, reductions by the
/// divisor rule.
std::vector<double> det_after_defects(const LabeledOperator& q, const CombSignature& sig, int k);

struct Realization {
  std::vector<ChoiMap> channels;                    // step k: (in_k, mem_{k-1}) -> (out_k, mem_k)
  std::vector<std::pair<int, int>> memory_dims;     // after step k: (quantum, classical)
  std::string completion_note;
};

/// Channels-with-memory realization with quantum memory dim rank(R^(k)) after
/// step k (trivial decompositions throughout, so the classical memory is 1).
Realization realize(const CombValue& r, double tol = Tol::check);

/// Sequential link of the realization channels.
LabeledOperator link_chain(const std::vector<ChoiMap>& channels);

}  // namespace combforge

#endif
