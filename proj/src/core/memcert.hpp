#ifndef COMBFORGE_CORE_MEMCERT_HPP
#define COMBFORGE_CORE_MEMCERT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/comb.hpp"

namespace combforge {

enum class Evidence {
  Decomposition,
  PureSchmidt,
  PptWitness,
  SymmetryProjectors,
  ClosedForm,
};

std::string evidence_name(Evidence e);

struct StepBound {
  int step = 1;
  int d_lo = 1;
  int d_hi = 1;
};

/// Certified interval on the quantum memory dimension at a step set, with the
/// kind of evidence that backs it. d_hi is an achievable dimension, d_lo a
/// proven lower bound.
struct CostCertificate {
  std::vector<StepBound> bounds;
  Evidence evidence = Evidence::Decomposition;
  std::string note;
  double tol = Tol::check;

  int max_d_hi() const;
  double log2_max_d_hi() const;
};

/// A finite family {Q_j} of PSD operators summing to a target comb. For a
/// multi-step certificate the parts carry nested indices (one slot per step,
/// outermost first).
struct Decomposition {
  struct Part {
    std::vector<int> index;
    LabeledOperator op;
  };
  std::vector<int> steps;  // ascending
  std::vector<Part> parts;
};

struct DetAfterReport {
  bool pass = false;
  double psd_defect = 0.0;
  std::vector<double> step_defects;  // l = N..k+1
  double worst() const;
};

/// Checks Tr_out_l[Q^(l)] = I_in_l (x) Q^(l-1) for l = k+1..N plus positivity.
/// The companion condition Q^(k) <= R is certified structurally by membership
/// in a family that sums to a deterministic comb.
DetAfterReport verify_det_after_k(const LabeledOperator& q, const CombSignature& sig, int k,
                                  double tol = Tol::check);

struct CertifyResult {
  bool pass = false;
  std::string failure;  // names the defect (sum / normalization / rank / ...)
  double sum_defect = 0.0;
  double worst_part_defect = 0.0;
  std::vector<int> part_ranks;
  CostCertificate certificate;
};

/// Single-step certificate: sum = R, every part deterministic after step k,
/// rank(Q_j^(k)) <= d. On success d_hi = max_j rank(Q_j^(k)); for a pure
/// target the lower bound is rank(R^(k)) (parts of a pure PSD operator are
/// proportional to it), otherwise 1.
CertifyResult certify_step(const CombValue& r, int k, const std::vector<LabeledOperator>& parts,
                           int d, double tol = Tol::check);

/// Nested multi-step certificate: every prefix sum Q_{i_1..i_m} must be
/// deterministic after step J[m-1] with rank(Q^(J[m-1])) <= dims[m-1].
CertifyResult certify_multi(const CombValue& r, const Decomposition& decomp,
                            const std::vector<int>& dims, double tol = Tol::check);

double min_pt_eigenvalue(const LabeledOperator& a, const std::vector<std::string>& labels);
bool is_ppt(const LabeledOperator& a, const std::vector<std::string>& labels,
            double tol = Tol::snap);

struct ChannelCostOptions {
  int restarts = 0;  // 0 disables the decomposition search
  std::uint64_t seed = 0;
  double tol = Tol::check;
};

/// Memory bounds for a channel viewed as a two-step strategy. Exact for pure
/// Choi operators (Schmidt rank) and for qubit-qubit channels (PPT decides
/// separability); otherwise [PPT lower bound, best known decomposition].
CostCertificate channel_cost_bounds(const ChoiMap& c, const ChannelCostOptions& opts = {});

/// Heuristic search for a rank-one decomposition C = sum |K_a>><<K_a| with
/// every Schmidt rank <= d_target, over isometric mixings of the eigen-Kraus
/// family. Absence after the restart budget is not a disproof.
std::optional<std::vector<LabeledOperator>> kraus_rank_minimize(const ChoiMap& c, int d_target,
                                                                int restarts, std::uint64_t seed,
                                                                double tol = Tol::check,
                                                                int extra_parts = 0);

/// Choi of the U-U covariant channel family: alpha/d |I>><<I| + beta (I -
/// |I>><<I|/d) with alpha + (d^2-1) beta = d. Wires "0" (input), "1" (output).
ChoiMap isotropic_channel(int d, double alpha);
/// Exact memory dimension ceil(alpha) (thresholds snapped to 1e-9).
int isotropic_cost(int d, double alpha);

/// Choi gamma P_+ + delta P_- with (d+1) gamma + (d-1) delta = 2.
ChoiMap werner_channel(int d, double gamma);
/// 1 inside the separable window 1/(d+1) <= gamma <= 2/(d+1), else 2.
int werner_cost(int d, double gamma);

LabeledOperator swap_operator(const Wire& a, const Wire& b);
/// (I + sign E)/2 on two d-dimensional wires "0", "1".
LabeledOperator sym_antisym_projector(int d, int sign);
/// Rank-one parts |mm>, (|mn> +- |nm>)/sqrt(2) summing to P_{+-}; every
/// part's reduced operator has rank <= 2.
std::vector<LabeledOperator> sym_antisym_decomposition(int d, int sign);

/// The four Shifts product kets |0,1,+>, |1,+,0>, |+,0,1>, |-,-,-> on three
/// qubits, row-major composite basis.
std::vector<Vec> upb_shifts_basis();
/// rho = (I - Pi_UPB)/4 as a three-step strategy with trivial inputs: PPT
/// across every single-qubit cut yet not fully separable (cited property).
CombValue upb_shifts_state();

/// Delay comb |I>><<I| between the step-1 input and the step-2 output.
CombValue delay_comb(int d);

}  // namespace combforge

#endif
