#ifndef COMBFORGE_CORE_CHOI_HPP
#define COMBFORGE_CORE_CHOI_HPP

#include <string>
#include <vector>

#include "core/labeled_operator.hpp"
#include "core/types.hpp"

namespace combforge {

/// Choi operator of a linear map, with its wires split into inputs and
/// outputs. The map acts as apply(C, rho) = Tr_in[(I_out (x) rho^T) C].
struct ChoiMap {
  LabeledOperator op;
  std::vector<std::string> ins;
  std::vector<std::string> outs;

  ChoiMap(LabeledOperator o, std::vector<std::string> in_labels,
          std::vector<std::string> out_labels);

  std::vector<Wire> in_wires() const;
  std::vector<Wire> out_wires() const;
  long in_dim() const;
  long out_dim() const;
};

/// Choi of the identity channel |I>><<I| between two wires of equal dim.
ChoiMap identity_channel(const Wire& in, const Wire& out);

/// Choi from Kraus operators K: in -> out (rows indexed by out wires, columns
/// by in wires, row-major composite bases).
ChoiMap choi_from_kraus(const std::vector<Mat>& kraus, const std::vector<Wire>& in_wires,
                        const std::vector<Wire>& out_wires);

LabeledOperator apply(const ChoiMap& c, const LabeledOperator& rho);

/// Adjoint map action: Tr[Y apply(C, X)] == Tr[apply_adjoint(C, Y) X].
LabeledOperator apply_adjoint(const ChoiMap& c, const LabeledOperator& y);

bool is_cp(const ChoiMap& c, double tol = Tol::check);
bool is_tp(const ChoiMap& c, double tol = Tol::check);
double cp_defect(const ChoiMap& c);   // max(0, -min eigenvalue)
double tp_defect(const ChoiMap& c);   // ||Tr_out C - I_in||_max

/// Contraction of two labeled operators over their shared wires:
///   Tr_shared[(A (x) I_{B\shared}) (I_{A\shared} (x) B^{T_shared})].
/// The partial transpose on the shared factor of the second operand makes the
/// contraction implement map composition; shared wires must agree in dim.
/// Contracting every wire (e.g. a tester against a comb) leaves a 1x1 result.
LabeledOperator link_operators(const LabeledOperator& a, const LabeledOperator& b);

/// Link product of Choi maps. Shared labels must connect an output of one
/// operand to an input of the other; in/in or out/out collisions are errors.
/// With no shared labels this is the tensor product.
ChoiMap link(const ChoiMap& c, const ChoiMap& d);

}  // namespace combforge

#endif
