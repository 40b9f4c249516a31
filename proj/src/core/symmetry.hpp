#ifndef COMBFORGE_CORE_SYMMETRY_HPP
#define COMBFORGE_CORE_SYMMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/comb.hpp"
#include "core/memcert.hpp"

namespace combforge {

/// A finite group of unitaries on a fixed wire set, closed under products to
/// tolerance and containing the identity.
struct GroupRep {
  std::vector<LabeledOperator> elements;

  void validate(double tol = Tol::herm * 1e2) const;
  /// (1/|G|) sum_g U X U^dag
  LabeledOperator twirl(const LabeledOperator& x) const;
};

/// Orthogonal projectors resolving the identity, grouped into isotypic
/// components. Within a component every projector has the common rank d
/// (the irrep dimension) and the component size is the multiplicity m.
struct BlockStructure {
  std::vector<LabeledOperator> projectors;
  std::vector<std::vector<int>> components;  // indices into projectors
  std::vector<int> block_dims;               // d_nu per component
  std::vector<int> multiplicities;           // m_nu per component

  std::vector<int> multiplicity_multiset() const;  // sorted
  LabeledOperator component_projector(int nu) const;
};

/// Commutant-twirl isotypic decomposition: eigenprojectors of a twirled
/// random Hermitian refine the commutant; two projectors belong to the same
/// component iff a second twirled probe links them. Eigenvalue collisions
/// trigger a re-draw (seeded) up to a retry budget.
BlockStructure isotypic_decompose(const GroupRep& rep, double tol = Tol::check,
                                  std::uint64_t seed = 0);

/// Prop-style block bound: verifies sum/orthogonality/R = sum P R P for
/// projectors on the wires of the first k steps, then certifies the induced
/// decomposition {P_i R P_i} at d = max_i Tr[P_i].
CertifyResult verify_block_bound(const CombValue& r, const std::vector<LabeledOperator>& projectors,
                                 int k, double tol = Tol::check);

/// Nested refinement: {Q_ij = P_i Q~_j P_i} for blocks at step k and an
/// existing family at step l > k. Errors if some part fails to commute with
/// the block structure.
Decomposition refine_with_blocks(const CombValue& r,
                                 const std::vector<LabeledOperator>& projectors, int k,
                                 const std::vector<LabeledOperator>& parts, int l,
                                 double tol = Tol::check);

/// Memory bound at step k from a symmetry of the comb: requires
/// [R, I (x) U(g)] = 0 for all g, decomposes the representation, and returns
/// the best verified block certificate. The multiplicity-space projectors of
/// the decomposition always verify (bound max_nu m_nu); the finer commutant
/// eigenprojectors are tried first and kept when they certify.
CostCertificate symmetry_bound(const CombValue& r, const GroupRep& rep, int k,
                               double tol = Tol::check, std::uint64_t seed = 0);

}  // namespace combforge

#endif
