#ifndef COMBFORGE_CORE_LINALG_HPP
#define COMBFORGE_CORE_LINALG_HPP

#include <vector>

#include "core/labeled_operator.hpp"
#include "core/types.hpp"

namespace combforge {

struct Eigh {
  RVec values;  // ascending
  Mat vectors;  // columns, orthonormal
};

/// Hermitian eigendecomposition. The input must be Hermitian to `herm_tol`
/// (relative max-norm defect); it is symmetrized before factoring.
Eigh eigh(const Mat& a, double herm_tol = Tol::herm);
Eigh eigh(const LabeledOperator& a, double herm_tol = Tol::herm);

/// Eigenvalue counts as nonzero iff |lambda| > rank_tol * max(1, |lambda|_max).
int rank_of(const Mat& a, double rank_tol = Tol::rank);
int rank_of(const LabeledOperator& a, double rank_tol = Tol::rank);

double min_eigenvalue(const LabeledOperator& a);

/// Square root on the support, zero on the kernel; negatives below the rank
/// cutoff are treated as kernel.
Mat sqrt_psd(const Mat& a, double rank_tol = Tol::rank);
LabeledOperator sqrt_psd(const LabeledOperator& a, double rank_tol = Tol::rank);

/// Inverse square root on the support, zero on the kernel.
Mat pinv_sqrt(const Mat& a, double rank_tol = Tol::rank);
LabeledOperator pinv_sqrt(const LabeledOperator& a, double rank_tol = Tol::rank);

/// Sum of singular values; for Hermitian input this is the sum of |eigenvalues|.
double trace_norm(const Mat& a);
double trace_norm(const LabeledOperator& a);

/// Schmidt rank of a pure vector on `wires` across the bipartition
/// (cut_labels | rest): the number of singular values above
/// rank_tol * max(1, sigma_max).
int schmidt_rank(const Vec& v, const std::vector<Wire>& wires,
                 const std::vector<std::string>& cut_labels, double rank_tol = Tol::rank);

/// Singular values (descending) across the same bipartition.
RVec schmidt_coefficients(const Vec& v, const std::vector<Wire>& wires,
                          const std::vector<std::string>& cut_labels);

}  // namespace combforge

#endif
