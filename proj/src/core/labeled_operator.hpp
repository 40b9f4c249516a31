#ifndef COMBFORGE_CORE_LABELED_OPERATOR_HPP
#define COMBFORGE_CORE_LABELED_OPERATOR_HPP

#include <vector>

#include "core/types.hpp"

namespace combforge {

/// Dense operator on an ordered tensor product of labeled factors.
///
/// The composite basis is lexicographic in wire-list order with the first
/// wire most significant: index = ((d0 * dim1 + d1) * dim2 + d2) ...
/// All values are immutable after construction; every operation returns a
/// new value.
class LabeledOperator {
 public:
  LabeledOperator(std::vector<Wire> wires, Mat entries);

  static LabeledOperator identity(std::vector<Wire> wires);
  static LabeledOperator zero(std::vector<Wire> wires);
  /// 1x1 operator with no wires.
  static LabeledOperator scalar(cxd value);

  const std::vector<Wire>& wires() const { return wires_; }
  const Mat& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  bool has_wire(const std::string& label) const;
  const Wire& wire(const std::string& label) const;
  int wire_pos(const std::string& label) const;  // -1 if absent
  std::vector<std::string> labels() const;

  /// Kronecker product with concatenated wire lists. Labels must be disjoint.
  friend LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b);

  LabeledOperator partial_trace(const std::vector<std::string>& labels) const;
  LabeledOperator partial_transpose(const std::vector<std::string>& labels) const;
  LabeledOperator transpose() const;
  LabeledOperator conjugate() const;
  LabeledOperator adjoint() const;

  /// Reorder the factors; entries are permuted accordingly.
  LabeledOperator permute_wires(const std::vector<std::string>& order) const;
  /// Same operator, factors ordered as in `target` (must be the same label set).
  LabeledOperator aligned_to(const std::vector<Wire>& target) const;
  /// Tensor with identities on `full` \ wires(), then order as `full`.
  LabeledOperator embedded(const std::vector<Wire>& full) const;

  /// Zero every entry whose row/column digits differ on `label`.
  LabeledOperator dephased(const std::string& label) const;

  LabeledOperator scaled(cxd factor) const { return LabeledOperator(wires_, m_ * factor); }
  friend LabeledOperator operator+(const LabeledOperator& a, const LabeledOperator& b);
  friend LabeledOperator operator-(const LabeledOperator& a, const LabeledOperator& b);
  friend LabeledOperator operator*(const LabeledOperator& a, const LabeledOperator& b);

  cxd trace_value() const { return m_.trace(); }
  double max_abs() const { return m_.size() ? m_.cwiseAbs().maxCoeff() : 0.0; }
  double hermiticity_defect() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
  bool is_hermitian(double rel_tol = Tol::herm) const;
  /// (A + A^dag)/2
  LabeledOperator hermitized() const;

 private:
  std::vector<Wire> wires_;
  Mat m_;
};

/// Row-major flattening |A>> = sum_nm A[n,m] |n>|m>.
Vec vec(const Mat& a);
Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols);
Mat unvec_square(const Vec& v);

}  // namespace combforge

#endif
