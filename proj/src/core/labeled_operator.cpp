#include "core/labeled_operator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <unsupported/Eigen/KroneckerProduct>

namespace combforge {

namespace {

long product_dim(const std::vector<Wire>& wires) {
  long d = 1;
  for (const auto& w : wires) {
    if (w.dim < 1) throw Error(ErrorCode::WireMismatch, "wire '" + w.label + "' has dim < 1");
    d *= w.dim;
  }
  return d;
}

void check_unique(const std::vector<Wire>& wires) {
  std::set<std::string> seen;
  for (const auto& w : wires) {
    if (w.label.empty()) throw Error(ErrorCode::WireMismatch, "empty wire label");
    if (!seen.insert(w.label).second)
      throw Error(ErrorCode::WireMismatch, "duplicate wire label '" + w.label + "'");
  }
}

// Composite-index strides, first wire most significant.
std::vector<long> strides_of(const std::vector<Wire>& wires) {
  std::vector<long> s(wires.size(), 1);
  for (int i = static_cast<int>(wires.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * wires[i + 1].dim;
  return s;
}

// Offsets of every sub-index combination of the selected wire positions,
// enumerated lexicographically. offsets.size() == prod of selected dims.
std::vector<long> sub_offsets(const std::vector<Wire>& wires, const std::vector<int>& pos) {
  auto strides = strides_of(wires);
  std::vector<long> offsets{0};
  for (int p : pos) {
    std::vector<long> next;
    next.reserve(offsets.size() * wires[p].dim);
    for (long base : offsets)
      for (int d = 0; d < wires[p].dim; ++d) next.push_back(base + d * strides[p]);
    offsets = std::move(next);
  }
  return offsets;
}

std::vector<int> positions_of(const LabeledOperator& a, const std::vector<std::string>& labels) {
  std::vector<int> pos;
  pos.reserve(labels.size());
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw Error(ErrorCode::WireMismatch, "label '" + l + "' repeated");
    int p = a.wire_pos(l);
    if (p < 0) throw Error(ErrorCode::WireMismatch, "unknown wire label '" + l + "'");
    pos.push_back(p);
  }
  return pos;
}

}  // namespace

LabeledOperator::LabeledOperator(std::vector<Wire> wires, Mat entries)
    : wires_(std::move(wires)), m_(std::move(entries)) {
  check_unique(wires_);
  long d = product_dim(wires_);
  if (m_.rows() != d || m_.cols() != d)
    throw Error(ErrorCode::WireMismatch,
                "matrix is " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                    " but wires give dimension " + std::to_string(d));
}

LabeledOperator LabeledOperator::identity(std::vector<Wire> wires) {
  long d = product_dim(wires);
  return LabeledOperator(std::move(wires), Mat::Identity(d, d));
}

LabeledOperator LabeledOperator::zero(std::vector<Wire> wires) {
  long d = product_dim(wires);
  return LabeledOperator(std::move(wires), Mat::Zero(d, d));
}

LabeledOperator LabeledOperator::scalar(cxd value) {
  Mat m(1, 1);
  m(0, 0) = value;
  return LabeledOperator({}, m);
}

bool LabeledOperator::has_wire(const std::string& label) const { return wire_pos(label) >= 0; }

const Wire& LabeledOperator::wire(const std::string& label) const {
  int p = wire_pos(label);
  if (p < 0) throw Error(ErrorCode::WireMismatch, "unknown wire label '" + label + "'");
  return wires_[p];
}

int LabeledOperator::wire_pos(const std::string& label) const {
  for (size_t i = 0; i < wires_.size(); ++i)
    if (wires_[i].label == label) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> LabeledOperator::labels() const {
  std::vector<std::string> out;
  out.reserve(wires_.size());
  for (const auto& w : wires_) out.push_back(w.label);
  return out;
}

LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b) {
  for (const auto& w : b.wires_)
    if (a.has_wire(w.label))
      throw Error(ErrorCode::WireMismatch, "tensor: duplicate label '" + w.label + "'");
  std::vector<Wire> wires = a.wires_;
  wires.insert(wires.end(), b.wires_.begin(), b.wires_.end());
  Mat m = Eigen::kroneckerProduct(a.m_, b.m_);
  return LabeledOperator(std::move(wires), std::move(m));
}

LabeledOperator LabeledOperator::partial_trace(const std::vector<std::string>& labels) const {
  auto traced = positions_of(*this, labels);
  std::vector<int> kept;
  for (int i = 0; i < static_cast<int>(wires_.size()); ++i)
    if (std::find(traced.begin(), traced.end(), i) == traced.end()) kept.push_back(i);

  auto keep_off = sub_offsets(wires_, kept);
  auto tr_off = sub_offsets(wires_, traced);

  std::vector<Wire> out_wires;
  for (int p : kept) out_wires.push_back(wires_[p]);
  long dk = static_cast<long>(keep_off.size());
  Mat out = Mat::Zero(dk, dk);
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      cxd s = 0.0;
      for (long t : tr_off) s += m_(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = s;
    }
  return LabeledOperator(std::move(out_wires), std::move(out));
}

LabeledOperator LabeledOperator::partial_transpose(const std::vector<std::string>& labels) const {
  auto sel = positions_of(*this, labels);
  std::vector<int> kept;
  for (int i = 0; i < static_cast<int>(wires_.size()); ++i)
    if (std::find(sel.begin(), sel.end(), i) == sel.end()) kept.push_back(i);

  auto keep_off = sub_offsets(wires_, kept);
  auto sel_off = sub_offsets(wires_, sel);

  Mat out(m_.rows(), m_.cols());
  for (long kr : keep_off)
    for (long kc : keep_off)
      for (long tr : sel_off)
        for (long tc : sel_off) out(kr + tc, kc + tr) = m_(kr + tr, kc + tc);
  return LabeledOperator(wires_, std::move(out));
}

LabeledOperator LabeledOperator::transpose() const {
  return LabeledOperator(wires_, m_.transpose());
}

LabeledOperator LabeledOperator::conjugate() const {
  return LabeledOperator(wires_, m_.conjugate());
}

LabeledOperator LabeledOperator::adjoint() const { return LabeledOperator(wires_, m_.adjoint()); }

LabeledOperator LabeledOperator::permute_wires(const std::vector<std::string>& order) const {
  if (order.size() != wires_.size())
    throw Error(ErrorCode::WireMismatch, "permute: order lists " + std::to_string(order.size()) +
                                             " labels, operator has " +
                                             std::to_string(wires_.size()));
  auto pos = positions_of(*this, order);

  std::vector<Wire> out_wires;
  out_wires.reserve(pos.size());
  for (int p : pos) out_wires.push_back(wires_[p]);

  auto old_strides = strides_of(wires_);
  auto new_strides = strides_of(out_wires);
  long d = m_.rows();
  // index map old -> new by digit transport
  std::vector<long> map(d, 0);
  for (long i = 0; i < d; ++i) {
    long ni = 0;
    for (size_t k = 0; k < pos.size(); ++k) {
      long digit = (i / old_strides[pos[k]]) % wires_[pos[k]].dim;
      ni += digit * new_strides[k];
    }
    map[i] = ni;
  }
  Mat out(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) out(map[i], map[j]) = m_(i, j);
  return LabeledOperator(std::move(out_wires), std::move(out));
}

LabeledOperator LabeledOperator::aligned_to(const std::vector<Wire>& target) const {
  if (target.size() != wires_.size())
    throw Error(ErrorCode::WireMismatch, "aligned_to: wire count mismatch");
  std::vector<std::string> order;
  order.reserve(target.size());
  for (const auto& w : target) order.push_back(w.label);
  auto out = permute_wires(order);
  for (size_t i = 0; i < target.size(); ++i)
    if (out.wires()[i].dim != target[i].dim)
      throw Error(ErrorCode::WireMismatch, "aligned_to: dim mismatch on '" + target[i].label + "'");
  return out;
}

LabeledOperator LabeledOperator::embedded(const std::vector<Wire>& full) const {
  std::vector<Wire> missing;
  for (const auto& w : full)
    if (!has_wire(w.label)) missing.push_back(w);
  LabeledOperator ext = missing.empty() ? *this : tensor(*this, identity(missing));
  return ext.aligned_to(full);
}

LabeledOperator LabeledOperator::dephased(const std::string& label) const {
  int p = wire_pos(label);
  if (p < 0) throw Error(ErrorCode::WireMismatch, "unknown wire label '" + label + "'");
  auto strides = strides_of(wires_);
  Mat out = m_;
  long d = m_.rows();
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      long di = (i / strides[p]) % wires_[p].dim;
      long dj = (j / strides[p]) % wires_[p].dim;
      if (di != dj) out(i, j) = 0.0;
    }
  return LabeledOperator(wires_, std::move(out));
}

LabeledOperator operator+(const LabeledOperator& a, const LabeledOperator& b) {
  LabeledOperator bb = b.aligned_to(a.wires());
  return LabeledOperator(a.wires(), a.mat() + bb.mat());
}

LabeledOperator operator-(const LabeledOperator& a, const LabeledOperator& b) {
  LabeledOperator bb = b.aligned_to(a.wires());
  return LabeledOperator(a.wires(), a.mat() - bb.mat());
}

LabeledOperator operator*(const LabeledOperator& a, const LabeledOperator& b) {
  LabeledOperator bb = b.aligned_to(a.wires());
  return LabeledOperator(a.wires(), a.mat() * bb.mat());
}

bool LabeledOperator::is_hermitian(double rel_tol) const {
  return hermiticity_defect() <= rel_tol * std::max(1.0, max_abs());
}

LabeledOperator LabeledOperator::hermitized() const {
  return LabeledOperator(wires_, 0.5 * (m_ + m_.adjoint()));
}

Vec vec(const Mat& a) {
  Vec v(a.size());
  long k = 0;
  for (long n = 0; n < a.rows(); ++n)
    for (long m = 0; m < a.cols(); ++m) v(k++) = a(n, m);
  return v;
}

Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw Error(ErrorCode::Argument, "unvec: size " + std::to_string(v.size()) +
                                         " does not factor as " + std::to_string(rows) + "x" +
                                         std::to_string(cols));
  Mat a(rows, cols);
  long k = 0;
  for (long n = 0; n < rows; ++n)
    for (long m = 0; m < cols; ++m) a(n, m) = v(k++);
  return a;
}

Mat unvec_square(const Vec& v) {
  auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size())
    throw Error(ErrorCode::Argument, "unvec_square: length is not a perfect square");
  return unvec(v, d, d);
}

}  // namespace combforge
