#include "core/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace combforge {

Eigh eigh(const Mat& a, double herm_tol) {
  double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (defect > herm_tol * std::max(1.0, scale))
    throw Error(ErrorCode::Numeric,
                "eigh: input is not Hermitian (defect " + std::to_string(defect) + ")");
  Mat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::Numeric, "eigh: eigensolver did not converge");
  return Eigh{solver.eigenvalues(), solver.eigenvectors()};
}

Eigh eigh(const LabeledOperator& a, double herm_tol) { return eigh(a.mat(), herm_tol); }

namespace {
double rank_cutoff(const RVec& values, double rank_tol) {
  double vmax = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  return rank_tol * std::max(1.0, vmax);
}
}  // namespace

int rank_of(const Mat& a, double rank_tol) {
  auto e = eigh(a);
  double cut = rank_cutoff(e.values, rank_tol);
  int r = 0;
  for (long i = 0; i < e.values.size(); ++i)
    if (std::abs(e.values(i)) > cut) ++r;
  return r;
}

int rank_of(const LabeledOperator& a, double rank_tol) { return rank_of(a.mat(), rank_tol); }

double min_eigenvalue(const LabeledOperator& a) { return eigh(a).values.minCoeff(); }

Mat sqrt_psd(const Mat& a, double rank_tol) {
  auto e = eigh(a);
  double cut = rank_cutoff(e.values, rank_tol);
  RVec roots(e.values.size());
  for (long i = 0; i < e.values.size(); ++i)
    roots(i) = e.values(i) > cut ? std::sqrt(e.values(i)) : 0.0;
  return e.vectors * roots.asDiagonal() * e.vectors.adjoint();
}

LabeledOperator sqrt_psd(const LabeledOperator& a, double rank_tol) {
  return LabeledOperator(a.wires(), sqrt_psd(a.mat(), rank_tol));
}

Mat pinv_sqrt(const Mat& a, double rank_tol) {
  auto e = eigh(a);
  double cut = rank_cutoff(e.values, rank_tol);
  RVec roots(e.values.size());
  for (long i = 0; i < e.values.size(); ++i)
    roots(i) = e.values(i) > cut ? 1.0 / std::sqrt(e.values(i)) : 0.0;
  return e.vectors * roots.asDiagonal() * e.vectors.adjoint();
}

LabeledOperator pinv_sqrt(const LabeledOperator& a, double rank_tol) {
  return LabeledOperator(a.wires(), pinv_sqrt(a.mat(), rank_tol));
}

double trace_norm(const Mat& a) {
  double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= Tol::herm * std::max(1.0, scale))
    return eigh(a).values.cwiseAbs().sum();
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

double trace_norm(const LabeledOperator& a) { return trace_norm(a.mat()); }

namespace {

// Reshape a pure vector into the (cut | rest) matrix, permuting digits so the
// cut wires become the row index.
Mat bipartition_matrix(const Vec& v, const std::vector<Wire>& wires,
                       const std::vector<std::string>& cut_labels) {
  long total = 1;
  for (const auto& w : wires) total *= w.dim;
  if (v.size() != total)
    throw Error(ErrorCode::WireMismatch, "schmidt: vector length does not match wires");

  std::vector<int> cut_pos, rest_pos;
  for (const auto& l : cut_labels) {
    int p = -1;
    for (size_t i = 0; i < wires.size(); ++i)
      if (wires[i].label == l) p = static_cast<int>(i);
    if (p < 0) throw Error(ErrorCode::WireMismatch, "schmidt: unknown cut label '" + l + "'");
    cut_pos.push_back(p);
  }
  for (int i = 0; i < static_cast<int>(wires.size()); ++i)
    if (std::find(cut_pos.begin(), cut_pos.end(), i) == cut_pos.end()) rest_pos.push_back(i);

  std::vector<long> strides(wires.size(), 1);
  for (int i = static_cast<int>(wires.size()) - 2; i >= 0; --i)
    strides[i] = strides[i + 1] * wires[i + 1].dim;

  long rows = 1, cols = 1;
  for (int p : cut_pos) rows *= wires[p].dim;
  for (int p : rest_pos) cols *= wires[p].dim;

  Mat m = Mat::Zero(rows, cols);
  for (long i = 0; i < total; ++i) {
    long r = 0, c = 0;
    for (int p : cut_pos) r = r * wires[p].dim + (i / strides[p]) % wires[p].dim;
    for (int p : rest_pos) c = c * wires[p].dim + (i / strides[p]) % wires[p].dim;
    m(r, c) = v(i);
  }
  return m;
}

}  // namespace

RVec schmidt_coefficients(const Vec& v, const std::vector<Wire>& wires,
                          const std::vector<std::string>& cut_labels) {
  Mat m = bipartition_matrix(v, wires, cut_labels);
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues();
}

int schmidt_rank(const Vec& v, const std::vector<Wire>& wires,
                 const std::vector<std::string>& cut_labels, double rank_tol) {
  RVec s = schmidt_coefficients(v, wires, cut_labels);
  double cut = rank_tol * std::max(1.0, s.size() ? s(0) : 0.0);
  int r = 0;
  for (long i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

}  // namespace combforge
