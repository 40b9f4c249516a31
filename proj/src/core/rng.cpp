#include "core/rng.hpp"

#include <cmath>

#include <Eigen/QR>

namespace combforge {

double Rng::uniform() {
  // 53-bit mantissa fill
  return (engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

cxd Rng::complex_gaussian() {
  double re = gaussian();
  double im = gaussian();
  return {re, im};
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::Argument, "integer: bound must be positive");
  return engine_() % bound;
}

Mat Rng::ginibre(Eigen::Index rows, Eigen::Index cols) {
  Mat g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_gaussian();
  return g;
}

Mat Rng::haar_unitary(Eigen::Index d) { return haar_isometry(d, d); }

Mat Rng::haar_isometry(Eigen::Index rows, Eigen::Index cols) {
  if (cols > rows) throw Error(ErrorCode::Argument, "haar_isometry: cols > rows");
  Mat g = ginibre(rows, cols);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(rows, cols);
  Mat r = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  // fix the phase ambiguity so the distribution is exactly Haar
  for (Eigen::Index j = 0; j < cols; ++j) {
    cxd rjj = r(j, j);
    double a = std::abs(rjj);
    q.col(j) *= (a > 0.0) ? (rjj / a) : cxd(1.0, 0.0);
  }
  return q;
}

Vec Rng::haar_ket(Eigen::Index d) {
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = complex_gaussian();
  double n = v.norm();
  if (n == 0.0) return haar_ket(d);
  return v / n;
}

Mat Rng::random_hermitian(Eigen::Index d) {
  Mat g = ginibre(d, d);
  return 0.5 * (g + g.adjoint());
}

}  // namespace combforge
