#ifndef COMBFORGE_CORE_RNG_HPP
#define COMBFORGE_CORE_RNG_HPP

#include <cstdint>
#include <random>

#include "core/types.hpp"

namespace combforge {

/// Seeded generator with a stdlib-independent Gaussian, so that results are
/// reproducible for a given seed across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();            // [0, 1)
  double gaussian();           // standard normal, Box-Muller
  cxd complex_gaussian();      // re and im independent N(0, 1)
  std::uint64_t integer(std::uint64_t bound);  // [0, bound)

  Mat ginibre(Eigen::Index rows, Eigen::Index cols);
  Mat haar_unitary(Eigen::Index d);
  /// cols <= rows; columns orthonormal, Haar-distributed.
  Mat haar_isometry(Eigen::Index rows, Eigen::Index cols);
  Vec haar_ket(Eigen::Index d);
  Mat random_hermitian(Eigen::Index d);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace combforge

#endif
