#ifndef COMBFORGE_CORE_TYPES_HPP
#define COMBFORGE_CORE_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace combforge {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Default tolerances, overridable per call.
struct Tol {
  static constexpr double check = 1e-8;     // verification defects
  static constexpr double rank = 1e-9;      // relative eigenvalue cutoff for rank/support
  static constexpr double herm = 1e-10;     // relative Hermiticity defect
  static constexpr double snap = 1e-9;      // closed-form threshold snapping
};

enum class ErrorCode {
  WireMismatch,   // duplicate/unknown labels, dimension clashes
  Argument,       // bad parameters
  Schema,         // malformed document
  Io,             // file system
  Verification,   // a check the caller asked to enforce failed
  Numeric,        // input violates a numerical precondition (e.g. not Hermitian)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class WireKind { Quantum, Classical };

// One tensor factor. Classical wires are ordinary factors whose operators are
// required to stay diagonal in the computational basis; that predicate is
// checked by comb validation, not by construction.
struct Wire {
  std::string label;
  int dim = 1;
  WireKind kind = WireKind::Quantum;

  friend bool operator==(const Wire& a, const Wire& b) {
    return a.label == b.label && a.dim == b.dim && a.kind == b.kind;
  }
};

}  // namespace combforge

#endif
