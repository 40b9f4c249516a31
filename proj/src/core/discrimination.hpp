#ifndef COMBFORGE_CORE_DISCRIMINATION_HPP
#define COMBFORGE_CORE_DISCRIMINATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/comb.hpp"

namespace combforge {

/// p_e = (R_1 * T_0 + R_0 * T_1) / 2 for a two-branch tester.
double error_prob(const CombValue& r0, const CombValue& r1, const Instrument& tester);

/// Minimum-error probability for two equiprobable states:
/// 1/2 (1 - ||rho0 - rho1||_1 / 2).
double helstrom_pe(const LabeledOperator& rho0, const LabeledOperator& rho1);

enum class OpnormMethod { Sampled, Seesaw };

struct OpnormOptions {
  OpnormMethod method = OpnormMethod::Seesaw;
  int iters = 50;
  std::uint64_t seed = 0;
};

struct OpnormBound {
  double value = 0.0;    // 1 - 2 * best_pe, a lower bound on ||R0 - R1||_op
  double best_pe = 0.5;
  // the achieved (non-adaptive) tester: input on (comb inputs (x) reference)
  // and the binary measurement projector on (comb outputs (x) reference)
  Vec input_state;
  Mat measurement;
  std::string method_note;
};

/// Lower bound on the operational distance from non-adaptive testers: a pure
/// input (entangled with a reference of the same dimension as the comb's
/// input space) followed by a binary measurement on outputs and reference.
/// Seesaw alternates the Helstrom measurement with the best input for the
/// fixed measurement; it is monotone in the iteration count. Exact for
/// single-step combs and states.
OpnormBound opnorm_lower_bound(const CombValue& r0, const CombValue& r1,
                               const OpnormOptions& opts = {});

}  // namespace combforge

#endif
