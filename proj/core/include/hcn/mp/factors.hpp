#pragma once

#include <span>

#include "hcn/mp/extended.hpp"

namespace hcn::mp {

struct AndMessages {
  double top1;
  double top2;
  double bottom;
};

/// AND(b | t1, t2): b is the conjunction of the two tops.
AndMessages and_update(double in_t1, double in_t2, double in_b);

// Components of and_update, reused by the composite tree kernels.
double and_to_top(double in_other_top, double in_bottom);
double and_to_bottom(double in_t1, double in_t2);

/// OR(b | t_1..t_M). Writes the top-bound messages into out_tops and returns
/// the bottom-bound message. Argmax ties resolve to the lowest index.
double or_update(std::span<const double> in_tops, double in_b, std::span<double> out_tops);

/// POOL(b_1..b_M | t): exactly one bottom is on when t is on, none otherwise.
/// `log_priors` holds the per-bottom log-probability of the active choice; an
/// empty span means the uniform -log M. Returns the top-bound message.
double pool_update(double in_t, std::span<const double> in_bottoms,
                   std::span<const double> log_priors, std::span<double> out_bottoms);

/// (1 - alpha) * old + alpha * fresh, alpha in (0, 1].
double damped_assign(double old, double fresh, double alpha);

}  // namespace hcn::mp
