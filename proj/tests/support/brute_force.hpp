#pragma once

#include <cstdint>
#include <vector>

#include "hcn/mp/factor_graph.hpp"

namespace hcn::testing {

// Log-potential of one factor under a full assignment; -inf when infeasible.
double factor_log_potential(const mp::FactorGraph& g, mp::FactorId f, const std::vector<std::uint8_t>& x);

// Joint log score: priors times values plus every factor potential. Clamps are honoured.
double joint_score(const mp::FactorGraph& g, const std::vector<std::uint8_t>& x);

// Exact max-marginal differences by enumerating all 2^n assignments (n <= 22).
std::vector<double> exact_max_marginals(const mp::FactorGraph& g);

// Highest-scoring assignment, lowest index on ties.
std::vector<std::uint8_t> exact_map(const mp::FactorGraph& g);

}  // namespace hcn::testing
