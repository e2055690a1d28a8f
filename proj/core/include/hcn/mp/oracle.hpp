#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hcn::mp {

enum class FactorKind { And, Or, Pool, AndOrTree, ClassTree };

/// Brute-force max-marginalisation of one factor, used as the reference for the
/// closed-form updates. Variable order matches FactorGraph's neighbour layout:
///   And        [t1, t2, b]
///   Or         [t1..tM, b]
///   Pool       [t, b1..bM]
///   AndOrTree  [r, s1, w1, s2, w2, ...]
///   ClassTree  [c1..cK, s_11..s_JK]  (templates class-major; needs templates_per_class)
/// `pool_log_priors` optionally replaces the uniform -log M of a POOL.
/// Throws std::length_error above kMaxOracleArity variables.
std::vector<double> oracle_factor_update(FactorKind kind, std::span<const double> incoming,
                                         std::size_t templates_per_class = 1,
                                         std::span<const double> pool_log_priors = {});

inline constexpr std::size_t kMaxOracleArity = 20;

}  // namespace hcn::mp
