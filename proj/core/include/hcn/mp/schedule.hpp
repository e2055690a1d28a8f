#pragma once

#include <span>
#include <vector>

#include "hcn/mp/factor_graph.hpp"

namespace hcn::mp {

struct Visit {
  FactorId factor;
  Direction direction = Direction::Both;
  double alpha = 1.0;
};

/// Performs the visits in order, `iterations` times, and returns the final beliefs.
/// Indeterminate forms propagate with the offending factor id attached.
Beliefs run_schedule(FactorGraph& graph, std::span<const Visit> schedule, int iterations = 1);

/// Every factor once, in an order drawn from the graph's seeded generator.
std::vector<Visit> random_sequential_schedule(FactorGraph& graph, double alpha = 1.0);

/// Leaf-to-root then root-to-leaf over a tree-structured graph (one visit per
/// factor in each sweep). Exact max-marginals after a single run with alpha = 1.
std::vector<Visit> tree_schedule(const FactorGraph& graph, VarId root);

}  // namespace hcn::mp
