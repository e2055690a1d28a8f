#include "hcn/mp/schedule.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace hcn::mp {

Beliefs run_schedule(FactorGraph& graph, std::span<const Visit> schedule, int iterations) {
  for (const Visit& v : schedule) {
    if (v.factor >= graph.num_factors()) throw std::out_of_range("schedule visits an unknown factor");
  }
  for (int it = 0; it < iterations; ++it) {
    for (const Visit& v : schedule) graph.update(v.factor, v.direction, v.alpha);
  }
  return graph.beliefs();
}

std::vector<Visit> random_sequential_schedule(FactorGraph& graph, double alpha) {
  std::vector<FactorId> order(graph.num_factors());
  std::iota(order.begin(), order.end(), FactorId{0});
  graph.rng().shuffle(std::span<FactorId>(order));
  std::vector<Visit> visits;
  visits.reserve(order.size());
  for (FactorId f : order) visits.push_back({f, Direction::Both, alpha});
  return visits;
}

std::vector<Visit> tree_schedule(const FactorGraph& graph, VarId root) {
  std::vector<std::vector<FactorId>> var_factors(graph.num_variables());
  for (FactorId f = 0; f < graph.num_factors(); ++f) {
    for (std::size_t s = 0; s < graph.arity(f); ++s) var_factors[graph.neighbor(f, s)].push_back(f);
  }

  // Breadth-first discovery order of factors from the root.
  std::vector<bool> seen_var(graph.num_variables(), false), seen_factor(graph.num_factors(), false);
  std::vector<FactorId> order;
  std::deque<VarId> frontier{root};
  seen_var[root] = true;
  while (!frontier.empty()) {
    const VarId v = frontier.front();
    frontier.pop_front();
    for (FactorId f : var_factors[v]) {
      if (seen_factor[f]) continue;
      seen_factor[f] = true;
      order.push_back(f);
      for (std::size_t s = 0; s < graph.arity(f); ++s) {
        const VarId u = graph.neighbor(f, s);
        if (!seen_var[u]) {
          seen_var[u] = true;
          frontier.push_back(u);
        }
      }
    }
  }

  std::vector<Visit> visits;
  visits.reserve(2 * order.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) visits.push_back({*it});
  for (FactorId f : order) visits.push_back({f});
  return visits;
}

}  // namespace hcn::mp
