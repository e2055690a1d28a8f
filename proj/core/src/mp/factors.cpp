#include "hcn/mp/factors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace hcn::mp {

namespace {

// Index of the largest and second largest entries; ties favour lower indices.
struct TopTwo {
  std::ptrdiff_t first = -1;
  std::ptrdiff_t second = -1;
};

template <typename Value>
TopTwo top_two(std::size_t n, Value value) {
  TopTwo t;
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::ptrdiff_t>(i);
    const double v = value(i);
    if (t.first < 0 || v > value(static_cast<std::size_t>(t.first))) {
      t.second = t.first;
      t.first = idx;
    } else if (t.second < 0 || v > value(static_cast<std::size_t>(t.second))) {
      t.second = idx;
    }
  }
  return t;
}

// Sum of max(0, x_j) that tracks +inf terms separately so that one term can be
// removed again without computing inf - inf.
struct PositiveSum {
  double finite = 0.0;
  int n_inf = 0;

  void add(double x) {
    if (x == kInf) {
      ++n_inf;
    } else {
      finite += pos(x);
    }
  }

  double without(double x) const {
    if (x == kInf) return n_inf > 1 ? kInf : finite;
    if (n_inf > 0) return kInf;
    return finite - pos(x);
  }

  double total() const { return n_inf > 0 ? kInf : finite; }
};

}  // namespace

double and_to_top(double in_other_top, double in_bottom) {
  // max(0, o + b) - max(0, o), continuously extended to o = +-inf.
  if (in_other_top == kInf) return in_bottom;
  if (in_other_top == -kInf) {
    if (in_bottom == kInf) throw IndeterminateForm("AND: bottom forced on while a top is forced off");
    return 0.0;
  }
  return pos(in_other_top + in_bottom) - pos(in_other_top);
}

double and_to_bottom(double in_t1, double in_t2) {
  if (in_t1 == -kInf || in_t2 == -kInf) return -kInf;
  return std::min({in_t1 + in_t2, in_t1, in_t2});
}

AndMessages and_update(double in_t1, double in_t2, double in_b) {
  return {and_to_top(in_t2, in_b), and_to_top(in_t1, in_b), and_to_bottom(in_t1, in_t2)};
}

double or_update(std::span<const double> in_tops, double in_b, std::span<double> out_tops) {
  const std::size_t m = in_tops.size();
  if (m == 0) throw std::invalid_argument("OR factor needs at least one top");
  assert(out_tops.size() == m);

  const TopTwo best = top_two(m, [&](std::size_t i) { return in_tops[i]; });
  PositiveSum positives;
  for (double t : in_tops) positives.add(t);

  for (std::size_t k = 0; k < m; ++k) {
    // Best among the other tops; +inf stands for the empty set (M = 1).
    const std::ptrdiff_t other = static_cast<std::ptrdiff_t>(k) == best.first ? best.second : best.first;
    const double rest = positives.without(in_tops[k]);
    const double on = in_b + rest;
    if (std::isnan(on)) throw IndeterminateForm("OR: bottom forced off while another top is forced on");
    const double off = other < 0 ? kInf : pos(-in_tops[static_cast<std::size_t>(other)]);
    out_tops[k] = std::min(on, off);
  }

  const double lead = in_tops[static_cast<std::size_t>(best.first)];
  return lead + positives.without(lead);
}

double pool_update(double in_t, std::span<const double> in_bottoms,
                   std::span<const double> log_priors, std::span<double> out_bottoms) {
  const std::size_t m = in_bottoms.size();
  if (m == 0) throw std::invalid_argument("POOL factor needs at least one bottom");
  assert(out_bottoms.size() == m);
  assert(log_priors.empty() || log_priors.size() == m);

  if (log_priors.empty()) {
    const double log_m = std::log(static_cast<double>(m));
    const TopTwo best = top_two(m, [&](std::size_t i) { return in_bottoms[i]; });
    for (std::size_t k = 0; k < m; ++k) {
      const std::ptrdiff_t other = static_cast<std::ptrdiff_t>(k) == best.first ? best.second : best.first;
      const double rival = other < 0 ? kInf : -in_bottoms[static_cast<std::size_t>(other)];
      out_bottoms[k] = std::min(in_t - log_m, rival);
    }
    return in_bottoms[static_cast<std::size_t>(best.first)] - log_m;
  }

  const auto scored = [&](std::size_t i) { return in_bottoms[i] + log_priors[i]; };
  const TopTwo best = top_two(m, scored);
  for (std::size_t k = 0; k < m; ++k) {
    const std::ptrdiff_t other = static_cast<std::ptrdiff_t>(k) == best.first ? best.second : best.first;
    const double rival = other < 0 ? kInf : log_priors[k] - scored(static_cast<std::size_t>(other));
    out_bottoms[k] = std::min(in_t + log_priors[k], rival);
  }
  return scored(static_cast<std::size_t>(best.first));
}

double damped_assign(double old, double fresh, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
  if (alpha == 1.0) return fresh;
  // An infinite previous value has no magnitude to blend with.
  if (!std::isfinite(old) || !std::isfinite(fresh)) return fresh;
  return (1.0 - alpha) * old + alpha * fresh;
}

}  // namespace hcn::mp
