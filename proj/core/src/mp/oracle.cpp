#include "hcn/mp/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>

#include "hcn/mp/extended.hpp"

namespace hcn::mp {

namespace {

using Assignment = std::uint32_t;

bool bit(Assignment x, std::size_t i) { return ((x >> i) & 1U) != 0; }

// Log-potential of a configuration, or nullopt when the factor forbids it.
using Potential = std::function<std::optional<double>(Assignment)>;

Potential make_potential(FactorKind kind, std::size_t n, std::size_t templates_per_class,
                         std::span<const double> pool_log_priors) {
  switch (kind) {
    case FactorKind::And:
      if (n != 3) throw std::invalid_argument("AND has exactly three variables");
      return [](Assignment x) -> std::optional<double> {
        if (bit(x, 2) != (bit(x, 0) && bit(x, 1))) return std::nullopt;
        return 0.0;
      };
    case FactorKind::Or:
      if (n < 2) throw std::invalid_argument("OR needs at least one top");
      return [n](Assignment x) -> std::optional<double> {
        bool any = false;
        for (std::size_t i = 0; i + 1 < n; ++i) any = any || bit(x, i);
        if (bit(x, n - 1) != any) return std::nullopt;
        return 0.0;
      };
    case FactorKind::Pool: {
      if (n < 2) throw std::invalid_argument("POOL needs at least one bottom");
      const std::size_t m = n - 1;
      if (!pool_log_priors.empty() && pool_log_priors.size() != m)
        throw std::invalid_argument("POOL log-prior count mismatch");
      std::vector<double> lp(pool_log_priors.begin(), pool_log_priors.end());
      if (lp.empty()) lp.assign(m, -std::log(static_cast<double>(m)));
      return [m, lp](Assignment x) -> std::optional<double> {
        std::size_t on = 0, which = 0;
        for (std::size_t i = 0; i < m; ++i) {
          if (bit(x, i + 1)) {
            ++on;
            which = i;
          }
        }
        if (!bit(x, 0)) return on == 0 ? std::optional<double>(0.0) : std::nullopt;
        if (on != 1) return std::nullopt;
        return lp[which];
      };
    }
    case FactorKind::AndOrTree:
      if (n < 3 || n % 2 == 0) throw std::invalid_argument("AND-OR tree layout is [r, (s, w)...]");
      return [n](Assignment x) -> std::optional<double> {
        bool any = false;
        for (std::size_t i = 1; i + 1 < n; i += 2) any = any || (bit(x, i) && bit(x, i + 1));
        if (bit(x, 0) != any) return std::nullopt;
        return 0.0;
      };
    case FactorKind::ClassTree: {
      const std::size_t j = templates_per_class;
      if (j == 0 || n % (j + 1) != 0) throw std::invalid_argument("class tree layout is [c_1..c_K, s_11..s_JK]");
      const std::size_t k = n / (j + 1);
      const double penalty = -std::log(static_cast<double>(k)) - std::log(static_cast<double>(j));
      return [j, k, penalty](Assignment x) -> std::optional<double> {
        std::size_t classes_on = 0, cls = 0;
        for (std::size_t c = 0; c < k; ++c) {
          if (bit(x, c)) {
            ++classes_on;
            cls = c;
          }
        }
        if (classes_on != 1) return std::nullopt;
        std::size_t templates_on = 0;
        for (std::size_t t = 0; t < j * k; ++t) {
          if (!bit(x, k + t)) continue;
          if (t / j != cls) return std::nullopt;
          ++templates_on;
        }
        if (templates_on != 1) return std::nullopt;
        return penalty;
      };
    }
  }
  throw std::invalid_argument("unknown factor kind");
}

// Contribution of one incoming message when its variable takes `value`.
// +inf acts as "must be 1", -inf as "must be 0"; only -inf ever enters a sum.
double incoming_term(double m, bool value) {
  if (m == kInf) return value ? 0.0 : -kInf;
  if (m == -kInf) return value ? -kInf : 0.0;
  return value ? m : 0.0;
}

}  // namespace

std::vector<double> oracle_factor_update(FactorKind kind, std::span<const double> incoming,
                                         std::size_t templates_per_class,
                                         std::span<const double> pool_log_priors) {
  const std::size_t n = incoming.size();
  if (n > kMaxOracleArity) throw std::length_error("factor arity too large to enumerate");
  const Potential potential = make_potential(kind, n, templates_per_class, pool_log_priors);

  std::vector<double> best_on(n, -kInf), best_off(n, -kInf);
  const Assignment total = Assignment{1} << n;
  for (Assignment x = 0; x < total; ++x) {
    const auto phi = potential(x);
    if (!phi) continue;
    double finite = *phi;
    int forbidden = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = incoming_term(incoming[i], bit(x, i));
      if (t == -kInf) {
        ++forbidden;
      } else {
        finite += t;
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      // Outgoing messages exclude v's own incoming message.
      const double t = incoming_term(incoming[v], bit(x, v));
      const int others_forbidden = forbidden - (t == -kInf ? 1 : 0);
      if (others_forbidden > 0) continue;
      const double s = t == -kInf ? finite : finite - t;
      double& slot = bit(x, v) ? best_on[v] : best_off[v];
      if (s > slot) slot = s;
    }
  }

  std::vector<double> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (best_on[v] == -kInf && best_off[v] == -kInf)
      throw IndeterminateForm("oracle: no feasible configuration for variable " + std::to_string(v));
    out[v] = best_on[v] - best_off[v];
  }
  return out;
}

}  // namespace hcn::mp
