#include "support/brute_force.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hcn::testing {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool value(const mp::FactorGraph& g, mp::FactorId f, std::size_t slot, const std::vector<std::uint8_t>& x) {
  return x[g.neighbor(f, slot)] != 0;
}

}  // namespace

double factor_log_potential(const mp::FactorGraph& g, mp::FactorId f, const std::vector<std::uint8_t>& x) {
  const std::size_t n = g.arity(f);
  switch (g.kind(f)) {
    case mp::FactorKind::And:
      return value(g, f, 2, x) == (value(g, f, 0, x) && value(g, f, 1, x)) ? 0.0 : kNegInf;
    case mp::FactorKind::Or: {
      bool any = false;
      for (std::size_t i = 0; i + 1 < n; ++i) any = any || value(g, f, i, x);
      return value(g, f, n - 1, x) == any ? 0.0 : kNegInf;
    }
    case mp::FactorKind::Pool: {
      std::size_t on = 0, which = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (value(g, f, i, x)) ++on, which = i - 1;
      if (!value(g, f, 0, x)) return on == 0 ? 0.0 : kNegInf;
      if (on != 1) return kNegInf;
      const auto lp = g.pool_log_priors(f);
      return lp.empty() ? -std::log(static_cast<double>(n - 1)) : lp[which];
    }
    case mp::FactorKind::AndOrTree: {
      bool any = false;
      for (std::size_t i = 1; i + 1 < n; i += 2) any = any || (value(g, f, i, x) && value(g, f, i + 1, x));
      return value(g, f, 0, x) == any ? 0.0 : kNegInf;
    }
    case mp::FactorKind::ClassTree: {
      const std::size_t j_per = g.templates_per_class(f);
      const std::size_t k = (n) / (1 + j_per);
      std::size_t classes_on = 0, cls = 0, templates_on = 0, tcls = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (value(g, f, i, x)) ++classes_on, cls = i;
      for (std::size_t i = 0; i < k * j_per; ++i)
        if (value(g, f, k + i, x)) ++templates_on, tcls = i / j_per;
      if (classes_on != 1 || templates_on != 1 || tcls != cls) return kNegInf;
      return -std::log(static_cast<double>(k)) - std::log(static_cast<double>(j_per));
    }
  }
  throw std::logic_error("unknown factor kind");
}

double joint_score(const mp::FactorGraph& g, const std::vector<std::uint8_t>& x) {
  double s = 0.0;
  for (mp::VarId v = 0; v < g.num_variables(); ++v) {
    const mp::Clamp c = g.clamp_state(v);
    if ((c == mp::Clamp::One && !x[v]) || (c == mp::Clamp::Zero && x[v])) return kNegInf;
    if (x[v]) s += g.prior(v);
  }
  for (mp::FactorId f = 0; f < g.num_factors(); ++f) {
    s += factor_log_potential(g, f, x);
    if (s == kNegInf) return s;
  }
  return s;
}

namespace {

template <class Visit>
void enumerate(const mp::FactorGraph& g, Visit visit) {
  const std::size_t n = g.num_variables();
  if (n > 22) throw std::length_error("too many variables to enumerate");
  std::vector<std::uint8_t> x(n);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    for (std::size_t v = 0; v < n; ++v) x[v] = static_cast<std::uint8_t>((code >> v) & 1U);
    visit(x, joint_score(g, x));
  }
}

}  // namespace

std::vector<double> exact_max_marginals(const mp::FactorGraph& g) {
  const std::size_t n = g.num_variables();
  std::vector<double> best1(n, kNegInf), best0(n, kNegInf);
  enumerate(g, [&](const std::vector<std::uint8_t>& x, double s) {
    for (std::size_t v = 0; v < n; ++v) {
      double& b = x[v] ? best1[v] : best0[v];
      if (s > b) b = s;
    }
  });
  std::vector<double> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (best1[v] == kNegInf && best0[v] == kNegInf) throw std::domain_error("graph has no feasible assignment");
    out[v] = best1[v] - best0[v];
  }
  return out;
}

std::vector<std::uint8_t> exact_map(const mp::FactorGraph& g) {
  std::vector<std::uint8_t> best;
  double best_score = kNegInf;
  enumerate(g, [&](const std::vector<std::uint8_t>& x, double s) {
    if (best.empty() || s > best_score) best = x, best_score = s;
  });
  return best;
}

}  // namespace hcn::testing
