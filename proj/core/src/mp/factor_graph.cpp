#include "hcn/mp/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hcn/mp/factors.hpp"
#include "hcn/model/trees.hpp"

namespace hcn::mp {

namespace {

double change(double before, double after) {
  if (before == after) return 0.0;
  if (std::isinf(before) || std::isinf(after)) return kInf;
  return std::abs(after - before);
}

}  // namespace

VarId FactorGraph::add_variable(double prior) {
  if (!std::isfinite(prior)) throw std::invalid_argument("priors must be finite; use clamp()");
  const auto id = static_cast<VarId>(prior_.size());
  prior_.push_back(prior);
  finite_sum_.push_back(prior);
  n_pos_inf_.push_back(0);
  n_neg_inf_.push_back(0);
  clamp_.push_back(Clamp::Free);
  return id;
}

void FactorGraph::set_prior(VarId v, double prior) {
  if (!std::isfinite(prior)) throw std::invalid_argument("priors must be finite; use clamp()");
  finite_sum_[v] += prior - prior_[v];
  prior_[v] = prior;
}

FactorId FactorGraph::push_factor(FactorKind kind, std::uint32_t param) {
  const auto id = static_cast<FactorId>(factors_.size());
  factors_.push_back({kind, static_cast<std::uint32_t>(edge_var_.size()), 0, param});
  return id;
}

void FactorGraph::push_edge(VarId v, Role role) {
  if (v >= prior_.size()) throw std::out_of_range("unknown variable " + std::to_string(v));
  edge_var_.push_back(v);
  edge_role_.push_back(role);
  edge_msg_.push_back(0.0);
  ++factors_.back().arity;
}

FactorId FactorGraph::add_and(VarId t1, VarId t2, VarId b) {
  const FactorId f = push_factor(FactorKind::And, kNoParam);
  push_edge(t1, Role::Top);
  push_edge(t2, Role::Top);
  push_edge(b, Role::Bottom);
  return f;
}

FactorId FactorGraph::add_or(std::span<const VarId> tops, VarId bottom) {
  if (tops.empty()) throw std::invalid_argument("OR needs at least one top");
  const FactorId f = push_factor(FactorKind::Or, kNoParam);
  for (VarId t : tops) push_edge(t, Role::Top);
  push_edge(bottom, Role::Bottom);
  return f;
}

FactorId FactorGraph::add_pool(VarId top, std::span<const VarId> bottoms, std::span<const double> log_priors) {
  if (bottoms.empty()) throw std::invalid_argument("POOL needs at least one bottom");
  const FactorId f = push_factor(FactorKind::Pool, kNoParam);
  push_edge(top, Role::Top);
  for (VarId b : bottoms) push_edge(b, Role::Bottom);
  if (!log_priors.empty()) set_pool_log_priors(f, log_priors);
  return f;
}

FactorId FactorGraph::add_andor_tree(VarId r, std::span<const VarId> s, std::span<const VarId> w) {
  if (s.size() != w.size()) throw std::invalid_argument("AND-OR tree needs one weight per sparsification leaf");
  const FactorId f = push_factor(FactorKind::AndOrTree, kNoParam);
  push_edge(r, Role::Bottom);
  for (std::size_t i = 0; i < s.size(); ++i) {
    push_edge(s[i], Role::Top);
    push_edge(w[i], Role::Top);
  }
  return f;
}

FactorId FactorGraph::add_class_tree(std::span<const VarId> classes, std::span<const VarId> templates) {
  if (classes.empty() || templates.empty() || templates.size() % classes.size() != 0)
    throw std::invalid_argument("class tree needs J >= 1 templates for each of K >= 1 classes");
  const auto per_class = static_cast<std::uint32_t>(templates.size() / classes.size());
  const FactorId f = push_factor(FactorKind::ClassTree, per_class);
  for (VarId c : classes) push_edge(c, Role::Top);
  for (VarId t : templates) push_edge(t, Role::Bottom);
  return f;
}

void FactorGraph::set_pool_log_priors(FactorId f, std::span<const double> log_priors) {
  Factor& fac = factors_[f];
  if (fac.kind != FactorKind::Pool) throw std::invalid_argument("log priors apply to POOL factors only");
  if (log_priors.size() + 1 != fac.arity) throw std::invalid_argument("one log prior per POOL bottom");
  if (fac.param == kNoParam) {
    fac.param = static_cast<std::uint32_t>(params_.size());
    params_.insert(params_.end(), log_priors.begin(), log_priors.end());
  } else {
    std::copy(log_priors.begin(), log_priors.end(), params_.begin() + fac.param);
  }
}

std::span<const double> FactorGraph::pool_log_priors(FactorId f) const {
  const Factor& fac = factors_[f];
  if (fac.kind != FactorKind::Pool || fac.param == kNoParam) return {};
  return {params_.data() + fac.param, fac.arity - 1};
}

void FactorGraph::add_to_belief(VarId v, double m) {
  if (m == kInf) {
    ++n_pos_inf_[v];
  } else if (m == -kInf) {
    ++n_neg_inf_[v];
  } else {
    finite_sum_[v] += m;
  }
}

void FactorGraph::remove_from_belief(VarId v, double m) {
  if (m == kInf) {
    --n_pos_inf_[v];
  } else if (m == -kInf) {
    --n_neg_inf_[v];
  } else {
    finite_sum_[v] -= m;
  }
}

double FactorGraph::belief(VarId v) const {
  switch (clamp_[v]) {
    case Clamp::One:
      return kInf;
    case Clamp::Zero:
      return -kInf;
    case Clamp::Free:
      break;
  }
  const bool up = n_pos_inf_[v] > 0, down = n_neg_inf_[v] > 0;
  if (up && down) throw IndeterminateForm("variable " + std::to_string(v) + " receives both +inf and -inf");
  if (up) return kInf;
  if (down) return -kInf;
  return finite_sum_[v];
}

double FactorGraph::cavity(FactorId f, std::size_t slot) const {
  const std::size_t e = factors_[f].first + slot;
  const VarId v = edge_var_[e];
  if (clamp_[v] == Clamp::One) return kInf;
  if (clamp_[v] == Clamp::Zero) return -kInf;
  const double m = edge_msg_[e];
  const int up = n_pos_inf_[v] - (m == kInf ? 1 : 0);
  const int down = n_neg_inf_[v] - (m == -kInf ? 1 : 0);
  if (up > 0 && down > 0)
    throw IndeterminateForm("variable " + std::to_string(v) + " receives both +inf and -inf", static_cast<long>(f));
  if (up > 0) return kInf;
  if (down > 0) return -kInf;
  return std::isfinite(m) ? finite_sum_[v] - m : finite_sum_[v];
}

Beliefs FactorGraph::beliefs() const {
  Beliefs b;
  b.values.resize(num_variables());
  for (VarId v = 0; v < num_variables(); ++v) b.values[v] = belief(v);
  b.clamps = clamp_;
  return b;
}

void FactorGraph::set_message(FactorId f, std::size_t slot, double value) {
  const std::size_t e = factors_[f].first + slot;
  remove_from_belief(edge_var_[e], edge_msg_[e]);
  edge_msg_[e] = value;
  add_to_belief(edge_var_[e], value);
}

void FactorGraph::fill_messages(FactorId f, Role toward, double value) {
  for (std::size_t s = 0; s < factors_[f].arity; ++s) {
    if (role(f, s) == toward) set_message(f, s, value);
  }
}

void FactorGraph::fill_messages(Role toward, double value) {
  for (std::size_t e = 0; e < edge_var_.size(); ++e) {
    if (edge_role_[e] == toward) edge_msg_[e] = value;
  }
  refresh_beliefs();
}

void FactorGraph::refresh_beliefs() {
  for (VarId v = 0; v < num_variables(); ++v) {
    finite_sum_[v] = prior_[v];
    n_pos_inf_[v] = 0;
    n_neg_inf_[v] = 0;
  }
  for (std::size_t e = 0; e < edge_var_.size(); ++e) add_to_belief(edge_var_[e], edge_msg_[e]);
}

double FactorGraph::update(FactorId f, Direction direction, double alpha) {
  const Factor& fac = factors_[f];
  const std::size_t n = fac.arity;
  in_buf_.resize(n);
  out_buf_.resize(n);
  const std::span<double> in(in_buf_.data(), n);
  const std::span<double> out(out_buf_.data(), n);

  try {
    for (std::size_t s = 0; s < n; ++s) in[s] = cavity(f, s);

    switch (fac.kind) {
      case FactorKind::And: {
        const AndMessages m = and_update(in[0], in[1], in[2]);
        out[0] = m.top1;
        out[1] = m.top2;
        out[2] = m.bottom;
        break;
      }
      case FactorKind::Or:
        out[n - 1] = or_update(in.first(n - 1), in[n - 1], out.first(n - 1));
        break;
      case FactorKind::Pool: {
        std::span<const double> lp;
        if (fac.param != kNoParam) lp = std::span<const double>(params_).subspan(fac.param, n - 1);
        out[0] = pool_update(in[0], in.subspan(1), lp, out.subspan(1));
        break;
      }
      case FactorKind::AndOrTree:
        model::andor_tree_update(in, out);
        break;
      case FactorKind::ClassTree:
        model::class_tree_update(in, fac.param, out);
        break;
    }
  } catch (const IndeterminateForm& e) {
    throw IndeterminateForm(std::string(e.what()) + " (factor " + std::to_string(f) + ")", static_cast<long>(f));
  }

  double delta = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t e = fac.first + s;
    const Role r = edge_role_[e];
    if (direction == Direction::Up && r != Role::Top) continue;
    if (direction == Direction::Down && r != Role::Bottom) continue;
    const double before = edge_msg_[e];
    const double after = damped_assign(before, out[s], alpha);
    if (after == before) continue;
    delta = std::max(delta, change(before, after));
    remove_from_belief(edge_var_[e], before);
    edge_msg_[e] = after;
    add_to_belief(edge_var_[e], after);
  }
  return delta;
}

}  // namespace hcn::mp
