#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hcn/mp/extended.hpp"
#include "hcn/mp/oracle.hpp"
#include "hcn/util/rng.hpp"

namespace hcn::mp {

using VarId = std::uint32_t;
using FactorId = std::uint32_t;

/// Position of a variable in a factor: tops are generative parents.
enum class Role : std::uint8_t { Top, Bottom };

enum class Clamp : std::uint8_t { Free, Zero, One };

/// Which outgoing messages a visit rewrites: Up = messages to Top neighbours.
enum class Direction : std::uint8_t { Up, Down, Both };

struct Beliefs {
  std::vector<double> values;
  std::vector<Clamp> clamps;
};

/// Binary factor graph over AND / OR / POOL factors and the two composite HCN
/// trees. Each directed factor-to-variable edge stores one normalised message;
/// beliefs are cached per variable and updated incrementally, so a factor
/// visit costs O(arity).
///
/// Neighbour layouts (roles in parentheses):
///   And        t1 t2 (Top), b (Bottom)
///   Or         t1..tM (Top), b (Bottom)
///   Pool       t (Top), b1..bM (Bottom)
///   AndOrTree  r (Bottom), s1 w1 s2 w2 ... (Top)
///   ClassTree  c1..cK (Top), s_11..s_JK class-major (Bottom)
///
/// Single writer: a graph is a self-contained value; concurrent const access
/// is safe only while nobody updates it.
class FactorGraph {
 public:
  explicit FactorGraph(std::uint64_t seed = 0) : rng_(seed) {}

  VarId add_variable(double prior = 0.0);
  std::size_t num_variables() const { return prior_.size(); }

  FactorId add_and(VarId t1, VarId t2, VarId b);
  FactorId add_or(std::span<const VarId> tops, VarId bottom);
  FactorId add_pool(VarId top, std::span<const VarId> bottoms, std::span<const double> log_priors = {});
  FactorId add_andor_tree(VarId r, std::span<const VarId> s, std::span<const VarId> w);
  FactorId add_class_tree(std::span<const VarId> classes, std::span<const VarId> templates);

  std::size_t num_factors() const { return factors_.size(); }
  std::size_t num_edges() const { return edge_var_.size(); }

  FactorKind kind(FactorId f) const { return factors_[f].kind; }
  std::size_t arity(FactorId f) const { return factors_[f].arity; }
  VarId neighbor(FactorId f, std::size_t slot) const { return edge_var_[factors_[f].first + slot]; }
  Role role(FactorId f, std::size_t slot) const { return edge_role_[factors_[f].first + slot]; }

  void set_pool_log_priors(FactorId f, std::span<const double> log_priors);
  /// Empty for a uniform POOL.
  std::span<const double> pool_log_priors(FactorId f) const;
  /// Templates per class of a ClassTree.
  std::size_t templates_per_class(FactorId f) const { return factors_[f].param; }

  double prior(VarId v) const { return prior_[v]; }
  void set_prior(VarId v, double prior);
  void clamp(VarId v, Clamp c) { clamp_[v] = c; }
  Clamp clamp_state(VarId v) const { return clamp_[v]; }

  /// Sum of prior and all incoming factor messages; +-inf when clamped.
  double belief(VarId v) const;
  /// Message into factor f from its neighbour at `slot`: the belief without f's own message.
  double cavity(FactorId f, std::size_t slot) const;
  Beliefs beliefs() const;

  double message(FactorId f, std::size_t slot) const { return edge_msg_[factors_[f].first + slot]; }
  void set_message(FactorId f, std::size_t slot, double value);
  /// Sets every message sent toward neighbours holding `toward`.
  void fill_messages(Role toward, double value);
  void fill_messages(FactorId f, Role toward, double value);

  /// Recomputes the outgoing messages of f, replacing those selected by
  /// `direction` through damped_assign. Returns the largest absolute change
  /// (inf when a message moved to or from an infinity).
  double update(FactorId f, Direction direction = Direction::Both, double alpha = 1.0);

  /// Rebuilds cached beliefs from the stored messages.
  void refresh_beliefs();

  Rng& rng() { return rng_; }

 private:
  struct Factor {
    FactorKind kind;
    std::uint32_t first;
    std::uint32_t arity;
    std::uint32_t param;  // POOL: offset into params_ or kNoParam; ClassTree: templates per class
  };
  static constexpr std::uint32_t kNoParam = 0xffffffffU;

  FactorId push_factor(FactorKind kind, std::uint32_t param);
  void push_edge(VarId v, Role role);
  void add_to_belief(VarId v, double m);
  void remove_from_belief(VarId v, double m);

  std::vector<double> prior_;
  std::vector<double> finite_sum_;
  std::vector<std::int32_t> n_pos_inf_;
  std::vector<std::int32_t> n_neg_inf_;
  std::vector<Clamp> clamp_;

  std::vector<Factor> factors_;
  std::vector<VarId> edge_var_;
  std::vector<Role> edge_role_;
  std::vector<double> edge_msg_;
  std::vector<double> params_;

  std::vector<double> in_buf_;
  std::vector<double> out_buf_;
  Rng rng_;
};

}  // namespace hcn::mp
