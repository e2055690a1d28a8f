#pragma once

#include <cstddef>
#include <span>

namespace hcn::model {

/// Exact update of one representation element's OR together with its AND
/// children, R = OR_i (S_i AND W_i). Layout of both spans: [r, s1, w1, s2, w2, ...].
/// The AND bottoms are internal to the tree, so a single bottom-up / OR /
/// top-down sweep gives the exact max-marginals of the composite factor.
void andor_tree_update(std::span<const double> in, std::span<double> out);

/// Exact update of the class layer: a POOL over K classes whose top is clamped
/// on, and under each class a POOL over its J templates.
/// Layout: [c_1..c_K, s_11..s_J1, s_12..s_J2, ...] (template j of class k at K + k*J + j).
void class_tree_update(std::span<const double> in, std::size_t templates_per_class,
                       std::span<double> out);

}  // namespace hcn::model
