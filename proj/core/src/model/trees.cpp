#include "hcn/model/trees.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hcn/mp/extended.hpp"
#include "hcn/mp/factors.hpp"

namespace hcn::model {

using mp::IndeterminateForm;
using mp::kInf;
using mp::pos;

void andor_tree_update(std::span<const double> in, std::span<double> out) {
  assert(in.size() == out.size());
  assert(in.size() % 2 == 1);
  const double in_r = in[0];
  const std::size_t k = in.size() / 2;
  if (k == 0) {
    out[0] = -kInf;
    return;
  }

  const auto child = [&](std::size_t i) { return mp::and_to_bottom(in[1 + 2 * i], in[2 + 2 * i]); };

  // Leader, runner-up and the inf-aware positive sum over the AND outputs.
  std::size_t lead = 0, runner = k;
  double lead_v = child(0), runner_v = -kInf;
  int n_inf = lead_v == kInf ? 1 : 0;
  double finite = n_inf ? 0.0 : pos(lead_v);
  for (std::size_t i = 1; i < k; ++i) {
    const double z = child(i);
    if (z == kInf) {
      ++n_inf;
    } else {
      finite += pos(z);
    }
    if (z > lead_v) {
      runner = lead;
      runner_v = lead_v;
      lead = i;
      lead_v = z;
    } else if (runner == k || z > runner_v) {
      runner = i;
      runner_v = z;
    }
  }
  const auto without = [&](double z) {
    if (z == kInf) return n_inf > 1 ? kInf : finite;
    if (n_inf > 0) return kInf;
    return finite - pos(z);
  };

  out[0] = lead_v + without(lead_v);

  for (std::size_t i = 0; i < k; ++i) {
    const double s = in[1 + 2 * i];
    const double w = in[2 + 2 * i];
    const double z = child(i);
    const double on = in_r + without(z);
    if (std::isnan(on)) throw IndeterminateForm("AND-OR tree: R forced off while another child is forced on");
    const bool has_other = k > 1;
    const double other_v = i == lead ? runner_v : lead_v;
    const double off = has_other ? pos(-other_v) : kInf;
    const double to_and = std::min(on, off);
    out[1 + 2 * i] = mp::and_to_top(w, to_and);
    out[2 + 2 * i] = mp::and_to_top(s, to_and);
  }
}

void class_tree_update(std::span<const double> in, std::size_t templates_per_class,
                       std::span<double> out) {
  const std::size_t j_count = templates_per_class;
  assert(in.size() == out.size());
  if (j_count == 0 || in.size() % (j_count + 1) != 0)
    throw std::invalid_argument("class tree layout is [c_1..c_K, s_11..s_JK]");
  const std::size_t k_count = in.size() / (j_count + 1);
  const double log_j = std::log(static_cast<double>(j_count));
  const auto tmpl = [&](std::size_t k, std::size_t j) { return in[k_count + k * j_count + j]; };

  // Per-class leader / runner-up over template evidence, and the class score.
  struct ClassStats {
    std::size_t lead = 0;
    double lead_v = -kInf;
    double runner_v = -kInf;
    double up = 0.0;     // bottom-up message into c_k from its template pool
    double score = 0.0;  // everything known about c_k being on
  };
  std::vector<ClassStats> stats(k_count);
  std::size_t best = 0, second = k_count;
  for (std::size_t k = 0; k < k_count; ++k) {
    ClassStats& st = stats[k];
    for (std::size_t j = 0; j < j_count; ++j) {
      const double e = tmpl(k, j);
      if (j == 0 || e > st.lead_v) {
        if (j != 0) st.runner_v = st.lead_v;
        st.lead = j;
        st.lead_v = e;
      } else if (e > st.runner_v) {
        st.runner_v = e;
      }
    }
    st.up = st.lead_v - log_j;
    st.score = mp::ext_add(in[k], st.up);
    if (k > 0) {
      if (st.score > stats[best].score) {
        second = best;
        best = k;
      } else if (second == k_count || st.score > stats[second].score) {
        second = k;
      }
    }
  }

  for (std::size_t k = 0; k < k_count; ++k) {
    const ClassStats& st = stats[k];
    // Top pool is clamped on: the message down to c_k is minus the best rival.
    double down = kInf;
    if (k_count > 1) down = -stats[k == best ? second : best].score;
    out[k] = mp::ext_add(down, st.up);
    const double gate = mp::ext_add(in[k], down) - log_j;
    for (std::size_t j = 0; j < j_count; ++j) {
      const double rival = j_count > 1 ? -(j == st.lead ? st.runner_v : st.lead_v) : kInf;
      out[k_count + k * j_count + j] = std::min(gate, rival);
    }
  }
}

}  // namespace hcn::model
