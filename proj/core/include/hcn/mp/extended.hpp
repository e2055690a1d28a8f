#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hcn::mp {

// Messages live in the log domain as m(y=1) - m(y=0). A clamped or impossible
// state is carried as a true IEEE infinity; every kernel evaluates the limit of
// its closed form explicitly, so no inf - inf is ever computed silently.
using MessageValue = double;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double pos(double x) { return x > 0.0 ? x : 0.0; }

inline bool is_infinite(double x) { return std::isinf(x); }

/// Raised when an update would have to evaluate inf - inf, i.e. the incoming
/// messages describe a contradiction (for instance an OR bottom clamped to 0
/// while one of its tops is clamped to 1).
class IndeterminateForm : public std::runtime_error {
 public:
  static constexpr long kNoFactor = -1;

  explicit IndeterminateForm(const std::string& what, long factor = kNoFactor)
      : std::runtime_error(what), factor_(factor) {}

  long factor() const { return factor_; }

 private:
  long factor_;
};

// a + b where one side may be infinite; opposite infinities throw.
inline double ext_add(double a, double b) {
  const double s = a + b;
  if (std::isnan(s)) throw IndeterminateForm("inf - inf in message sum");
  return s;
}

}  // namespace hcn::mp
