#pragma once

#include <cassert>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace renewal {

// Extended real in [ -inf?, no: finite or +inf ].  +inf is a legal answer
// for Laplace transforms and tilted means; it is a certified divergence tag,
// never a floating-point overflow sentinel.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : value_(v) {}

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr bool finite() const { return !infinite_; }
  constexpr bool is_infinite() const { return infinite_; }

  double value() const {
    if (infinite_) throw std::domain_error("ExtReal: value() on +inf");
    return value_;
  }

  // Collapses +inf to the IEEE infinity; useful for printing and for
  // formulas where c/inf = 0 is wanted.
  constexpr double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<(const ExtReal& a, double b) {
    return !a.infinite_ && a.value_ < b;
  }
  friend constexpr bool operator>(const ExtReal& a, double b) {
    return a.infinite_ || a.value_ > b;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
    if (x.infinite_) return os << "inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace renewal
