// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace hrd {

/// Scalar time series, linearly interpolated between grid points.
/// Times are strictly increasing and values finite.
class Signal {
 public:
  Signal() = default;
  /// Throws Error(InvalidSignal) if the invariants do not hold.
  Signal(std::vector<double> times, std::vector<double> values);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }
  double time(std::size_t k) const { return times_[k]; }
  double value(std::size_t k) const { return values_[k]; }

  bool same_grid(const Signal& other) const noexcept {
    return times_ == other.times_;
  }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Characteristic interval [a,b] and initial state z0 of the stop.
struct HysteresisConfig {
  double a = -1.0;
  double b = 1.0;
  double z0 = 0.0;

  /// Throws Error(InvalidConfig) naming "hysteresis.a|b|z0".
  void validate() const;
};

struct HysteresisOutput {
  Signal stop;
  Signal play;
  /// z0 - v_0 of the signal the output was started from.
  double play_offset = 0.0;
  /// Internal state v - z after the last point; continuation starts here.
  double state = 0.0;
};

struct DerivativeState {
  std::vector<double> base_stop;
  std::vector<double> derivative;
};

// Scalar building blocks shared with the time integrators.
//
// The projection recursion z' = clamp(z + (v' - v), a, b) is carried in
// terms of r = v - z, for which it reads r' = max(v' - b, min(v' - a, r)).
// Both are the same map in exact arithmetic; the second never accumulates
// increments, so inserting collinear points leaves every value bitwise
// unchanged.

inline double stop_initial_state(double v0, const HysteresisConfig& cfg) {
  return v0 - cfg.z0;
}

/// r' for the next input value v.
inline double stop_advance(double r, double v, const HysteresisConfig& cfg) {
  return std::max(v - cfg.b, std::min(v - cfg.a, r));
}

/// z = v - r, kept inside [a,b] against rounding.
inline double stop_output(double v, double r, const HysteresisConfig& cfg) {
  return std::clamp(v - r, cfg.a, cfg.b);
}

/// One-sided derivative of the projection for the step from state r to the
/// input value v, in direction d (the unprojected increment of the
/// derivative). The unprojected point z + dv exceeds b exactly when
/// v - b > r, and lies below a when v - a < r.
inline double stop_derivative_step(double r, double v, double d,
                                   const HysteresisConfig& cfg) {
  const double upper = v - cfg.b, lower = v - cfg.a;
  if (r > upper && r < lower) return d;
  if (r < upper || r > lower) return 0.0;
  if (r == upper) return d < 0.0 ? d : 0.0;
  return d > 0.0 ? d : 0.0;
}

/// Stop W[v] by the projection recursion, plus the play
/// P[v] = v - W[v] + (z0 - v_0). The offset makes play + stop = v + (z0 - v_0)
/// hold exactly for any z0 and v_0, so the play always starts at zero.
HysteresisOutput stop_evaluate(const Signal& v, const HysteresisConfig& cfg);

/// Play component of stop_evaluate.
Signal play_evaluate(const Signal& v, const HysteresisConfig& cfg);

/// Hadamard directional derivative W'[v; h] obtained by differentiating the
/// projection recursion one-sidedly. derivative[0] is always zero.
DerivativeState stop_directional_derivative(const Signal& v, const Signal& h,
                                            const HysteresisConfig& cfg);

/// Continues a previously evaluated output along `v_tail`, whose first
/// timestamp must coincide with the last timestamp of `prefix`. The tail's
/// first value is the input value at the junction. A tail of length <= 1
/// returns the prefix unchanged.
///
/// The play offset of the prefix is kept, so the result is identical to a
/// one-pass evaluation of the joined signal.
HysteresisOutput stop_concatenate(const HysteresisOutput& prefix,
                                  const Signal& v_tail,
                                  const HysteresisConfig& cfg);

}  // namespace hrd
