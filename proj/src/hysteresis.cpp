// SPDX-License-Identifier: Apache-2.0
#include "hrd/hysteresis.hpp"

#include <cmath>
#include <string>

#include "hrd/error.hpp"

namespace hrd {

Signal::Signal(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty())
    throw Error(ErrorCode::InvalidSignal, "signal must have at least one point");
  if (times_.size() != values_.size())
    throw Error(ErrorCode::InvalidSignal,
                "times and values differ in length (" +
                    std::to_string(times_.size()) + " vs " +
                    std::to_string(values_.size()) + ")");
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (!std::isfinite(times_[k]) || !std::isfinite(values_[k]))
      throw Error(ErrorCode::InvalidSignal,
                  "non-finite entry at index " + std::to_string(k));
    if (k > 0 && !(times_[k] > times_[k - 1]))
      throw Error(ErrorCode::InvalidSignal,
                  "timestamps not strictly increasing at index " +
                      std::to_string(k));
  }
}

void HysteresisConfig::validate() const {
  if (!std::isfinite(a)) throw Error(ErrorCode::InvalidConfig, "must be finite", "hysteresis.a");
  if (!std::isfinite(b)) throw Error(ErrorCode::InvalidConfig, "must be finite", "hysteresis.b");
  if (!(a < b))
    throw Error(ErrorCode::InvalidConfig, "requires a < b", "hysteresis.a");
  if (!(z0 >= a && z0 <= b))
    throw Error(ErrorCode::InvalidConfig, "initial state must lie in [a,b]",
                "hysteresis.z0");
}

namespace {

HysteresisOutput run_from(std::span<const double> times,
                          std::span<const double> v, double z_start,
                          double r_start, double offset,
                          const HysteresisConfig& cfg) {
  std::vector<double> stop(v.size());
  std::vector<double> play(v.size());
  double r = r_start;
  stop[0] = z_start;
  play[0] = v[0] - z_start + offset;
  for (std::size_t k = 1; k < v.size(); ++k) {
    r = stop_advance(r, v[k], cfg);
    stop[k] = stop_output(v[k], r, cfg);
    play[k] = v[k] - stop[k] + offset;
  }
  std::vector<double> t(times.begin(), times.end());
  return {Signal(t, std::move(stop)), Signal(t, std::move(play)), offset, r};
}

}  // namespace

HysteresisOutput stop_evaluate(const Signal& v, const HysteresisConfig& cfg) {
  cfg.validate();
  if (v.empty()) throw Error(ErrorCode::InvalidSignal, "empty signal");
  return run_from(v.times(), v.values(), cfg.z0, stop_initial_state(v.value(0), cfg),
                  cfg.z0 - v.value(0), cfg);
}

Signal play_evaluate(const Signal& v, const HysteresisConfig& cfg) {
  return stop_evaluate(v, cfg).play;
}

DerivativeState stop_directional_derivative(const Signal& v, const Signal& h,
                                            const HysteresisConfig& cfg) {
  cfg.validate();
  if (v.empty()) throw Error(ErrorCode::InvalidSignal, "empty signal");
  if (!v.same_grid(h))
    throw Error(ErrorCode::GridMismatch,
                "base signal and direction are sampled on different grids");
  const std::size_t n = v.size();
  DerivativeState out;
  out.base_stop.resize(n);
  out.derivative.resize(n);
  double r = stop_initial_state(v.value(0), cfg);
  double zeta = 0.0;
  out.base_stop[0] = cfg.z0;
  out.derivative[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    zeta = stop_derivative_step(r, v.value(k), zeta + (h.value(k) - h.value(k - 1)), cfg);
    r = stop_advance(r, v.value(k), cfg);
    out.base_stop[k] = stop_output(v.value(k), r, cfg);
    out.derivative[k] = zeta;
  }
  return out;
}

HysteresisOutput stop_concatenate(const HysteresisOutput& prefix,
                                  const Signal& v_tail,
                                  const HysteresisConfig& cfg) {
  cfg.validate();
  if (prefix.stop.empty())
    throw Error(ErrorCode::InvalidSignal, "prefix output is empty");
  if (v_tail.size() <= 1) {
    if (v_tail.size() == 1 &&
        v_tail.time(0) != prefix.stop.time(prefix.stop.size() - 1))
      throw Error(ErrorCode::GridMismatch,
                  "tail must start at the final timestamp of the prefix");
    return prefix;
  }
  const std::size_t n = prefix.stop.size();
  if (v_tail.time(0) != prefix.stop.time(n - 1))
    throw Error(ErrorCode::GridMismatch,
                "tail must start at the final timestamp of the prefix");

  HysteresisOutput tail = run_from(v_tail.times(), v_tail.values(),
                                   prefix.stop.value(n - 1), prefix.state,
                                   prefix.play_offset, cfg);

  auto join = [](const Signal& head, const Signal& rest) {
    std::vector<double> t(head.times().begin(), head.times().end());
    std::vector<double> x(head.values().begin(), head.values().end());
    t.insert(t.end(), rest.times().begin() + 1, rest.times().end());
    x.insert(x.end(), rest.values().begin() + 1, rest.values().end());
    return Signal(std::move(t), std::move(x));
  };
  return {join(prefix.stop, tail.stop), join(prefix.play, tail.play),
          prefix.play_offset, tail.state};
}

}  // namespace hrd
