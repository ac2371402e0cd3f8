#pragma once

#include <stdexcept>

namespace epochbandit {

/// Epoch length sequence tau = tau0 + zeta * T, where T counts the past
/// pulls of the selected arm.
struct EpochSchedule {
  long tau0 = 1;
  long zeta = 1;

  EpochSchedule() = default;
  EpochSchedule(long tau0_in, long zeta_in) : tau0(tau0_in), zeta(zeta_in) {
    if (tau0 < 1) throw std::invalid_argument("tau0 must be >= 1");
    if (zeta < 1) throw std::invalid_argument("zeta must be >= 1");
  }

  // zeta = 0 keeps epochs at a constant length. Non-conforming: with
  // constant epochs the mixing penalty grows linearly and no sublinear
  // regret guarantee applies. Exists for the failure-mode experiment only.
  static EpochSchedule constant_epochs(long tau0_in) {
    EpochSchedule s;
    if (tau0_in < 1) throw std::invalid_argument("tau0 must be >= 1");
    s.tau0 = tau0_in;
    s.zeta = 0;
    return s;
  }

  bool conforming() const { return zeta >= 1; }
};

inline long epoch_length(const EpochSchedule& schedule, long pulls) {
  if (pulls < 0) throw std::invalid_argument("pull count must be nonnegative");
  return schedule.tau0 + schedule.zeta * pulls;
}

}  // namespace epochbandit
