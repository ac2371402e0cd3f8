#pragma once

#include <string>

#include "epochbandit/rng.hpp"

namespace epochbandit {

/// Per-(arm, state) reward distribution supported on [0, 1].
class RewardKernel {
 public:
  enum class Family { Bernoulli, Beta, Uniform };

  static RewardKernel bernoulli(double p);
  static RewardKernel beta(double a, double b);
  static RewardKernel uniform(double lo, double hi);

  Family family() const { return family_; }
  double param0() const { return p0_; }
  double param1() const { return p1_; }

  double mean() const;
  double sample(Rng& rng) const;

  std::string family_name() const;

 private:
  RewardKernel(Family family, double p0, double p1) : family_(family), p0_(p0), p1_(p1) {}
  Family family_;
  double p0_, p1_;
};

}  // namespace epochbandit
