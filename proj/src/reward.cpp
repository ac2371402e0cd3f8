#include "epochbandit/reward.hpp"

#include <stdexcept>

namespace epochbandit {

RewardKernel RewardKernel::bernoulli(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("Bernoulli parameter must lie in [0, 1]");
  return RewardKernel(Family::Bernoulli, p, 0.0);
}

RewardKernel RewardKernel::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("Beta shapes must be positive");
  return RewardKernel(Family::Beta, a, b);
}

RewardKernel RewardKernel::uniform(double lo, double hi) {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0))
    throw std::invalid_argument("Uniform support must satisfy 0 <= lo < hi <= 1");
  return RewardKernel(Family::Uniform, lo, hi);
}

double RewardKernel::mean() const {
  switch (family_) {
    case Family::Bernoulli:
      return p0_;
    case Family::Beta:
      return p0_ / (p0_ + p1_);
    case Family::Uniform:
      return 0.5 * (p0_ + p1_);
  }
  return 0.0;
}

double RewardKernel::sample(Rng& rng) const {
  switch (family_) {
    case Family::Bernoulli:
      return rng.bernoulli(p0_) ? 1.0 : 0.0;
    case Family::Beta:
      return rng.beta(p0_, p1_);
    case Family::Uniform:
      return rng.uniform(p0_, p1_);
  }
  return 0.0;
}

std::string RewardKernel::family_name() const {
  switch (family_) {
    case Family::Bernoulli:
      return "bernoulli";
    case Family::Beta:
      return "beta";
    case Family::Uniform:
      return "uniform";
  }
  return "";
}

}  // namespace epochbandit
