#include "core/channel_optics.hpp"

#include <cmath>

namespace pevmzi {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490393;
const std::complex<double> kI{0.0, 1.0};
} // namespace

ChannelVec apply_bs(Splitter which, const ChannelVec& v) {
  if (which == Splitter::BS1) {
    return {(v.c1 - v.c2) * kInvSqrt2, (v.c1 + v.c2) * kInvSqrt2};
  }
  return {(v.c1 + v.c2) * kInvSqrt2, (-v.c1 + v.c2) * kInvSqrt2};
}

ChannelVec apply_mirror(double kappa1, double kappa2, const ChannelVec& v) {
  return {std::exp(kI * kappa1) * v.c1, std::exp(kI * kappa2) * v.c2};
}

double branch_coefficient(BranchKey key, Detector det, double kappa1,
                          double kappa2) {
  if (key.in_bs1 && key.in_bs2) {
    double c = std::cos(kappa1 - kappa2);
    return det == Detector::D1 ? 0.5 * (1.0 + c) : 0.5 * (1.0 - c);
  }
  if (key.in_bs1 != key.in_bs2) return 0.5;
  return det == Detector::D1 ? 1.0 : 0.0;
}

std::complex<double> branch_amplitude(BranchKey key, Detector det,
                                      double kappa1, double kappa2) {
  const std::complex<double> e1 = std::exp(kI * kappa1);
  const std::complex<double> e2 = std::exp(kI * kappa2);
  if (key.in_bs1 && key.in_bs2) {
    return det == Detector::D1 ? 0.5 * (e1 + e2) : 0.5 * (-e1 + e2);
  }
  if (!key.in_bs1 && key.in_bs2) {
    return det == Detector::D1 ? e1 * kInvSqrt2 : -e1 * kInvSqrt2;
  }
  if (key.in_bs1 && !key.in_bs2) {
    return (det == Detector::D1 ? e1 : e2) * kInvSqrt2;
  }
  return det == Detector::D1 ? e1 : std::complex<double>{0.0, 0.0};
}

} // namespace pevmzi
