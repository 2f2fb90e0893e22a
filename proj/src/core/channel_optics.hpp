#pragma once

#include <complex>

namespace pevmzi {

/// Coefficients of a state on the two channel basis vectors |1>, |2>.
struct ChannelVec {
  std::complex<double> c1{0.0, 0.0};
  std::complex<double> c2{0.0, 0.0};
};

enum class Splitter { BS1, BS2 };
enum class Detector { D1, D2 };

/// Which presence regions the detection point fell into; fixes one of the
/// four interference branches of the final density.
struct BranchKey {
  bool in_bs1 = false;
  bool in_bs2 = false;
};

/// Channel mixing of beamsplitter 1 or 2:
///   BS1: (c1, c2) -> ((c1 - c2)/sqrt2, (c1 + c2)/sqrt2)
///   BS2: (c1, c2) -> ((c1 + c2)/sqrt2, (-c1 + c2)/sqrt2)
ChannelVec apply_bs(Splitter which, const ChannelVec& v);

/// Per-arm mirror phases: (c1, c2) -> (e^{i k1} c1, e^{i k2} c2).
ChannelVec apply_mirror(double kappa1, double kappa2, const ChannelVec& v);

/// Density weight of the branch: the detector-k share of |gamma|^2 at a point
/// with the given gating history. Weights for D1 and D2 sum to 1 exactly.
double branch_coefficient(BranchKey key, Detector det, double kappa1,
                          double kappa2);

/// Amplitude-level branch table (the channel coefficient itself rather than
/// its squared magnitude); |branch_amplitude|^2 == branch_coefficient.
std::complex<double> branch_amplitude(BranchKey key, Detector det,
                                      double kappa1, double kappa2);

} // namespace pevmzi
