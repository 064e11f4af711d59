#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace dmac {

/// Symmetric min-max map of one physical channel onto [-1, 1]. Values
/// outside [lo, hi] map outside the unit band rather than clamping, so a
/// plant drifting past its calibration range stays observable.
struct Channel {
    double lo;
    double hi;

    Channel(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(hi > lo)) {
            throw std::invalid_argument("Channel: hi must exceed lo");
        }
    }

    double normalize(double x) const { return 2.0 * (x - lo) / (hi - lo) - 1.0; }
    double denormalize(double xn) const { return lo + 0.5 * (xn + 1.0) * (hi - lo); }
};

/// Channel bounds for the three measured state variables. The thrust
/// channel doubles as the output/reference normalization.
struct NormalizationMap {
    Channel pt4;
    Channel x_co;
    Channel thrust;

    Eigen::Vector3d normalize_state(double pt4_pa, double x_co_frac,
                                    double thrust_n) const {
        return {pt4.normalize(pt4_pa), x_co.normalize(x_co_frac),
                thrust.normalize(thrust_n)};
    }

    /// Identity map on all channels, for plants that already live in
    /// normalized units (e.g. LTI test surrogates).
    static NormalizationMap identity() {
        return {Channel(-1.0, 1.0), Channel(-1.0, 1.0), Channel(-1.0, 1.0)};
    }
};

}  // namespace dmac
