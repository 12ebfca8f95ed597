#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curator/geometry.hpp"

namespace curator {

// Action-space limits (m/s^2, rad/s).
struct ActionLimits {
    double min_accel = -10.0;
    double max_accel = 8.0;
    double max_yaw_rate = 1.0;

    bool contains(double accel, double yaw_rate) const {
        return accel >= min_accel && accel <= max_accel &&
               yaw_rate >= -max_yaw_rate && yaw_rate <= max_yaw_rate;
    }
};

struct Action {
    double accel = 0.0;     // m/s^2
    double yaw_rate = 0.0;  // rad/s
};

// Planar kinematic state: position (m), yaw in (-pi, pi], speed (m/s, >= 0).
struct KinState {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
    double v = 0.0;
};

// One Euler step of the yaw-rate-controlled kinematic bicycle. Position is
// advanced with the pre-update speed; speed is floored at zero. Throws
// BoundsError when the action is outside the limits.
KinState forward_step(const KinState& s, const Action& a, double dt,
                      const ActionLimits& limits = {});

struct InverseResult {
    Action action;
    bool clipped = false;
};

// Exact inverse of forward_step away from the speed floor; the result is
// clipped to the limits and flagged when clipping occurred.
InverseResult inverse_action(const KinState& s, const KinState& next, double dt,
                             const ActionLimits& limits = {});

// Finite-difference chains per the score formulations: acceleration and jerk
// from speed, yaw rate and yaw acceleration from the unwrapped yaw angle.
// Slots without enough valid history are marked undefined, never zero-filled.
struct KinematicChain {
    std::vector<double> speed;
    std::vector<double> accel;
    std::vector<double> jerk;
    std::vector<double> yaw_rate;
    std::vector<double> yaw_accel;
    std::vector<std::uint8_t> first_order_defined;   // accel / yaw_rate
    std::vector<std::uint8_t> second_order_defined;  // jerk / yaw_accel
};

// speed/yaw/valid must have equal length >= 3 (InsufficientHistory otherwise).
KinematicChain kinematic_chain(std::span<const double> speed,
                               std::span<const double> yaw,
                               std::span<const std::uint8_t> valid, double dt);

}  // namespace curator
