#include "curator/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curator/errors.hpp"

namespace curator {

KinState forward_step(const KinState& s, const Action& a, double dt,
                      const ActionLimits& limits) {
    if (!limits.contains(a.accel, a.yaw_rate)) {
        throw BoundsError("forward_step: action (" + std::to_string(a.accel) + ", " +
                          std::to_string(a.yaw_rate) + ") outside limits");
    }
    if (!(dt > 0.0)) throw BoundsError("forward_step: dt must be positive");
    KinState n;
    n.x = s.x + s.v * std::cos(s.yaw) * dt;
    n.y = s.y + s.v * std::sin(s.yaw) * dt;
    n.yaw = wrap_angle(s.yaw + a.yaw_rate * dt);
    n.v = std::max(0.0, s.v + a.accel * dt);
    return n;
}

InverseResult inverse_action(const KinState& s, const KinState& next, double dt,
                             const ActionLimits& limits) {
    InverseResult r;
    const double accel = (next.v - s.v) / dt;
    const double yaw_rate = wrap_angle(next.yaw - s.yaw) / dt;
    r.action.accel = std::clamp(accel, limits.min_accel, limits.max_accel);
    r.action.yaw_rate = std::clamp(yaw_rate, -limits.max_yaw_rate, limits.max_yaw_rate);
    r.clipped = r.action.accel != accel || r.action.yaw_rate != yaw_rate;
    return r;
}

KinematicChain kinematic_chain(std::span<const double> speed,
                               std::span<const double> yaw,
                               std::span<const std::uint8_t> valid, double dt) {
    const std::size_t n = speed.size();
    if (n < 3) throw InsufficientHistory("kinematic_chain: need at least 3 timesteps");
    if (yaw.size() != n || valid.size() != n) {
        throw DimensionMismatch("kinematic_chain: speed/yaw/valid lengths differ");
    }

    KinematicChain c;
    c.speed.assign(speed.begin(), speed.end());
    c.accel.assign(n, 0.0);
    c.jerk.assign(n, 0.0);
    c.yaw_rate.assign(n, 0.0);
    c.yaw_accel.assign(n, 0.0);
    c.first_order_defined.assign(n, 0);
    c.second_order_defined.assign(n, 0);

    // Unwrap yaw within valid runs so the -pi/pi crossover differentiates
    // correctly; invalid steps break the run.
    std::vector<double> yaw_u(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        if (!valid[t]) continue;
        if (t > 0 && valid[t - 1]) {
            yaw_u[t] = yaw_u[t - 1] + wrap_angle(yaw[t] - yaw[t - 1]);
        } else {
            yaw_u[t] = yaw[t];
        }
    }

    for (std::size_t t = 1; t < n; ++t) {
        if (valid[t] && valid[t - 1]) {
            c.accel[t] = (speed[t] - speed[t - 1]) / dt;
            c.yaw_rate[t] = (yaw_u[t] - yaw_u[t - 1]) / dt;
            c.first_order_defined[t] = 1;
        }
    }
    for (std::size_t t = 2; t < n; ++t) {
        if (c.first_order_defined[t] && c.first_order_defined[t - 1]) {
            c.jerk[t] = (c.accel[t] - c.accel[t - 1]) / dt;
            c.yaw_accel[t] = (c.yaw_rate[t] - c.yaw_rate[t - 1]) / dt;
            c.second_order_defined[t] = 1;
        }
    }
    return c;
}

}  // namespace curator
