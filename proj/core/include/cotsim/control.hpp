#pragma once

#include <cstddef>
#include <deque>
#include <utility>

#include "cotsim/config.hpp"
#include "cotsim/geometry.hpp"

namespace cotsim {

/// Throttle and brake are mutually exclusive actuator commands.
struct ControlCommand {
    double throttle = 0.0;  // [0, 1]
    double brake = 0.0;     // [0, 1]
    double steer = 0.0;     // [-1, 1]
};

/// PID with a bounded error buffer; the integral term is the arithmetic mean
/// of the buffered errors. A cold controller has an empty buffer (mean 0).
class PIDController {
public:
    PIDController(const PIDGains& gains, double dt) : gains_(gains), dt_(dt) {}

    /// Pushes the error and returns kp*e + ki*mean(buffer) + kd*(e - prev)/dt.
    /// The derivative term is 0 on the first call.
    double step(double error);

    void reset();

    std::size_t buffer_size() const { return buffer_.size(); }
    const PIDGains& gains() const { return gains_; }

private:
    PIDGains gains_;
    double dt_;
    std::deque<double> buffer_;
    double previous_error_ = 0.0;
    bool has_previous_ = false;
};

/// Longitudinal control on a km/h error. Positive raw output becomes
/// throttle, negative becomes brake; a zero target forces full brake.
std::pair<double, double> longitudinal_control(double ego_speed_kmh, double target_kmh,
                                               PIDController& ctrl);

/// Steering from the heading error toward a waypoint in the ego frame
/// (x forward, y left). Throws if the waypoint sits at the ego origin.
double lateral_control(const Vec2& first_waypoint_local, PIDController& ctrl);

}  // namespace cotsim
