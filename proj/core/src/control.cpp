#include "cotsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cotsim {

double PIDController::step(double error) {
    if (!std::isfinite(error)) {
        throw std::invalid_argument("PIDController::step: non-finite error");
    }
    buffer_.push_back(error);
    while (buffer_.size() > static_cast<std::size_t>(std::max(1, gains_.buffer_frames))) {
        buffer_.pop_front();
    }
    const double integral =
        std::accumulate(buffer_.begin(), buffer_.end(), 0.0) / static_cast<double>(buffer_.size());
    double derivative = 0.0;
    if (has_previous_) {
        derivative = (error - previous_error_) / dt_;
    }
    previous_error_ = error;
    has_previous_ = true;
    return gains_.kp * error + gains_.ki * integral + gains_.kd * derivative;
}

void PIDController::reset() {
    buffer_.clear();
    previous_error_ = 0.0;
    has_previous_ = false;
}

std::pair<double, double> longitudinal_control(double ego_speed_kmh, double target_kmh,
                                               PIDController& ctrl) {
    if (ego_speed_kmh < 0.0 || target_kmh < 0.0) {
        throw std::invalid_argument("longitudinal_control: negative speed");
    }
    const double raw = ctrl.step(target_kmh - ego_speed_kmh);
    if (target_kmh == 0.0) {
        return {0.0, 1.0};  // emergency-brake clamp
    }
    if (raw >= 0.0) {
        return {std::min(raw, 1.0), 0.0};
    }
    return {0.0, std::min(-raw, 1.0)};
}

double lateral_control(const Vec2& first_waypoint_local, PIDController& ctrl) {
    if (first_waypoint_local.x == 0.0 && first_waypoint_local.y == 0.0) {
        throw std::invalid_argument("lateral_control: waypoint at ego origin");
    }
    const double angle = normalize_yaw(std::atan2(first_waypoint_local.y, first_waypoint_local.x));
    return std::clamp(ctrl.step(angle), -1.0, 1.0);
}

}  // namespace cotsim
