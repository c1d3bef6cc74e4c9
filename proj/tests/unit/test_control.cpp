#include <doctest.h>

#include <stdexcept>

#include <random>

#include "cotsim/control.hpp"

using namespace cotsim;

namespace {

PIDController make_longitudinal() { return PIDController({0.3, 0.05, 0.0, 20}, 0.05); }
PIDController make_lateral() { return PIDController({0.8, 0.3, 0.0, 10}, 0.05); }

}  // namespace

TEST_CASE("first step with zero error returns zero") {
    PIDController pid = make_longitudinal();
    CHECK(pid.step(0.0) == 0.0);
}

TEST_CASE("constant error settles to kp*e + ki*e with the paper gains") {
    PIDController pid = make_longitudinal();
    double out = 0.0;
    for (int i = 0; i < 25; ++i) {
        out = pid.step(10.0);
    }
    CHECK(out == doctest::Approx(3.5).epsilon(1e-12));  // 0.3*10 + 0.05*10
    CHECK(pid.buffer_size() == 20);
}

TEST_CASE("fresh longitudinal controller on a 10 km/h error saturates throttle") {
    PIDController pid = make_longitudinal();
    const auto [throttle, brake] = longitudinal_control(30.0, 40.0, pid);
    // raw = 0.3*10 + 0.05*mean({10}) = 3.5, clamped
    CHECK(throttle == doctest::Approx(1.0));
    CHECK(brake == 0.0);
}

TEST_CASE("zero target forces full brake") {
    PIDController pid = make_longitudinal();
    const auto [throttle, brake] = longitudinal_control(50.0, 0.0, pid);
    CHECK(throttle == 0.0);
    CHECK(brake == 1.0);
}

TEST_CASE("throttle and brake are mutually exclusive") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> speed(0.0, 120.0);
    PIDController pid = make_longitudinal();
    for (int i = 0; i < 500; ++i) {
        const auto [throttle, brake] = longitudinal_control(speed(rng), speed(rng), pid);
        CHECK(throttle * brake == 0.0);
        CHECK(throttle >= 0.0);
        CHECK(throttle <= 1.0);
        CHECK(brake >= 0.0);
        CHECK(brake <= 1.0);
    }
}

TEST_CASE("fresh lateral controller at pi/4 gives the pinned value") {
    PIDController pid = make_lateral();
    const double steer = lateral_control({4.0, 4.0}, pid);
    // 0.8*(pi/4) + 0.3*mean({pi/4}) = 1.1 * pi/4
    CHECK(steer == doctest::Approx(1.1 * kPi / 4.0).epsilon(1e-12));
    CHECK(steer == doctest::Approx(0.8639379797371932).epsilon(1e-9));
}

TEST_CASE("waypoint dead ahead gives zero steer") {
    PIDController pid = make_lateral();
    CHECK(lateral_control({5.0, 0.0}, pid) == 0.0);
}

TEST_CASE("steer is odd in the waypoint reflection") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> coord(0.5, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double x = coord(rng), y = coord(rng);
        PIDController left = make_lateral();
        PIDController right = make_lateral();
        CHECK(lateral_control({x, y}, left) ==
              doctest::Approx(-lateral_control({x, -y}, right)).epsilon(1e-12));
    }
}

TEST_CASE("waypoint at the origin is rejected") {
    PIDController pid = make_lateral();
    CHECK_THROWS_AS(lateral_control({0.0, 0.0}, pid), std::invalid_argument);
}

TEST_CASE("buffer never exceeds its size and the integral is the buffer mean") {
    PIDController pid(PIDGains{0.0, 1.0, 0.0, 4}, 0.05);  // output = mean(buffer)
    CHECK(pid.step(1.0) == doctest::Approx(1.0));
    CHECK(pid.step(2.0) == doctest::Approx(1.5));
    CHECK(pid.step(3.0) == doctest::Approx(2.0));
    CHECK(pid.step(4.0) == doctest::Approx(2.5));
    CHECK(pid.step(5.0) == doctest::Approx(3.5));  // 2..5
    CHECK(pid.buffer_size() == 4);
}

TEST_CASE("kd uses a one-frame backward difference") {
    PIDController pid(PIDGains{0.0, 0.0, 1.0, 4}, 0.1);
    CHECK(pid.step(1.0) == 0.0);  // no previous error yet
    CHECK(pid.step(2.0) == doctest::Approx(10.0));  // (2-1)/0.1
}
