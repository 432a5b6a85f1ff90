#include "cdm/distortion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace cdm {

DistortionMeasure DistortionMeasure::squared_euclidean(int dim) {
    return {DistortionKind::SquaredEuclidean, dim};
}

DistortionMeasure DistortionMeasure::hamming(int dim) {
    return {DistortionKind::Hamming, dim};
}

DistortionMeasure DistortionMeasure::linear_cdm(int dim, double scale) {
    if (scale <= 0.0) throw std::invalid_argument("linear_cdm: scale must be positive");
    return {DistortionKind::LinearCdm, dim, scale};
}

DistortionMeasure DistortionMeasure::angle_cdm(int dim) {
    return {DistortionKind::AngleCdm, dim};
}

DistortionMeasure DistortionMeasure::quadratic_cdm() {
    return {DistortionKind::QuadraticCdm, 1};
}

DistortionMeasure DistortionMeasure::robot_arm_cdm() {
    return {DistortionKind::RobotArmCdm, 2};
}

DistortionMeasure DistortionMeasure::learned(std::shared_ptr<const MlpModel> model) {
    if (!model) throw std::invalid_argument("learned: null model");
    if (model->n_inputs % 2 != 0)
        throw std::invalid_argument("learned: model must take an even number of inputs");
    DistortionMeasure d{DistortionKind::Learned, model->n_inputs / 2};
    d.model = std::move(model);
    return d;
}

namespace {

double squared_distance(const Point& x, const Point& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

// Symbols compare by representation, not by value.
bool bitwise_equal(const Point& x, const Point& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::bit_cast<std::uint64_t>(x[i]) != std::bit_cast<std::uint64_t>(y[i])) return false;
    return true;
}

double angle_fraction(const Point& x, const Point& y) {
    double dot = 0.0, nx = 0.0, ny = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        nx += x[i] * x[i];
        ny += y[i] * y[i];
    }
    if (nx == 0.0 || ny == 0.0)
        throw std::invalid_argument("angle_cdm: zero vector has no direction");
    // round-off can push |cos| a hair past 1
    double c = std::clamp(dot / std::sqrt(nx * ny), -1.0, 1.0);
    return std::acos(c) / std::numbers::pi;
}

} // namespace

double eval_distortion(const DistortionMeasure& d, const Point& x, const Point& xp) {
    if (static_cast<int>(x.size()) != d.dimension || static_cast<int>(xp.size()) != d.dimension)
        throw std::invalid_argument("eval_distortion: dimension mismatch");
    switch (d.kind) {
        case DistortionKind::SquaredEuclidean:
            return squared_distance(x, xp);
        case DistortionKind::Hamming:
            return bitwise_equal(x, xp) ? 0.0 : 1.0;
        case DistortionKind::LinearCdm:
            return d.scale * squared_distance(x, xp);
        case DistortionKind::AngleCdm:
            return angle_fraction(x, xp);
        case DistortionKind::QuadraticCdm:
            return kQuadraticCdmScale * std::abs(x[0] - xp[0]) * std::abs(x[0] + xp[0]);
        case DistortionKind::RobotArmCdm: {
            double dc = std::cos(x[0] - x[1]) - std::cos(xp[0] - xp[1]);
            return (4.0 / 9.0) * dc * dc;
        }
        case DistortionKind::Learned: {
            double v = symmetric_output(*d.model, x, xp);
            return v > 0.0 ? v : 0.0; // a distortion cannot be negative
        }
    }
    throw std::logic_error("eval_distortion: unknown kind");
}

IntervalUnion epsilon_ball_quadratic(double x, double eps) {
    if (x <= 0.0) throw std::invalid_argument("epsilon_ball_quadratic: x must be positive");
    if (eps <= 0.0) throw std::invalid_argument("epsilon_ball_quadratic: eps must be positive");
    // |x - x'||x + x'| <= eps  <=>  x^2 - eps <= x'^2 <= x^2 + eps
    double hi = std::sqrt(x * x + eps);
    IntervalUnion u;
    if (eps < x * x) {
        double lo = std::sqrt(x * x - eps);
        u.intervals = {{-hi, -lo}, {lo, hi}};
    } else {
        // the two balls merge across the origin
        u.intervals = {{-hi, hi}};
    }
    return u;
}

} // namespace cdm
