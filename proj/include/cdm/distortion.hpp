#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "cdm/mlp.hpp"
#include "cdm/point.hpp"

namespace cdm {

enum class DistortionKind {
    SquaredEuclidean,
    Hamming,
    LinearCdm,
    AngleCdm,
    QuadraticCdm,
    RobotArmCdm,
    Learned,
};

/// Proportionality constant of the measure induced by the linear family with
/// coefficients uniform on [-alpha, alpha]^n: the per-coordinate second
/// moment is alpha^2/3 and cross terms vanish, so d(x,x') =
/// (alpha^2/3)*||x-x'||^2. Pinned by the Monte-Carlo oracle in the tests.
inline double linear_cdm_scale(double alpha) { return alpha * alpha / 3.0; }

/// Mean of |a| for a uniform on [-1,1]; the constant in front of the
/// quadratic-family measure |x-x'||x+x'| (see quadratic_cdm()).
inline constexpr double kQuadraticCdmScale = 0.5;

/// An evaluable pairwise distortion d(x, x'). All kinds are symmetric; the
/// analytic kinds are non-negative with d(x,x) = 0. Immutable after
/// construction and safe to evaluate concurrently.
struct DistortionMeasure {
    DistortionKind kind = DistortionKind::SquaredEuclidean;
    int dimension = 1;
    double scale = 1.0;                     // LinearCdm only
    std::shared_ptr<const MlpModel> model;  // Learned only

    static DistortionMeasure squared_euclidean(int dim);
    static DistortionMeasure hamming(int dim);
    static DistortionMeasure linear_cdm(int dim, double scale);
    static DistortionMeasure angle_cdm(int dim);
    static DistortionMeasure quadratic_cdm();
    static DistortionMeasure robot_arm_cdm();
    static DistortionMeasure learned(std::shared_ptr<const MlpModel> model);
};

/// Evaluates the measure. Formulas by kind:
///   squared_euclidean  ||x - x'||^2
///   hamming            0 if all coordinates are bitwise equal, else 1
///   linear_cdm         scale * ||x - x'||^2
///   angle_cdm          theta/pi, theta the angle between x and x'
///   quadratic_cdm      (1/2) |x - x'| |x + x'|   (dimension 1)
///   robot_arm_cdm      (4/9) [cos(t1 - t2) - cos(t1' - t2')]^2
///   learned            max(0, symmetric_output(model, x, x'))
/// Throws std::invalid_argument on dimension mismatch and for a zero vector
/// passed to angle_cdm.
double eval_distortion(const DistortionMeasure& d, const Point& x, const Point& xp);

/// Ordered union of pairwise-disjoint closed intervals.
struct IntervalUnion {
    std::vector<std::pair<double, double>> intervals;
};

/// Exact sublevel set {x' : |x - x'||x + x'| <= eps} for x > 0, solved from
/// the quadratic inequality: two intervals around -x and x while eps < x^2,
/// a single interval through the origin once they merge. The first-order
/// half-width eps/(2x) is a test oracle, not the return value.
IntervalUnion epsilon_ball_quadratic(double x, double eps);

} // namespace cdm
