#pragma once

#include <string>
#include <vector>

#include "cdm/distortion.hpp"
#include "cdm/point.hpp"
#include "cdm/rng.hpp"

namespace cdm {

enum class EnvKind { Linear, ThresholdedLinear, Quadratic, RobotArm };

enum class Sigma { SquaredDifference, AbsoluteDifference };

/// A sampleable family of functions together with its output discrepancy and
/// the (uniform) input distribution over an axis-aligned domain box.
struct Environment {
    EnvKind kind = EnvKind::Quadratic;
    int dim = 1;
    double alpha = 1.0; // Linear only: coefficient range
    Box input_domain;
    Sigma sigma = Sigma::SquaredDifference;

    static Environment linear(int n, double alpha);
    static Environment thresholded_linear(int n);
    static Environment quadratic();
    static Environment robot_arm();
};

/// Parameters of one sampled function.
///   Linear             weight vector a in [-alpha, alpha]^n
///   ThresholdedLinear  weight vector a in the unit ball
///   Quadratic          coefficient {a}, a in [-1, 1]
///   RobotArm           link lengths {r1, r2} in [0, 1]^2
struct FunctionHandle {
    EnvKind kind = EnvKind::Quadratic;
    std::vector<double> params;
};

/// Draws a function uniformly over the kind's parameter support.
FunctionHandle sample_function(const Environment& env, Rng& rng);

/// Evaluates the function at x (throws std::invalid_argument if x lies
/// outside the input domain):
///   Linear             a . x
///   ThresholdedLinear  step(a . x), step(0) = 1
///   Quadratic          a x^2
///   RobotArm           r1^2 + r2^2 + 2 r1 r2 cos(t1 - t2)
double eval_function(const Environment& env, const FunctionHandle& f, const Point& x);

/// Uniform draw over the input domain.
Point sample_input(const Environment& env, Rng& rng);

/// Output discrepancy: (y - y')^2 or |y - y'| per environment.
double eval_sigma(const Environment& env, double y, double yp);

/// The closed-form measure induced by the environment, with constants pinned
/// by the Monte-Carlo oracle (see the tests):
///   Linear             linear_cdm(n, alpha^2/3)
///   ThresholdedLinear  angle_cdm(n)
///   Quadratic          quadratic_cdm()
///   RobotArm           robot_arm_cdm()
DistortionMeasure true_cdm(const Environment& env);

std::string env_kind_name(EnvKind kind);

} // namespace cdm
