#include "cdm/environment.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cdm {

Environment Environment::linear(int n, double alpha) {
    if (n <= 0) throw std::invalid_argument("linear environment: dimension must be positive");
    if (alpha <= 0.0) throw std::invalid_argument("linear environment: alpha must be positive");
    Environment e;
    e.kind = EnvKind::Linear;
    e.dim = n;
    e.alpha = alpha;
    e.input_domain = Box::cube(n, -1.0, 1.0);
    e.sigma = Sigma::SquaredDifference;
    return e;
}

Environment Environment::thresholded_linear(int n) {
    if (n <= 0) throw std::invalid_argument("thresholded environment: dimension must be positive");
    Environment e;
    e.kind = EnvKind::ThresholdedLinear;
    e.dim = n;
    e.input_domain = Box::cube(n, -1.0, 1.0);
    e.sigma = Sigma::SquaredDifference; // on {0,1} outputs this is the disagreement indicator
    return e;
}

Environment Environment::quadratic() {
    Environment e;
    e.kind = EnvKind::Quadratic;
    e.dim = 1;
    e.input_domain = Box::cube(1, -1.0, 1.0);
    e.sigma = Sigma::AbsoluteDifference;
    return e;
}

Environment Environment::robot_arm() {
    Environment e;
    e.kind = EnvKind::RobotArm;
    e.dim = 2;
    e.input_domain = Box::cube(2, -std::numbers::pi, std::numbers::pi);
    e.sigma = Sigma::SquaredDifference;
    return e;
}

FunctionHandle sample_function(const Environment& env, Rng& rng) {
    FunctionHandle f;
    f.kind = env.kind;
    switch (env.kind) {
        case EnvKind::Linear:
            f.params.resize(env.dim);
            for (double& a : f.params) a = rng.uniform(-env.alpha, env.alpha);
            break;
        case EnvKind::ThresholdedLinear: {
            // rejection from the enclosing cube keeps the ball exactly uniform
            f.params.resize(env.dim);
            for (;;) {
                double norm2 = 0.0;
                for (double& a : f.params) {
                    a = rng.uniform(-1.0, 1.0);
                    norm2 += a * a;
                }
                if (norm2 <= 1.0) break;
            }
            break;
        }
        case EnvKind::Quadratic:
            f.params = {rng.uniform(-1.0, 1.0)};
            break;
        case EnvKind::RobotArm:
            f.params = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
            break;
    }
    return f;
}

double eval_function(const Environment& env, const FunctionHandle& f, const Point& x) {
    if (f.kind != env.kind)
        throw std::invalid_argument("eval_function: handle does not belong to this environment");
    if (!env.input_domain.contains(x))
        throw std::invalid_argument("eval_function: input outside the environment domain");
    switch (env.kind) {
        case EnvKind::Linear:
        case EnvKind::ThresholdedLinear: {
            double s = 0.0;
            for (int i = 0; i < env.dim; ++i) s += f.params[i] * x[i];
            if (env.kind == EnvKind::Linear) return s;
            return s >= 0.0 ? 1.0 : 0.0; // Heaviside, step(0) = 1
        }
        case EnvKind::Quadratic:
            return f.params[0] * x[0] * x[0];
        case EnvKind::RobotArm: {
            double r1 = f.params[0], r2 = f.params[1];
            return r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * std::cos(x[0] - x[1]);
        }
    }
    throw std::logic_error("eval_function: unknown kind");
}

Point sample_input(const Environment& env, Rng& rng) {
    return env.input_domain.sample(rng);
}

double eval_sigma(const Environment& env, double y, double yp) {
    double d = y - yp;
    return env.sigma == Sigma::SquaredDifference ? d * d : std::abs(d);
}

DistortionMeasure true_cdm(const Environment& env) {
    switch (env.kind) {
        case EnvKind::Linear:
            return DistortionMeasure::linear_cdm(env.dim, linear_cdm_scale(env.alpha));
        case EnvKind::ThresholdedLinear:
            return DistortionMeasure::angle_cdm(env.dim);
        case EnvKind::Quadratic:
            return DistortionMeasure::quadratic_cdm();
        case EnvKind::RobotArm:
            return DistortionMeasure::robot_arm_cdm();
    }
    throw std::logic_error("true_cdm: unknown kind");
}

std::string env_kind_name(EnvKind kind) {
    switch (kind) {
        case EnvKind::Linear: return "linear";
        case EnvKind::ThresholdedLinear: return "thresholded-linear";
        case EnvKind::Quadratic: return "quadratic";
        case EnvKind::RobotArm: return "robot-arm";
    }
    return "unknown";
}

} // namespace cdm
