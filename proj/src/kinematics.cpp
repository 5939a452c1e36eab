#include "lpcann/kinematics.hpp"

#include <cmath>
#include <string>

#include "lpcann/errors.hpp"

namespace lpcann {

const char* to_string(LoadMode mode) {
    switch (mode) {
        case LoadMode::UniaxialTension: return "tension";
        case LoadMode::UniaxialCompression: return "compression";
        case LoadMode::SimpleShear: return "shear";
    }
    return "unknown";
}

DeformationState uniaxial_state(double lambda) {
    if (!std::isfinite(lambda) || lambda <= 0.0)
        throw DomainError("uniaxial stretch must be positive and finite, got " + std::to_string(lambda));

    DeformationState s;
    const double lateral = 1.0 / std::sqrt(lambda);
    s.lambda1 = lambda;
    s.lambda2 = lateral;
    s.lambda3 = lateral;
    s.I1 = lambda * lambda + 2.0 / lambda;
    s.I2 = 2.0 * lambda + 1.0 / (lambda * lambda);
    s.I3 = 1.0;
    s.mode = lambda < 1.0 ? LoadMode::UniaxialCompression : LoadMode::UniaxialTension;
    s.control = lambda;
    return s;
}

double shear_stretch(double gamma) { return 0.5 * (gamma + std::sqrt(4.0 + gamma * gamma)); }

DeformationState shear_state(double gamma) {
    if (!std::isfinite(gamma))
        throw DomainError("shear amount must be finite");

    DeformationState s;
    const double root = std::sqrt(4.0 + gamma * gamma);
    s.lambda1 = 0.5 * (root + gamma);
    // 2 / (root + gamma) is the cancellation-free form of (root - gamma) / 2 for gamma >= 0
    s.lambda2 = gamma >= 0.0 ? 2.0 / (root + gamma) : 0.5 * (root - gamma);
    s.lambda3 = 1.0;
    s.I1 = 3.0 + gamma * gamma;
    s.I2 = 3.0 + gamma * gamma;
    s.I3 = 1.0;
    s.mode = LoadMode::SimpleShear;
    s.control = gamma;
    return s;
}

Invariants invariants_from_stretches(double l1, double l2, double l3) {
    const double J = l1 * l2 * l3;
    return {l1 * l1 + l2 * l2 + l3 * l3,
            1.0 / (l1 * l1) + 1.0 / (l2 * l2) + 1.0 / (l3 * l3),
            J * J};
}

}  // namespace lpcann
