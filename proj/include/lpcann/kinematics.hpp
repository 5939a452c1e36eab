#pragma once

namespace lpcann {

enum class LoadMode { UniaxialTension, UniaxialCompression, SimpleShear };

const char* to_string(LoadMode mode);

/// Incompressible deformation for one load point.
struct DeformationState {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 1.0;
    double I1 = 3.0;
    double I2 = 3.0;
    double I3 = 1.0;
    LoadMode mode = LoadMode::UniaxialTension;
    double control = 1.0;  // stretch for uniaxial modes, shear amount for simple shear
};

struct Invariants {
    double I1;
    double I2;
    double I3;
};

/// Uniaxial tension/compression at stretch lambda. lambda == 1 is tagged as tension.
DeformationState uniaxial_state(double lambda);

/// Simple shear with amount gamma.
DeformationState shear_state(double gamma);

/// Generic invariants I1 = sum l_i^2, I2 = sum l_i^-2 (incompressible form), I3 = (l1 l2 l3)^2.
Invariants invariants_from_stretches(double l1, double l2, double l3);

/// Larger principal stretch of simple shear, [gamma + sqrt(4 + gamma^2)] / 2.
double shear_stretch(double gamma);

}  // namespace lpcann
