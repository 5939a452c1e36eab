#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>

#include "lpcann/kinematics.hpp"

namespace lpcann {

inline constexpr int kTerms = 8;
inline constexpr int kExponents = 4;

/// Largest exponential argument evaluated before raising OverflowError.
inline constexpr double kMaxExpArgument = 700.0;

/// Fixed Ogden exponents of the principal-stretch family.
inline constexpr std::array<double, kTerms> kStretchExponents{2, 4, 6, 8, -2, -4, -6, -8};

enum class ModelFamily { Invariant8, Stretch8, MooneyRivlin };

const char* to_string(ModelFamily family);
ModelFamily family_from_string(const std::string& name);

/// Which of the eight term slots take part in a fit.
class TermMask {
public:
    constexpr TermMask() = default;
    constexpr explicit TermMask(std::uint8_t bits) : bits_(bits) {}

    /// Build from 1-based term numbers, e.g. {1, 5} for Mooney-Rivlin.
    static TermMask from_terms(std::initializer_list<int> terms);
    static constexpr TermMask all() { return TermMask(0xFF); }

    constexpr bool active(int term) const { return (bits_ >> term) & 1u; }
    void set(int term, bool on = true);
    int count() const;
    constexpr std::uint8_t bits() const { return bits_; }

    /// Comma separated 1-based term list, "1,5".
    std::string to_string() const;
    static TermMask parse(const std::string& text);

    friend constexpr bool operator==(TermMask, TermMask) = default;

private:
    std::uint8_t bits_ = 0;
};

/// Terms a family can express. Mooney-Rivlin uses slots 1 and 5 only.
TermMask family_terms(ModelFamily family);

/// Invariant8 terms 2, 4, 6, 8 carry an inner exponential weight.
constexpr bool is_exponential_term(ModelFamily family, int term) {
    return family == ModelFamily::Invariant8 && (term % 2) == 1;
}

/// Index into ParamVector::exponents for an exponential term.
constexpr int exponent_slot(int term) { return term / 2; }

/// Model weights. Amplitudes are stiffness-like (kPa); for Invariant8 the
/// non-exponential slots hold merged products w1,k*w2,k and the exponential
/// slots hold the outer weight w2,k. Exponents hold w1,2 w1,4 w1,6 w1,8.
struct ParamVector {
    ModelFamily family = ModelFamily::Invariant8;
    std::array<double, kTerms> amplitudes{};
    std::array<double, kExponents> exponents{1.0, 1.0, 1.0, 1.0};

    static ParamVector mooney_rivlin(double w1, double w5);
    static ParamVector zeros(ModelFamily family);

    double exponent_of(int term) const { return exponents[exponent_slot(term)]; }
};

/// Throws ConfigError on negative or non-finite weights or on amplitudes outside the family.
void validate(const ParamVector& params);

struct StressResult {
    double total = 0.0;
    std::array<double, kTerms> per_term{};
};

/// Derivative of a scalar with respect to every weight slot.
struct ParamGradient {
    std::array<double, kTerms> amplitudes{};
    std::array<double, kExponents> exponents{};

    ParamGradient& operator+=(const ParamGradient& other);
    ParamGradient& operator*=(double s);
};

struct StressEvaluation {
    StressResult stress;
    ParamGradient gradient;
};

double energy(const ParamVector& params, const DeformationState& state);

StressResult stress_uniaxial(const ParamVector& params, double lambda);
StressResult stress_shear(const ParamVector& params, double gamma);

/// P11 for uniaxial modes, P12 for simple shear. Zero-amplitude terms are skipped.
StressResult stress(const ParamVector& params, LoadMode mode, double control);

ParamGradient stress_gradient(const ParamVector& params, LoadMode mode, double control);

/// Stress and its weight gradient in one pass.
StressEvaluation evaluate(const ParamVector& params, LoadMode mode, double control);

/// As above, restricted to `terms`; other slots report zero stress and gradient.
StressEvaluation evaluate(const ParamVector& params, LoadMode mode, double control, TermMask terms);

/// Ogden shear moduli mu_i = alpha_i w_i for the principal-stretch family.
std::array<double, kTerms> ogden_shear_moduli(const ParamVector& params);

/// Human-readable term label, e.g. "exp(w[I2-3])".
std::string term_label(ModelFamily family, int term);

}  // namespace lpcann
