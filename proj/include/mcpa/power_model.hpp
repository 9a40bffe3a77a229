#pragma once

#include <string_view>

namespace mcpa {

enum class PaVariant { doherty, class_ab };

/// Constants of the MCPA input-power model. All powers are in watts.
///
/// An amplifier draws p_slp while asleep (zero load), p_sta + alpha*p while
/// lightly loaded, and p / (beta*10*log10(p) + gamma) in the Doherty region
/// (p_th, p_max]. The class_ab variant has no Doherty region: the linear
/// branch extends up to p_max.
struct PowerModelParams {
    double alpha = 0.0;  // linear-region slope (W/W)
    double beta = 0.0;   // Doherty efficiency slope per dB of output
    double gamma = 0.0;  // Doherty efficiency bias
    double p_th = 0.0;   // linear/Doherty threshold
    double p_max = 0.0;  // maximum supported output power
    double p_sta = 0.0;  // static draw while active
    double p_slp = 0.0;  // draw while asleep
    PaVariant variant = PaVariant::doherty;

    friend bool operator==(const PowerModelParams&, const PowerModelParams&) = default;
};

// Throws ConfigError unless: alpha > 0, 0 < p_th < p_max, p_sta > p_slp >= 0,
// and (doherty only) the denominator beta*10*log10(p) + gamma stays positive
// on [p_th, p_max].
void validate(const PowerModelParams& params);

// Named parameter sets matching the three simulated amplifier types.
// Knows "exp1", "exp2", "exp3"; throws ConfigError otherwise.
PowerModelParams preset(std::string_view name);
bool is_preset_name(std::string_view name);

/// Input power f(p_out). Throws std::domain_error for p_out < 0 or > p_max.
double input_power(const PowerModelParams& params, double p_out);

// First and second derivative of the Doherty branch. Only defined on the
// open interval (p_th, p_max); throws std::domain_error elsewhere or for
// the class_ab variant.
double d_input_power(const PowerModelParams& params, double p_out);
double d2_input_power(const PowerModelParams& params, double p_out);

// Signed discontinuity f(p_th+) - f(p_th) between the Doherty and linear
// branches. Diagnostic only; the model is evaluated branch-literal.
double threshold_jump(const PowerModelParams& params);

// Expansion center for the quadratic surrogate. half_span is the literal
// (p_max - p_th)/2; interval_mid is (p_max + p_th)/2 for sensitivity runs.
enum class MidpointRule { half_span, interval_mid };

/// Second-order expansion of input_power around p_mid:
/// q(x) = f0 + f1*(x - p_mid) + f2/2*(x - p_mid)^2.
struct QuadraticCoeffs {
    double p_mid = 0.0;
    double f0 = 0.0;  // value at p_mid
    double f1 = 0.0;  // first derivative
    double f2 = 0.0;  // second derivative
};

// Throws ConfigError if the variant is class_ab or p_mid falls outside the
// Doherty interval (p_th, p_max).
QuadraticCoeffs taylor_coeffs(const PowerModelParams& params,
                              MidpointRule rule = MidpointRule::half_span);

} // namespace mcpa
