#include "mcpa/power_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mcpa/errors.hpp"

namespace mcpa {

namespace {

// Denominator of the Doherty branch, beta * 10 * log10(p) + gamma.
double doherty_denom(const PowerModelParams& m, double p_out) {
    return m.beta * 10.0 * std::log10(p_out) + m.gamma;
}

// d/dp of the denominator is c/p with this constant.
double log_slope(const PowerModelParams& m) {
    return 10.0 * m.beta / std::numbers::ln10;
}

} // namespace

void validate(const PowerModelParams& m) {
    if (!(m.alpha > 0.0)) throw ConfigError("power model: alpha must be > 0");
    if (!(m.p_th > 0.0 && m.p_th < m.p_max)) {
        throw ConfigError("power model: requires 0 < p_th < p_max");
    }
    if (!(m.p_slp >= 0.0 && m.p_sta > m.p_slp)) {
        throw ConfigError("power model: requires p_sta > p_slp >= 0");
    }
    if (m.variant == PaVariant::doherty) {
        // The denominator is monotone in p, so positivity at both ends of
        // [p_th, p_max] covers the whole Doherty interval.
        if (!(doherty_denom(m, m.p_th) > 0.0 && doherty_denom(m, m.p_max) > 0.0)) {
            throw ConfigError("power model: Doherty denominator not positive on (p_th, p_max]");
        }
    }
}

PowerModelParams preset(std::string_view name) {
    PowerModelParams m;
    if (name == "exp1") {
        m = {2.7, 0.03, -0.06, 5.0, 40.0, 20.0, 13.0, PaVariant::doherty};
    } else if (name == "exp2") {
        m = {2.7, 0.03, -0.06, 5.0, 60.0, 20.0, 13.0, PaVariant::doherty};
    } else if (name == "exp3") {
        m = {2.7, 0.025, 0.01, 4.0, 40.0, 14.0, 9.0, PaVariant::doherty};
    } else {
        throw ConfigError("unknown power model preset: " + std::string(name));
    }
    validate(m);
    return m;
}

bool is_preset_name(std::string_view name) {
    return name == "exp1" || name == "exp2" || name == "exp3";
}

double input_power(const PowerModelParams& m, double p_out) {
    if (p_out < 0.0) throw std::domain_error("input_power: negative output power");
    if (p_out > m.p_max) throw std::domain_error("input_power: output power above p_max");
    if (p_out == 0.0) return m.p_slp;
    if (m.variant == PaVariant::class_ab || p_out <= m.p_th) {
        return m.p_sta + m.alpha * p_out;
    }
    return p_out / doherty_denom(m, p_out);
}

double d_input_power(const PowerModelParams& m, double p_out) {
    if (m.variant != PaVariant::doherty) {
        throw std::domain_error("d_input_power: derivatives defined for the Doherty variant only");
    }
    if (!(p_out > m.p_th && p_out < m.p_max)) {
        throw std::domain_error("d_input_power: output power outside (p_th, p_max)");
    }
    const double g = doherty_denom(m, p_out);
    const double c = log_slope(m);
    return (g - c) / (g * g);
}

double d2_input_power(const PowerModelParams& m, double p_out) {
    if (m.variant != PaVariant::doherty) {
        throw std::domain_error("d2_input_power: derivatives defined for the Doherty variant only");
    }
    if (!(p_out > m.p_th && p_out < m.p_max)) {
        throw std::domain_error("d2_input_power: output power outside (p_th, p_max)");
    }
    const double g = doherty_denom(m, p_out);
    const double c = log_slope(m);
    return (c / p_out) * (2.0 * c - g) / (g * g * g);
}

double threshold_jump(const PowerModelParams& m) {
    if (m.variant != PaVariant::doherty) return 0.0;
    return m.p_th / doherty_denom(m, m.p_th) - (m.p_sta + m.alpha * m.p_th);
}

QuadraticCoeffs taylor_coeffs(const PowerModelParams& m, MidpointRule rule) {
    if (m.variant != PaVariant::doherty) {
        throw ConfigError("taylor_coeffs: surrogate defined for the Doherty variant only");
    }
    const double p_mid =
        rule == MidpointRule::half_span ? (m.p_max - m.p_th) / 2.0 : (m.p_max + m.p_th) / 2.0;
    if (!(p_mid > m.p_th && p_mid < m.p_max)) {
        throw ConfigError("taylor_coeffs: expansion point falls outside the Doherty interval");
    }
    QuadraticCoeffs q;
    q.p_mid = p_mid;
    q.f0 = input_power(m, p_mid);
    q.f1 = d_input_power(m, p_mid);
    q.f2 = d2_input_power(m, p_mid);
    return q;
}

} // namespace mcpa
