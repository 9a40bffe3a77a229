#pragma once

// Central finite differences over an arbitrary callable. Test-side oracle,
// kept independent of the analytic derivative code it checks.

template <typename Fn>
double fd_first(Fn&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Five-point central stencil: the three-point version cannot reach 1e-5
// relative accuracy near p_th (large higher derivatives) at any step that
// also survives roundoff near p_max.
template <typename Fn>
double fd_second(Fn&& f, double x, double h) {
    return (-f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)) /
           (12.0 * h * h);
}

inline double rel_error(double got, double expected) {
    const double denom = expected == 0.0 ? 1.0 : expected;
    return std::abs((got - expected) / denom);
}
