#pragma once

#include "specidem/model.hpp"

#include <array>
#include <cmath>
#include <span>
#include <type_traits>
#include <vector>

namespace specidem {

/// Branch-fixed square root: |z|^(1/2) e^(i arg(z)/2) with arg(z) in [-pi, pi).
/// Not a continuous branch; well defined on C \ {0}.
Complex principal_sqrt(Complex z);

enum class HalfPower { plus_half, minus_half, minus_one };

/// Diagonal factor (lambda_n - z)^exponent, n = 1..N, computed entrywise
/// with principal_sqrt. Throws if z is within collision_floor of some lambda_n.
Vec diag_power(const SpectrumSpec& spectrum, Complex z, HalfPower exponent,
               double collision_floor = 1e-13);

/// One smooth piece of a contour, parameterized over t in [0,1].
/// `loop` is the whole half-disc boundary as a single (kinked) panel; it
/// exists only to demonstrate what corner splitting buys.
struct Panel {
    enum class Kind { line, arc, loop };
    Kind kind = Kind::line;

    // line
    Complex z0, z1;
    // arc on the unit circle, theta0 -> theta1
    double theta0 = 0.0, theta1 = 0.0;
    // loop
    double loop_xi = 0.0;
    Side loop_side = Side::plus;

    Complex point(double t) const;
    Complex deriv(double t) const;
    double length() const;
    double distance(Complex mu) const;
};

/// gamma_xi^side = l_xi U A_xi^side, positively oriented and closed.
struct HalfPlaneContour {
    double xi = 0.0;
    Side side = Side::plus;
    std::vector<Panel> panels;
    std::array<Complex, 2> corners{};  ///< xi +- i sqrt(1 - xi^2)
    double lambda_clearance = 0.0;     ///< min_n dist(lambda_n, curve)
    double shadow_margin = 0.0;        ///< min_n |Re lambda_n - xi|

    double length() const;
    double distance(Complex mu) const;
};

struct QuadratureConfig {
    int order = 16;          ///< Gauss-Legendre nodes per panel
    int max_depth = 14;      ///< adaptive bisection depth
    double tol = 1e-12;      ///< absolute target for the whole contour
    bool split_corners = true;
    double collision_floor = 1e-13;  ///< node-to-eigenvalue floor
};

/// Build gamma_xi^side. Throws when xi sits on the real shadow of the
/// spectrum (min_n |Re lambda_n - xi| < shadow_floor).
HalfPlaneContour build_contour(const SpectrumSpec& spectrum, double xi, Side side,
                               const QuadratureConfig& cfg = {}, double shadow_floor = 1e-6);

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussLegendre {
    std::vector<double> nodes, weights;
    static const GaussLegendre& get(int order);
};

template <class T>
struct IntegralResult {
    T value{};
    double error = 0.0;  ///< paired-refinement estimate
    long evaluations = 0;
    bool converged = true;
};

namespace detail {

template <class T>
double value_norm(const T& v) {
    if constexpr (std::is_same_v<T, Complex>)
        return std::abs(v);
    else
        return v.norm();
}

// += that tolerates a default-constructed (empty) matrix accumulator.
template <class T>
void accumulate(T& acc, const T& term) {
    if constexpr (std::is_same_v<T, Complex>) {
        acc += term;
    } else {
        if (acc.size() == 0)
            acc = term;
        else
            acc += term;
    }
}

template <class F>
auto gl_sum(F&& f, const Panel& p, double ta, double tb, const GaussLegendre& gl,
            bool arclength) {
    using T = std::invoke_result_t<F, Complex>;
    const double mid = 0.5 * (ta + tb), half = 0.5 * (tb - ta);
    T acc{};
    bool first = true;
    for (size_t i = 0; i < gl.nodes.size(); ++i) {
        const double t = mid + half * gl.nodes[i];
        const Complex z = p.point(t);
        const Complex dz = p.deriv(t);
        const Complex w = arclength ? Complex(std::abs(dz), 0.0) : dz;
        T term = f(z);
        if constexpr (std::is_same_v<T, Complex>) {
            acc += gl.weights[i] * half * w * term;
        } else {
            term *= gl.weights[i] * half * w;
            if (first) {
                acc = term;
                first = false;
            } else {
                acc += term;
            }
        }
    }
    return acc;
}

template <class T, class F>
void integrate_panel(F&& f, const Panel& p, double ta, double tb, double tol, int depth,
                     const GaussLegendre& gl, bool arclength, IntegralResult<T>& out) {
    T coarse = gl_sum(f, p, ta, tb, gl, arclength);
    const double tm = 0.5 * (ta + tb);
    T left = gl_sum(f, p, ta, tm, gl, arclength);
    T right = gl_sum(f, p, tm, tb, gl, arclength);
    out.evaluations += 3 * static_cast<long>(gl.nodes.size());
    T fine = left;
    fine += right;
    double err;
    if constexpr (std::is_same_v<T, Complex>)
        err = std::abs(coarse - fine);
    else
        err = (coarse - fine).norm();
    if (err <= tol || depth <= 0) {
        accumulate(out.value, fine);
        out.error += err;
        if (err > tol) out.converged = false;
        return;
    }
    integrate_panel(f, p, ta, tm, tol / 2.0, depth - 1, gl, arclength, out);
    integrate_panel(f, p, tm, tb, tol / 2.0, depth - 1, gl, arclength, out);
}

}  // namespace detail

/// Adaptive composite Gauss-Legendre over the contour. Returns the plain
/// integral of f dz (or f |dz| with arclength = true); callers divide by
/// 2*pi*i themselves. Panels are processed in order, halves left-to-right,
/// so the summation order is fixed.
template <class F>
auto integrate(F&& f, const HalfPlaneContour& contour, const QuadratureConfig& cfg = {},
               bool arclength = false) {
    using T = std::invoke_result_t<F, Complex>;
    const GaussLegendre& gl = GaussLegendre::get(cfg.order);
    IntegralResult<T> out;
    bool first = true;
    const double panel_tol = cfg.tol / std::max<size_t>(1, contour.panels.size());
    for (const Panel& p : contour.panels) {
        IntegralResult<T> part;
        detail::integrate_panel<T>(f, p, 0.0, 1.0, panel_tol, cfg.max_depth, gl, arclength,
                                   part);
        if (first) {
            out.value = part.value;
            first = false;
        } else {
            out.value += part.value;
        }
        out.error += part.error;
        out.evaluations += part.evaluations;
        out.converged = out.converged && part.converged;
    }
    return out;
}

/// Fixed-depth (non-adaptive) variant: every panel is bisected `depth` times
/// uniformly. Used by refinement-rate tests and the benchmark driver.
template <class F>
auto integrate_fixed(F&& f, const HalfPlaneContour& contour, int order, int depth,
                     bool arclength = false) {
    using T = std::invoke_result_t<F, Complex>;
    const GaussLegendre& gl = GaussLegendre::get(order);
    IntegralResult<T> out;
    const int pieces = 1 << depth;
    bool first = true;
    for (const Panel& p : contour.panels) {
        for (int i = 0; i < pieces; ++i) {
            const double ta = static_cast<double>(i) / pieces;
            const double tb = static_cast<double>(i + 1) / pieces;
            T part = detail::gl_sum(f, p, ta, tb, gl, arclength);
            out.evaluations += static_cast<long>(gl.nodes.size());
            if (first) {
                out.value = part;
                first = false;
            } else {
                out.value += part;
            }
        }
    }
    return out;
}

/// True iff (1/2 pi i) contour integral of dz/(z - mu) rounds to 1.
/// Throws when mu is within `floor_dist` of the curve.
bool winding_inside(const HalfPlaneContour& contour, Complex mu, double floor_dist = 1e-9);

/// Empirical sup over the lambda grid of |Re lambda - xi| * int |dz|/|lambda - z|^2.
double contour_weight_constant(const HalfPlaneContour& contour, std::span<const Complex> grid,
                               const QuadratureConfig& cfg = {});

}  // namespace specidem
