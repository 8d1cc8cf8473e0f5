#include "specidem/contour.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace specidem {

using std::numbers::pi;

Complex principal_sqrt(Complex z) {
    if (z == Complex(0.0, 0.0)) throw Error("principal_sqrt: z = 0");
    double theta = std::arg(z);  // (-pi, pi]
    if (theta == pi) theta = -pi;
    return std::polar(std::sqrt(std::abs(z)), theta / 2.0);
}

Vec diag_power(const SpectrumSpec& spectrum, Complex z, HalfPower exponent,
               double collision_floor) {
    const int N = spectrum.size();
    Vec out(N);
    for (int n = 0; n < N; ++n) {
        const Complex w = spectrum.lambdas[n] - z;
        if (std::abs(w) < collision_floor)
            throw Error("diag_power: z collides with lambda_" + std::to_string(n + 1));
        switch (exponent) {
            case HalfPower::plus_half: out[n] = principal_sqrt(w); break;
            case HalfPower::minus_half: out[n] = 1.0 / principal_sqrt(w); break;
            case HalfPower::minus_one: out[n] = 1.0 / w; break;
        }
    }
    return out;
}

namespace {

// (segment length, arc angular extent) of gamma_xi^side as one loop;
// the loop panel is parameterized by arclength.
struct LoopGeom {
    double h, theta_c, seg_len, arc_len, total;
};

LoopGeom loop_geom(double xi) {
    LoopGeom g;
    g.h = std::sqrt(std::max(0.0, 1.0 - xi * xi));
    g.theta_c = std::acos(std::clamp(xi, -1.0, 1.0));
    g.seg_len = 2.0 * g.h;
    return g;
}

double dist_to_segment(Complex mu, Complex z0, Complex z1) {
    const Complex d = z1 - z0;
    const double L2 = std::norm(d);
    if (L2 == 0.0) return std::abs(mu - z0);
    double t = std::clamp(((mu - z0) * std::conj(d)).real() / L2, 0.0, 1.0);
    return std::abs(mu - (z0 + t * d));
}

double dist_to_arc(Complex mu, double theta0, double theta1) {
    double lo = std::min(theta0, theta1), hi = std::max(theta0, theta1);
    double th = std::arg(mu);
    // Try the representative of arg(mu) closest to the arc's angular window.
    for (double shift : {-2.0 * pi, 0.0, 2.0 * pi}) {
        double t = th + shift;
        if (t >= lo && t <= hi) return std::abs(std::abs(mu) - 1.0);
    }
    return std::min(std::abs(mu - std::polar(1.0, lo)), std::abs(mu - std::polar(1.0, hi)));
}

}  // namespace

Complex Panel::point(double t) const {
    switch (kind) {
        case Kind::line: return z0 + t * (z1 - z0);
        case Kind::arc: return std::polar(1.0, (1.0 - t) * theta0 + t * theta1);
        case Kind::loop: {
            const LoopGeom g = [&] {
                LoopGeom lg = loop_geom(loop_xi);
                lg.arc_len = (loop_side == Side::plus) ? 2.0 * lg.theta_c
                                                       : 2.0 * (pi - lg.theta_c);
                lg.total = lg.seg_len + lg.arc_len;
                return lg;
            }();
            const double s = t * g.total;
            if (loop_side == Side::plus) {
                if (s <= g.seg_len) return Complex(loop_xi, g.h - s);
                return std::polar(1.0, -g.theta_c + (s - g.seg_len));
            }
            if (s <= g.seg_len) return Complex(loop_xi, -g.h + s);
            return std::polar(1.0, g.theta_c + (s - g.seg_len));
        }
    }
    return {};
}

Complex Panel::deriv(double t) const {
    switch (kind) {
        case Kind::line: return z1 - z0;
        case Kind::arc: {
            const double span = theta1 - theta0;
            return Complex(0.0, span) * point(t);
        }
        case Kind::loop: {
            LoopGeom g = loop_geom(loop_xi);
            g.arc_len = (loop_side == Side::plus) ? 2.0 * g.theta_c : 2.0 * (pi - g.theta_c);
            g.total = g.seg_len + g.arc_len;
            const double s = t * g.total;
            if (loop_side == Side::plus) {
                if (s <= g.seg_len) return Complex(0.0, -1.0) * g.total;
                return Complex(0.0, 1.0) * point(t) * g.total;
            }
            if (s <= g.seg_len) return Complex(0.0, 1.0) * g.total;
            return Complex(0.0, 1.0) * point(t) * g.total;
        }
    }
    return {};
}

double Panel::length() const {
    switch (kind) {
        case Kind::line: return std::abs(z1 - z0);
        case Kind::arc: return std::abs(theta1 - theta0);
        case Kind::loop: {
            LoopGeom g = loop_geom(loop_xi);
            double arc = (loop_side == Side::plus) ? 2.0 * g.theta_c : 2.0 * (pi - g.theta_c);
            return g.seg_len + arc;
        }
    }
    return 0.0;
}

double Panel::distance(Complex mu) const {
    switch (kind) {
        case Kind::line: return dist_to_segment(mu, z0, z1);
        case Kind::arc: return dist_to_arc(mu, theta0, theta1);
        case Kind::loop: {
            LoopGeom g = loop_geom(loop_xi);
            double dseg = dist_to_segment(mu, Complex(loop_xi, -g.h), Complex(loop_xi, g.h));
            double darc = (loop_side == Side::plus)
                              ? dist_to_arc(mu, -g.theta_c, g.theta_c)
                              : dist_to_arc(mu, g.theta_c, 2.0 * pi - g.theta_c);
            return std::min(dseg, darc);
        }
    }
    return 0.0;
}

double HalfPlaneContour::length() const {
    double L = 0.0;
    for (const Panel& p : panels) L += p.length();
    return L;
}

double HalfPlaneContour::distance(Complex mu) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Panel& p : panels) d = std::min(d, p.distance(mu));
    return d;
}

HalfPlaneContour build_contour(const SpectrumSpec& spectrum, double xi, Side side,
                               const QuadratureConfig& cfg, double shadow_floor) {
    if (!(xi > -1.0 && xi < 1.0)) throw Error("build_contour: xi outside (-1, 1)");
    if (spectrum.accumulation_declared && !(xi > spectrum.a && xi < spectrum.b))
        throw Error("build_contour: xi outside the accumulation range (a, b)");

    double shadow = std::numeric_limits<double>::infinity();
    for (int n = 0; n < spectrum.size(); ++n)
        shadow = std::min(shadow, std::abs(spectrum.lambdas[n].real() - xi));
    if (spectrum.size() > 0 && shadow < shadow_floor)
        throw Error("build_contour: xi on the real shadow of the spectrum (margin " +
                    std::to_string(shadow) + ")");

    HalfPlaneContour c;
    c.xi = xi;
    c.side = side;
    c.shadow_margin = shadow;
    const double h = std::sqrt(1.0 - xi * xi);
    const double theta_c = std::acos(xi);
    c.corners = {Complex(xi, h), Complex(xi, -h)};

    if (!cfg.split_corners) {
        Panel p;
        p.kind = Panel::Kind::loop;
        p.loop_xi = xi;
        p.loop_side = side;
        c.panels.push_back(p);
    } else if (side == Side::plus) {
        // segment descending, then arc counterclockwise through +1
        Panel s1{Panel::Kind::line, Complex(xi, h), Complex(xi, 0.0)};
        Panel s2{Panel::Kind::line, Complex(xi, 0.0), Complex(xi, -h)};
        Panel a1, a2;
        a1.kind = a2.kind = Panel::Kind::arc;
        a1.theta0 = -theta_c;
        a1.theta1 = 0.0;
        a2.theta0 = 0.0;
        a2.theta1 = theta_c;
        c.panels = {s1, s2, a1, a2};
    } else {
        // segment ascending, then arc counterclockwise through -1
        Panel s1{Panel::Kind::line, Complex(xi, -h), Complex(xi, 0.0)};
        Panel s2{Panel::Kind::line, Complex(xi, 0.0), Complex(xi, h)};
        Panel a1, a2;
        a1.kind = a2.kind = Panel::Kind::arc;
        a1.theta0 = theta_c;
        a1.theta1 = pi;
        a2.theta0 = pi;
        a2.theta1 = 2.0 * pi - theta_c;
        c.panels = {s1, s2, a1, a2};
    }

    double clear = std::numeric_limits<double>::infinity();
    for (int n = 0; n < spectrum.size(); ++n)
        clear = std::min(clear, c.distance(spectrum.lambdas[n]));
    c.lambda_clearance = spectrum.size() > 0 ? clear : 0.0;
    return c;
}

const GaussLegendre& GaussLegendre::get(int order) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    GaussLegendre gl;
    gl.nodes.resize(order);
    gl.weights.resize(order);
    // Newton iteration on P_order, cosine initial guesses.
    for (int i = 0; i < order; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = order * (x * p1 - p0) / (x * x - 1.0);
        gl.nodes[order - 1 - i] = x;
        gl.weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(order, std::move(gl)).first->second;
}

bool winding_inside(const HalfPlaneContour& contour, Complex mu, double floor_dist) {
    if (contour.distance(mu) < floor_dist)
        throw Error("winding_inside: point within floor distance of the curve");
    QuadratureConfig cfg;
    cfg.tol = 1e-10;
    auto res = integrate([mu](Complex z) { return 1.0 / (z - mu); }, contour, cfg);
    const double w = (res.value / Complex(0.0, 2.0 * pi)).real();
    return std::lround(w) == 1;
}

double contour_weight_constant(const HalfPlaneContour& contour, std::span<const Complex> grid,
                               const QuadratureConfig& cfg) {
    double sup = 0.0;
    for (Complex lam : grid) {
        auto res = integrate(
            [lam](Complex z) { return Complex(1.0 / std::norm(lam - z), 0.0); }, contour, cfg,
            /*arclength=*/true);
        sup = std::max(sup, std::abs(lam.real() - contour.xi) * res.value.real());
    }
    return sup;
}

}  // namespace specidem
