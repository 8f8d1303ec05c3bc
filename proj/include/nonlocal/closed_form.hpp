#pragma once

/**
 * Closed-form Green functions, Poisson kernels and exit-time moments for the
 * isotropic alpha-stable process on balls, half-lines and half-spaces, plus
 * the Cauchy half-line interaction kernel.  These are the exact references
 * against which the quadrature and Monte Carlo routes are validated.
 *
 * Ball (radius rho, |x|,|y| < rho):
 *   G(x,y) = B_{d,a} |x-y|^{a-d} int_0^w s^{a/2-1} (1+s)^{-d/2} ds,
 *   w = (rho^2-|x|^2)(rho^2-|y|^2) / (rho^2 |x-y|^2),
 *   P(x,z) = C_{d,a} [(rho^2-|x|^2)/(|z|^2-rho^2)]^{a/2} |x-z|^{-d},
 *   E^x tau = Gamma(d/2) (rho^2-|x|^2)^{a/2} /
 *             (2^a Gamma(1+a/2) Gamma((d+a)/2)).
 *
 * Half-space {x_d > 0}: same incomplete-Beta-type Green profile with
 * w = 4 x_d y_d / |x-y|^2 and P(x,z) = C_{d,a} (x_d/|z_d|)^{a/2} |x-z|^{-d}.
 *
 * The constants B_{d,a}, C_{d,a} are calibrated at construction from the
 * normalization identities int_D G(0,y) dy = E^0 tau and int P(x,.) = 1
 * rather than hard-coded, so the tables stay self-validating.
 */

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "nonlocal/domain.hpp"
#include "nonlocal/levy.hpp"
#include "nonlocal/quadrature.hpp"

namespace nonlocal {

/// E^x tau for the ball B(0, rho).
inline double exit_time_ball(double alpha, int d, double rho, const Point& x) {
    const double r2 = rho * rho - x.norm() * x.norm();
    if (r2 <= 0.0) return 0.0;
    const double coeff = std::tgamma(0.5 * d) /
                         (std::pow(2.0, alpha) * std::tgamma(1.0 + 0.5 * alpha) *
                          std::tgamma(0.5 * (d + alpha)));
    return coeff * std::pow(r2, 0.5 * alpha);
}

namespace detail {

/// int_0^w s^{a/2-1} (1+s)^{-d/2} ds, the radial profile of the BGR Green
/// function.  Endpoint singularity at 0 is handled by the engine.
inline double green_profile(double alpha, int d, double w,
                            const QuadratureSpec& spec) {
    if (w <= 0.0) return 0.0;
    auto f = [&](double s) {
        return std::pow(s, 0.5 * alpha - 1.0) * std::pow(1.0 + s, -0.5 * d);
    };
    if (w <= 1.0) return integrate(f, 0.0, w, spec.with_singularities({0.0})).value;
    FormValue head = integrate(f, 0.0, 1.0, spec.with_singularities({0.0}));
    FormValue rest = integrate(f, 1.0, w, spec.with_singularities({}));
    return head.value + rest.value;
}

struct StableConstants {
    double green = 0.0;    // B_{d,alpha}
    double poisson = 0.0;  // C_{d,alpha}
};

/// Calibrates B_{d,alpha} from int_{B_1} G(0,y) dy = E^0 tau_{B_1} and
/// C_{d,alpha} from int_{|z|>1} P(0,z) dz = 1.  Cached per (alpha, d).
inline const StableConstants& stable_constants(double alpha, int d) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha in (0,2)");
    if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1..3");
    static std::map<std::pair<double, int>, StableConstants> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({alpha, d});
    if (it != cache.end()) return it->second;

    QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-11;
    const double omega = unit_sphere_area(d);

    // int_{B_1} G(0,y) dy with B = 1: radial integral of the profile.
    auto green_radial = [&](double s) {
        const double w = (1.0 - s * s) / (s * s);
        return std::pow(s, alpha - d) * green_profile(alpha, d, w, spec) *
               std::pow(s, d - 1);
    };
    const double green_mass =
        omega * integrate(green_radial, 0.0, 1.0, spec.with_singularities({0.0, 1.0}))
                    .value;

    // int_{|z|>1} P(0,z) dz with C = 1.
    auto poisson_radial = [&](double s) {
        return std::pow(s * s - 1.0, -0.5 * alpha) * std::pow(s, -d) *
               std::pow(s, d - 1);
    };
    QuadratureSpec tail_spec = spec.with_singularities({1.0});
    tail_spec.truncation_radius = 64.0;
    const double poisson_mass =
        omega * integrate_to_inf(poisson_radial, 1.0, tail_spec).value;

    StableConstants c;
    c.green = exit_time_ball(alpha, d, 1.0, Point{{0.0, 0.0, 0.0}, d}) / green_mass;
    c.poisson = 1.0 / poisson_mass;
    return cache.emplace(std::make_pair(alpha, d), c).first->second;
}

/// Half-space Poisson constant from the normalization int_{H^c} P(x,.) = 1,
/// reduced to one-dimensional quadratures.
inline double halfspace_poisson_constant(double alpha, int d) {
    static std::map<std::pair<double, int>, double> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({alpha, d});
    if (it != cache.end()) return it->second;

    QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-11;
    // With x = e_d and C = 1:
    //   int = (omega_{d-1} J_d) int_0^inf t^{-a/2} (1+t)^{-1} dt,
    //   J_d = int_0^inf v^{d-2} (1+v^2)^{-d/2} dv  (empty product for d = 1).
    double lateral = 1.0;
    if (d >= 2) {
        auto jf = [&](double v) {
            return std::pow(v, d - 2) * std::pow(1.0 + v * v, -0.5 * d);
        };
        QuadratureSpec jspec = spec;
        jspec.truncation_radius = 64.0;
        lateral = unit_sphere_area(d - 1) * integrate_to_inf(jf, 0.0, jspec).value;
    }
    auto tf = [&](double t) {
        return std::pow(t, -0.5 * alpha) / (1.0 + t);
    };
    QuadratureSpec tspec = spec.with_singularities({0.0});
    tspec.truncation_radius = 64.0;
    const double depth = integrate_to_inf(tf, 0.0, tspec).value;
    const double c = 1.0 / (lateral * depth);
    return cache.emplace(std::make_pair(alpha, d), c).first->second;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ball kernels.

/// Green function of B(0, rho) for the alpha-stable process; zero if either
/// point is outside the ball.  x = y is a pole and must be split by callers.
inline double green_ball(double alpha, int d, double rho, const Point& x,
                         const Point& y, const QuadratureSpec& spec = {}) {
    const double nx = x.norm(), ny = y.norm();
    if (nx >= rho || ny >= rho) return 0.0;
    const double xy = dist(x, y);
    if (xy == 0.0)
        throw std::invalid_argument("green_ball: x == y is a pole; split the integral");
    const double w = (rho * rho - nx * nx) * (rho * rho - ny * ny) /
                     (rho * rho * xy * xy);
    const auto& c = detail::stable_constants(alpha, d);
    return c.green * std::pow(xy, alpha - d) * detail::green_profile(alpha, d, w, spec);
}

inline double green_ball(double alpha, double rho, double x, double y,
                         const QuadratureSpec& spec = {}) {
    return green_ball(alpha, 1, rho, Point::d1(x), Point::d1(y), spec);
}

/// Poisson kernel of B(0, rho): x inside, z strictly outside.
inline double poisson_ball(double alpha, int d, double rho, const Point& x,
                           const Point& z) {
    const double nx = x.norm(), nz = z.norm();
    if (nx >= rho) throw std::invalid_argument("poisson_ball: x must be interior");
    if (nz <= rho)
        throw std::invalid_argument("poisson_ball: |z| <= rho (exterior point required)");
    const auto& c = detail::stable_constants(alpha, d);
    const double ratio = (rho * rho - nx * nx) / (nz * nz - rho * rho);
    return c.poisson * std::pow(ratio, 0.5 * alpha) * std::pow(dist(x, z), -d);
}

inline double poisson_ball(double alpha, double rho, double x, double z) {
    return poisson_ball(alpha, 1, rho, Point::d1(x), Point::d1(z));
}

// ---------------------------------------------------------------------------
// Half-space kernels ({x_d > 0}); the half-line (0,inf) is the d = 1 case.

inline double green_halfspace(double alpha, int d, const Point& x, const Point& y,
                              const QuadratureSpec& spec = {}) {
    const double xd = x[d - 1], yd = y[d - 1];
    if (xd <= 0.0 || yd <= 0.0) return 0.0;
    const double xy = dist(x, y);
    if (xy == 0.0)
        throw std::invalid_argument("green_halfspace: x == y is a pole");
    const double w = 4.0 * xd * yd / (xy * xy);
    const auto& c = detail::stable_constants(alpha, d);
    return c.green * std::pow(xy, alpha - d) * detail::green_profile(alpha, d, w, spec);
}

inline double poisson_halfspace(double alpha, int d, const Point& x, const Point& z) {
    const double xd = x[d - 1], zd = z[d - 1];
    if (!(xd > 0.0))
        throw std::invalid_argument("poisson_halfspace: x on the wrong side");
    if (!(zd < 0.0))
        throw std::invalid_argument("poisson_halfspace: z on the wrong side");
    const double c = detail::halfspace_poisson_constant(alpha, d);
    return c * std::pow(xd / (-zd), 0.5 * alpha) * std::pow(dist(x, z), -d);
}

/// Green function of the half-line (0,inf).
inline double green_halfline(double alpha, double x, double y,
                             const QuadratureSpec& spec = {}) {
    return green_halfspace(alpha, 1, Point::d1(x), Point::d1(y), spec);
}

// ---------------------------------------------------------------------------
// Cauchy half-line formulas (alpha = 1, D = (0,inf)).

/// P_{(0,inf)}(x,z) = pi^{-1} sqrt(x) |z|^{-1/2} (x-z)^{-1} for x > 0 > z.
inline double poisson_halfline_cauchy(double x, double z) {
    if (!(x > 0.0))
        throw std::invalid_argument("poisson_halfline_cauchy: x must be positive");
    if (!(z < 0.0))
        throw std::invalid_argument("poisson_halfline_cauchy: z must be negative");
    return std::sqrt(x) / (M_PI * std::sqrt(-z) * (x - z));
}

/// gamma_{(0,inf)}(z,w) = [2 pi sqrt(zw) (sqrt|z| + sqrt|w|)^2]^{-1}, z,w < 0.
inline double gamma_halfline_cauchy(double z, double w) {
    if (!(z < 0.0 && w < 0.0))
        throw std::invalid_argument("gamma_halfline_cauchy: arguments must be negative");
    const double sz = std::sqrt(-z), sw = std::sqrt(-w);
    const double sum = sz + sw;
    return 1.0 / (2.0 * M_PI * sz * sw * sum * sum);
}

// ---------------------------------------------------------------------------
// Uniform access for the supported (domain, stable density) pairs.

/// Closed-form kernel set for the alpha-stable process on a supported domain
/// (interval = 1D ball up to translation, ball, half-line, half-space).
class StableKernelSet {
public:
    StableKernelSet(double alpha, Domain domain, QuadratureSpec spec = {})
        : alpha_(alpha), domain_(std::move(domain)), spec_(std::move(spec)) {
        switch (domain_.kind()) {
            case Domain::Kind::interval: {
                const auto [a, b] = domain_.pieces().front();
                shift_ = 0.5 * (a + b);
                rho_ = 0.5 * (b - a);
                break;
            }
            case Domain::Kind::ball:
                rho_ = domain_.radius();
                break;
            case Domain::Kind::half_line:
            case Domain::Kind::half_space:
                break;
            default:
                throw std::invalid_argument(
                    "StableKernelSet: no closed form for this domain");
        }
        detail::stable_constants(alpha_, domain_.dim());  // warm the cache
    }

    double alpha() const { return alpha_; }
    const Domain& domain() const { return domain_; }

    double green(const Point& x, const Point& y) const {
        switch (domain_.kind()) {
            case Domain::Kind::interval:
                return green_ball(alpha_, 1, rho_, recentre(x), recentre(y), spec_);
            case Domain::Kind::ball:
                return green_ball(alpha_, domain_.dim(), rho_, recentre(x), recentre(y),
                                  spec_);
            case Domain::Kind::half_line:
                return green_halfspace(alpha_, 1, oriented(x), oriented(y), spec_);
            case Domain::Kind::half_space:
                return green_halfspace(alpha_, domain_.dim(), x, y, spec_);
            default:
                return 0.0;
        }
    }
    double green(double x, double y) const {
        return green(Point::d1(x), Point::d1(y));
    }

    double poisson(const Point& x, const Point& z) const {
        switch (domain_.kind()) {
            case Domain::Kind::interval:
                return poisson_ball(alpha_, 1, rho_, recentre(x), recentre(z));
            case Domain::Kind::ball:
                return poisson_ball(alpha_, domain_.dim(), rho_, recentre(x), recentre(z));
            case Domain::Kind::half_line:
            case Domain::Kind::half_space: {
                const Point xx = domain_.kind() == Domain::Kind::half_line ? oriented(x) : x;
                const Point zz = domain_.kind() == Domain::Kind::half_line ? oriented(z) : z;
                return poisson_halfspace(alpha_, domain_.dim(), xx, zz);
            }
            default:
                return 0.0;
        }
    }
    double poisson(double x, double z) const {
        return poisson(Point::d1(x), Point::d1(z));
    }

    /// E^x tau_D; finite only for bounded domains.
    double exit_time(const Point& x) const {
        switch (domain_.kind()) {
            case Domain::Kind::interval:
                return exit_time_ball(alpha_, 1, rho_, recentre(x));
            case Domain::Kind::ball:
                return exit_time_ball(alpha_, domain_.dim(), rho_, recentre(x));
            default:
                return std::numeric_limits<double>::infinity();
        }
    }
    double exit_time(double x) const { return exit_time(Point::d1(x)); }

private:
    Point recentre(const Point& p) const {
        Point q = p;
        if (domain_.kind() == Domain::Kind::interval) q[0] -= shift_;
        if (domain_.kind() == Domain::Kind::ball) q = q - domain_.center();
        return q;
    }
    Point oriented(const Point& p) const {
        Point q = p;
        if (domain_.orientation() < 0) q[0] = -q[0];
        return q;
    }

    double alpha_;
    Domain domain_;
    QuadratureSpec spec_{};
    double rho_ = 1.0;
    double shift_ = 0.0;
};

}  // namespace nonlocal
