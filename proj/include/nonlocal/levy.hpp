#pragma once

/**
 * Isotropic unimodal Levy densities nu(r) and the derived scale functions
 *
 *   K(r) = r^{-2} int_{|z|<=r} |z|^2 nu(z) dz
 *   h(r) = K(r) + nu(B_r^c)  =  int (|z|^2/r^2 ^ 1) nu(z) dz
 *   V(r) = h(r)^{-1/2}
 *   U_a(s) = K(s) / (h^a(s) s^d)
 *
 * together with the Levy-Khinchine exponent psi(xi) and empirical checkers
 * for the structural assumptions A1-A4 (derivative domination and two-sided
 * power scaling of nu).
 *
 * Families: the alpha-stable density A_{d,alpha} |z|^{-d-alpha}, the 0-order
 * density 1/(|z|^d log(2+|z|)), sums of two stable densities, and subordinate
 * Brownian motion nu(r) = int_0^inf (4 pi t)^{-d/2} e^{-r^2/(4t)} f(t) dt.
 */

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonlocal/domain.hpp"
#include "nonlocal/quadrature.hpp"

namespace nonlocal {

/// Normalizing constant of the alpha-stable density,
/// A_{d,alpha} = 2^alpha Gamma((d+alpha)/2) / (pi^{d/2} |Gamma(-alpha/2)|).
inline double stable_constant(double alpha, int d) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha in (0,2)");
    // |Gamma(-a/2)| = Gamma(1 - a/2) / (a/2), and Gamma(-a/2) < 0 on (0,2)
    const double abs_gamma = std::tgamma(1.0 - 0.5 * alpha) / (0.5 * alpha);
    return std::pow(2.0, alpha) * std::tgamma(0.5 * (d + alpha)) /
           (std::pow(M_PI, 0.5 * d) * abs_gamma);
}

enum class Family { stable, log_order, sum_stable, subordinate };

class LevyDensity {
public:
    static LevyDensity stable(double alpha, int d) {
        LevyDensity nu;
        nu.family_ = Family::stable;
        nu.dim_ = check_dim(d);
        nu.alpha1_ = check_alpha(alpha);
        nu.a1_ = stable_constant(alpha, d);
        return nu;
    }
    static LevyDensity log_order(int d) {
        LevyDensity nu;
        nu.family_ = Family::log_order;
        nu.dim_ = check_dim(d);
        return nu;
    }
    static LevyDensity sum_stable(double alpha1, double alpha2, int d) {
        LevyDensity nu;
        nu.family_ = Family::sum_stable;
        nu.dim_ = check_dim(d);
        nu.alpha1_ = check_alpha(alpha1);
        nu.alpha2_ = check_alpha(alpha2);
        nu.a1_ = stable_constant(alpha1, d);
        nu.a2_ = stable_constant(alpha2, d);
        return nu;
    }
    /// f is the density of the subordinator's Levy measure on (0,inf).
    static LevyDensity subordinate(std::function<double(double)> f, int d,
                                   QuadratureSpec spec = {}) {
        LevyDensity nu;
        nu.family_ = Family::subordinate;
        nu.dim_ = check_dim(d);
        nu.subordinator_ = std::move(f);
        spec.abs_tol = std::min(spec.abs_tol, 1e-12);
        spec.rel_tol = std::min(spec.rel_tol, 1e-10);
        nu.sub_spec_ = spec;
        return nu;
    }
    /// The (alpha/2)-stable subordinator, which reproduces the alpha-stable
    /// process when it subordinates Brownian motion.
    static LevyDensity subordinate_stable(double alpha, int d) {
        const double s = 0.5 * check_alpha(alpha);
        const double c = s / std::tgamma(1.0 - s);
        return subordinate([s, c](double t) { return c * std::pow(t, -1.0 - s); }, d);
    }

    Family family() const { return family_; }
    int dim() const { return dim_; }
    double alpha() const { return alpha1_; }
    double alpha2() const { return alpha2_; }
    double stable_norm_constant() const { return a1_; }
    bool is_stable() const { return family_ == Family::stable; }

    /// nu(r) for r > 0.
    double operator()(double r) const {
        if (!(r > 0.0)) throw std::invalid_argument("eval_nu: r must be positive");
        switch (family_) {
            case Family::stable:
                return a1_ * std::pow(r, -static_cast<double>(dim_) - alpha1_);
            case Family::log_order:
                return 1.0 / (std::pow(r, dim_) * std::log(2.0 + r));
            case Family::sum_stable:
                return a1_ * std::pow(r, -static_cast<double>(dim_) - alpha1_) +
                       a2_ * std::pow(r, -static_cast<double>(dim_) - alpha2_);
            case Family::subordinate:
                return eval_subordinate(r);
        }
        return 0.0;
    }

    double operator()(const Point& z) const { return (*this)(z.norm()); }
    double operator()(const Point& x, const Point& y) const { return (*this)(dist(x, y)); }

    std::string spec_string() const {
        std::ostringstream os;
        os.precision(17);
        switch (family_) {
            case Family::stable: os << "stable:alpha=" << alpha1_ << ",d=" << dim_; break;
            case Family::log_order: os << "logorder:d=" << dim_; break;
            case Family::sum_stable:
                os << "sumstable:alpha1=" << alpha1_ << ",alpha2=" << alpha2_ << ",d=" << dim_;
                break;
            case Family::subordinate: os << "subordinate:d=" << dim_; break;
        }
        return os.str();
    }

private:
    static int check_dim(int d) {
        if (d < 1) throw std::invalid_argument("dimension must be positive");
        return d;
    }
    static double check_alpha(double a) {
        if (!(a > 0.0 && a < 2.0)) throw std::invalid_argument("alpha in (0,2)");
        return a;
    }

    double eval_subordinate(double r) const {
        // nu(r) = int_0^inf (4 pi t)^{-d/2} exp(-r^2/(4t)) f(t) dt.  The
        // integrand peaks near t ~ r^2; anchor the adaptive pass there.
        const double r2 = r * r;
        auto integrand = [&](double t) {
            const double heat =
                std::pow(4.0 * M_PI * t, -0.5 * dim_) * std::exp(-r2 / (4.0 * t));
            return heat * subordinator_(t);
        };
        QuadratureSpec spec = sub_spec_;
        spec.truncation_radius = std::max(16.0 * r2, 1.0);
        FormValue head = integrate(integrand, 0.0, r2 / 16.0,
                                   spec.with_singularities({}));
        FormValue rest = integrate_to_inf(integrand, r2 / 16.0, spec);
        if (!head.converged || !rest.converged)
            throw std::runtime_error(
                "subordinate density quadrature did not converge at r=" +
                std::to_string(r) + " (residual " +
                std::to_string(head.truncation_residual_estimate +
                               rest.truncation_residual_estimate) + ")");
        return head.value + rest.value;
    }

    Family family_ = Family::stable;
    int dim_ = 1;
    double alpha1_ = 1.0, alpha2_ = 1.0;
    double a1_ = 0.0, a2_ = 0.0;
    std::function<double(double)> subordinator_;
    QuadratureSpec sub_spec_{};
};

/// Parses density spec strings such as "stable:alpha=1,d=1",
/// "logorder:d=1", "sumstable:alpha1=0.5,alpha2=1.5,d=1",
/// "substable:alpha=1,d=1" (stable subordinator route).
inline LevyDensity parse_density(const std::string& spec) {
    auto fail = [&](const std::string& why) -> LevyDensity {
        throw std::invalid_argument("density spec '" + spec + "': " + why);
    };
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    double alpha = 1.0, alpha1 = 0.5, alpha2 = 1.5;
    int d = 1;
    std::istringstream is(rest);
    std::string part;
    while (std::getline(is, part, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + part + "'");
        const std::string k = part.substr(0, eq);
        const double v = std::stod(part.substr(eq + 1));
        if (k == "alpha") alpha = v;
        else if (k == "alpha1") alpha1 = v;
        else if (k == "alpha2") alpha2 = v;
        else if (k == "d") d = static_cast<int>(v);
        else fail("unknown key '" + k + "'");
    }
    if (head == "stable") return LevyDensity::stable(alpha, d);
    if (head == "logorder") return LevyDensity::log_order(d);
    if (head == "sumstable") return LevyDensity::sum_stable(alpha1, alpha2, d);
    if (head == "substable") return LevyDensity::subordinate_stable(alpha, d);
    fail("unknown family '" + head + "'");
    return LevyDensity::stable(1.0, 1);
}

// ---------------------------------------------------------------------------

class ScaleFunctions {
public:
    explicit ScaleFunctions(LevyDensity nu, QuadratureSpec spec = {})
        : nu_(std::move(nu)), spec_(std::move(spec)) {
        omega_d_ = unit_sphere_area(nu_.dim());
    }

    const LevyDensity& density() const { return nu_; }
    double omega_d() const { return omega_d_; }

    /// K(r) = r^{-2} omega_d int_0^r s^{d+1} nu(s) ds.
    double K(double r) const {
        require_positive(r, "eval_K");
        auto f = [&](double s) { return std::pow(s, nu_.dim() + 1) * nu_(s); };
        FormValue v = integrate(f, 0.0, r, spec_.with_singularities({0.0}));
        if (!v.converged)
            throw std::runtime_error("eval_K: quadrature failed near 0 (split at t^4 "
                                     "stretch of the origin)");
        return omega_d_ * v.value / (r * r);
    }

    /// nu(B_r^c) = omega_d int_r^inf s^{d-1} nu(s) ds.
    double nu_tail(double r) const {
        require_positive(r, "nu_tail");
        auto f = [&](double s) { return std::pow(s, nu_.dim() - 1) * nu_(s); };
        QuadratureSpec spec = spec_.with_singularities({});
        spec.truncation_radius = std::max(spec.truncation_radius, 8.0 * r);
        FormValue v = integrate_to_inf(f, r, spec);
        if (!v.converged)
            throw std::runtime_error("nu_tail: tail quadrature diverged at r=" +
                                     std::to_string(r));
        return omega_d_ * v.value;
    }

    double h(double r) const { return K(r) + nu_tail(r); }

    /// h computed directly from the defining integral (cross-check route).
    double h_direct(double r) const {
        require_positive(r, "h_direct");
        auto f = [&](double s) {
            const double w = std::min(s * s / (r * r), 1.0);
            return w * std::pow(s, nu_.dim() - 1) * nu_(s);
        };
        QuadratureSpec spec = spec_.with_singularities({0.0, r});
        spec.truncation_radius = std::max(spec.truncation_radius, 8.0 * r);
        FormValue v = integrate_to_inf(f, 0.0, spec);
        return omega_d_ * v.value;
    }

    double V(double r) const { return 1.0 / std::sqrt(h(r)); }

    double Ua(double a, double r) const {
        if (!(a > 0.0 && a <= 2.0)) throw std::invalid_argument("eval_Ua: a in (0,2]");
        require_positive(r, "eval_Ua");
        return K(r) / (std::pow(h(r), a) * std::pow(r, nu_.dim()));
    }

    /// psi(xi) = int (1 - cos(xi . x)) nu(x) dx, radial in |xi|.
    double psi(double xi_norm) const {
        if (xi_norm < 0.0) throw std::invalid_argument("eval_psi: |xi| >= 0");
        if (xi_norm == 0.0) return 0.0;
        const int d = nu_.dim();
        auto angular = [&](double u) {
            // spherical average of cos(u e_1 . theta)
            switch (d) {
                case 1: return std::cos(u);
                case 2: return std::cyl_bessel_j(0.0, u);
                case 3: return u == 0.0 ? 1.0 : std::sin(u) / u;
                default:
                    throw std::invalid_argument("eval_psi: dimension must be 1..3");
            }
        };
        auto f = [&](double r) {
            return (1.0 - angular(xi_norm * r)) * std::pow(r, d - 1) * nu_(r);
        };
        // The oscillation averages out to the pure tail of nu, so geometric
        // blocks still decay like 2^{-alpha}; block boundaries need to clear
        // a few periods first.
        QuadratureSpec spec = spec_.with_singularities({0.0});
        spec.truncation_radius =
            std::max(spec.truncation_radius, 64.0 * M_PI / xi_norm);
        spec.max_subdivisions = std::max<long>(spec.max_subdivisions, 200000);
        FormValue v = integrate_to_inf(f, 0.0, spec);
        if (!v.converged)
            throw std::runtime_error("eval_psi: oscillatory quadrature failed at |xi|=" +
                                     std::to_string(xi_norm));
        return v.value;
    }

private:
    static void require_positive(double r, const char* who) {
        if (!(r > 0.0))
            throw std::invalid_argument(std::string(who) + ": r must be positive");
    }

    LevyDensity nu_;
    QuadratureSpec spec_{};
    double omega_d_ = 2.0;
};

// ---------------------------------------------------------------------------
// Assumption checkers (A1-A4).  The paper asserts existence of the constants;
// the checker certifies them on finite grids and reports the empirical values.

struct AssumptionGrid {
    double lambda_min = 1e-3;   // scaling arguments lambda in [lambda_min, 1]
    double r_min = 1e-3;        // local grids live on [r_min, 1]
    double r1_max = 10.0;       // A1 derivative grid on [1, r1_max]
    double global_r_min = 1e-3; // A4 grids on [global_r_min, global_r_max]
    double global_r_max = 1e3;
    int n_lambda = 64;
    int n_r = 64;
    double fd_step_rel = 1e-4;  // central-difference step, relative to r
};

struct AssumptionCheck {
    bool pass = false;
    double constant = 0.0;       // C1 / C / c depending on the assumption
    double exponent = 0.0;       // beta or alpha where applicable
    double worst_lambda = 0.0;   // offending / extremal grid point
    double worst_r = 0.0;
};

struct AssumptionReport {
    AssumptionCheck a1;          // derivative domination, r > 1
    AssumptionCheck a2_scaling;  // nu(lambda r) <= C lambda^{-d-beta} nu(r)
    AssumptionCheck a2_shift;    // nu(r) <= C nu(r+1), r >= 1
    AssumptionCheck a3;          // matching lower scaling
    AssumptionCheck a4_upper;    // global versions
    AssumptionCheck a4_lower;
    bool all_pass() const {
        return a1.pass && a2_scaling.pass && a2_shift.pass && a3.pass &&
               a4_upper.pass && a4_lower.pass;
    }
};

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
    return g;
}

// Empirical scaling exponents over a (lambda, r) grid: returns the pair
// (beta, C) for the upper bound and (alpha, c) for the lower bound, where the
// exponents are read off the extreme chord slopes of log nu.
inline void scaling_constants(const LevyDensity& nu, const std::vector<double>& lambdas,
                              const std::vector<double>& rs, AssumptionCheck& upper,
                              AssumptionCheck& lower) {
    const int d = nu.dim();
    double max_mslope = -std::numeric_limits<double>::infinity();
    double min_mslope = std::numeric_limits<double>::infinity();
    for (double r : rs) {
        const double lnr = std::log(nu(r));
        for (double lam : lambdas) {
            if (lam >= 1.0) continue;
            const double chord = (std::log(nu(lam * r)) - lnr) / std::log(1.0 / lam);
            max_mslope = std::max(max_mslope, chord);
            min_mslope = std::min(min_mslope, chord);
        }
    }
    upper.exponent = max_mslope - d;  // beta
    lower.exponent = min_mslope - d;  // alpha
    upper.constant = 0.0;
    lower.constant = std::numeric_limits<double>::infinity();
    for (double r : rs) {
        const double nur = nu(r);
        for (double lam : lambdas) {
            const double ratio_up =
                nu(lam * r) * std::pow(lam, d + upper.exponent) / nur;
            const double ratio_lo =
                nu(lam * r) * std::pow(lam, d + lower.exponent) / nur;
            if (ratio_up > upper.constant) {
                upper.constant = ratio_up;
                upper.worst_lambda = lam;
                upper.worst_r = r;
            }
            if (ratio_lo < lower.constant) {
                lower.constant = ratio_lo;
                lower.worst_lambda = lam;
                lower.worst_r = r;
            }
        }
    }
    upper.pass = std::isfinite(upper.constant) && upper.exponent > 0.0 &&
                 upper.exponent < 2.0;
    lower.pass = lower.constant > 0.0 && lower.exponent > 0.0 && lower.exponent < 2.0;
}

}  // namespace detail

inline AssumptionReport check_assumptions(const LevyDensity& nu,
                                          const AssumptionGrid& grid = {}) {
    AssumptionReport rep;
    const int d = nu.dim();

    // A1: |nu'|, |nu''| <= C1 nu for r > 1, central differences.
    {
        const auto rs = detail::log_grid(1.0, grid.r1_max, grid.n_r);
        double c1 = 0.0;
        for (double r : rs) {
            const double hstep = grid.fd_step_rel * r;
            if (hstep <= 0.0 || r - hstep <= 0.0)
                throw std::invalid_argument("check_assumptions: stencil underflow");
            const double fm = nu(r - hstep), f0 = nu(r), fp = nu(r + hstep);
            const double d1 = (fp - fm) / (2.0 * hstep);
            const double d2 = (fp - 2.0 * f0 + fm) / (hstep * hstep);
            const double ratio = std::max(std::abs(d1), std::abs(d2)) / f0;
            if (ratio > c1) {
                c1 = ratio;
                rep.a1.worst_r = r;
            }
        }
        rep.a1.constant = c1;
        rep.a1.pass = std::isfinite(c1);
    }

    // A2 / A3 local scalings on (0, 1].
    {
        const auto lam = detail::log_grid(grid.lambda_min, 1.0, grid.n_lambda);
        const auto rs = detail::log_grid(grid.r_min, 1.0, grid.n_r);
        detail::scaling_constants(nu, lam, rs, rep.a2_scaling, rep.a3);
    }

    // A2 shift bound: nu(r) <= C nu(r+1) on r >= 1.
    {
        const auto rs = detail::log_grid(1.0, grid.r1_max, grid.n_r);
        double c = 0.0;
        for (double r : rs) {
            const double ratio = nu(r) / nu(r + 1.0);
            if (ratio > c) {
                c = ratio;
                rep.a2_shift.worst_r = r;
            }
        }
        rep.a2_shift.constant = c;
        rep.a2_shift.pass = std::isfinite(c);
    }

    // A4 global scalings.
    {
        const auto lam = detail::log_grid(grid.lambda_min, 1.0, grid.n_lambda);
        const auto rs = detail::log_grid(grid.global_r_min, grid.global_r_max, grid.n_r);
        detail::scaling_constants(nu, lam, rs, rep.a4_upper, rep.a4_lower);
    }
    return rep;
}

}  // namespace nonlocal
