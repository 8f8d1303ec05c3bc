#pragma once

/**
 * Adaptive 1D quadrature with support for the integrals that occur in
 * nonlocal potential theory: power-law endpoint singularities (kernel poles,
 * boundary degeneracies) and power-law tails on unbounded regions.
 *
 * Core rule is Gauss-Kronrod 7-15 with bisection of the worst segment.
 * Declared singular points are split off and softened by the substitution
 * x = a + (b-a) t^4, which turns x^{-q} into t^{3-4q}; the remaining blowup
 * (if any) is integrable and handled by bisection, since Kronrod nodes never
 * touch segment endpoints.
 *
 * Unbounded regions are integrated up to a truncation radius and then in
 * geometrically growing blocks; the remainder is extrapolated from the block
 * ratio, which is exact when the tail is a pure power law.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nonlocal {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    long max_subdivisions = 100000;
    // Points where the integrand is allowed to blow up.  Segments are split
    // there and integrated in a stretched local variable.
    std::vector<double> singularities{};
    // First block boundary for tail handling on unbounded segments.
    double truncation_radius = 1e4;
    int max_tail_blocks = 64;

    QuadratureSpec with_tols(double at, double rt) const {
        QuadratureSpec s = *this;
        s.abs_tol = at;
        s.rel_tol = rt;
        return s;
    }
    QuadratureSpec tightened(double factor) const {
        return with_tols(abs_tol * factor, rel_tol * factor);
    }
    QuadratureSpec with_singularities(std::vector<double> pts) const {
        QuadratureSpec s = *this;
        s.singularities = std::move(pts);
        return s;
    }
};

enum class QuadFailure { none, max_subdivisions, nan_integrand, divergent_tail };

struct FormValue {
    double value = 0.0;
    double error_estimate = 0.0;
    long subdivisions_used = 0;
    double truncation_residual_estimate = 0.0;
    bool converged = true;
    QuadFailure failure = QuadFailure::none;

    FormValue& operator+=(const FormValue& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        subdivisions_used += o.subdivisions_used;
        truncation_residual_estimate += o.truncation_residual_estimate;
        converged = converged && o.converged;
        if (failure == QuadFailure::none) failure = o.failure;
        return *this;
    }
};

namespace detail {

// Neumaier compensated summation; keeps accumulation order-independent in
// practice for the segment counts we use.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

// 15-point Kronrod nodes/weights and the embedded 7-point Gauss weights
// (QUADPACK dqk15 constants).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct RuleResult {
    double integral = 0.0;
    double error = 0.0;
    bool nan_seen = false;
};

template <class F>
RuleResult gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double fv[15];
    // order: negative side of kXgk[0..6], centre, positive side
    int idx = 0;
    for (int i = 0; i < 7; ++i) fv[idx++] = f(c - hw * kXgk[i]);
    fv[idx++] = f(c);
    for (int i = 6; i >= 0; --i) fv[idx++] = f(c + hw * kXgk[i]);

    RuleResult r;
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    double resabs = std::abs(resk);
    for (int i = 0; i < 7; ++i) {
        const double sum = fv[i] + fv[14 - i];
        resk += kWgk[i] * sum;
        resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
        if (i % 2 == 1) resg += kWg[i / 2] * sum;  // Gauss nodes sit at odd i
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
    resasc *= hw;
    resabs *= hw;

    r.integral = resk * hw;
    double err = std::abs((resk - resg) * hw);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, 50.0 * eps * resabs);
    r.error = err;
    for (int i = 0; i < 15; ++i)
        if (std::isnan(fv[i])) r.nan_seen = true;
    return r;
}

struct Seg {
    double a, b, integral, error;
};

// Adaptive GK on a finite interval with a smooth (already de-singularized)
// integrand.
template <class F>
FormValue adapt(F&& f, double a, double b, const QuadratureSpec& spec) {
    FormValue out;
    if (a == b) return out;
    std::vector<Seg> segs;
    auto first = gk15(f, a, b);
    segs.push_back({a, b, first.integral, first.error});
    out.subdivisions_used = 1;
    bool nan_seen = first.nan_seen;

    auto total = [&] {
        double v = 0, e = 0;
        for (const auto& s : segs) {
            v += s.integral;
            e += s.error;
        }
        return std::pair<double, double>(v, e);
    };

    while (true) {
        auto [v, e] = total();
        const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(v));
        if (e <= target || nan_seen) break;
        if (out.subdivisions_used >= spec.max_subdivisions) {
            out.converged = false;
            out.failure = QuadFailure::max_subdivisions;
            break;
        }
        // split the worst segment
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        Seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) {
            // segment is at representable resolution; freeze it
            segs[worst].error = 0.0;
            continue;
        }
        auto left = gk15(f, s.a, mid);
        auto right = gk15(f, mid, s.b);
        nan_seen = nan_seen || left.nan_seen || right.nan_seen;
        segs[worst] = {s.a, mid, left.integral, left.error};
        segs.push_back({mid, s.b, right.integral, right.error});
        out.subdivisions_used += 1;
    }

    std::sort(segs.begin(), segs.end(),
              [](const Seg& x, const Seg& y) { return x.a < y.a; });
    KahanSum v, e;
    for (const auto& s : segs) {
        v.add(s.integral);
        e.add(s.error);
    }
    out.value = v.get();
    out.error_estimate = e.get();
    if (nan_seen) {
        out.converged = false;
        out.failure = QuadFailure::nan_integrand;
    }
    return out;
}

// Finite interval whose endpoints may be declared singular.  The singular
// endpoint is moved to 0 of a local coordinate and stretched with t^4.
template <class F>
FormValue finite_piece(F&& f, double a, double b, bool sing_a, bool sing_b,
                       const QuadratureSpec& spec) {
    if (a == b) return {};
    if (sing_a && sing_b) {
        const double mid = 0.5 * (a + b);
        FormValue out = finite_piece(f, a, mid, true, false, spec);
        out += finite_piece(f, mid, b, false, true, spec);
        return out;
    }
    const double w = b - a;
    if (sing_a) {
        auto g = [&](double t) {
            const double u = w * t * t * t * t;  // offset from the singular end
            return f(a + u) * 4.0 * w * t * t * t;
        };
        return adapt(g, 0.0, 1.0, spec);
    }
    if (sing_b) {
        auto g = [&](double t) {
            const double u = w * t * t * t * t;
            return f(b - u) * 4.0 * w * t * t * t;
        };
        return adapt(g, 0.0, 1.0, spec);
    }
    return adapt(f, a, b, spec);
}

// Splits [a,b] at declared singular points and integrates the pieces.
template <class F>
FormValue finite_with_singularities(F&& f, double a, double b,
                                    const QuadratureSpec& spec) {
    const double scale = std::abs(a) + std::abs(b) + 1.0;
    const double snap = 1e-14 * scale;
    std::vector<double> cuts;
    for (double s : spec.singularities)
        if (s > a + snap && s < b - snap) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    auto is_sing = [&](double x) {
        for (double s : spec.singularities)
            if (std::abs(x - s) <= snap) return true;
        return false;
    };

    std::vector<double> pts;
    pts.push_back(a);
    for (double c : cuts) pts.push_back(c);
    pts.push_back(b);

    FormValue out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const bool sa = (i > 0) || is_sing(pts[i]);
        const bool sb = (i + 2 < pts.size()) || is_sing(pts[i + 1]);
        out += finite_piece(f, pts[i], pts[i + 1], sa, sb, spec);
    }
    return out;
}

// [start, +inf) assuming the integrand ultimately decays like a power law.
// `f` is evaluated directly; use a reflected lambda for (-inf, b].
template <class F>
FormValue tail_to_infinity(F&& f, double start, const QuadratureSpec& spec) {
    FormValue out;
    const double block_abs = std::max(spec.abs_tol * 0.25, 1e-300);
    double t0 = std::max({spec.truncation_radius, 2.0 * std::abs(start) + 1.0,
                          start + 1.0});
    QuadratureSpec block_spec = spec;
    block_spec.singularities.clear();

    // Head segment at unit scale (declared singularities live here), then the
    // rest of [start, t0] in log offset coordinates so that features at any
    // intermediate scale are sampled by the initial rule.
    const double w = t0 - start;
    const double head = std::min(w, 1.0 + 1e-3 * std::abs(start));
    out += finite_with_singularities(f, start, start + head, spec);
    if (head < w) {
        auto g = [&](double u) {
            const double off = std::exp(u);
            return f(start + off) * off;
        };
        out += adapt(g, std::log(head), std::log(w), block_spec);
    }

    double prev = 0.0, last = 0.0;
    bool have_prev = false;
    int k = 0;
    for (; k < spec.max_tail_blocks; ++k) {
        const double t1 = 2.0 * t0;
        FormValue blk = adapt(f, t0, t1, block_spec);
        out += blk;
        t0 = t1;
        prev = last;
        last = blk.value;
        const double tol =
            std::max(block_abs, spec.rel_tol * std::abs(out.value) * 0.25);
        if (std::abs(last) < tol && k >= 1) {
            // extrapolate the geometric remainder from the observed ratio
            double resid = std::abs(last);
            if (have_prev && prev != 0.0) {
                const double q = last / prev;
                if (q > 0.0 && q < 0.95) {
                    const double corr = last * q / (1.0 - q);
                    out.value += corr;
                    resid = std::abs(corr) * 0.5 + std::abs(last) * 1e-3;
                }
            }
            out.truncation_residual_estimate += resid;
            return out;
        }
        have_prev = true;
    }
    // blocks never became negligible
    double resid = std::abs(last);
    if (have_prev && prev != 0.0) {
        const double q = last / prev;
        if (q > 0.0 && q < 0.95) {
            const double corr = last * q / (1.0 - q);
            out.value += corr;
            resid = std::abs(corr);
        } else {
            out.converged = false;
            out.failure = QuadFailure::divergent_tail;
        }
    }
    out.truncation_residual_estimate += resid;
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public entry points.

/// Integrate f over the finite interval [a, b].
template <class F>
FormValue integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
    if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
    return detail::finite_with_singularities(f, a, b, spec);
}

/// Integrate f over [a, +inf).
template <class F>
FormValue integrate_to_inf(F&& f, double a, const QuadratureSpec& spec) {
    return detail::tail_to_infinity(f, a, spec);
}

/// Integrate f over (-inf, b].
template <class F>
FormValue integrate_from_neg_inf(F&& f, double b, const QuadratureSpec& spec) {
    QuadratureSpec rspec = spec;
    rspec.singularities.clear();
    for (double s : spec.singularities) rspec.singularities.push_back(-s);
    auto g = [&](double t) { return f(-t); };
    return detail::tail_to_infinity(g, -b, rspec);
}

/// Integrate f over the whole real line (split at 0 and declared points).
template <class F>
FormValue integrate_real_line(F&& f, const QuadratureSpec& spec) {
    FormValue out = integrate_from_neg_inf(f, 0.0, spec);
    out += integrate_to_inf(f, 0.0, spec);
    return out;
}

/// One-dimensional integration region; closed to the finite side(s).
struct Segment {
    double a = 0.0, b = 0.0;
    bool to_pos_inf = false;
    bool from_neg_inf = false;

    static Segment finite(double a, double b) { return {a, b, false, false}; }
    static Segment ray_up(double a) { return {a, 0.0, true, false}; }
    static Segment ray_down(double b) { return {0.0, b, false, true}; }
    static Segment whole_line() { return {0.0, 0.0, true, true}; }
};

template <class F>
FormValue integrate_segment(F&& f, const Segment& seg, const QuadratureSpec& spec) {
    if (seg.to_pos_inf && seg.from_neg_inf) return integrate_real_line(f, spec);
    if (seg.to_pos_inf) return integrate_to_inf(f, seg.a, spec);
    if (seg.from_neg_inf) return integrate_from_neg_inf(f, seg.b, spec);
    return integrate(f, seg.a, seg.b, spec);
}

/// Iterated 2D integration: outer over `outer`, inner region may depend on
/// the outer variable.  Inner quadrature errors surface through the outer
/// error estimate; inner tolerances should be tighter than outer ones.
template <class F, class InnerRegion>
FormValue nested2(F&& f, const Segment& outer, InnerRegion&& inner_of,
                  const QuadratureSpec& outer_spec, const QuadratureSpec& inner_spec) {
    auto outer_f = [&](double x) {
        auto g = [&](double y) { return f(x, y); };
        auto [seg, sp] = inner_of(x, inner_spec);
        return integrate_segment(g, seg, sp).value;
    };
    return integrate_segment(outer_f, outer, outer_spec);
}

}  // namespace nonlocal
