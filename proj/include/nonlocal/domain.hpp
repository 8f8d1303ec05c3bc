#pragma once

/**
 * Geometric domains used throughout the toolkit: intervals and their unions,
 * balls, half-lines and half-spaces.  All have closed-form boundary distance
 * delta_D(x) = dist(x, boundary), which every kernel evaluation relies on,
 * plus the interaction distance r(z,w) = delta(z) + |z-w| + delta(w).
 */

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonlocal/quadrature.hpp"

namespace nonlocal {

struct Point {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    int dim = 1;

    static Point d1(double x) { return {{x, 0, 0}, 1}; }
    static Point d2(double x, double y) { return {{x, y, 0}, 2}; }
    static Point d3(double x, double y, double z) { return {{x, y, z}, 3}; }

    double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }

    double norm() const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        return std::sqrt(s);
    }
    Point operator+(const Point& o) const {
        Point r = *this;
        for (int i = 0; i < dim; ++i) r[i] += o[i];
        return r;
    }
    Point operator-(const Point& o) const {
        Point r = *this;
        for (int i = 0; i < dim; ++i) r[i] -= o[i];
        return r;
    }
    Point operator*(double c) const {
        Point r = *this;
        for (int i = 0; i < dim; ++i) r[i] *= c;
        return r;
    }
};

inline double dist(const Point& a, const Point& b) { return (a - b).norm(); }

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
    return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// Surface measure of the unit sphere in R^d.
inline double unit_sphere_area(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

class Domain {
public:
    enum class Kind { interval, interval_union, ball, half_line, half_space };

    static Domain interval(double a, double b) {
        if (!(a < b)) throw std::invalid_argument("interval: requires a < b");
        Domain d;
        d.kind_ = Kind::interval;
        d.dim_ = 1;
        d.pieces_ = {{a, b}};
        return d;
    }
    static Domain interval_union(std::vector<std::pair<double, double>> parts) {
        if (parts.empty()) throw std::invalid_argument("interval_union: empty");
        std::sort(parts.begin(), parts.end());
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (!(parts[i].first < parts[i].second))
                throw std::invalid_argument("interval_union: degenerate part");
            if (i > 0 && parts[i].first <= parts[i - 1].second)
                throw std::invalid_argument("interval_union: overlapping parts");
        }
        Domain d;
        d.kind_ = Kind::interval_union;
        d.dim_ = 1;
        d.pieces_ = std::move(parts);
        return d;
    }
    static Domain ball(Point center, double radius) {
        if (!(radius > 0)) throw std::invalid_argument("ball: radius must be positive");
        Domain d;
        d.kind_ = Kind::ball;
        d.dim_ = center.dim;
        d.center_ = center;
        d.radius_ = radius;
        return d;
    }
    /// orientation +1 gives (0,inf), -1 gives (-inf,0).
    static Domain half_line(int orientation = +1) {
        Domain d;
        d.kind_ = Kind::half_line;
        d.dim_ = 1;
        d.orientation_ = orientation >= 0 ? +1 : -1;
        return d;
    }
    /// Upper half-space {x_d > 0} in dimension dim.
    static Domain half_space(int dim) {
        if (dim < 1 || dim > 3) throw std::invalid_argument("half_space: dim in 1..3");
        Domain d;
        d.kind_ = Kind::half_space;
        d.dim_ = dim;
        return d;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double radius() const { return radius_; }
    Point center() const { return center_; }
    int orientation() const { return orientation_; }
    const std::vector<std::pair<double, double>>& pieces() const { return pieces_; }

    bool contains(const Point& p) const {
        check_dim(p);
        switch (kind_) {
            case Kind::interval:
            case Kind::interval_union: {
                const double x = p[0];
                for (const auto& [a, b] : pieces_)
                    if (x > a && x < b) return true;
                return false;
            }
            case Kind::ball:
                return dist(p, center_) < radius_;
            case Kind::half_line:
                return orientation_ > 0 ? p[0] > 0 : p[0] < 0;
            case Kind::half_space:
                return p[dim_ - 1] > 0;
        }
        return false;
    }
    bool contains(double x) const { return contains(Point::d1(x)); }

    /// Euclidean distance to the boundary, for interior and exterior points.
    double delta(const Point& p) const {
        check_dim(p);
        switch (kind_) {
            case Kind::interval:
            case Kind::interval_union: {
                const double x = p[0];
                double d = std::numeric_limits<double>::infinity();
                for (const auto& [a, b] : pieces_)
                    d = std::min({d, std::abs(x - a), std::abs(x - b)});
                return d;
            }
            case Kind::ball:
                return std::abs(radius_ - dist(p, center_));
            case Kind::half_line:
                return std::abs(p[0]);
            case Kind::half_space:
                return std::abs(p[dim_ - 1]);
        }
        return 0.0;
    }
    double delta(double x) const { return delta(Point::d1(x)); }

    /// Radius of the largest inscribed ball centred at an interior point.
    double inscribed_radius(const Point& p) const {
        if (!contains(p)) return 0.0;
        switch (kind_) {
            case Kind::interval:
            case Kind::interval_union: {
                const double x = p[0];
                for (const auto& [a, b] : pieces_)
                    if (x > a && x < b) return std::min(x - a, b - x);
                return 0.0;
            }
            default:
                return delta(p);  // convex variants
        }
    }

    double diameter() const {
        switch (kind_) {
            case Kind::interval:
            case Kind::interval_union:
                return pieces_.back().second - pieces_.front().first;
            case Kind::ball:
                return 2.0 * radius_;
            default:
                return std::numeric_limits<double>::infinity();
        }
    }
    bool bounded() const { return std::isfinite(diameter()); }

    double r_interaction(const Point& z, const Point& w) const {
        return delta(z) + dist(z, w) + delta(w);
    }
    double r_interaction(double z, double w) const {
        return r_interaction(Point::d1(z), Point::d1(w));
    }

    /// The complement of a 1D domain as a list of segments (for quadrature).
    std::vector<Segment> complement_segments() const {
        if (dim_ != 1) throw std::invalid_argument("complement_segments: 1D only");
        switch (kind_) {
            case Kind::interval:
            case Kind::interval_union: {
                std::vector<Segment> out;
                out.push_back(Segment::ray_down(pieces_.front().first));
                for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
                    out.push_back(Segment::finite(pieces_[i].second, pieces_[i + 1].first));
                out.push_back(Segment::ray_up(pieces_.back().second));
                return out;
            }
            case Kind::half_line:
                return {orientation_ > 0 ? Segment::ray_down(0.0) : Segment::ray_up(0.0)};
            default:
                throw std::invalid_argument("complement_segments: unsupported domain");
        }
    }

    /// The domain itself as 1D segments.
    std::vector<Segment> domain_segments() const {
        if (dim_ != 1) throw std::invalid_argument("domain_segments: 1D only");
        switch (kind_) {
            case Kind::interval:
            case Kind::interval_union: {
                std::vector<Segment> out;
                for (const auto& [a, b] : pieces_) out.push_back(Segment::finite(a, b));
                return out;
            }
            case Kind::half_line:
                return {orientation_ > 0 ? Segment::ray_up(0.0) : Segment::ray_down(0.0)};
            default:
                throw std::invalid_argument("domain_segments: unsupported domain");
        }
    }

    /// All finite boundary coordinates of a 1D domain.
    std::vector<double> boundary_points_1d() const {
        if (dim_ != 1) throw std::invalid_argument("boundary_points_1d: 1D only");
        switch (kind_) {
            case Kind::interval:
            case Kind::interval_union: {
                std::vector<double> out;
                for (const auto& [a, b] : pieces_) {
                    out.push_back(a);
                    out.push_back(b);
                }
                return out;
            }
            case Kind::half_line:
                return {0.0};
            default:
                throw std::invalid_argument("boundary_points_1d: unsupported domain");
        }
    }

    std::string to_spec_string() const {
        std::ostringstream os;
        os.precision(17);
        switch (kind_) {
            case Kind::interval:
                os << "interval:" << pieces_[0].first << "," << pieces_[0].second;
                break;
            case Kind::interval_union: {
                os << "intervalunion:";
                for (std::size_t i = 0; i < pieces_.size(); ++i) {
                    if (i) os << ";";
                    os << pieces_[i].first << "," << pieces_[i].second;
                }
                break;
            }
            case Kind::ball:
                os << "ball:d=" << dim_ << ",r=" << radius_;
                break;
            case Kind::half_line:
                os << (orientation_ > 0 ? "halfline" : "halfline:neg");
                break;
            case Kind::half_space:
                os << "halfspace:d=" << dim_;
                break;
        }
        return os.str();
    }

private:
    void check_dim(const Point& p) const {
        if (p.dim != dim_)
            throw std::invalid_argument("Domain: dimension mismatch (point dim " +
                                        std::to_string(p.dim) + ", domain dim " +
                                        std::to_string(dim_) + ")");
    }

    Kind kind_ = Kind::interval;
    int dim_ = 1;
    std::vector<std::pair<double, double>> pieces_{{-1.0, 1.0}};
    Point center_ = Point::d1(0.0);
    double radius_ = 1.0;
    int orientation_ = +1;
};

/// Parses domain spec strings: "ball:d=2,r=1", "interval:-1,1", "halfline",
/// "halfline:neg", "halfspace:d=3", "intervalunion:a,b;c,d".
inline Domain parse_domain(const std::string& spec) {
    auto fail = [&](const std::string& why) -> Domain {
        throw std::invalid_argument("domain spec '" + spec + "': " + why);
    };
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream is(s);
        while (std::getline(is, cur, sep)) out.push_back(cur);
        return out;
    };
    auto to_num = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) fail("bad number '" + s + "'");
            return v;
        } catch (const std::invalid_argument&) {
            fail("bad number '" + s + "'");
        }
        return 0.0;
    };
    auto kv = [&](const std::string& s) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + s + "'");
        return std::pair<std::string, double>(s.substr(0, eq), to_num(s.substr(eq + 1)));
    };

    if (head == "interval") {
        const auto parts = split(rest, ',');
        if (parts.size() != 2) fail("interval needs two endpoints");
        return Domain::interval(to_num(parts[0]), to_num(parts[1]));
    }
    if (head == "intervalunion") {
        std::vector<std::pair<double, double>> ps;
        for (const auto& piece : split(rest, ';')) {
            const auto ends = split(piece, ',');
            if (ends.size() != 2) fail("each union part needs two endpoints");
            ps.emplace_back(to_num(ends[0]), to_num(ends[1]));
        }
        return Domain::interval_union(std::move(ps));
    }
    if (head == "ball") {
        int d = 1;
        double r = 1.0;
        for (const auto& part : split(rest, ',')) {
            auto [k, v] = kv(part);
            if (k == "d")
                d = static_cast<int>(v);
            else if (k == "r")
                r = v;
            else
                fail("unknown ball key '" + k + "'");
        }
        if (d < 1 || d > 3) fail("ball dimension must be 1..3");
        Point c;
        c.dim = d;
        return Domain::ball(c, r);
    }
    if (head == "halfline") {
        if (rest.empty() || rest == "pos") return Domain::half_line(+1);
        if (rest == "neg") return Domain::half_line(-1);
        fail("halfline accepts 'pos' or 'neg'");
    }
    if (head == "halfspace") {
        int d = 3;
        for (const auto& part : split(rest, ',')) {
            auto [k, v] = kv(part);
            if (k == "d")
                d = static_cast<int>(v);
            else
                fail("unknown halfspace key '" + k + "'");
        }
        return Domain::half_space(d);
    }
    fail("unknown domain kind '" + head + "'");
    return Domain::interval(-1, 1);
}

// ---------------------------------------------------------------------------
// Exterior data g: D^c -> R.

enum class TailRule { reject, zero, hold, power_law };

class ExteriorData {
public:
    static ExteriorData closed_form(std::function<double(double)> g) {
        ExteriorData e;
        e.fn_ = std::move(g);
        return e;
    }
    /// Tabulated samples with piecewise-linear interpolation between them.
    static ExteriorData tabulated(std::vector<double> zs, std::vector<double> gs,
                                  TailRule tail = TailRule::reject,
                                  double power = 0.0) {
        if (zs.size() != gs.size() || zs.size() < 2)
            throw std::invalid_argument("tabulated: need >= 2 matching samples");
        std::vector<std::size_t> order(zs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return zs[a] < zs[b]; });
        ExteriorData e;
        e.zs_.reserve(zs.size());
        e.gs_.reserve(zs.size());
        for (std::size_t i : order) {
            e.zs_.push_back(zs[i]);
            e.gs_.push_back(gs[i]);
        }
        for (std::size_t i = 1; i < e.zs_.size(); ++i)
            if (!(e.zs_[i] > e.zs_[i - 1]))
                throw std::invalid_argument("tabulated: duplicate sample abscissae");
        e.tail_ = tail;
        e.tail_power_ = power;
        return e;
    }

    bool is_tabulated() const { return !zs_.empty(); }

    double operator()(double z) const {
        if (fn_) return fn_(z);
        if (z >= zs_.front() && z <= zs_.back()) {
            const auto it = std::upper_bound(zs_.begin(), zs_.end(), z);
            const std::size_t hi = std::min<std::size_t>(
                static_cast<std::size_t>(it - zs_.begin()), zs_.size() - 1);
            const std::size_t lo = hi == 0 ? 0 : hi - 1;
            if (hi == lo) return gs_[lo];
            const double t = (z - zs_[lo]) / (zs_[hi] - zs_[lo]);
            return gs_[lo] + t * (gs_[hi] - gs_[lo]);
        }
        switch (tail_) {
            case TailRule::zero:
                return 0.0;
            case TailRule::hold:
                return z < zs_.front() ? gs_.front() : gs_.back();
            case TailRule::power_law: {
                const double edge = z < zs_.front() ? zs_.front() : zs_.back();
                const double val = z < zs_.front() ? gs_.front() : gs_.back();
                return val * std::pow(std::abs(z) / std::max(std::abs(edge), 1e-300),
                                      -tail_power_);
            }
            case TailRule::reject:
                throw std::out_of_range(
                    "ExteriorData: query outside tabulated support and no tail rule "
                    "declared (z=" + std::to_string(z) + ")");
        }
        return 0.0;
    }

private:
    std::function<double(double)> fn_;
    std::vector<double> zs_, gs_;
    TailRule tail_ = TailRule::reject;
    double tail_power_ = 0.0;
};

// ---------------------------------------------------------------------------
// Volume density condition check (Monte Carlo volume estimation).

struct VdcReport {
    double c = 0.0;          // empirical inf of |D^c cap B(x,r)| / r^d
    double worst_r = 0.0;
    Point worst_x;
    long samples_per_cell = 0;
    bool degenerate = false;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
inline double u01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}
}  // namespace detail

/// Samples boundary points and radii and measures |D^c cap B(x,r)| / r^d by
/// Monte Carlo with a fixed seed.
inline VdcReport check_vdc(const Domain& domain, const std::vector<double>& radii,
                           int boundary_samples, long mc_points = 100000,
                           std::uint64_t seed = 20240901ULL) {
    VdcReport rep;
    rep.samples_per_cell = mc_points;
    if (radii.empty() || boundary_samples <= 0) {
        rep.degenerate = true;
        return rep;
    }
    const int d = domain.dim();
    std::vector<Point> boundary;
    switch (domain.kind()) {
        case Domain::Kind::interval:
        case Domain::Kind::interval_union:
        case Domain::Kind::half_line:
            for (double b : domain.boundary_points_1d()) boundary.push_back(Point::d1(b));
            break;
        case Domain::Kind::ball: {
            std::uint64_t s = seed;
            for (int i = 0; i < boundary_samples; ++i) {
                Point p = domain.center();
                if (d == 1) {
                    p[0] += (i % 2 == 0 ? 1.0 : -1.0) * domain.radius();
                } else if (d == 2) {
                    const double th = 2.0 * M_PI * detail::u01(detail::splitmix64(s));
                    p[0] += domain.radius() * std::cos(th);
                    p[1] += domain.radius() * std::sin(th);
                } else {
                    const double c = 1.0 - 2.0 * detail::u01(detail::splitmix64(s));
                    const double ph = 2.0 * M_PI * detail::u01(detail::splitmix64(s));
                    const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
                    p[0] += domain.radius() * sn * std::cos(ph);
                    p[1] += domain.radius() * sn * std::sin(ph);
                    p[2] += domain.radius() * c;
                }
                boundary.push_back(p);
            }
            break;
        }
        case Domain::Kind::half_space: {
            Point p;
            p.dim = d;
            boundary.push_back(p);
            break;
        }
    }
    if (boundary.empty()) {
        rep.degenerate = true;
        return rep;
    }

    const double vball = unit_ball_volume(d);
    rep.c = std::numeric_limits<double>::infinity();
    std::uint64_t s = seed ^ 0xabcdef12345ULL;
    for (const Point& x : boundary) {
        for (double r : radii) {
            long outside = 0;
            for (long i = 0; i < mc_points; ++i) {
                // uniform point in B(x, r)
                Point p = x;
                while (true) {
                    Point cand = x;
                    double norm2 = 0;
                    for (int k = 0; k < d; ++k) {
                        const double u = 2.0 * detail::u01(detail::splitmix64(s)) - 1.0;
                        cand[k] = u;
                        norm2 += u * u;
                    }
                    if (norm2 <= 1.0) {
                        for (int k = 0; k < d; ++k) p[k] = x[k] + r * cand[k];
                        break;
                    }
                }
                if (!domain.contains(p)) ++outside;
            }
            const double measure =
                vball * static_cast<double>(outside) / static_cast<double>(mc_points);
            if (measure < rep.c) {
                rep.c = measure;
                rep.worst_r = r;
                rep.worst_x = x;
            }
        }
    }
    return rep;
}

}  // namespace nonlocal
