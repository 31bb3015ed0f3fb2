#include "hvcheck/spacetime.hpp"

#include <algorithm>
#include <cstdlib>

namespace hvcheck {

Lattice::Lattice(int w, int h) : width(w), height(h) {
    if (w < 1)
        throw Error(ErrorCode::ValidationError, "lattice width must be >= 1");
    if (h < 0 || h > (w - 1) / 2)
        throw Error(ErrorCode::ValidationError,
                    "lattice height must satisfy 0 <= height <= floor((width-1)/2)");
}

std::size_t Lattice::point_count() const {
    std::size_t n = 0;
    for (int t = 0; t <= height; ++t) n += static_cast<std::size_t>(slice_size(t));
    return n;
}

std::size_t Lattice::point_index(SitePoint p) const {
    // Row-major from the initial slice; each row loses one cell on each side.
    std::size_t offset = static_cast<std::size_t>(p.t) * width - static_cast<std::size_t>(p.t) * (p.t - 1);
    return offset + static_cast<std::size_t>(p.x - p.t);
}

std::vector<SitePoint> Lattice::all_points() const {
    std::vector<SitePoint> pts;
    pts.reserve(point_count());
    for (int t = 0; t <= height; ++t)
        for (int x = slice_min_x(t); x <= slice_max_x(t); ++x) pts.push_back({x, t});
    return pts;
}

Region::Region(std::vector<SitePoint> points) : points_(std::move(points)) {
    if (points_.empty())
        throw Error(ErrorCode::InvalidRegion, "region must be nonempty");
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

Region Region::rect(int x1, int x2, int t1, int t2) {
    std::vector<SitePoint> pts;
    for (int t = t1; t <= t2; ++t)
        for (int x = x1; x <= x2; ++x) pts.push_back({x, t});
    return Region(std::move(pts));
}

Region Region::slice(const Lattice& l, int t) {
    return rect(l.slice_min_x(t), l.slice_max_x(t), t, t);
}

bool Region::contains(SitePoint p) const {
    return std::binary_search(points_.begin(), points_.end(), p);
}

bool Region::contains_all(const Region& other) const {
    return std::includes(points_.begin(), points_.end(), other.points_.begin(),
                         other.points_.end());
}

int Region::min_t() const { return points_.front().t; }
int Region::max_t() const { return points_.back().t; }

Region Region::unite(const Region& other) const {
    std::vector<SitePoint> pts = points_;
    pts.insert(pts.end(), other.points_.begin(), other.points_.end());
    return Region(std::move(pts));
}

std::string Region::str() const {
    std::string out;
    for (const auto& p : points_) {
        if (!out.empty()) out += " ";
        out += "(" + std::to_string(p.x) + "," + std::to_string(p.t) + ")";
    }
    return out;
}

void require_valid_region(const Region& r, const Lattice& l) {
    for (const auto& p : r.points())
        if (!l.valid(p))
            throw Error(ErrorCode::InvalidRegion,
                        "point (" + std::to_string(p.x) + "," + std::to_string(p.t) +
                            ") outside the causal diamond");
}

namespace {

// Union of per-point cone intervals on one slice; dir=-1 past, dir=+1 future.
void cone_slice_points(const Region& r, const Lattice& l, int tau, int dir,
                       std::vector<SitePoint>& out) {
    int lo = l.slice_max_x(tau) + 1;
    int hi = l.slice_min_x(tau) - 1;
    bool any = false;
    for (const auto& p : r.points()) {
        int reach = dir < 0 ? p.t - tau : tau - p.t;
        if (reach < 0) continue;
        int a = std::max(p.x - reach, l.slice_min_x(tau));
        int b = std::min(p.x + reach, l.slice_max_x(tau));
        if (a > b) continue;
        any = true;
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    if (!any) return;
    // Intervals from different apex points may leave gaps; test membership
    // cell by cell within the hull.
    for (int x = lo; x <= hi; ++x) {
        for (const auto& p : r.points()) {
            int reach = dir < 0 ? p.t - tau : tau - p.t;
            if (reach >= 0 && std::abs(x - p.x) <= reach) {
                out.push_back({x, tau});
                break;
            }
        }
    }
}

} // namespace

Region past_light_cone(const Region& r, const Lattice& l) {
    require_valid_region(r, l);
    std::vector<SitePoint> pts;
    for (int tau = 0; tau <= r.max_t(); ++tau) cone_slice_points(r, l, tau, -1, pts);
    return Region(std::move(pts));
}

Region future_light_cone(const Region& r, const Lattice& l) {
    require_valid_region(r, l);
    std::vector<SitePoint> pts;
    for (int tau = r.min_t(); tau <= l.height; ++tau) cone_slice_points(r, l, tau, +1, pts);
    return Region(std::move(pts));
}

Region sigma(const Region& r, int t0, const Lattice& l) {
    require_valid_region(r, l);
    if (t0 >= r.min_t() && t0 <= r.max_t())
        throw Error(ErrorCode::TimeNotOutsideRegion,
                    "slice time " + std::to_string(t0) + " intersects the region's time extent");
    if (t0 < 0 || t0 > l.height)
        throw Error(ErrorCode::TimeNotOutsideRegion,
                    "slice time " + std::to_string(t0) + " outside the lattice");
    std::vector<SitePoint> pts;
    cone_slice_points(r, l, t0, t0 < r.min_t() ? -1 : +1, pts);
    return Region(std::move(pts));
}

Region thick_slice(const Region& r, int t, int t_prime, const Lattice& l) {
    require_valid_region(r, l);
    if (t_prime >= t)
        throw Error(ErrorCode::BadTimeOrder, "thick slice needs t' < t");
    if (t >= r.min_t())
        throw Error(ErrorCode::TimeNotOutsideRegion, "thick slice times must lie below the region");
    if (t_prime < 0)
        throw Error(ErrorCode::TimeNotOutsideRegion, "t' below the lattice");
    std::vector<SitePoint> pts;
    for (int tau = t_prime; tau <= t; ++tau) cone_slice_points(r, l, tau, -1, pts);
    return Region(std::move(pts));
}

bool spacelike_separated(const Region& r1, const Region& r2) {
    for (const auto& p : r1.points())
        for (const auto& q : r2.points())
            if (std::abs(p.x - q.x) <= std::abs(p.t - q.t)) return false;
    return true;
}

int cone_intersection_max_t(const Region& r1, const Region& r2, const Lattice& l) {
    int top = std::min(r1.max_t(), r2.max_t());
    for (int tau = std::min(top, l.height); tau >= 0; --tau) {
        std::vector<SitePoint> a, b;
        cone_slice_points(r1, l, tau, -1, a);
        cone_slice_points(r2, l, tau, -1, b);
        for (const auto& p : a)
            for (const auto& q : b)
                if (p == q) return tau;
    }
    return -1;
}

} // namespace hvcheck
