#pragma once

#include <compare>
#include <string>
#include <vector>

#include "hvcheck/error.hpp"

namespace hvcheck {

/// A lattice site (x, t). Ordered by time first so sorted regions read
/// bottom-up, left to right.
struct SitePoint {
    int x = 0;
    int t = 0;

    friend bool operator==(const SitePoint&, const SitePoint&) = default;
    friend std::strong_ordering operator<=>(const SitePoint& a, const SitePoint& b) {
        if (auto c = a.t <=> b.t; c != 0) return c;
        return a.x <=> b.x;
    }
};

/// 1+1-dimensional lattice with unit light speed whose valid points form the
/// causal diamond of the initial slice: 0 <= t <= height, t <= x <= width-1-t.
/// Past light cones of valid points never leave the diamond.
struct Lattice {
    int width = 1;
    int height = 0;

    Lattice() = default;
    Lattice(int w, int h);

    bool valid(SitePoint p) const {
        return p.t >= 0 && p.t <= height && p.x >= p.t && p.x <= width - 1 - p.t;
    }
    int slice_min_x(int t) const { return t; }
    int slice_max_x(int t) const { return width - 1 - t; }
    int slice_size(int t) const { return width - 2 * t; }

    std::size_t point_count() const;
    std::size_t point_index(SitePoint p) const;
    std::vector<SitePoint> all_points() const;

    friend bool operator==(const Lattice&, const Lattice&) = default;
};

/// Finite nonempty set of lattice points; not necessarily connected.
class Region {
public:
    Region() = default;
    explicit Region(std::vector<SitePoint> points);
    static Region single(SitePoint p) { return Region({p}); }
    /// Axis-aligned rectangle [x1..x2] x [t1..t2].
    static Region rect(int x1, int x2, int t1, int t2);
    /// The full slice of the diamond at time t.
    static Region slice(const Lattice& l, int t);

    const std::vector<SitePoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    bool contains(SitePoint p) const;
    bool contains_all(const Region& other) const;

    int min_t() const;
    int max_t() const;

    Region unite(const Region& other) const;

    /// Sorted "(x,t)" pair list, the report serialization.
    std::string str() const;

    friend bool operator==(const Region&, const Region&) = default;
    friend std::strong_ordering operator<=>(const Region& a, const Region& b) {
        return a.points_ <=> b.points_;
    }

private:
    std::vector<SitePoint> points_; // sorted, unique
};

void require_valid_region(const Region& r, const Lattice& l);

Region past_light_cone(const Region& r, const Lattice& l);
Region future_light_cone(const Region& r, const Lattice& l);

/// Slice of the past (t0 below R) or future (t0 above R) light cone of R at
/// time t0. "Below" and "above" are strict over the whole time extent of R.
Region sigma(const Region& r, int t0, const Lattice& l);

/// Thick slice C(Sigma_{R,t}, Sigma_{R,t'}): past-cone points of R with time
/// in [t', t], both slices included. Requires t' < t < min_t(R).
Region thick_slice(const Region& r, int t, int t_prime, const Lattice& l);

bool spacelike_separated(const Region& r1, const Region& r2);

/// Largest time at which the past light cones of r1 and r2 still intersect,
/// or -1 when they never do.
int cone_intersection_max_t(const Region& r1, const Region& r2, const Lattice& l);

} // namespace hvcheck
