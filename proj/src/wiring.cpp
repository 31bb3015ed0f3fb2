#include "hvcheck/wiring.hpp"

#include <algorithm>

namespace hvcheck {

int BellWiring::t_meas(const Lattice&) const {
    return std::min(r_cap_a.min_t(), r_cap_b.min_t());
}

const Region& BellWiring::system_region(int tau) const {
    auto it = system_regions.find(tau);
    if (it == system_regions.end())
        throw Error(ErrorCode::BadFamily,
                    "wiring has no system region at t=" + std::to_string(tau));
    return it->second;
}

void validate_wiring(const Lattice& l, const BellWiring& w) {
    require_valid_region(w.r_a, l);
    require_valid_region(w.r_b, l);
    require_valid_region(w.r_cap_a, l);
    require_valid_region(w.r_cap_b, l);

    Region left = w.r_a.unite(w.r_cap_a);
    Region right = w.r_b.unite(w.r_cap_b);
    if (!spacelike_separated(left, right))
        throw Error(ErrorCode::ValidationError,
                    "left wing (R_a u R_A) must be spacelike separated from right wing");
    if (!past_light_cone(w.r_cap_a, l).contains_all(w.r_a))
        throw Error(ErrorCode::ValidationError, "R_a must lie in the past light cone of R_A");
    if (!past_light_cone(w.r_cap_b, l).contains_all(w.r_b))
        throw Error(ErrorCode::ValidationError, "R_b must lie in the past light cone of R_B");

    if (w.t_prime >= w.t)
        throw Error(ErrorCode::ValidationError, "wiring needs t' < t");
    int settings_bottom = std::min(w.r_a.min_t(), w.r_b.min_t());
    if (w.t >= settings_bottom)
        throw Error(ErrorCode::ValidationError, "t must lie strictly below R_a u R_b");
    int overlap_top = cone_intersection_max_t(w.r_cap_a, w.r_cap_b, l);
    if (w.t_prime <= overlap_top)
        throw Error(ErrorCode::ValidationError,
                    "t' must lie above the intersection of the past cones of R_A and R_B");
    if (w.t_prime < 0)
        throw Error(ErrorCode::ValidationError, "t' below the lattice");
    if (w.t_prep >= w.t_prime)
        throw Error(ErrorCode::ValidationError, "preparation time must lie below t'");

    const Region& sys = w.system_region(w.t_prep);
    Region past_a = past_light_cone(w.r_cap_a, l);
    Region past_b = past_light_cone(w.r_cap_b, l);
    for (const auto& p : sys.points()) {
        if (p.t != w.t_prep)
            throw Error(ErrorCode::ValidationError, "system region at t_P must lie on slice t_P");
        if (!past_a.contains(p) || !past_b.contains(p))
            throw Error(ErrorCode::ValidationError,
                        "system region at t_P must lie in the overlap of both past cones");
    }

    auto check_partition_region = [](const Partition& p, const Region& r, const char* what) {
        if (!(p.region == r))
            throw Error(ErrorCode::ValidationError,
                        std::string(what) + " partition must be over its wiring region");
        if (p.cells.size() < 2)
            throw Error(ErrorCode::ValidationError,
                        std::string(what) + " partition needs at least two cells");
    };
    check_partition_region(w.settings_left, w.r_a, "settings-left");
    check_partition_region(w.settings_right, w.r_b, "settings-right");
    check_partition_region(w.outcomes_left, w.r_cap_a, "outcomes-left");
    check_partition_region(w.outcomes_right, w.r_cap_b, "outcomes-right");
}

LambdaSpec LambdaSpec::preparation() {
    LambdaSpec s;
    s.kind = Kind::AtPreparation;
    return s;
}

LambdaSpec LambdaSpec::preparation_plus(int radius) {
    LambdaSpec s;
    s.kind = Kind::AtPreparationPlus;
    s.plus_radius = radius;
    return s;
}

LambdaSpec LambdaSpec::thick_slices() {
    LambdaSpec s;
    s.kind = Kind::ThickSlices;
    return s;
}

LambdaSpec LambdaSpec::coarse(Partition family) {
    LambdaSpec s;
    s.kind = Kind::CoarseFamily;
    s.family = std::move(family);
    return s;
}

std::string LambdaSpec::name() const {
    switch (kind) {
        case Kind::AtPreparation: return "preparation";
        case Kind::AtPreparationPlus:
            return "preparation-plus(radius=" + std::to_string(plus_radius) + ")";
        case Kind::ThickSlices: return "thick-slices";
        case Kind::CoarseFamily:
            return "coarse(" + std::to_string(family ? family->cells.size() : 0) + " cells)";
    }
    return "unknown";
}

Region lambda_region(const Lattice& l, const BellWiring& w, const LambdaSpec& spec) {
    switch (spec.kind) {
        case LambdaSpec::Kind::AtPreparation:
            return w.system_region(w.t_prep);
        case LambdaSpec::Kind::AtPreparationPlus: {
            // Widen by the radius on the preparation slice, clipped to the
            // overlap of the two past cones.
            Region base = w.system_region(w.t_prep);
            Region past_a = past_light_cone(w.r_cap_a, l);
            Region past_b = past_light_cone(w.r_cap_b, l);
            std::vector<SitePoint> pts;
            for (const auto& p : base.points())
                for (int dx = -spec.plus_radius; dx <= spec.plus_radius; ++dx) {
                    SitePoint q{p.x + dx, p.t};
                    if (l.valid(q) && past_a.contains(q) && past_b.contains(q)) pts.push_back(q);
                }
            return Region(std::move(pts));
        }
        case LambdaSpec::Kind::ThickSlices:
            return w.thick_pair(l);
        case LambdaSpec::Kind::CoarseFamily:
            if (!spec.family)
                throw Error(ErrorCode::BadFamily, "coarse lambda spec without a family");
            return spec.family->region;
    }
    throw Error(ErrorCode::BadFamily, "unknown lambda spec");
}

std::vector<CoarseEvent> lambda_cells(const ProbSpace& space, const BellWiring& w,
                                      const LambdaSpec& spec) {
    if (spec.kind == LambdaSpec::Kind::CoarseFamily) {
        validate_partition(space, *spec.family);
        return spec.family->cells;
    }
    Region r = lambda_region(space.lattice(), w, spec);
    std::vector<CoarseEvent> cells;
    for (const auto& rs : space.realized_states(r))
        cells.push_back(event_state(rs, rs.str(space.alphabet())));
    return cells;
}

ProbSpace condition_on_experiment(const ProbSpace& space, const BellWiring& w) {
    const Partition* parts[] = {&w.settings_left, &w.settings_right, &w.outcomes_left,
                                &w.outcomes_right};
    std::vector<Solution> kept;
    Rational total;
    for (const auto& s : space.solutions()) {
        bool ok = true;
        for (const Partition* p : parts) {
            bool hit = false;
            for (const auto& c : p->cells)
                if (space.sat(s, c)) {
                    hit = true;
                    break;
                }
            if (!hit) {
                ok = false;
                break;
            }
        }
        if (ok) {
            kept.push_back(s);
            total += s.weight;
        }
    }
    if (total.is_zero())
        throw Error(ErrorCode::NullCondition, "no solution realizes the experiment");
    if (total.is_one()) return space;
    for (auto& s : kept) s.weight /= total;
    return ProbSpace(space.lattice(), space.alphabet(), std::move(kept));
}

} // namespace hvcheck
