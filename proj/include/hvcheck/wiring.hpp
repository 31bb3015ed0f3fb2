#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hvcheck/probability.hpp"

namespace hvcheck {

/// Spacetime arrangement of a two-wing experiment: setting regions R_a/R_b,
/// measurement regions R_A/R_B, the preparation time, the thick-slice times
/// t' < t, the settings/outcome partitions, and the region occupied by the
/// measured system at each time from preparation to first measurement.
struct BellWiring {
    Region r_a, r_b, r_cap_a, r_cap_b; // settings and measurement regions
    int t_prep = 0;
    int t = 0;       // upper thick-slice time
    int t_prime = 0; // lower thick-slice time
    Partition settings_left;  // over r_a, cells ordered (a, a')
    Partition settings_right; // over r_b, cells ordered (b, b')
    Partition outcomes_left;  // over r_cap_a, cells ordered (+1, -1)
    Partition outcomes_right; // over r_cap_b, cells ordered (+1, -1)
    std::map<int, Region> system_regions; // tau -> region of the system at tau

    int t_meas(const Lattice&) const; // time of the first measurement
    Region thick_left(const Lattice& l) const {
        return thick_slice(r_cap_a, t, t_prime, l);
    }
    Region thick_right(const Lattice& l) const {
        return thick_slice(r_cap_b, t, t_prime, l);
    }
    Region thick_pair(const Lattice& l) const {
        return thick_left(l).unite(thick_right(l));
    }
    const Region& system_region(int tau) const;
};

/// Enforces the geometric invariants: wings spacelike separated, settings in
/// the past cones of their measurements, t' < t strictly between the top of
/// the cone overlap and the settings regions, preparation below t', and the
/// system at preparation inside the overlap of both past cones.
void validate_wiring(const Lattice& l, const BellWiring& w);

/// Which hidden state the Bell conditions quantify over.
struct LambdaSpec {
    enum class Kind { AtPreparation, AtPreparationPlus, ThickSlices, CoarseFamily };
    Kind kind = Kind::ThickSlices;
    int plus_radius = 1;           // AtPreparationPlus
    std::optional<Partition> family; // CoarseFamily

    static LambdaSpec preparation();
    static LambdaSpec preparation_plus(int radius = 1);
    static LambdaSpec thick_slices();
    static LambdaSpec coarse(Partition family);

    std::string name() const;
};

/// The region a LambdaSpec reads.
Region lambda_region(const Lattice& l, const BellWiring& w, const LambdaSpec& spec);

/// The cells the lambda quantifier ranges over: one complete-state event per
/// realized state for the complete-state specs, or the supplied coarse family.
std::vector<CoarseEvent> lambda_cells(const ProbSpace& space, const BellWiring& w,
                                      const LambdaSpec& spec);

/// Keeps only solutions on which every settings/outcome partition matches a
/// cell; probabilities are then conditional on the experiment taking place.
ProbSpace condition_on_experiment(const ProbSpace& space, const BellWiring& w);

/// Per-time coarse-graining of the system region; cells with equal labels at
/// different times are identified.
struct TimeIndexedFamily {
    std::string name;
    std::map<int, Partition> by_time;
};

} // namespace hvcheck
