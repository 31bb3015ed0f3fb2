#pragma once

#include <string>
#include <vector>

#include "hvcheck/state.hpp"

namespace hvcheck {

/// Declarative event predicate over a region's states. Keeping descriptors
/// declarative (rather than opaque closures) makes every event serializable,
/// so failure witnesses can be re-verified from their reports.
struct EventDesc {
    enum class Kind { All, CellValues, StateIn, Parity };
    Kind kind = Kind::All;
    /// CellValues: conjunction; each listed point's value must be in `allowed`.
    struct CellConstraint {
        SitePoint point;
        std::vector<Sym> allowed;
        friend bool operator==(const CellConstraint&, const CellConstraint&) = default;
    };
    std::vector<CellConstraint> constraints;
    /// StateIn: the complete region state equals one of these.
    std::vector<std::vector<Sym>> states;
    /// Parity: sum of symbol indices over the region mod 2.
    int parity_residue = 0;

    friend bool operator==(const EventDesc&, const EventDesc&) = default;
};

/// A predicate-definable set of region states (a coarse-grained event).
struct CoarseEvent {
    Region region;
    EventDesc desc;
    std::string label;

    bool matches(const RegionState& rs) const;
    friend bool operator==(const CoarseEvent&, const CoarseEvent&) = default;
};

CoarseEvent event_all(const Region& r, std::string label = "any");
CoarseEvent event_cell_value(const Region& r, SitePoint p, Sym value, std::string label);
CoarseEvent event_state(const RegionState& rs, std::string label = "");
CoarseEvent event_state_union(const Region& r, std::vector<std::vector<Sym>> states,
                              std::string label);
CoarseEvent event_parity(const Region& r, int residue, std::string label);

/// Pairwise-disjoint events over a common region covering every realized
/// state. Cells with no realized state are permitted.
struct Partition {
    Region region;
    std::vector<CoarseEvent> cells;
};

} // namespace hvcheck
