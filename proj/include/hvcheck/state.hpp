#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hvcheck/spacetime.hpp"

namespace hvcheck {

using Sym = std::uint8_t;

struct Alphabet {
    std::vector<std::string> symbols;

    std::size_t size() const { return symbols.size(); }
    Sym index_of(const std::string& name) const;
    const std::string& name(Sym s) const { return symbols.at(s); }
    bool has(const std::string& name) const;
};

/// Complete specification of the hidden state on one region.
struct RegionState {
    Region region;
    std::vector<Sym> values; // aligned with region.points()

    std::string str(const Alphabet& a) const;
    friend bool operator==(const RegionState&, const RegionState&) = default;
};

} // namespace hvcheck
