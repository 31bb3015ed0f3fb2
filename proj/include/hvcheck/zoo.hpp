#pragma once

#include <map>
#include <optional>

#include "hvcheck/conditions.hpp"

namespace hvcheck {

/// A reference model with its wiring and the verdict table the test suite
/// reproduces (never assumes).
struct ZooEntry {
    std::string name;
    HVTModel model;
    std::optional<BellWiring> wiring;
    std::map<std::string, Status> expected;
    /// Time-indexed coarse families shipped with the entry (conserved
    /// quantity and particle position for the spin-transport model).
    std::map<std::string, TimeIndexedFamily> families;
};

/// Source emits two carriers holding definite spin values for both local
/// setting choices; each wing's outcome reveals the value selected by its
/// setting bit. Settings are independent coins in the initial measure.
ZooEntry true_spin_model();

/// Left-shift rule on the diamond with guard cells fixed so that cone slices
/// determine regions in both time directions; settings are cone-determined.
ZooEntry reversible_ca();

/// Deterministic global law realizing A xor B = a and b with uniform
/// marginals: the shared source bit stays outside both thick slices and the
/// right outcome reads the left setting.
ZooEntry pr_box_spacetime();

/// Radius-1 stochastic kernel: setting cells are drawn with a bias read from
/// a cone-interior carrier, outcomes XOR a shared transported bit with the
/// local setting. All four settings pairs stay reachable from every state.
ZooEntry local_stochastic();

/// Deterministic global law copying a far-away initial cell into a setting
/// region, making the cone-conditioned setting probability exactly 1/2.
ZooEntry deterministic_nonlocal_settings();

/// Predictions-only entry for the spin-singlet table at angles that are
/// multiples of pi/4 (defaults to the maximal-violation set).
ZooEntry singlet_table_entry(int a_mul = 0, int a_prime_mul = 2, int b_mul = 1,
                             int b_prime_mul = -1);

std::vector<ZooEntry> full_zoo();

/// Small helper models used by unit tests and documentation examples.
HVTModel left_shift_model(int width, int height);
HVTModel fair_coin_model(int width, int height);
/// Deterministic model whose top region copies a cell from outside its past
/// light cone, violating temporal locality and local causality.
HVTModel skip_reader_model();

/// Reversible radius-1 rules (per-track shift composed with a symbol
/// permutation) over guarded diamonds with seeded random rational product
/// measures; all pass local determinism in both directions by construction.
std::vector<HVTModel> generated_reversible_models(std::size_t count);

/// Single-track reversible rules on the larger diamond carrying the standard
/// two-wing wiring, so their cone-determined settings exercise the
/// settings-independence and compatibility phenomena with random measures.
struct WiredModel {
    HVTModel model;
    BellWiring wiring;
};
std::vector<WiredModel> generated_wired_reversible_models();

/// Look up a built-in global rule by name (used by the model file parser).
const GlobalRule* find_global_rule(const std::string& name, const Lattice& l);

} // namespace hvcheck
