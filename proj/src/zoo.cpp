#include "hvcheck/zoo.hpp"

#include <algorithm>
#include <functional>

namespace hvcheck {

namespace {

using Assign = std::vector<std::pair<int, Sym>>; // simultaneous cell assignments
using Group = std::vector<Assign>;               // uniform alternatives

std::vector<std::pair<std::vector<Sym>, Rational>> measure_from_groups(
    int /*width*/, const std::vector<Sym>& base, const std::vector<Group>& groups) {
    Rational w(1);
    for (const auto& g : groups) w /= Rational(static_cast<std::int64_t>(g.size()));
    std::vector<std::pair<std::vector<Sym>, Rational>> out;
    std::vector<std::size_t> odo(groups.size(), 0);
    while (true) {
        std::vector<Sym> cfg = base;
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (const auto& [x, s] : groups[i][odo[i]]) cfg[static_cast<std::size_t>(x)] = s;
        out.emplace_back(std::move(cfg), w);
        std::size_t i = groups.size();
        while (i > 0) {
            --i;
            if (++odo[i] < groups[i].size()) break;
            odo[i] = 0;
            if (i == 0) {
                std::sort(out.begin(), out.end());
                return out;
            }
        }
        if (groups.empty()) {
            std::sort(out.begin(), out.end());
            return out;
        }
    }
}

Group coin(int x, Sym a, Sym b) { return Group{{{x, a}}, {{x, b}}}; }

Partition two_cell_partition(const Region& r, SitePoint p, Sym v0, Sym v1,
                             const std::string& l0, const std::string& l1) {
    Partition part;
    part.region = r;
    part.cells.push_back(event_cell_value(r, p, v0, l0));
    part.cells.push_back(event_cell_value(r, p, v1, l1));
    return part;
}

std::vector<std::pair<std::vector<Sym>, Rational>> measure_product(
    int width, const std::vector<Sym>& base,
    const std::vector<std::pair<int, std::vector<std::pair<Sym, Rational>>>>& cells) {
    std::vector<std::pair<std::vector<Sym>, Rational>> out;
    std::function<void(std::size_t, std::vector<Sym>&, Rational)> rec =
        [&](std::size_t i, std::vector<Sym>& cfg, Rational w) {
            if (i == cells.size()) {
                out.emplace_back(cfg, w);
                return;
            }
            for (const auto& [sym, p] : cells[i].second) {
                cfg[static_cast<std::size_t>(cells[i].first)] = sym;
                rec(i + 1, cfg, w * p);
            }
        };
    std::vector<Sym> cfg = base;
    rec(0, cfg, Rational(1));
    std::sort(out.begin(), out.end());
    (void)width;
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// true-spin: width 16, height 4.
//
//   carriers   left (7,0)->(6,1)->(5,2) then resting; right (8,0)->(9,1)->(10,2)
//   settings   stationary columns x=3 and x=12
//   outcomes   (4,4) reads carrier (5,3) + setting (3,3); (11,4) mirrors
// ---------------------------------------------------------------------------

namespace {

constexpr int kTrueSpinW = 16, kTrueSpinH = 4;
const int kLeftPath[5] = {7, 6, 5, 5, 5};
const int kRightPath[5] = {8, 9, 10, 10, 10};

// alphabet indices
constexpr Sym TS_DOT = 0;
constexpr Sym TS_PAIR0 = 1; // p++ p+- p-+ p-- at 1..4
constexpr Sym TS_S0 = 5, TS_S1 = 6, TS_OP = 7, TS_OM = 8;

Sym ts_outcome(Sym pair, Sym setting) {
    int idx = pair - TS_PAIR0;           // bit1 = first spin is minus, bit0 = second
    int minus = setting == TS_S0 ? (idx >> 1) & 1 : idx & 1;
    return minus ? TS_OM : TS_OP;
}

std::vector<Sym> true_spin_step(const Lattice& l, const std::vector<Sym>& slice, int t) {
    std::vector<Sym> next(static_cast<std::size_t>(l.slice_size(t + 1)), TS_DOT);
    auto at = [&](int x) { return slice[static_cast<std::size_t>(x - l.slice_min_x(t))]; };
    auto put = [&](int x, Sym v) {
        next[static_cast<std::size_t>(x - l.slice_min_x(t + 1))] = v;
    };
    if (3 >= l.slice_min_x(t + 1)) put(3, at(3));
    if (12 <= l.slice_max_x(t + 1)) put(12, at(12));
    put(kLeftPath[t + 1], at(kLeftPath[t]));
    put(kRightPath[t + 1], at(kRightPath[t]));
    if (t + 1 == kTrueSpinH) {
        put(4, ts_outcome(at(kLeftPath[t]), at(3)));
        put(11, ts_outcome(at(kRightPath[t]), at(12)));
    }
    return next;
}

Region ts_band(int tau) {
    const int lo[5] = {7, 6, 5, 5, 5};
    const int hi[5] = {8, 9, 10, 10, 10};
    return Region::rect(lo[tau], hi[tau], tau, tau);
}

} // namespace

ZooEntry true_spin_model() {
    ZooEntry z;
    z.name = "true-spin";
    HVTModel& m = z.model;
    m.name = z.name;
    m.lattice = Lattice(kTrueSpinW, kTrueSpinH);
    m.alphabet.symbols = {".", "p++", "p+-", "p-+", "p--", "s0", "s1", "o+", "o-"};
    m.law_kind = LawKind::GlobalDeterministic;
    m.global_rule = {"true-spin", true_spin_step};

    std::vector<Sym> base(kTrueSpinW, TS_DOT);
    std::vector<Group> groups;
    groups.push_back(Group{{{7, TS_PAIR0}}, {{7, TS_PAIR0 + 1}}, {{7, TS_PAIR0 + 2}},
                           {{7, TS_PAIR0 + 3}}});
    groups.push_back(Group{{{8, TS_PAIR0}}, {{8, TS_PAIR0 + 1}}, {{8, TS_PAIR0 + 2}},
                           {{8, TS_PAIR0 + 3}}});
    groups.push_back(coin(3, TS_S0, TS_S1));
    groups.push_back(coin(12, TS_S0, TS_S1));
    m.initial_measure = measure_from_groups(kTrueSpinW, base, groups);

    BellWiring w;
    w.r_a = Region::single({3, 3});
    w.r_b = Region::single({12, 3});
    w.r_cap_a = Region::single({4, 4});
    w.r_cap_b = Region::single({11, 4});
    w.t_prep = 0;
    w.t = 2;
    w.t_prime = 1;
    w.settings_left = two_cell_partition(w.r_a, {3, 3}, TS_S0, TS_S1, "a", "a'");
    w.settings_right = two_cell_partition(w.r_b, {12, 3}, TS_S0, TS_S1, "b", "b'");
    w.outcomes_left = two_cell_partition(w.r_cap_a, {4, 4}, TS_OP, TS_OM, "+1", "-1");
    w.outcomes_right = two_cell_partition(w.r_cap_b, {11, 4}, TS_OP, TS_OM, "+1", "-1");
    for (int tau = 0; tau <= kTrueSpinH; ++tau) w.system_regions[tau] = ts_band(tau);
    z.wiring = w;

    // Conserved-quantity family (the spin quadruple) and the particle-position
    // family over the same bands.
    TimeIndexedFamily quad;
    quad.name = "spin-quadruple";
    TimeIndexedFamily pos;
    pos.name = "particle-position";
    std::vector<Sym> pair_syms = {TS_PAIR0, TS_PAIR0 + 1, TS_PAIR0 + 2, TS_PAIR0 + 3};
    for (int tau = 0; tau <= kTrueSpinH; ++tau) {
        Region band = ts_band(tau);
        Partition q;
        q.region = band;
        for (Sym pl : pair_syms)
            for (Sym pr : pair_syms) {
                CoarseEvent c;
                c.region = band;
                c.desc.kind = EventDesc::Kind::CellValues;
                c.desc.constraints.push_back({{kLeftPath[tau], tau}, {pl}});
                c.desc.constraints.push_back({{kRightPath[tau], tau}, {pr}});
                c.label = "quad(" + m.alphabet.name(pl) + "," + m.alphabet.name(pr) + ")";
                q.cells.push_back(std::move(c));
            }
        quad.by_time[tau] = std::move(q);

        Partition p;
        p.region = band;
        const auto& pts = band.points();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                CoarseEvent c;
                c.region = band;
                c.desc.kind = EventDesc::Kind::CellValues;
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    if (k == i || k == j)
                        c.desc.constraints.push_back({pts[k], pair_syms});
                    else
                        c.desc.constraints.push_back({pts[k], {TS_DOT}});
                }
                c.label = "at(" + std::to_string(pts[i].x) + "," + std::to_string(pts[j].x) + ")";
                p.cells.push_back(std::move(c));
            }
        pos.by_time[tau] = std::move(p);
    }
    z.families["spin-quadruple"] = std::move(quad);
    z.families["particle-position"] = std::move(pos);

    z.expected = {
        {"deterministic", Status::Pass},
        {"locally-deterministic-past", Status::Pass},
        {"locally-deterministic-both", Status::Fail},
        {"local-causality-fine", Status::Pass},
        {"local-causality-coarse", Status::Pass},
        {"temporal-locality", Status::Pass},
        {"settings-independence@preparation", Status::Pass},
        {"settings-independence@thick-slices", Status::Fail},
        {"factorizability@preparation", Status::Pass},
        {"factorizability@thick-slices", Status::Pass},
        {"settings-compatibility", Status::Fail},
        {"derivation", Status::Pass},
    };
    return z;
}

// ---------------------------------------------------------------------------
// reversible-ca: width 18, height 4, left shift. Initial cells 0..7 are fixed
// guards so cone slices determine regions in both time directions; cells
// 8..17 are independent fair bits.
// ---------------------------------------------------------------------------

ZooEntry reversible_ca() {
    ZooEntry z;
    z.name = "reversible-ca";
    HVTModel& m = z.model;
    m.name = z.name;
    m.lattice = Lattice(18, 4);
    m.alphabet.symbols = {"0", "1"};
    m.law_kind = LawKind::LocalDeterministic;
    m.local_rule.table.assign(8, 0);
    for (std::size_t code = 0; code < 8; ++code)
        m.local_rule.table[code] = static_cast<Sym>(code & 1); // next = right neighbor

    std::vector<Sym> base(18, 0);
    std::vector<Group> groups;
    for (int x = 8; x <= 17; ++x) groups.push_back(coin(x, 0, 1));
    m.initial_measure = measure_from_groups(18, base, groups);

    BellWiring w;
    w.r_a = Region::single({5, 3});
    w.r_b = Region::single({12, 3});
    w.r_cap_a = Region::single({6, 4});
    w.r_cap_b = Region::single({13, 4});
    w.t_prep = 0;
    w.t = 2;
    w.t_prime = 1;
    w.settings_left = two_cell_partition(w.r_a, {5, 3}, 0, 1, "a", "a'");
    w.settings_right = two_cell_partition(w.r_b, {12, 3}, 0, 1, "b", "b'");
    w.outcomes_left = two_cell_partition(w.r_cap_a, {6, 4}, 0, 1, "+1", "-1");
    w.outcomes_right = two_cell_partition(w.r_cap_b, {13, 4}, 0, 1, "+1", "-1");
    for (int tau = 0; tau <= 4; ++tau)
        w.system_regions[tau] = Region({{9 - tau, tau}, {10 - tau, tau}});
    z.wiring = w;

    z.expected = {
        {"deterministic", Status::Pass},
        {"locally-deterministic-past", Status::Pass},
        {"locally-deterministic-both", Status::Pass},
        {"local-causality-fine", Status::Pass},
        {"local-causality-coarse", Status::Pass},
        {"temporal-locality", Status::Pass},
        {"settings-independence@preparation", Status::Pass},
        {"settings-independence@thick-slices", Status::Fail},
        {"factorizability@preparation", Status::Pass},
        {"factorizability@thick-slices", Status::Pass},
        {"settings-compatibility", Status::Fail},
        {"derivation", Status::Pass},
    };
    return z;
}

// ---------------------------------------------------------------------------
// pr-box: width 17, height 4. The shared bit rides column x=8, which leaves
// both past cones above t=0; at the last step outcome A copies it and
// outcome B reads it together with the left setting.
// ---------------------------------------------------------------------------

namespace {

std::vector<Sym> pr_box_step(const Lattice& l, const std::vector<Sym>& slice, int t) {
    std::vector<Sym> next(static_cast<std::size_t>(l.slice_size(t + 1)), 0);
    auto at = [&](int x) { return slice[static_cast<std::size_t>(x - l.slice_min_x(t))]; };
    for (int x = l.slice_min_x(t + 1); x <= l.slice_max_x(t + 1); ++x)
        next[static_cast<std::size_t>(x - l.slice_min_x(t + 1))] = at(x);
    if (t + 1 == 4) {
        auto put = [&](int x, Sym v) {
            next[static_cast<std::size_t>(x - l.slice_min_x(t + 1))] = v;
        };
        put(4, at(8));                                      // A = shared bit
        put(12, static_cast<Sym>(at(8) ^ (at(5) & at(11)))); // B reads the left setting
    }
    return next;
}

} // namespace

ZooEntry pr_box_spacetime() {
    ZooEntry z;
    z.name = "pr-box";
    HVTModel& m = z.model;
    m.name = z.name;
    m.lattice = Lattice(17, 4);
    m.alphabet.symbols = {"0", "1"};
    m.law_kind = LawKind::GlobalDeterministic;
    m.global_rule = {"pr-box", pr_box_step};

    std::vector<Sym> base(17, 0);
    std::vector<Group> groups{coin(8, 0, 1), coin(5, 0, 1), coin(11, 0, 1)};
    m.initial_measure = measure_from_groups(17, base, groups);

    BellWiring w;
    w.r_a = Region::single({5, 3});
    w.r_b = Region::single({11, 3});
    w.r_cap_a = Region::single({4, 4});
    w.r_cap_b = Region::single({12, 4});
    w.t_prep = 0;
    w.t = 2;
    w.t_prime = 1;
    w.settings_left = two_cell_partition(w.r_a, {5, 3}, 0, 1, "a", "a'");
    w.settings_right = two_cell_partition(w.r_b, {11, 3}, 0, 1, "b", "b'");
    w.outcomes_left = two_cell_partition(w.r_cap_a, {4, 4}, 0, 1, "+1", "-1");
    w.outcomes_right = two_cell_partition(w.r_cap_b, {12, 4}, 0, 1, "+1", "-1");
    for (int tau = 0; tau <= 4; ++tau) w.system_regions[tau] = Region::single({8, tau});
    z.wiring = w;

    z.expected = {
        {"deterministic", Status::Pass},
        {"locally-deterministic-past", Status::Fail},
        {"locally-deterministic-both", Status::Fail},
        {"local-causality-fine", Status::Fail},
        {"local-causality-coarse", Status::Fail},
        {"temporal-locality", Status::Fail},
        {"settings-independence@preparation", Status::Pass},
        {"settings-independence@thick-slices", Status::Fail},
        {"factorizability@preparation", Status::Fail},
        {"factorizability@thick-slices", Status::Fail},
        {"settings-compatibility", Status::Fail},
        {"derivation", Status::Fail},
    };
    return z;
}

// ---------------------------------------------------------------------------
// local-stochastic: width 16, height 4. Marker cells 's' wait for a moving
// fuse bit and then draw the setting with a 3/4 bias toward the fuse value;
// a shared bit is transported into both outcome cells and XORed with the
// local setting.
// ---------------------------------------------------------------------------

namespace {

constexpr Sym LS_DOT = 0, LS_MARK = 1, LS_B0 = 2, LS_B1 = 3;
constexpr Sym LS_M0 = 4, LS_M1 = 5, LS_N0 = 6, LS_N1 = 7;

bool ls_bit(Sym v) { return v == LS_B0 || v == LS_B1; }
bool ls_m(Sym v) { return v == LS_M0 || v == LS_M1; }
bool ls_n(Sym v) { return v == LS_N0 || v == LS_N1; }

std::vector<std::pair<Sym, Rational>> ls_kernel(Sym l, Sym c, Sym r) {
    auto det = [](Sym v) { return std::vector<std::pair<Sym, Rational>>{{v, Rational(1)}}; };
    auto biased = [](int toward) {
        Rational hi(3, 4), lo(1, 4);
        if (toward == 1) return std::vector<std::pair<Sym, Rational>>{{LS_B0, lo}, {LS_B1, hi}};
        return std::vector<std::pair<Sym, Rational>>{{LS_B0, hi}, {LS_B1, lo}};
    };
    if (c == LS_MARK) {
        if (ls_m(l)) return biased(l == LS_M1 ? 1 : 0);
        if (ls_n(r)) return biased(r == LS_N1 ? 1 : 0);
        return det(LS_MARK);
    }
    if (ls_bit(c)) return det(c);
    if (ls_m(c)) {
        if (ls_bit(r)) return det(static_cast<Sym>(LS_B0 + ((c - LS_M0) ^ (r - LS_B0))));
        return det(LS_DOT);
    }
    if (ls_n(c)) {
        if (ls_bit(l)) return det(static_cast<Sym>(LS_B0 + ((c - LS_N0) ^ (l - LS_B0))));
        return det(LS_DOT);
    }
    // c is vacuum: movers arrive, right-movers first (never both in practice)
    if (ls_m(l)) return det(l);
    if (ls_n(r)) return det(r);
    return det(LS_DOT);
}

} // namespace

ZooEntry local_stochastic() {
    ZooEntry z;
    z.name = "local-stochastic";
    HVTModel& m = z.model;
    m.name = z.name;
    m.lattice = Lattice(16, 4);
    m.alphabet.symbols = {".", "s", "0", "1", "m0", "m1", "n0", "n1"};
    m.law_kind = LawKind::LocalStochastic;
    const std::size_t n = m.alphabet.size();
    m.stochastic_rule.table.resize(n * n * n);
    for (Sym l = 0; l < n; ++l)
        for (Sym c = 0; c < n; ++c)
            for (Sym r = 0; r < n; ++r)
                m.stochastic_rule.table[(l * n + c) * n + r] = ls_kernel(l, c, r);

    std::vector<Sym> base(16, LS_DOT);
    base[3] = LS_MARK;
    base[12] = LS_MARK;
    std::vector<Group> groups;
    groups.push_back(coin(0, LS_M0, LS_M1));   // left setting bias fuse
    groups.push_back(coin(15, LS_N0, LS_N1));  // right setting bias fuse
    groups.push_back(Group{{{7, LS_N0}, {8, LS_M0}}, {{7, LS_N1}, {8, LS_M1}}}); // shared bit
    m.initial_measure = measure_from_groups(16, base, groups);

    BellWiring w;
    w.r_a = Region::single({3, 3});
    w.r_b = Region::single({12, 3});
    w.r_cap_a = Region::single({4, 4});
    w.r_cap_b = Region::single({11, 4});
    w.t_prep = 0;
    w.t = 2;
    w.t_prime = 1;
    w.settings_left = two_cell_partition(w.r_a, {3, 3}, LS_B0, LS_B1, "a", "a'");
    w.settings_right = two_cell_partition(w.r_b, {12, 3}, LS_B0, LS_B1, "b", "b'");
    w.outcomes_left = two_cell_partition(w.r_cap_a, {4, 4}, LS_B0, LS_B1, "+1", "-1");
    w.outcomes_right = two_cell_partition(w.r_cap_b, {11, 4}, LS_B0, LS_B1, "+1", "-1");
    w.system_regions[0] = Region({{7, 0}, {8, 0}});
    w.system_regions[1] = Region({{6, 1}, {9, 1}});
    w.system_regions[2] = Region({{5, 2}, {10, 2}});
    w.system_regions[3] = Region({{4, 3}, {11, 3}});
    w.system_regions[4] = Region({{4, 4}, {11, 4}});
    z.wiring = w;

    z.expected = {
        {"deterministic", Status::Fail},
        {"locally-deterministic-past", Status::Fail},
        {"locally-deterministic-both", Status::Fail},
        {"local-causality-fine", Status::Pass},
        {"local-causality-coarse", Status::Pass},
        {"temporal-locality", Status::Pass},
        {"settings-independence@preparation", Status::Pass},
        {"settings-independence@thick-slices", Status::Fail},
        {"factorizability@preparation", Status::Pass},
        {"factorizability@thick-slices", Status::Pass},
        {"settings-compatibility", Status::Pass},
        {"derivation", Status::Pass},
    };
    return z;
}

// ---------------------------------------------------------------------------
// nonlocal-settings: width 9, height 2. The setting cell (2,1) receives the
// value of the far initial cell (6,0), outside the past cone slice of the
// measurement column, so P(setting | cone slice) = 1/2 while the model stays
// deterministic.
// ---------------------------------------------------------------------------

namespace {

std::vector<Sym> far_settings_step(const Lattice& l, const std::vector<Sym>& slice, int t) {
    std::vector<Sym> next(static_cast<std::size_t>(l.slice_size(t + 1)), 0);
    auto at = [&](int x) { return slice[static_cast<std::size_t>(x - l.slice_min_x(t))]; };
    auto put = [&](int x, Sym v) {
        next[static_cast<std::size_t>(x - l.slice_min_x(t + 1))] = v;
    };
    for (int x = l.slice_min_x(t + 1); x <= l.slice_max_x(t + 1); ++x) put(x, at(x));
    if (t == 0) {
        put(2, at(6)); // setting copied from the far side
        put(3, at(2)); // reroute the local bit so nothing is erased
    }
    return next;
}

std::vector<Sym> skip_reader_step(const Lattice& l, const std::vector<Sym>& slice, int t) {
    std::vector<Sym> next(static_cast<std::size_t>(l.slice_size(t + 1)), 0);
    auto at = [&](int x) { return slice[static_cast<std::size_t>(x - l.slice_min_x(t))]; };
    auto put = [&](int x, Sym v) {
        next[static_cast<std::size_t>(x - l.slice_min_x(t + 1))] = v;
    };
    for (int x = l.slice_min_x(t + 1); x <= l.slice_max_x(t + 1); ++x) put(x, at(x));
    if (t + 1 == 3) put(3, at(7)); // reads around its own past cone
    return next;
}

} // namespace

ZooEntry deterministic_nonlocal_settings() {
    ZooEntry z;
    z.name = "nonlocal-settings";
    HVTModel& m = z.model;
    m.name = z.name;
    m.lattice = Lattice(9, 2);
    m.alphabet.symbols = {"0", "1"};
    m.law_kind = LawKind::GlobalDeterministic;
    m.global_rule = {"far-settings", far_settings_step};
    std::vector<Sym> base(9, 0);
    m.initial_measure = measure_from_groups(9, base, {coin(2, 0, 1), coin(6, 0, 1)});
    z.expected = {
        {"deterministic", Status::Pass},
        {"locally-deterministic-past", Status::Fail},
        {"locally-deterministic-both", Status::Fail},
        {"local-causality-fine", Status::Pass},
        {"local-causality-coarse", Status::Pass},
        // two rows is too shallow for any region to have a sub-t' partner
        {"temporal-locality", Status::Vacuous},
    };
    return z;
}

ZooEntry singlet_table_entry(int a_mul, int a_prime_mul, int b_mul, int b_prime_mul) {
    ZooEntry z;
    z.name = "singlet";
    HVTModel& m = z.model;
    m.name = z.name;
    m.lattice = Lattice(1, 0);
    m.alphabet.symbols = {"+1", "-1"};
    m.law_kind = LawKind::PredictionsOnly;
    m.predictions = singlet_exact_table(a_mul, a_prime_mul, b_mul, b_prime_mul);
    return z;
}

std::vector<ZooEntry> full_zoo() {
    std::vector<ZooEntry> zoo;
    zoo.push_back(true_spin_model());
    zoo.push_back(reversible_ca());
    zoo.push_back(pr_box_spacetime());
    zoo.push_back(local_stochastic());
    zoo.push_back(deterministic_nonlocal_settings());
    zoo.push_back(singlet_table_entry());
    return zoo;
}

HVTModel left_shift_model(int width, int height) {
    HVTModel m;
    m.name = "left-shift";
    m.lattice = Lattice(width, height);
    m.alphabet.symbols = {"0", "1"};
    m.law_kind = LawKind::LocalDeterministic;
    m.local_rule.table.assign(8, 0);
    for (std::size_t code = 0; code < 8; ++code)
        m.local_rule.table[code] = static_cast<Sym>(code & 1);
    std::vector<Sym> base(static_cast<std::size_t>(width), 0);
    std::vector<Group> groups;
    for (int x = 0; x < width; ++x) groups.push_back(coin(x, 0, 1));
    m.initial_measure = measure_from_groups(width, base, groups);
    return m;
}

HVTModel fair_coin_model(int width, int height) {
    HVTModel m;
    m.name = "fair-coin";
    m.lattice = Lattice(width, height);
    m.alphabet.symbols = {"0", "1"};
    m.law_kind = LawKind::LocalStochastic;
    std::vector<std::pair<Sym, Rational>> fair{{0, Rational(1, 2)}, {1, Rational(1, 2)}};
    m.stochastic_rule.table.assign(8, fair);
    std::vector<Sym> base(static_cast<std::size_t>(width), 0);
    std::vector<Group> groups;
    for (int x = 0; x < width; ++x) groups.push_back(coin(x, 0, 1));
    m.initial_measure = measure_from_groups(width, base, groups);
    return m;
}

HVTModel skip_reader_model() {
    HVTModel m;
    m.name = "skip-reader";
    m.lattice = Lattice(11, 3);
    m.alphabet.symbols = {"0", "1"};
    m.law_kind = LawKind::GlobalDeterministic;
    m.global_rule = {"skip-reader", skip_reader_step};
    std::vector<Sym> base(11, 0);
    m.initial_measure = measure_from_groups(11, base, {coin(7, 0, 1)});
    return m;
}

// ---------------------------------------------------------------------------
// Generated reversible rules: per-track shifts composed with bit flips.
// ---------------------------------------------------------------------------

namespace {

struct Track {
    int shift;  // -1, 0, +1: which neighbor the new value is read from
    bool flip;
};

std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

HVTModel make_reversible(const std::string& name, int width, int height,
                         const std::vector<Track>& tracks, std::uint64_t seed) {
    HVTModel m;
    m.name = name;
    m.lattice = Lattice(width, height);
    int nbits = static_cast<int>(tracks.size());
    std::size_t nsym = static_cast<std::size_t>(1) << nbits;
    for (std::size_t s = 0; s < nsym; ++s) {
        std::string sym;
        for (int k = nbits - 1; k >= 0; --k) sym += ((s >> k) & 1) ? '1' : '0';
        m.alphabet.symbols.push_back(sym);
    }
    m.law_kind = LawKind::LocalDeterministic;
    m.local_rule.table.assign(nsym * nsym * nsym, 0);
    for (std::size_t l = 0; l < nsym; ++l)
        for (std::size_t c = 0; c < nsym; ++c)
            for (std::size_t r = 0; r < nsym; ++r) {
                std::size_t out = 0;
                for (int k = 0; k < nbits; ++k) {
                    std::size_t src = tracks[static_cast<std::size_t>(k)].shift == 1   ? r
                                      : tracks[static_cast<std::size_t>(k)].shift == -1 ? l
                                                                                         : c;
                    std::size_t bit = (src >> k) & 1;
                    if (tracks[static_cast<std::size_t>(k)].flip) bit ^= 1;
                    out |= bit << k;
                }
                m.local_rule.table[(l * nsym + c) * nsym + r] = static_cast<Sym>(out);
            }

    // Guard sizes: a shifted track loses 2H cells from one side on the
    // shrinking diamond, a resting track loses H from both.
    int gl = 0, gr = 0;
    for (const Track& t : tracks) {
        if (t.shift == 1) gl = std::max(gl, 2 * height);
        if (t.shift == -1) gr = std::max(gr, 2 * height);
        if (t.shift == 0) {
            gl = std::max(gl, height);
            gr = std::max(gr, height);
        }
    }
    std::vector<Sym> base(static_cast<std::size_t>(width), 0);
    std::uint64_t rng = seed;
    std::vector<std::pair<int, std::vector<std::pair<Sym, Rational>>>> cells;
    for (int x = gl; x <= width - 1 - gr; ++x) {
        std::vector<std::pair<Sym, Rational>> dist;
        std::int64_t total = 0;
        std::vector<std::int64_t> nums(nsym);
        for (std::size_t s = 0; s < nsym; ++s) {
            nums[s] = 1 + static_cast<std::int64_t>(splitmix(rng) % 3);
            total += nums[s];
        }
        for (std::size_t s = 0; s < nsym; ++s)
            dist.emplace_back(static_cast<Sym>(s), Rational(nums[s], total));
        cells.emplace_back(x, std::move(dist));
    }
    if (cells.empty())
        throw Error(ErrorCode::ValidationError, "no free cells left between the guards");
    m.initial_measure = measure_product(width, base, cells);
    return m;
}

} // namespace

std::vector<HVTModel> generated_reversible_models(std::size_t count) {
    std::vector<HVTModel> out;
    std::uint64_t seed = 0x5eed;
    auto add = [&](const std::string& name, const std::vector<Track>& tracks) {
        if (out.size() < count) out.push_back(make_reversible(name, 9, 2, tracks, ++seed));
    };
    const int shifts[3] = {1, 0, -1};
    for (int d : shifts)
        for (int f = 0; f < 2; ++f)
            add("rev-single-d" + std::to_string(d) + "-f" + std::to_string(f),
                {{d, f == 1}});
    for (int d : shifts)
        for (int f1 = 0; f1 < 2; ++f1)
            for (int f2 = 0; f2 < 2; ++f2)
                add("rev-twin-d" + std::to_string(d) + "-f" + std::to_string(f1) +
                        std::to_string(f2),
                    {{d, f1 == 1}, {d, f2 == 1}});
    const std::pair<int, int> mixed[6] = {{1, 0}, {0, 1}, {1, -1}, {-1, 1}, {0, -1}, {-1, 0}};
    for (const auto& [d1, d2] : mixed)
        add("rev-mixed-d" + std::to_string(d1) + "d" + std::to_string(d2),
            {{d1, false}, {d2, true}});
    return out;
}

std::vector<WiredModel> generated_wired_reversible_models() {
    // Same geometry as the guarded left-shift entry; for every single-track
    // shift the four wiring carriers land on free initial cells, so at least
    // two settings pairs are realized under any full-support measure.
    BellWiring w = *reversible_ca().wiring;
    std::vector<WiredModel> out;
    std::uint64_t seed = 0x317ed;
    const int shifts[3] = {1, 0, -1};
    for (int d : shifts)
        for (int f = 0; f < 2; ++f) {
            HVTModel m = make_reversible(
                "wired-rev-d" + std::to_string(d) + "-f" + std::to_string(f), 18, 4,
                {{d, f == 1}}, ++seed);
            out.push_back(WiredModel{std::move(m), w});
        }
    return out;
}

const GlobalRule* find_global_rule(const std::string& name, const Lattice& l) {
    struct Entry {
        const char* name;
        int width, height;
        std::vector<Sym> (*step)(const Lattice&, const std::vector<Sym>&, int);
    };
    static const Entry entries[] = {
        {"true-spin", kTrueSpinW, kTrueSpinH, true_spin_step},
        {"pr-box", 17, 4, pr_box_step},
        {"far-settings", 9, 2, far_settings_step},
        {"skip-reader", 11, 3, skip_reader_step},
    };
    static std::vector<GlobalRule> rules = [] {
        std::vector<GlobalRule> v;
        for (const auto& e : entries) v.push_back(GlobalRule{e.name, e.step});
        return v;
    }();
    for (std::size_t i = 0; i < std::size(entries); ++i) {
        if (entries[i].name == name) {
            if (l.width != entries[i].width || l.height != entries[i].height)
                throw Error(ErrorCode::ValidationError,
                            "global rule '" + name + "' expects lattice " +
                                std::to_string(entries[i].width) + "x" +
                                std::to_string(entries[i].height));
            return &rules[i];
        }
    }
    return nullptr;
}

} // namespace hvcheck
