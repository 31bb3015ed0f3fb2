#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hvcheck/probability.hpp"
#include "hvcheck/zoo.hpp"

using namespace hvcheck;

namespace {

ProbSpace shift_space() { return ProbSpace::from_model(left_shift_model(3, 1)); }

} // namespace

TEST_CASE("event probabilities") {
    ProbSpace space = shift_space();
    Region everything = Region::slice(space.lattice(), 0);
    CHECK(space.prob(event_all(everything)).is_one());

    // impossible event
    CoarseEvent none = event_state_union(everything, {}, "never");
    CHECK(space.prob(none).is_zero());

    // value at (1,1) equals the initial value at (2,0); half the mass
    Region cell = Region::single({1, 1});
    CHECK(space.prob(event_cell_value(cell, {1, 1}, 1, "one")) == Rational(1, 2));
}

TEST_CASE("conditional probability is exact and null conditions throw") {
    ProbSpace space = shift_space();
    CoarseEvent forced = event_cell_value(Region::single({1, 1}), {1, 1}, 1, "out");
    CoarseEvent source = event_cell_value(Region::single({2, 0}), {2, 0}, 1, "src");
    CHECK(space.cond_prob(forced, source).is_one());
    CHECK(space.cond_prob(forced, event_all(Region::single({0, 0}))) == space.prob(forced));
    CoarseEvent never = event_state_union(Region::single({2, 0}), {}, "never");
    CHECK_THROWS_AS(space.cond_prob(forced, never), Error);
    try {
        space.cond_prob(forced, never);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NullCondition);
    }
}

TEST_CASE("conditioning on an unrealized settings pair is ill-defined") {
    // single-configuration variant of the cone-determined-settings model:
    // only one settings pair is realized at all
    ZooEntry z = reversible_ca();
    HVTModel m = z.model;
    m.initial_measure = {{m.initial_measure.front().first, Rational(1)}};
    ProbSpace space = ProbSpace::from_model(m);
    const auto& a1 = z.wiring->settings_left.cells[1];
    const auto& b1 = z.wiring->settings_right.cells[1];
    std::vector<CoarseEvent> given{a1, b1};
    CHECK(space.prob_all(given).is_zero());
    CHECK_THROWS_AS(space.cond_prob(std::span<const CoarseEvent>{},
                                    std::span<const CoarseEvent>(given)),
                    Error);
}

TEST_CASE("the bridge between determination and 0/1 probability holds by construction") {
    ProbSpace space = shift_space();
    Region init = Region::slice(space.lattice(), 0);
    for (const auto& rs : space.realized_states(init)) {
        // the initial slice forces every later region state
        Region out = Region::single({1, 1});
        for (const auto& final_rs : space.realized_states(out)) {
            Verdict v = check_bridge_principle(space, rs, final_rs);
            CHECK(v.pass());
            CHECK(v.probs_all_01);
        }
    }
    // genuinely chancy continuation: neither antecedent applies
    ProbSpace coin = ProbSpace::from_model(fair_coin_model(3, 1));
    Region init3 = Region::slice(coin.lattice(), 0);
    RegionState some_init = coin.realized_states(init3).front();
    RegionState heads{Region::single({1, 1}), {1}};
    Verdict v = check_bridge_principle(coin, some_init, heads);
    CHECK(v.pass());
    CHECK_FALSE(v.probs_all_01); // the evaluated probability is 1/2
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->fields[0].second == "1/2");
}

TEST_CASE("the bridge holds across the whole region schedule of a deterministic model") {
    ProbSpace space = ProbSpace::from_model(left_shift_model(5, 1));
    auto sched = region_schedule(space.lattice(), RegionBounds{2, 2});
    for (const auto& ri : sched) {
        auto initial_states = space.realized_states(ri);
        for (const auto& rf : sched) {
            auto final_states = space.realized_states(rf);
            for (const auto& si : initial_states)
                for (const auto& sf : final_states) {
                    Verdict v = check_bridge_principle(space, si, sf);
                    CHECK(v.pass());
                }
        }
    }
}

TEST_CASE("independence of product-measure cells") {
    ProbSpace space = shift_space();
    CoarseEvent left = event_cell_value(Region::single({0, 0}), {0, 0}, 1, "l");
    CoarseEvent right = event_cell_value(Region::single({2, 0}), {2, 0}, 1, "r");
    CHECK(independent(space, left, right));
    CHECK_FALSE(independent(space, left, left)); // 0 < p < 1
    // shift-coupled cells are maximally dependent
    CoarseEvent out = event_cell_value(Region::single({1, 1}), {1, 1}, 1, "o");
    CHECK_FALSE(independent(space, right, out));
}

TEST_CASE("disjoint unions preserve independence") {
    ProbSpace space = ProbSpace::from_model(left_shift_model(5, 1));
    Region r = Region::single({1, 0});
    CoarseEvent x = event_cell_value(r, {1, 0}, 0, "x");
    CoarseEvent xp = event_cell_value(r, {1, 0}, 1, "xp");
    CoarseEvent y = event_cell_value(Region::single({3, 0}), {3, 0}, 1, "y");
    CHECK(coarse_union_independence_check(space, x, xp, y).pass());

    // empty X' is vacuously disjoint and independent
    CoarseEvent empty = event_state_union(r, {}, "empty");
    CHECK(coarse_union_independence_check(space, x, empty, y).pass());

    // precondition violations are rejected
    CHECK_THROWS_AS(coarse_union_independence_check(space, x, x, y), Error);
    CoarseEvent coupled = event_cell_value(Region::single({1, 1}), {1, 1}, 1, "c");
    CoarseEvent src = event_cell_value(Region::single({2, 0}), {2, 0}, 1, "s");
    CHECK_THROWS_AS(coarse_union_independence_check(space, src, empty, coupled), Error);
}

TEST_CASE("randomized disjoint independent pairs always keep independence under union") {
    ProbSpace space = ProbSpace::from_model(left_shift_model(7, 1));
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        int xa = static_cast<int>(rng() % 4);
        int yb = 4 + static_cast<int>(rng() % 3);
        Region rx = Region::single({xa, 0});
        // two disjoint values of one far cell vs a value of another
        CoarseEvent x = event_cell_value(rx, {xa, 0}, 0, "x");
        CoarseEvent xp = event_cell_value(rx, {xa, 0}, 1, "xp");
        CoarseEvent y = event_cell_value(Region::single({yb, 0}), {yb, 0},
                                         static_cast<Sym>(rng() % 2), "y");
        CHECK(coarse_union_independence_check(space, x, xp, y).pass());
    }
}

TEST_CASE("union independence extends to more than two disjoint events") {
    ProbSpace space = ProbSpace::from_model(left_shift_model(7, 1));
    Region rx = Region::rect(1, 2, 0, 0);
    // four disjoint complete states of a two-cell region, each independent of y
    std::vector<CoarseEvent> cells;
    for (Sym v0 = 0; v0 < 2; ++v0)
        for (Sym v1 = 0; v1 < 2; ++v1)
            cells.push_back(event_state_union(rx, {{v0, v1}}, "c"));
    CoarseEvent y = event_cell_value(Region::single({5, 0}), {5, 0}, 1, "y");
    for (const auto& c : cells) CHECK(independent(space, c, y));
    // any union of three of them remains independent of y
    for (std::size_t skip = 0; skip < cells.size(); ++skip) {
        Rational p_union, p_union_y;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == skip) continue;
            p_union += space.prob(cells[i]);
            std::vector<CoarseEvent> both{cells[i], y};
            p_union_y += space.prob_all(both);
        }
        CHECK(p_union_y == p_union * space.prob(y));
    }
}

TEST_CASE("chain rule holds exactly for every realized quadruple") {
    ProbSpace space = ProbSpace::from_model(fair_coin_model(3, 1));
    // P(A,B | C) = P(A | B,C) * P(B | C) whenever the conditions are nonzero
    std::vector<CoarseEvent> pool;
    for (const auto& p : space.lattice().all_points())
        for (Sym v = 0; v < 2; ++v)
            pool.push_back(event_cell_value(Region::single(p), p, v, "e"));
    std::mt19937 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const CoarseEvent& a = pool[rng() % pool.size()];
        const CoarseEvent& b = pool[rng() % pool.size()];
        const CoarseEvent& c = pool[rng() % pool.size()];
        std::vector<CoarseEvent> bc{b, c}, abc{a, b, c}, cs{c};
        if (space.prob_all(bc).is_zero() || space.prob(c).is_zero()) continue;
        Rational lhs = space.cond_prob(std::span<const CoarseEvent>(abc).subspan(0, 2),
                                       std::span<const CoarseEvent>(cs));
        Rational rhs = space.cond_prob(std::span<const CoarseEvent>(abc).subspan(0, 1),
                                       std::span<const CoarseEvent>(bc)) *
                       space.cond_prob(std::span<const CoarseEvent>(bc).subspan(0, 1),
                                       std::span<const CoarseEvent>(cs));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("law of total probability across partitions") {
    ProbSpace space = ProbSpace::from_model(left_shift_model(5, 1));
    Region r = Region::rect(1, 2, 0, 0);
    Partition part;
    part.region = r;
    part.cells = {event_parity(r, 0, "even"), event_parity(r, 1, "odd")};
    validate_partition(space, part);
    CoarseEvent e = event_cell_value(Region::single({3, 1}), {3, 1}, 1, "e");
    Rational total;
    for (const auto& cell : part.cells) {
        std::vector<CoarseEvent> both{e, cell};
        total += space.prob_all(both);
    }
    CHECK(total == space.prob(e));
}

TEST_CASE("partition validation rejects overlaps and gaps") {
    ProbSpace space = shift_space();
    Region r = Region::single({0, 0});
    Partition overlap;
    overlap.region = r;
    overlap.cells = {event_all(r, "a"), event_all(r, "b")};
    CHECK_THROWS_AS(validate_partition(space, overlap), Error);
    Partition gap;
    gap.region = r;
    gap.cells = {event_cell_value(r, {0, 0}, 0, "only-zero")};
    CHECK_THROWS_AS(validate_partition(space, gap), Error);
}

TEST_CASE("conditional probabilities stay in [0,1] and respect independence") {
    ProbSpace space = shift_space();
    std::vector<CoarseEvent> pool;
    for (const auto& p : space.lattice().all_points())
        for (Sym v = 0; v < 2; ++v)
            pool.push_back(event_cell_value(Region::single(p), p, v, "e"));
    for (const auto& e : pool)
        for (const auto& f : pool) {
            if (space.prob(f).is_zero()) continue;
            Rational p = space.cond_prob(e, f);
            CHECK(p >= Rational(0));
            CHECK(p <= Rational(1));
            if (independent(space, e, f)) CHECK(p == space.prob(e));
        }
}
