#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hvcheck/probability.hpp"
#include "hvcheck/zoo.hpp"

using namespace hvcheck;

namespace {

Rational total_weight(const std::vector<Solution>& sols) {
    Rational t;
    for (const auto& s : sols) t += s.weight;
    return t;
}

HVTModel guarded_left_shift(int width, int height) {
    // left shift with enough fixed cells on the left that no information
    // falls off the shrinking diamond
    HVTModel m = left_shift_model(width, height);
    std::vector<std::pair<std::vector<Sym>, Rational>> kept;
    for (auto& [cfg, w] : m.initial_measure) {
        bool ok = true;
        for (int x = 0; x < 2 * height; ++x) ok = ok && cfg[static_cast<std::size_t>(x)] == 0;
        if (ok) kept.emplace_back(cfg, w);
    }
    Rational norm;
    for (auto& [cfg, w] : kept) norm += w;
    for (auto& [cfg, w] : kept) w /= norm;
    m.initial_measure = std::move(kept);
    return m;
}

} // namespace

TEST_CASE("left shift enumerates one solution per initial configuration") {
    HVTModel m = left_shift_model(3, 1);
    auto sols = enumerate_solutions(m);
    CHECK(sols.size() == 8);
    for (const auto& s : sols) {
        CHECK(s.weight == Rational(1, 8));
        CHECK(s.at(m.lattice, {1, 1}) == s.at(m.lattice, {2, 0}));
    }
    CHECK(total_weight(sols).is_one());
    CHECK(sols.size() == m.initial_measure.size()); // deterministic law
}

TEST_CASE("concentrated measure gives a single solution") {
    HVTModel m = left_shift_model(3, 1);
    m.initial_measure = {{{1, 0, 1}, Rational(1)}};
    auto sols = enumerate_solutions(m);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].weight.is_one());
    CHECK(sols[0].at(m.lattice, {1, 1}) == 1);
}

TEST_CASE("fair coin branches into weighted solutions") {
    HVTModel m = fair_coin_model(3, 1);
    auto sols = enumerate_solutions(m);
    CHECK(sols.size() == 16); // 8 initial configurations x 2 draws at (1,1)
    for (const auto& s : sols) CHECK(s.weight == Rational(1, 16));
    CHECK(total_weight(sols).is_one());
}

TEST_CASE("enumeration budget is enforced") {
    HVTModel m = fair_coin_model(5, 2);
    CHECK_THROWS_AS(enumerate_solutions(m, 10), Error);
    try {
        enumerate_solutions(m, 10);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EnumerationBudget);
    }
}

TEST_CASE("predictions-only models cannot be enumerated") {
    ZooEntry z = singlet_table_entry();
    CHECK_THROWS_AS(enumerate_solutions(z.model), Error);
}

TEST_CASE("restrict and compatible") {
    HVTModel m = left_shift_model(3, 1);
    auto sols = enumerate_solutions(m);
    const Solution& s = sols.front();
    Region init = Region::slice(m.lattice, 0);
    RegionState rs = restrict_to(s, init, m.lattice);
    CHECK(rs.values.size() == 3);
    CHECK(compatible(s, rs, m.lattice));
    RegionState point = restrict_to(s, Region::single({1, 1}), m.lattice);
    CHECK(point.values.size() == 1);
    CHECK(compatible(s, point, m.lattice));
    RegionState wrong = point;
    wrong.values[0] = static_cast<Sym>(1 - wrong.values[0]);
    CHECK_FALSE(compatible(s, wrong, m.lattice));
}

TEST_CASE("thick slice restriction equals concatenated slice restrictions") {
    HVTModel m = left_shift_model(7, 2);
    auto sols = enumerate_solutions(m);
    Region r = Region::single({3, 2});
    Region c = thick_slice(r, 1, 0, m.lattice);
    for (std::size_t i = 0; i < 8; ++i) {
        const Solution& s = sols[i * 13 % sols.size()];
        RegionState whole = restrict_to(s, c, m.lattice);
        RegionState lower = restrict_to(s, sigma(r, 0, m.lattice), m.lattice);
        RegionState upper = restrict_to(s, sigma(r, 1, m.lattice), m.lattice);
        std::vector<Sym> concat = lower.values;
        concat.insert(concat.end(), upper.values.begin(), upper.values.end());
        CHECK(whole.values == concat);
    }
}

TEST_CASE("determinism holds for deterministic laws and fails under branching") {
    EnumeratedModel shift = enumerate_model(left_shift_model(3, 1));
    CHECK(check_deterministic(shift).pass());

    EnumeratedModel coin = enumerate_model(fair_coin_model(3, 1));
    Verdict v = check_deterministic(coin);
    REQUIRE(v.fail());
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->fields[0].second == "0"); // two solutions share the t=0 slice
    CHECK_FALSE(v.witness->queries.empty());

    // Any global-deterministic model passes by construction.
    EnumeratedModel far = enumerate_model(deterministic_nonlocal_settings().model);
    CHECK(check_deterministic(far).pass());
    EnumeratedModel skip = enumerate_model(skip_reader_model());
    CHECK(check_deterministic(skip).pass());
}

TEST_CASE("guarded left shift is locally deterministic in both directions") {
    EnumeratedModel em = enumerate_model(guarded_left_shift(5, 1));
    CHECK(check_locally_deterministic(em, Direction::Past).pass());
    CHECK(check_locally_deterministic(em, Direction::Future).pass());
    CHECK(check_locally_deterministic(em, Direction::Both).pass());
}

TEST_CASE("unguarded left shift loses corner information in the future direction") {
    EnumeratedModel em = enumerate_model(left_shift_model(3, 1));
    CHECK(check_locally_deterministic(em, Direction::Past).pass());
    CHECK(check_locally_deterministic(em, Direction::Future).fail());
}

TEST_CASE("a rule copying a far cell into a region fails local determinism with a witness") {
    EnumeratedModel em = enumerate_model(deterministic_nonlocal_settings().model);
    Verdict v = check_locally_deterministic(em, Direction::Past);
    REQUIRE(v.fail());
    REQUIRE(v.witness.has_value());
    // the two region states agree on the cone slice but differ in the region
    CHECK(v.witness->fields[0].second == "(2,1)");
    CHECK(v.witness->queries.size() == 2);
}

TEST_CASE("stochastic models fail local determinism") {
    EnumeratedModel em = enumerate_model(fair_coin_model(3, 1));
    CHECK(check_locally_deterministic(em, Direction::Both).fail());
}

TEST_CASE("failing determinism always means failing local determinism") {
    // and the witness region never overlaps the witness slice
    std::vector<HVTModel> models = {fair_coin_model(3, 1), fair_coin_model(5, 1),
                                    local_stochastic().model};
    for (const auto& m : models) {
        EnumeratedModel em = enumerate_model(m);
        Verdict det = check_deterministic(em);
        REQUIRE(det.fail());
        Verdict ld = check_locally_deterministic(em, Direction::Both);
        REQUIRE(ld.fail());
        REQUIRE(ld.witness.has_value());
        // witness fields: region, t0, ...
        std::string region = ld.witness->fields[0].second;
        int t0 = std::stoi(ld.witness->fields[1].second);
        // admissibility already guarantees the region avoids the slice
        CHECK(region.find("," + std::to_string(t0) + ")") == std::string::npos);
    }
}

TEST_CASE("a single-slice lattice leaves local determinism vacuous") {
    HVTModel m = left_shift_model(3, 0);
    EnumeratedModel em = enumerate_model(m);
    CHECK(em.solutions.size() == 8);
    Verdict v = check_locally_deterministic(em, Direction::Both);
    CHECK(v.status == Status::Vacuous);
    CHECK(check_deterministic(em).pass());
}

TEST_CASE("region schedule covers cells and rectangles inside the diamond") {
    Lattice l(9, 2);
    auto sched = region_schedule(l, RegionBounds{2, 2});
    std::size_t cells = 0, rects = 0;
    for (const auto& r : sched) {
        require_valid_region(r, l);
        if (r.size() == 1)
            ++cells;
        else
            ++rects;
    }
    CHECK(cells == l.point_count());
    CHECK(rects > 0);
}

TEST_CASE("model validation rejects broken structures") {
    HVTModel m = left_shift_model(3, 1);
    m.initial_measure[0].second = Rational(1, 16); // no longer sums to 1
    CHECK_THROWS_AS(validate_model(m), Error);

    HVTModel partial = left_shift_model(3, 1);
    partial.local_rule.table.pop_back();
    CHECK_THROWS_AS(validate_model(partial), Error);

    HVTModel bad_kernel = fair_coin_model(3, 1);
    bad_kernel.stochastic_rule.table[0] = {{0, Rational(1, 2)}, {1, Rational(1, 3)}};
    CHECK_THROWS_AS(validate_model(bad_kernel), Error);

    HVTModel dup = left_shift_model(3, 1);
    dup.alphabet.symbols = {"0", "0"};
    CHECK_THROWS_AS(validate_model(dup), Error);
}
