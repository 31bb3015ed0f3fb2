#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "hvcheck/parser.hpp"
#include "hvcheck/zoo.hpp"

using namespace hvcheck;

namespace {

bool same_model(const HVTModel& a, const HVTModel& b) {
    return a.lattice == b.lattice && a.alphabet.symbols == b.alphabet.symbols &&
           a.law_kind == b.law_kind && a.initial_measure == b.initial_measure &&
           a.local_rule.table == b.local_rule.table;
}

} // namespace

TEST_CASE("zoo entries round-trip through the canonical text form") {
    for (const auto& z : full_zoo()) {
        INFO(z.name);
        std::string text = write_model_text(z.model, z.wiring);
        ParsedModel pm = parse_model_text(text, z.name);
        CHECK(same_model(pm.model, z.model));
        CHECK(pm.wiring.has_value() == z.wiring.has_value());
        // the canonical form is a fixed point of write(parse(.))
        CHECK(write_model_text(pm.model, pm.wiring) == text);
        if (z.wiring) {
            CHECK(pm.wiring->r_a == z.wiring->r_a);
            CHECK(pm.wiring->t == z.wiring->t);
            CHECK(pm.wiring->system_regions == z.wiring->system_regions);
            CHECK(pm.wiring->settings_left.cells == z.wiring->settings_left.cells);
        }
        if (z.model.law_kind == LawKind::PredictionsOnly)
            CHECK(pm.model.predictions.exact == z.model.predictions.exact);
        if (z.model.law_kind == LawKind::LocalStochastic)
            CHECK(pm.model.stochastic_rule.table == z.model.stochastic_rule.table);
        if (z.model.law_kind == LawKind::GlobalDeterministic)
            CHECK(pm.model.global_rule.name == z.model.global_rule.name);
    }
}

TEST_CASE("round-tripped models produce identical verdicts") {
    ZooEntry z = reversible_ca();
    ParsedModel pm = parse_model_text(write_model_text(z.model, z.wiring), z.name);
    EnumeratedModel em = enumerate_model(pm.model);
    ProbSpace space = ProbSpace::from_enumerated(em);
    CHECK(check_locally_deterministic(em, Direction::Both).pass());
    CHECK(check_settings_independence(space, *pm.wiring, LambdaSpec::thick_slices()).fail());
}

TEST_CASE("uniform measure expands to the full configuration space") {
    std::string text =
        "lattice width=3 height=1\n"
        "alphabet 0 1\n"
        "law local-deterministic radius=1\n"
        "rule 0 0 0 -> 0\nrule 0 0 1 -> 1\nrule 0 1 0 -> 0\nrule 0 1 1 -> 1\n"
        "rule 1 0 0 -> 0\nrule 1 0 1 -> 1\nrule 1 1 0 -> 0\nrule 1 1 1 -> 1\n"
        "measure uniform\n";
    ParsedModel pm = parse_model_text(text, "shift");
    CHECK(pm.model.initial_measure.size() == 8);
    auto sols = enumerate_solutions(pm.model);
    CHECK(sols.size() == 8);
    for (const auto& s : sols) CHECK(s.at(pm.model.lattice, {1, 1}) == s.at(pm.model.lattice, {2, 0}));
}

TEST_CASE("syntax errors carry line numbers") {
    std::string text =
        "lattice width=3 height=1\n"
        "alphabet 0 1\n"
        "law local-deterministic radius=1\n"
        "rule 0 0 zebra -> 0\n";
    try {
        parse_model_text(text, "bad");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(e.line() == 4);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("measures that do not sum to one are rejected") {
    std::string text =
        "lattice width=3 height=0\n"
        "alphabet 0 1\n"
        "law local-deterministic radius=1\n"
        "rule 0 0 0 -> 0\nrule 0 0 1 -> 1\nrule 0 1 0 -> 0\nrule 0 1 1 -> 1\n"
        "rule 1 0 0 -> 0\nrule 1 0 1 -> 1\nrule 1 1 0 -> 0\nrule 1 1 1 -> 1\n"
        "measure 0 0 0 9/10\n";
    try {
        parse_model_text(text, "bad");
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ValidationError);
        CHECK(std::string(e.what()).find("9/10") != std::string::npos);
    }
}

TEST_CASE("partial rule tables are rejected") {
    std::string text =
        "lattice width=3 height=1\n"
        "alphabet 0 1\n"
        "law local-deterministic radius=1\n"
        "rule 0 0 0 -> 0\n"
        "measure uniform\n";
    try {
        parse_model_text(text, "bad");
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ValidationError);
        CHECK(std::string(e.what()).find("not total") != std::string::npos);
    }
}

TEST_CASE("stochastic kernels must sum to one per neighborhood") {
    std::string text =
        "lattice width=3 height=1\n"
        "alphabet 0 1\n"
        "law local-stochastic radius=1\n";
    for (const char* l : {"0", "1"})
        for (const char* c : {"0", "1"})
            for (const char* r : {"0", "1"})
                text += "rule " + std::string(l) + " " + c + " " + r + " -> 0 1/3\n";
    text += "measure uniform\n";
    CHECK_THROWS_AS(parse_model_text(text, "bad"), Error);
}

TEST_CASE("unknown global rules and mismatched lattices are rejected") {
    std::string text =
        "lattice width=9 height=2\n"
        "alphabet 0 1\n"
        "law global-deterministic rule=no-such-rule\n"
        "measure 0 0 0 0 0 0 0 0 0 1\n";
    CHECK_THROWS_AS(parse_model_text(text, "bad"), Error);
    std::string wrong_dims =
        "lattice width=9 height=2\n"
        "alphabet 0 1\n"
        "law global-deterministic rule=pr-box\n"
        "measure 0 0 0 0 0 0 0 0 0 1\n";
    CHECK_THROWS_AS(parse_model_text(wrong_dims, "bad"), Error);
}

TEST_CASE("wiring geometry violations are caught at parse time") {
    ZooEntry z = pr_box_spacetime();
    std::string text = write_model_text(z.model, z.wiring);
    // push t above the settings regions
    auto pos = text.find("t=2");
    text.replace(pos, 3, "t=3");
    CHECK_THROWS_AS(parse_model_text(text, "bad"), Error);
}

TEST_CASE("partition files parse into coarse families") {
    ZooEntry z = reversible_ca();
    Alphabet a = z.model.alphabet;
    std::string tmp = "/tmp/hvcheck_test_partition.txt";
    {
        std::string body =
            "region (3..16,1..1) (4..15,2..2)\n"
            "class even: parity=0\n"
            "class odd: parity=1\n";
        std::ofstream(tmp) << body;
    }
    Partition p = parse_partition_file(tmp, a);
    CHECK(p.cells.size() == 2);
    CHECK(p.cells[0].label == "even");
    CHECK(p.region.size() == 14 + 12);
}
