#include "hvcheck/probability.hpp"

#include <algorithm>
#include <map>

namespace hvcheck {

bool CoarseEvent::matches(const RegionState& rs) const {
    switch (desc.kind) {
        case EventDesc::Kind::All:
            return true;
        case EventDesc::Kind::CellValues:
            for (const auto& c : desc.constraints) {
                auto it = std::lower_bound(rs.region.points().begin(), rs.region.points().end(),
                                           c.point);
                if (it == rs.region.points().end() || !(*it == c.point)) return false;
                Sym v = rs.values[static_cast<std::size_t>(it - rs.region.points().begin())];
                if (std::find(c.allowed.begin(), c.allowed.end(), v) == c.allowed.end())
                    return false;
            }
            return true;
        case EventDesc::Kind::StateIn:
            for (const auto& s : desc.states)
                if (s == rs.values) return true;
            return false;
        case EventDesc::Kind::Parity: {
            int sum = 0;
            for (Sym v : rs.values) sum += v;
            return sum % 2 == desc.parity_residue;
        }
    }
    return false;
}

CoarseEvent event_all(const Region& r, std::string label) {
    CoarseEvent e;
    e.region = r;
    e.desc.kind = EventDesc::Kind::All;
    e.label = std::move(label);
    return e;
}

CoarseEvent event_cell_value(const Region& r, SitePoint p, Sym value, std::string label) {
    CoarseEvent e;
    e.region = r;
    e.desc.kind = EventDesc::Kind::CellValues;
    e.desc.constraints.push_back({p, {value}});
    e.label = std::move(label);
    return e;
}

CoarseEvent event_state(const RegionState& rs, std::string label) {
    CoarseEvent e;
    e.region = rs.region;
    e.desc.kind = EventDesc::Kind::StateIn;
    e.desc.states.push_back(rs.values);
    e.label = std::move(label);
    return e;
}

CoarseEvent event_state_union(const Region& r, std::vector<std::vector<Sym>> states,
                              std::string label) {
    CoarseEvent e;
    e.region = r;
    e.desc.kind = EventDesc::Kind::StateIn;
    e.desc.states = std::move(states);
    e.label = std::move(label);
    return e;
}

CoarseEvent event_parity(const Region& r, int residue, std::string label) {
    CoarseEvent e;
    e.region = r;
    e.desc.kind = EventDesc::Kind::Parity;
    e.desc.parity_residue = residue;
    e.label = std::move(label);
    return e;
}

ProbSpace::ProbSpace(Lattice lattice, Alphabet alphabet, std::vector<Solution> solutions)
    : lattice_(lattice), alphabet_(std::move(alphabet)), solutions_(std::move(solutions)) {
    Rational total;
    for (const auto& s : solutions_) {
        if (s.weight.sign() < 0)
            throw Error(ErrorCode::ValidationError, "negative solution weight");
        total += s.weight;
    }
    if (!total.is_one())
        throw Error(ErrorCode::ValidationError, "solution weights must sum to exactly 1");
}

ProbSpace ProbSpace::from_model(const HVTModel& m, std::size_t budget) {
    return ProbSpace(m.lattice, m.alphabet, enumerate_solutions(m, budget));
}

ProbSpace ProbSpace::from_enumerated(const EnumeratedModel& em) {
    return ProbSpace(em.model.lattice, em.model.alphabet, em.solutions);
}

bool ProbSpace::sat(const Solution& s, const CoarseEvent& e) const {
    return e.matches(restrict_to(s, e.region, lattice_));
}

bool ProbSpace::sat_all(const Solution& s, std::span<const CoarseEvent> es) const {
    for (const auto& e : es)
        if (!sat(s, e)) return false;
    return true;
}

Rational ProbSpace::prob(const CoarseEvent& e) const {
    Rational w;
    for (const auto& s : solutions_)
        if (sat(s, e)) w += s.weight;
    return w;
}

Rational ProbSpace::prob_all(std::span<const CoarseEvent> es) const {
    Rational w;
    for (const auto& s : solutions_)
        if (sat_all(s, es)) w += s.weight;
    return w;
}

Rational ProbSpace::cond_prob(std::span<const CoarseEvent> lhs,
                              std::span<const CoarseEvent> given) const {
    Rational w_given, w_both;
    for (const auto& s : solutions_) {
        if (!sat_all(s, given)) continue;
        w_given += s.weight;
        if (sat_all(s, lhs)) w_both += s.weight;
    }
    if (w_given.is_zero())
        throw Error(ErrorCode::NullCondition, "conditioning event has probability zero");
    return w_both / w_given;
}

Rational ProbSpace::cond_prob(const CoarseEvent& lhs, const CoarseEvent& given) const {
    return cond_prob(std::span<const CoarseEvent>(&lhs, 1),
                     std::span<const CoarseEvent>(&given, 1));
}

ProbSpace ProbSpace::conditioned(std::span<const CoarseEvent> given) const {
    Rational w_given;
    std::vector<Solution> kept;
    for (const auto& s : solutions_)
        if (sat_all(s, given)) {
            kept.push_back(s);
            w_given += s.weight;
        }
    if (w_given.is_zero())
        throw Error(ErrorCode::NullCondition, "conditioning event has probability zero");
    for (auto& s : kept) s.weight /= w_given;
    return ProbSpace(lattice_, alphabet_, std::move(kept));
}

std::vector<RegionState> ProbSpace::realized_states(const Region& r) const {
    std::map<std::vector<Sym>, bool> seen;
    for (const auto& s : solutions_) {
        std::vector<Sym> v;
        v.reserve(r.size());
        for (const auto& p : r.points()) v.push_back(s.values[lattice_.point_index(p)]);
        seen.emplace(std::move(v), true);
    }
    std::vector<RegionState> out;
    for (const auto& [values, _] : seen) out.push_back(RegionState{r, values});
    return out;
}

bool independent(const ProbSpace& space, const CoarseEvent& e, const CoarseEvent& f) {
    std::vector<CoarseEvent> both{e, f};
    return space.prob_all(both) == space.prob(e) * space.prob(f);
}

Verdict check_bridge_principle(const ProbSpace& space, const RegionState& lambda_ri,
                               const RegionState& lambda_rf) {
    CoarseEvent ei = event_state(lambda_ri, "initial");
    CoarseEvent ef = event_state(lambda_rf, "final");
    Rational p_i = space.prob(ei);
    if (p_i.is_zero())
        throw Error(ErrorCode::NullCondition, "conditioning state has probability zero");

    bool all = true, none = true;
    for (const auto& s : space.solutions()) {
        if (!space.sat(s, ei)) continue;
        if (space.sat(s, ef))
            none = false;
        else
            all = false;
    }
    Rational p = space.cond_prob(ef, ei);
    Witness w;
    w.fields = {{"cond_prob", p.str()},
                {"all_compatible", all ? "true" : "false"},
                {"none_compatible", none ? "true" : "false"}};
    w.queries.push_back(CondQuery{{ef}, {ei}, p.str()});
    if (all && !p.is_one()) {
        w.summary = "determination without conditional probability 1";
        return verdict_fail(std::move(w), 1);
    }
    if (none && !p.is_zero()) {
        w.summary = "exclusion without conditional probability 0";
        return verdict_fail(std::move(w), 1);
    }
    Verdict v = verdict_pass(1);
    v.witness = std::move(w); // informational: carries the evaluated probability
    v.probs_all_01 = p.is_zero() || p.is_one();
    return v;
}

Verdict coarse_union_independence_check(const ProbSpace& space, const CoarseEvent& x,
                                        const CoarseEvent& x_prime, const CoarseEvent& y) {
    // Disjointness at the level of solutions.
    for (const auto& s : space.solutions())
        if (space.sat(s, x) && space.sat(s, x_prime))
            throw Error(ErrorCode::PreconditionFailed, "events are not disjoint");
    if (!independent(space, x, y) || !independent(space, x_prime, y))
        throw Error(ErrorCode::PreconditionFailed, "events are not independent of Y");

    Rational px = space.prob(x), pxp = space.prob(x_prime), py = space.prob(y);
    std::vector<CoarseEvent> xy{x, y}, xpy{x_prime, y};
    Rational p_union_y = space.prob_all(xy) + space.prob_all(xpy);
    Rational p_union = px + pxp;
    if (p_union_y == p_union * py) return verdict_pass(1);
    Witness w;
    w.summary = "union of disjoint independent events lost independence";
    w.fields = {{"P(X u X', Y)", p_union_y.str()},
                {"P(X u X')*P(Y)", (p_union * py).str()}};
    return verdict_fail(std::move(w), 1);
}

void validate_partition(const ProbSpace& space, const Partition& p) {
    for (const auto& c : p.cells)
        if (!(c.region == p.region))
            throw Error(ErrorCode::ValidationError, "partition cells must share one region");
    for (const auto& rs : space.realized_states(p.region)) {
        int hits = 0;
        for (const auto& c : p.cells)
            if (c.matches(rs)) ++hits;
        if (hits == 0)
            throw Error(ErrorCode::ValidationError,
                        "partition does not cover realized state " + rs.str(space.alphabet()));
        if (hits > 1)
            throw Error(ErrorCode::ValidationError,
                        "partition cells overlap on state " + rs.str(space.alphabet()));
    }
}

} // namespace hvcheck
