#include "hvcheck/report.hpp"

namespace hvcheck {

int Report::exit_code() const {
    if (!error.empty()) return 3;
    switch (verdict.status) {
        case Status::Pass: return 0;
        case Status::Fail: return 1;
        case Status::Vacuous: return 2;
    }
    return 3;
}

namespace {

OJson event_json(const CoarseEvent& e) {
    OJson j;
    j["label"] = e.label;
    j["region"] = e.region.str();
    switch (e.desc.kind) {
        case EventDesc::Kind::All:
            j["kind"] = "all";
            break;
        case EventDesc::Kind::CellValues: {
            j["kind"] = "cell-values";
            OJson cs = OJson::array();
            for (const auto& c : e.desc.constraints) {
                OJson cj;
                cj["cell"] = "(" + std::to_string(c.point.x) + "," + std::to_string(c.point.t) + ")";
                OJson al = OJson::array();
                for (Sym s : c.allowed) al.push_back(static_cast<int>(s));
                cj["allowed"] = al;
                cs.push_back(cj);
            }
            j["constraints"] = cs;
            break;
        }
        case EventDesc::Kind::StateIn: {
            j["kind"] = "state-in";
            OJson ss = OJson::array();
            for (const auto& st : e.desc.states) {
                OJson sj = OJson::array();
                for (Sym s : st) sj.push_back(static_cast<int>(s));
                ss.push_back(sj);
            }
            j["states"] = ss;
            break;
        }
        case EventDesc::Kind::Parity:
            j["kind"] = "parity";
            j["residue"] = e.desc.parity_residue;
            break;
    }
    return j;
}

} // namespace

OJson witness_json(const Witness& w) {
    OJson j;
    j["summary"] = w.summary;
    OJson fields = OJson::object();
    for (const auto& [k, v] : w.fields) fields[k] = v;
    j["fields"] = fields;
    OJson queries = OJson::array();
    for (const auto& q : w.queries) {
        OJson qj;
        OJson lhs = OJson::array();
        for (const auto& e : q.lhs) lhs.push_back(event_json(e));
        OJson given = OJson::array();
        for (const auto& e : q.given) given.push_back(event_json(e));
        qj["lhs"] = lhs;
        qj["given"] = given;
        qj["value"] = q.expect;
        queries.push_back(qj);
    }
    j["queries"] = queries;
    return j;
}

OJson report_json(const Report& r, bool timings) {
    OJson j;
    j["schema"] = 1;
    j["model"] = r.model;
    j["checker"] = r.checker;
    j["lambda"] = r.lambda;
    j["law"] = r.law;
    if (!r.error.empty()) {
        j["error"] = r.error;
    } else {
        j["verdict"] = status_name(r.verdict.status);
        j["checked"] = r.verdict.checked;
        j["skipped"] = r.verdict.skipped;
        j["probs_all_01"] = r.verdict.probs_all_01;
        if (!r.value.empty()) j["value"] = r.value;
        if (!r.abs_value.empty()) j["abs"] = r.abs_value;
        if (r.approx) j["approx"] = true;
        if (!r.bounds.empty()) j["bounds"] = r.bounds;
        if (!r.steps.empty()) {
            OJson steps = OJson::array();
            for (const auto& s : r.steps) {
                OJson sj;
                sj["id"] = s.id;
                sj["verdict"] = status_name(s.verdict.status);
                sj["checked"] = s.verdict.checked;
                sj["skipped"] = s.verdict.skipped;
                if (s.verdict.witness && s.verdict.fail())
                    sj["witness"] = witness_json(*s.verdict.witness);
                steps.push_back(sj);
            }
            j["steps"] = steps;
        }
        if (r.verdict.witness &&
            (r.verdict.fail() || !r.verdict.witness->fields.empty()))
            j["witness"] = witness_json(*r.verdict.witness);
    }
    if (timings) j["wall_ms"] = r.wall_ms;
    return j;
}

namespace {

SitePoint point_from_string(const std::string& s) {
    // "(x,t)"
    auto comma = s.find(',');
    if (s.size() < 5 || s.front() != '(' || s.back() != ')' || comma == std::string::npos)
        throw Error(ErrorCode::ParseError, "malformed point '" + s + "'");
    return SitePoint{std::stoi(s.substr(1, comma - 1)),
                     std::stoi(s.substr(comma + 1, s.size() - comma - 2))};
}

Region region_from_string(const std::string& s) {
    std::vector<SitePoint> pts;
    std::size_t pos = 0;
    while ((pos = s.find('(', pos)) != std::string::npos) {
        auto close = s.find(')', pos);
        pts.push_back(point_from_string(s.substr(pos, close - pos + 1)));
        pos = close + 1;
    }
    return Region(std::move(pts));
}

CoarseEvent event_from_json(const OJson& j) {
    CoarseEvent e;
    e.label = j.at("label").get<std::string>();
    e.region = region_from_string(j.at("region").get<std::string>());
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "all") {
        e.desc.kind = EventDesc::Kind::All;
    } else if (kind == "cell-values") {
        e.desc.kind = EventDesc::Kind::CellValues;
        for (const auto& cj : j.at("constraints")) {
            EventDesc::CellConstraint c;
            c.point = point_from_string(cj.at("cell").get<std::string>());
            for (const auto& v : cj.at("allowed")) c.allowed.push_back(v.get<Sym>());
            e.desc.constraints.push_back(std::move(c));
        }
    } else if (kind == "state-in") {
        e.desc.kind = EventDesc::Kind::StateIn;
        for (const auto& sj : j.at("states")) {
            std::vector<Sym> st;
            for (const auto& v : sj) st.push_back(v.get<Sym>());
            e.desc.states.push_back(std::move(st));
        }
    } else if (kind == "parity") {
        e.desc.kind = EventDesc::Kind::Parity;
        e.desc.parity_residue = j.at("residue").get<int>();
    } else {
        throw Error(ErrorCode::ParseError, "unknown event kind '" + kind + "'");
    }
    return e;
}

Witness witness_from_json(const OJson& j) {
    Witness w;
    w.summary = j.at("summary").get<std::string>();
    for (const auto& [k, v] : j.at("fields").items())
        w.fields.emplace_back(k, v.get<std::string>());
    for (const auto& qj : j.at("queries")) {
        CondQuery q;
        for (const auto& ej : qj.at("lhs")) q.lhs.push_back(event_from_json(ej));
        for (const auto& ej : qj.at("given")) q.given.push_back(event_from_json(ej));
        q.expect = qj.at("value").get<std::string>();
        w.queries.push_back(std::move(q));
    }
    return w;
}

Status status_from_string(const std::string& s) {
    if (s == "pass") return Status::Pass;
    if (s == "fail") return Status::Fail;
    if (s == "vacuous") return Status::Vacuous;
    throw Error(ErrorCode::ParseError, "unknown verdict '" + s + "'");
}

} // namespace

Report report_from_json(const OJson& j) {
    if (j.value("schema", 0) != 1)
        throw Error(ErrorCode::ParseError, "unsupported report schema");
    Report r;
    r.model = j.at("model").get<std::string>();
    r.checker = j.at("checker").get<std::string>();
    r.lambda = j.at("lambda").get<std::string>();
    r.law = j.at("law").get<std::string>();
    if (j.contains("error")) {
        r.error = j.at("error").get<std::string>();
        return r;
    }
    r.verdict.status = status_from_string(j.at("verdict").get<std::string>());
    r.verdict.checked = j.at("checked").get<std::size_t>();
    r.verdict.skipped = j.at("skipped").get<std::size_t>();
    r.verdict.probs_all_01 = j.at("probs_all_01").get<bool>();
    if (j.contains("value")) r.value = j.at("value").get<std::string>();
    if (j.contains("abs")) r.abs_value = j.at("abs").get<std::string>();
    r.approx = j.value("approx", false);
    if (j.contains("bounds")) r.bounds = j.at("bounds").get<std::string>();
    if (j.contains("steps")) {
        for (const auto& sj : j.at("steps")) {
            StepResult s;
            s.id = sj.at("id").get<std::string>();
            s.verdict.status = status_from_string(sj.at("verdict").get<std::string>());
            s.verdict.checked = sj.at("checked").get<std::size_t>();
            s.verdict.skipped = sj.at("skipped").get<std::size_t>();
            if (sj.contains("witness")) s.verdict.witness = witness_from_json(sj.at("witness"));
            r.steps.push_back(std::move(s));
        }
    }
    if (j.contains("witness")) r.verdict.witness = witness_from_json(j.at("witness"));
    if (j.contains("wall_ms")) r.wall_ms = j.at("wall_ms").get<long long>();
    return r;
}

std::string report_human(const Report& r) {
    std::string line = r.model + "  " + r.checker;
    if (r.lambda != "-") line += " [" + r.lambda + "]";
    line += ": ";
    if (!r.error.empty()) {
        line += "error(" + r.error + ")";
        return line;
    }
    line += status_name(r.verdict.status);
    if (!r.value.empty()) line += " value=" + r.value;
    if (!r.abs_value.empty()) line += " abs=" + r.abs_value;
    line += " checked=" + std::to_string(r.verdict.checked);
    if (r.verdict.skipped) line += " skipped=" + std::to_string(r.verdict.skipped);
    if (r.verdict.fail() && r.verdict.witness) line += "  <- " + r.verdict.witness->summary;
    return line;
}

bool reverify_witness(const ProbSpace& space, const BellWiring* wiring, const Witness& w) {
    if (w.queries.empty()) return false;
    const ProbSpace conditioned = wiring ? condition_on_experiment(space, *wiring) : space;
    for (const auto& q : w.queries) {
        try {
            Rational p = conditioned.cond_prob(q.lhs, q.given);
            if (p.str() != q.expect) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

} // namespace hvcheck
