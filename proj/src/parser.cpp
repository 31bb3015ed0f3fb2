#include "hvcheck/parser.hpp"

#include <fstream>
#include <sstream>

#include "hvcheck/zoo.hpp"

namespace hvcheck {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// "key=value" -> value
std::string kv(const std::string& tok, const std::string& key, int line) {
    if (tok.rfind(key + "=", 0) != 0)
        throw Error(ErrorCode::ParseError, "expected " + key + "=..., got '" + tok + "'", line);
    return tok.substr(key.size() + 1);
}

int to_int(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw Error(ErrorCode::ParseError, "expected integer, got '" + s + "'", line);
    }
}

// "(x1..x2,t1..t2)" or "(x,t)"
void parse_range(const std::string& tok, int line, std::vector<SitePoint>& out) {
    if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')')
        throw Error(ErrorCode::ParseError, "expected (x..x,t..t), got '" + tok + "'", line);
    std::string body = tok.substr(1, tok.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string::npos)
        throw Error(ErrorCode::ParseError, "expected (x..x,t..t), got '" + tok + "'", line);
    auto parse_span = [&](const std::string& s) -> std::pair<int, int> {
        auto dots = s.find("..");
        if (dots == std::string::npos) {
            int v = to_int(s, line);
            return {v, v};
        }
        return {to_int(s.substr(0, dots), line), to_int(s.substr(dots + 2), line)};
    };
    auto [x1, x2] = parse_span(body.substr(0, comma));
    auto [t1, t2] = parse_span(body.substr(comma + 1));
    for (int t = t1; t <= t2; ++t)
        for (int x = x1; x <= x2; ++x) out.push_back({x, t});
}

Region parse_region_tokens(const std::vector<std::string>& toks, std::size_t from, int line) {
    std::vector<SitePoint> pts;
    for (std::size_t i = from; i < toks.size(); ++i) parse_range(toks[i], line, pts);
    if (pts.empty()) throw Error(ErrorCode::ParseError, "empty region", line);
    return Region(std::move(pts));
}

// "cell(x,t)=sym & cell(x,t)=sym" or "parity=0"
CoarseEvent parse_predicate(const Region& region, const Alphabet& alphabet,
                            const std::string& text, const std::string& label, int line) {
    std::string stripped;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) stripped += c;
    if (stripped.rfind("parity=", 0) == 0)
        return event_parity(region, to_int(stripped.substr(7), line), label);
    CoarseEvent e;
    e.region = region;
    e.desc.kind = EventDesc::Kind::CellValues;
    e.label = label;
    std::size_t pos = 0;
    while (pos < stripped.size()) {
        auto amp = stripped.find('&', pos);
        std::string term = stripped.substr(pos, amp == std::string::npos ? amp : amp - pos);
        if (term.rfind("cell(", 0) != 0)
            throw Error(ErrorCode::ParseError, "expected cell(x,t)=sym, got '" + term + "'", line);
        auto close = term.find(')');
        auto eq = term.find('=', close);
        if (close == std::string::npos || eq == std::string::npos)
            throw Error(ErrorCode::ParseError, "expected cell(x,t)=sym, got '" + term + "'", line);
        std::string coords = term.substr(5, close - 5);
        auto comma = coords.find(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::ParseError, "expected cell(x,t)=sym, got '" + term + "'", line);
        SitePoint p{to_int(coords.substr(0, comma), line), to_int(coords.substr(comma + 1), line)};
        std::string sym = term.substr(eq + 1);
        if (!alphabet.has(sym))
            throw Error(ErrorCode::ParseError, "unknown symbol '" + sym + "'", line);
        e.desc.constraints.push_back({p, {alphabet.index_of(sym)}});
        if (amp == std::string::npos) break;
        pos = amp + 1;
    }
    if (e.desc.constraints.empty())
        throw Error(ErrorCode::ParseError, "empty predicate", line);
    return e;
}

struct WiringDraft {
    std::optional<Region> r_a, r_b, r_cap_a, r_cap_b;
    std::optional<int> t_prep, t, t_prime;
    std::map<int, Region> system_regions;
    std::vector<std::pair<std::string, std::string>> setting_left, setting_right;
    std::vector<std::pair<std::string, std::string>> outcome_left, outcome_right;
    std::vector<int> pred_lines;
};

} // namespace

ParsedModel parse_model_text(const std::string& text, const std::string& name) {
    ParsedModel pm;
    HVTModel& m = pm.model;
    m.name = name;

    bool have_lattice = false, have_alphabet = false, have_law = false;
    bool measure_uniform = false;
    bool in_wiring = false;
    std::optional<WiringDraft> wd;
    std::map<std::size_t, std::vector<std::pair<Sym, Rational>>> stoch_lines;
    std::map<std::size_t, std::pair<Sym, int>> det_lines;
    std::string global_rule_name;
    int global_rule_line = 0;

    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::vector<std::string> toks = split_ws(body);
        if (toks.empty()) continue;
        const std::string& head = toks[0];

        if (head == "lattice") {
            if (toks.size() != 3)
                throw Error(ErrorCode::ParseError, "expected: lattice width=W height=H", line);
            m.lattice = Lattice(to_int(kv(toks[1], "width", line), line),
                                to_int(kv(toks[2], "height", line), line));
            have_lattice = true;
        } else if (head == "alphabet") {
            if (toks.size() < 2)
                throw Error(ErrorCode::ParseError, "alphabet needs at least one symbol", line);
            m.alphabet.symbols.assign(toks.begin() + 1, toks.end());
            have_alphabet = true;
        } else if (head == "law") {
            if (!have_alphabet)
                throw Error(ErrorCode::ParseError, "law must follow the alphabet", line);
            if (toks.size() < 2) throw Error(ErrorCode::ParseError, "law needs a kind", line);
            const std::string& kind = toks[1];
            if (kind == "local-deterministic" || kind == "local-stochastic") {
                if (toks.size() != 3 || kv(toks[2], "radius", line) != "1")
                    throw Error(ErrorCode::ParseError,
                                "expected: law " + kind + " radius=1", line);
                m.law_kind = kind == "local-deterministic" ? LawKind::LocalDeterministic
                                                           : LawKind::LocalStochastic;
            } else if (kind == "global-deterministic") {
                if (toks.size() != 3)
                    throw Error(ErrorCode::ParseError,
                                "expected: law global-deterministic rule=<name>", line);
                global_rule_name = kv(toks[2], "rule", line);
                global_rule_line = line;
                m.law_kind = LawKind::GlobalDeterministic;
            } else if (kind == "predictions-only") {
                m.law_kind = LawKind::PredictionsOnly;
            } else {
                throw Error(ErrorCode::ParseError, "unknown law kind '" + kind + "'", line);
            }
            have_law = true;
        } else if (head == "rule") {
            if (!have_law)
                throw Error(ErrorCode::ParseError, "rule before law", line);
            std::size_t n = m.alphabet.size();
            auto sym_of = [&](const std::string& s) {
                if (!m.alphabet.has(s))
                    throw Error(ErrorCode::ParseError, "unknown symbol '" + s + "'", line);
                return m.alphabet.index_of(s);
            };
            if (m.law_kind == LawKind::LocalDeterministic) {
                if (toks.size() != 6 || toks[4] != "->")
                    throw Error(ErrorCode::ParseError, "expected: rule l c r -> sym", line);
                std::size_t code = (sym_of(toks[1]) * n + sym_of(toks[2])) * n + sym_of(toks[3]);
                if (det_lines.count(code))
                    throw Error(ErrorCode::ValidationError,
                                "duplicate rule for this neighborhood (first at line " +
                                    std::to_string(det_lines[code].second) + ")",
                                line);
                det_lines[code] = {sym_of(toks[5]), line};
            } else if (m.law_kind == LawKind::LocalStochastic) {
                if (toks.size() != 7 || toks[4] != "->")
                    throw Error(ErrorCode::ParseError, "expected: rule l c r -> sym p/q", line);
                std::size_t code = (sym_of(toks[1]) * n + sym_of(toks[2])) * n + sym_of(toks[3]);
                stoch_lines[code].emplace_back(sym_of(toks[5]), Rational::parse(toks[6], line));
            } else {
                throw Error(ErrorCode::ParseError, "rule lines need a local law", line);
            }
        } else if (head == "table") {
            if (!have_law || m.law_kind != LawKind::PredictionsOnly)
                throw Error(ErrorCode::ParseError, "table lines need law predictions-only", line);
            if (toks.size() != 6)
                throw Error(ErrorCode::ParseError,
                            "expected: table a=<0|1> b=<0|1> A=<+1|-1> B=<+1|-1> value", line);
            auto bit = [&](const std::string& tok, const char* key) {
                std::string v = kv(tok, key, line);
                if (v == "0" || v == "+1") return 0;
                if (v == "1" || v == "-1") return 1;
                throw Error(ErrorCode::ParseError, "bad value in '" + tok + "'", line);
            };
            int a = bit(toks[1], "a"), b = bit(toks[2], "b");
            int A = bit(toks[3], "A"), B = bit(toks[4], "B");
            m.predictions.p(a, b, A, B) = QuadVal::parse(toks[5], line);
        } else if (head == "measure") {
            if (!have_lattice || !have_alphabet)
                throw Error(ErrorCode::ParseError, "measure needs lattice and alphabet first", line);
            if (toks.size() == 2 && toks[1] == "uniform") {
                measure_uniform = true;
            } else {
                if (toks.size() != static_cast<std::size_t>(m.lattice.width) + 2)
                    throw Error(ErrorCode::ParseError,
                                "expected " + std::to_string(m.lattice.width) +
                                    " symbols and a weight",
                                line);
                std::vector<Sym> cfg;
                for (int i = 1; i <= m.lattice.width; ++i) {
                    if (!m.alphabet.has(toks[static_cast<std::size_t>(i)]))
                        throw Error(ErrorCode::ParseError,
                                    "unknown symbol '" + toks[static_cast<std::size_t>(i)] + "'",
                                    line);
                    cfg.push_back(m.alphabet.index_of(toks[static_cast<std::size_t>(i)]));
                }
                m.initial_measure.emplace_back(std::move(cfg),
                                               Rational::parse(toks.back(), line));
            }
        } else if (head == "wiring") {
            in_wiring = true;
            wd.emplace();
        } else if (in_wiring && head == "region") {
            if (toks.size() < 2) throw Error(ErrorCode::ParseError, "region needs Rx=(...)", line);
            auto eq = toks[1].find('=');
            if (eq == std::string::npos)
                throw Error(ErrorCode::ParseError, "region needs Rx=(...)", line);
            std::string which = toks[1].substr(0, eq);
            std::vector<std::string> ranges{toks[1].substr(eq + 1)};
            ranges.insert(ranges.end(), toks.begin() + 2, toks.end());
            Region r = parse_region_tokens(ranges, 0, line);
            if (which == "Ra") wd->r_a = r;
            else if (which == "Rb") wd->r_b = r;
            else if (which == "RA") wd->r_cap_a = r;
            else if (which == "RB") wd->r_cap_b = r;
            else
                throw Error(ErrorCode::ParseError, "unknown region '" + which + "'", line);
        } else if (in_wiring && head == "system") {
            if (toks.size() < 3)
                throw Error(ErrorCode::ParseError, "expected: system tau=N (x..x,t..t)", line);
            int tau = to_int(kv(toks[1], "tau", line), line);
            wd->system_regions[tau] = parse_region_tokens(toks, 2, line);
        } else if (in_wiring && (head == "tP" || head.rfind("tP=", 0) == 0 ||
                                 head.rfind("t=", 0) == 0 || head.rfind("tprime=", 0) == 0)) {
            if (head.rfind("tP=", 0) == 0) wd->t_prep = to_int(head.substr(3), line);
            else if (head.rfind("tprime=", 0) == 0) wd->t_prime = to_int(head.substr(7), line);
            else if (head.rfind("t=", 0) == 0) wd->t = to_int(head.substr(2), line);
        } else if (in_wiring && (head == "setting-left" || head == "setting-right" ||
                                 head == "outcome-left" || head == "outcome-right")) {
            auto colon = body.find(':');
            if (colon == std::string::npos || toks.size() < 3)
                throw Error(ErrorCode::ParseError,
                            "expected: " + head + " <label>: <predicate>", line);
            std::string label = toks[1];
            if (!label.empty() && label.back() == ':') label.pop_back();
            std::string pred = body.substr(colon + 1);
            auto& list = head == "setting-left"    ? wd->setting_left
                         : head == "setting-right" ? wd->setting_right
                         : head == "outcome-left"  ? wd->outcome_left
                                                   : wd->outcome_right;
            list.emplace_back(label, pred);
            wd->pred_lines.push_back(line);
        } else {
            throw Error(ErrorCode::ParseError, "unrecognized directive '" + head + "'", line);
        }
    }

    if (!have_lattice && m.law_kind != LawKind::PredictionsOnly)
        throw Error(ErrorCode::ParseError, "missing lattice section", 0);
    if (!have_alphabet) throw Error(ErrorCode::ParseError, "missing alphabet section", 0);
    if (!have_law) throw Error(ErrorCode::ParseError, "missing law section", 0);

    std::size_t n = m.alphabet.size();
    if (m.law_kind == LawKind::LocalDeterministic) {
        m.local_rule.table.assign(n * n * n, 0);
        if (det_lines.size() != n * n * n)
            throw Error(ErrorCode::ValidationError,
                        "deterministic rule table is not total: " +
                            std::to_string(det_lines.size()) + " of " +
                            std::to_string(n * n * n) + " neighborhoods covered");
        for (const auto& [code, val] : det_lines) m.local_rule.table[code] = val.first;
    } else if (m.law_kind == LawKind::LocalStochastic) {
        m.stochastic_rule.table.assign(n * n * n, {});
        if (stoch_lines.size() != n * n * n)
            throw Error(ErrorCode::ValidationError,
                        "stochastic rule table is not total: " +
                            std::to_string(stoch_lines.size()) + " of " +
                            std::to_string(n * n * n) + " neighborhoods covered");
        for (auto& [code, dist] : stoch_lines) m.stochastic_rule.table[code] = std::move(dist);
    } else if (m.law_kind == LawKind::GlobalDeterministic) {
        const GlobalRule* rule = find_global_rule(global_rule_name, m.lattice);
        if (!rule)
            throw Error(ErrorCode::ParseError,
                        "unknown global rule '" + global_rule_name + "'", global_rule_line);
        m.global_rule = *rule;
    }

    if (measure_uniform) {
        if (!m.initial_measure.empty())
            throw Error(ErrorCode::ValidationError,
                        "measure uniform cannot be combined with explicit entries");
        std::size_t count = 1;
        for (int i = 0; i < m.lattice.width; ++i) {
            count *= n;
            if (count > (1u << 20))
                throw Error(ErrorCode::ValidationError,
                            "uniform measure over this alphabet and width is too large");
        }
        Rational w(1, static_cast<std::int64_t>(count));
        std::vector<Sym> cfg(static_cast<std::size_t>(m.lattice.width), 0);
        while (true) {
            m.initial_measure.emplace_back(cfg, w);
            int i = m.lattice.width - 1;
            while (i >= 0) {
                if (++cfg[static_cast<std::size_t>(i)] < n) break;
                cfg[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
        }
    }

    validate_model(m);

    if (wd) {
        if (!wd->r_a || !wd->r_b || !wd->r_cap_a || !wd->r_cap_b)
            throw Error(ErrorCode::ValidationError, "wiring needs Ra, Rb, RA and RB regions");
        if (!wd->t_prep || !wd->t || !wd->t_prime)
            throw Error(ErrorCode::ValidationError, "wiring needs tP=, t= and tprime=");
        BellWiring w;
        w.r_a = *wd->r_a;
        w.r_b = *wd->r_b;
        w.r_cap_a = *wd->r_cap_a;
        w.r_cap_b = *wd->r_cap_b;
        w.t_prep = *wd->t_prep;
        w.t = *wd->t;
        w.t_prime = *wd->t_prime;
        w.system_regions = wd->system_regions;
        auto build = [&](const Region& r,
                         const std::vector<std::pair<std::string, std::string>>& preds,
                         const char* what) {
            if (preds.size() < 2)
                throw Error(ErrorCode::ValidationError,
                            std::string(what) + " needs at least two labelled predicates");
            Partition p;
            p.region = r;
            for (const auto& [label, pred] : preds)
                p.cells.push_back(parse_predicate(r, m.alphabet, pred, label, 0));
            return p;
        };
        w.settings_left = build(w.r_a, wd->setting_left, "setting-left");
        w.settings_right = build(w.r_b, wd->setting_right, "setting-right");
        w.outcomes_left = build(w.r_cap_a, wd->outcome_left, "outcome-left");
        w.outcomes_right = build(w.r_cap_b, wd->outcome_right, "outcome-right");
        validate_wiring(m.lattice, w);
        pm.wiring = std::move(w);
    }
    return pm;
}

ParsedModel parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos)
        stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return parse_model_text(ss.str(), stem);
}

namespace {

std::string region_ranges(const Region& r) {
    // Maximal horizontal runs per time, "(x1..x2,t)" each.
    std::string out;
    const auto& pts = r.points();
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i;
        while (j + 1 < pts.size() && pts[j + 1].t == pts[i].t && pts[j + 1].x == pts[j].x + 1)
            ++j;
        if (!out.empty()) out += " ";
        out += "(" + std::to_string(pts[i].x) + ".." + std::to_string(pts[j].x) + "," +
               std::to_string(pts[i].t) + ".." + std::to_string(pts[i].t) + ")";
        i = j + 1;
    }
    return out;
}

std::string predicate_text(const CoarseEvent& e, const Alphabet& a) {
    if (e.desc.kind == EventDesc::Kind::Parity)
        return "parity=" + std::to_string(e.desc.parity_residue);
    std::string out;
    for (const auto& c : e.desc.constraints) {
        if (c.allowed.size() != 1)
            throw Error(ErrorCode::ValidationError,
                        "only single-symbol constraints serialize to model files");
        if (!out.empty()) out += " & ";
        out += "cell(" + std::to_string(c.point.x) + "," + std::to_string(c.point.t) +
               ")=" + a.name(c.allowed.front());
    }
    return out;
}

} // namespace

std::string write_model_text(const HVTModel& m, const std::optional<BellWiring>& wiring) {
    std::ostringstream os;
    os << "# " << m.name << "\n";
    os << "lattice width=" << m.lattice.width << " height=" << m.lattice.height << "\n";
    os << "alphabet";
    for (const auto& s : m.alphabet.symbols) os << " " << s;
    os << "\n";
    std::size_t n = m.alphabet.size();
    switch (m.law_kind) {
        case LawKind::LocalDeterministic:
            os << "law local-deterministic radius=1\n";
            for (Sym l = 0; l < n; ++l)
                for (Sym c = 0; c < n; ++c)
                    for (Sym r = 0; r < n; ++r)
                        os << "rule " << m.alphabet.name(l) << " " << m.alphabet.name(c) << " "
                           << m.alphabet.name(r) << " -> "
                           << m.alphabet.name(m.local_rule.next(l, c, r, n)) << "\n";
            break;
        case LawKind::LocalStochastic:
            os << "law local-stochastic radius=1\n";
            for (Sym l = 0; l < n; ++l)
                for (Sym c = 0; c < n; ++c)
                    for (Sym r = 0; r < n; ++r)
                        for (const auto& [sym, p] : m.stochastic_rule.dist(l, c, r, n))
                            os << "rule " << m.alphabet.name(l) << " " << m.alphabet.name(c)
                               << " " << m.alphabet.name(r) << " -> " << m.alphabet.name(sym)
                               << " " << p.str() << "\n";
            break;
        case LawKind::GlobalDeterministic:
            os << "law global-deterministic rule=" << m.global_rule.name << "\n";
            break;
        case LawKind::PredictionsOnly:
            os << "law predictions-only\n";
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int A = 0; A < 2; ++A)
                        for (int B = 0; B < 2; ++B)
                            os << "table a=" << a << " b=" << b << " A=" << (A == 0 ? "+1" : "-1")
                               << " B=" << (B == 0 ? "+1" : "-1") << " "
                               << m.predictions.p(a, b, A, B).str() << "\n";
            break;
    }
    for (const auto& [cfg, w] : m.initial_measure) {
        os << "measure";
        for (Sym s : cfg) os << " " << m.alphabet.name(s);
        os << " " << w.str() << "\n";
    }
    if (wiring) {
        os << "wiring\n";
        os << "region Ra=" << region_ranges(wiring->r_a) << "\n";
        os << "region Rb=" << region_ranges(wiring->r_b) << "\n";
        os << "region RA=" << region_ranges(wiring->r_cap_a) << "\n";
        os << "region RB=" << region_ranges(wiring->r_cap_b) << "\n";
        os << "tP=" << wiring->t_prep << "\n";
        os << "t=" << wiring->t << "\n";
        os << "tprime=" << wiring->t_prime << "\n";
        for (const auto& [tau, r] : wiring->system_regions)
            os << "system tau=" << tau << " " << region_ranges(r) << "\n";
        auto emit = [&](const char* head, const Partition& p) {
            for (const auto& c : p.cells)
                os << head << " " << c.label << ": " << predicate_text(c, m.alphabet) << "\n";
        };
        emit("setting-left", wiring->settings_left);
        emit("setting-right", wiring->settings_right);
        emit("outcome-left", wiring->outcomes_left);
        emit("outcome-right", wiring->outcomes_right);
    }
    return os.str();
}

void write_model_file(const std::string& path, const HVTModel& m,
                      const std::optional<BellWiring>& wiring) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::ParseError, "cannot write '" + path + "'");
    out << write_model_text(m, wiring);
}

Partition parse_partition_file(const std::string& path, const Alphabet& alphabet) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    Partition p;
    bool have_region = false;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::vector<std::string> toks = split_ws(body);
        if (toks.empty()) continue;
        if (toks[0] == "region") {
            p.region = parse_region_tokens(toks, 1, line);
            have_region = true;
        } else if (toks[0] == "class") {
            if (!have_region)
                throw Error(ErrorCode::ParseError, "class before region", line);
            auto colon = body.find(':');
            if (colon == std::string::npos || toks.size() < 3)
                throw Error(ErrorCode::ParseError, "expected: class <label>: <predicate>", line);
            std::string label = toks[1];
            if (!label.empty() && label.back() == ':') label.pop_back();
            p.cells.push_back(
                parse_predicate(p.region, alphabet, body.substr(colon + 1), label, line));
        } else {
            throw Error(ErrorCode::ParseError, "unrecognized directive '" + toks[0] + "'", line);
        }
    }
    if (!have_region || p.cells.empty())
        throw Error(ErrorCode::ValidationError, "partition file needs a region and classes");
    return p;
}

} // namespace hvcheck
