#include "charp/scenario.hpp"

#include <fstream>

namespace charp {

// ---- parsing ----

static Error bad(const std::string& what) { return Error(ErrKind::BadInput, what); }

Poly poly_from_json(const Json& j, size_t nvars, const Modulus& mod) {
    if (!j.is_array()) throw bad("polynomial must be an array of terms");
    Poly p;
    for (const auto& term : j) {
        if (!term.contains("c") || !term.contains("e")) throw bad("term needs \"c\" and \"e\"");
        Exponents e = term["e"].get<Exponents>();
        if (e.size() != nvars) throw bad("exponent vector length mismatch");
        for (int v : e)
            if (v < 0) throw bad("negative exponent in polynomial");
        int64_t c = ((term["c"].get<int64_t>() % mod.m()) + mod.m()) % mod.m();
        if (c != 0) p[e] = (p.count(e) ? (p[e] + c) % mod.m() : c);
        if (p.count(e) && p[e] == 0) p.erase(e);
    }
    return p;
}

Json poly_to_json(const Poly& p) {
    Json out = Json::array();
    for (const auto& [e, c] : p) out.push_back({{"c", c}, {"e", e}});
    return out;
}

RingElem elem_from_json(const Json& j, const RingPtr& ring, const Modulus& mod) {
    if (!j.is_object() || !j.contains("num")) throw bad("element needs \"num\"");
    Poly num = poly_from_json(j["num"], ring->nvars(), mod);
    std::vector<int> den(ring->inverted.size(), 0);
    if (j.contains("den")) {
        den = j["den"].get<std::vector<int>>();
        if (den.size() != ring->inverted.size()) throw bad("\"den\" length mismatch");
        for (int d : den)
            if (d < 0) throw bad("negative denominator exponent");
    }
    return RingElem(ring, mod, std::move(num), std::move(den));
}

Json elem_to_json(const RingElem& e) {
    return {{"num", poly_to_json(e.num())}, {"den", e.den()}};
}

RingPtr ring_from_json(const Json& j, const Modulus& mod) {
    if (!j.is_object() || !j.contains("vars")) throw bad("ring needs \"vars\"");
    std::vector<VarInfo> vars;
    for (const auto& v : j["vars"])
        vars.push_back({v.at("name").get<std::string>(), v.value("log", false)});
    std::vector<Poly> inverted;
    Modulus w2 = Modulus::w2(mod.p);
    if (j.contains("inverted"))
        for (const auto& q : j["inverted"])
            inverted.push_back(poly_from_json(q, vars.size(), w2));
    return RingDescriptor::make(std::move(vars), std::move(inverted));
}

Json ring_to_json(const RingPtr& r) {
    Json vars = Json::array();
    for (const auto& v : r->vars) vars.push_back({{"name", v.name}, {"log", v.is_log}});
    Json inverted = Json::array();
    for (const auto& q : r->inverted) inverted.push_back(poly_to_json(q));
    return {{"vars", vars}, {"inverted", inverted}};
}

RingHom hom_from_json(const Json& j, const RingPtr& src, const RingPtr& tgt,
                      const Modulus& mod) {
    if (!j.is_object()) throw bad("hom must map variable names to elements");
    std::vector<RingElem> images;
    for (const auto& v : src->vars) {
        if (!j.contains(v.name)) throw bad("hom missing image of variable " + v.name);
        images.push_back(elem_from_json(j[v.name], tgt, mod));
    }
    return RingHom(src, tgt, mod, std::move(images));
}

Json hom_to_json(const RingHom& h) {
    Json out = Json::object();
    for (size_t v = 0; v < h.source()->nvars(); ++v)
        out[h.source()->vars[v].name] = elem_to_json(h.image(v));
    return out;
}

std::shared_ptr<Covering> covering_from_json(const Json& j, int p) {
    auto cov = std::make_shared<Covering>();
    cov->mod = Modulus::w2(p);
    for (const auto& c : j.at("charts")) cov->charts.push_back(ring_from_json(c, cov->mod));
    auto parse_side = [&](const Json& o, const char* restrict_key, const char* frac_key,
                          size_t chart, const RingPtr& oring) {
        OverlapSide s;
        s.rho = hom_from_json(o.at(restrict_key), cov->charts[chart], oring, cov->mod);
        const Json& frac = o.at(frac_key);
        for (const auto& v : oring->vars) {
            const Json& f = frac.at(v.name);
            s.num.push_back(elem_from_json(f.at("num"), cov->charts[chart], cov->mod));
            s.den.push_back(elem_from_json(f.at("den"), cov->charts[chart], cov->mod));
        }
        return s;
    };
    if (j.contains("overlaps"))
        for (const auto& o : j["overlaps"]) {
            Overlap ov;
            ov.i = o.at("pair")[0].get<size_t>();
            ov.j = o.at("pair")[1].get<size_t>();
            if (ov.j >= cov->charts.size() || ov.i >= ov.j) throw bad("bad overlap pair");
            ov.ring = ring_from_json(o.at("ring"), cov->mod);
            ov.side_i = parse_side(o, "restrict_i", "frac_i", ov.i, ov.ring);
            ov.side_j = parse_side(o, "restrict_j", "frac_j", ov.j, ov.ring);
            cov->overlaps.push_back(std::move(ov));
        }
    if (j.contains("triples"))
        for (const auto& t : j["triples"]) {
            TripleOverlap tr;
            tr.i = t.at("trio")[0].get<size_t>();
            tr.j = t.at("trio")[1].get<size_t>();
            tr.k = t.at("trio")[2].get<size_t>();
            tr.ring = ring_from_json(t.at("ring"), cov->mod);
            tr.from_ij = hom_from_json(t.at("from_ij"),
                                       cov->overlap(tr.i, tr.j).ring, tr.ring, cov->mod);
            tr.from_jk = hom_from_json(t.at("from_jk"),
                                       cov->overlap(tr.j, tr.k).ring, tr.ring, cov->mod);
            tr.from_ik = hom_from_json(t.at("from_ik"),
                                       cov->overlap(tr.i, tr.k).ring, tr.ring, cov->mod);
            cov->triples.push_back(std::move(tr));
        }
    return cov;
}

static Json side_to_json(const OverlapSide& s, const RingPtr& oring) {
    Json frac = Json::object();
    for (size_t v = 0; v < oring->nvars(); ++v)
        frac[oring->vars[v].name] = {{"num", elem_to_json(s.num[v])},
                                     {"den", elem_to_json(s.den[v])}};
    return frac;
}

Json covering_to_json(const Covering& cov) {
    Json charts = Json::array();
    for (const auto& c : cov.charts) charts.push_back(ring_to_json(c));
    Json overlaps = Json::array();
    for (const auto& o : cov.overlaps)
        overlaps.push_back({{"pair", {o.i, o.j}},
                            {"ring", ring_to_json(o.ring)},
                            {"restrict_i", hom_to_json(o.side_i.rho)},
                            {"restrict_j", hom_to_json(o.side_j.rho)},
                            {"frac_i", side_to_json(o.side_i, o.ring)},
                            {"frac_j", side_to_json(o.side_j, o.ring)}});
    Json triples = Json::array();
    for (const auto& t : cov.triples)
        triples.push_back({{"trio", {t.i, t.j, t.k}},
                           {"ring", ring_to_json(t.ring)},
                           {"from_ij", hom_to_json(t.from_ij)},
                           {"from_jk", hom_to_json(t.from_jk)},
                           {"from_ik", hom_to_json(t.from_ik)}});
    return {{"charts", charts}, {"overlaps", overlaps}, {"triples", triples}};
}

static MatE matrix_from_json(const Json& j, const RingPtr& ring, const Modulus& mod) {
    size_t rows = j.size();
    size_t cols = rows ? j[0].size() : 0;
    MatE m(rows, cols, ring, mod);
    for (size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw bad("ragged matrix");
        for (size_t k = 0; k < cols; ++k) m.at(i, k) = elem_from_json(j[i][k], ring, mod);
    }
    return m;
}

static Json matrix_to_json(const MatE& m) {
    Json out = Json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (size_t k = 0; k < m.cols(); ++k) row.push_back(elem_to_json(m.at(i, k)));
        out.push_back(std::move(row));
    }
    return out;
}

static GluedHiggsBundle higgs_from_json(const Json& j, const Covering* cov, int p) {
    GluedHiggsBundle e;
    e.cov = cov;
    e.mod = Modulus::fp(p);
    e.rank = j.at("rank").get<size_t>();
    const Json& locals = j.at("locals");
    if (locals.size() != cov->nchart()) throw bad("one Higgs local per chart required");
    for (size_t i = 0; i < cov->nchart(); ++i) {
        HiggsLocal h;
        h.ring = cov->charts[i];
        h.mod = e.mod;
        h.rank = e.rank;
        if (locals[i].size() != h.ring->nvars()) throw bad("one component matrix per variable");
        for (const auto& comp : locals[i]) h.theta.push_back(matrix_from_json(comp, h.ring, e.mod));
        e.locals.push_back(std::move(h));
    }
    const Json& trans = j.at("transitions");
    if (trans.size() != cov->overlaps.size()) throw bad("one transition per overlap required");
    for (size_t oi = 0; oi < trans.size(); ++oi)
        e.transitions.push_back(matrix_from_json(trans[oi], cov->overlaps[oi].ring, e.mod));
    return e;
}

static Json higgs_to_json(const GluedHiggsBundle& e) {
    Json locals = Json::array();
    for (const auto& h : e.locals) {
        Json comps = Json::array();
        for (const auto& t : h.theta) comps.push_back(matrix_to_json(t));
        locals.push_back(std::move(comps));
    }
    Json trans = Json::array();
    for (const auto& t : e.transitions) trans.push_back(matrix_to_json(t));
    return {{"rank", e.rank}, {"locals", locals}, {"transitions", trans}};
}

Scenario scenario_from_json(const Json& j) {
    Scenario s;
    s.name = j.value("name", "unnamed");
    s.prime = j.at("prime").get<int>();
    if (!is_small_odd_prime(s.prime)) throw bad("prime must be an odd prime in [3,31]");
    s.r = j.value("r", 1);
    s.X = covering_from_json(j.at("X"), s.prime);
    s.Y = covering_from_json(j.at("Y"), s.prime);
    Modulus w2 = Modulus::w2(s.prime);
    s.lifts.X = s.X.get();
    s.lifts.Y = s.Y.get();
    const Json& lifts = j.at("lifts");
    for (size_t i = 0; i < s.X->nchart(); ++i) {
        s.lifts.FX.push_back(hom_from_json(lifts.at("FX")[i], s.X->charts[i], s.X->charts[i], w2));
        s.lifts.FY.push_back(hom_from_json(lifts.at("FY")[i], s.Y->charts[i], s.Y->charts[i], w2));
        s.lifts.f.push_back(hom_from_json(lifts.at("f")[i], s.X->charts[i], s.Y->charts[i], w2));
    }
    if (j.contains("f"))
        for (size_t i = 0; i < s.X->nchart(); ++i) {
            RingHom f1 = hom_from_json(j["f"][i], s.X->charts[i], s.Y->charts[i],
                                       Modulus::fp(s.prime));
            if (!(f1 == s.lifts.f1(i)))
                throw bad("\"f\" disagrees with the reduction of lifts.f on chart " +
                          std::to_string(i));
        }
    s.higgs = higgs_from_json(j.at("higgs"), s.X.get(), s.prime);
    if (j.contains("higgs2"))
        s.higgs2 = higgs_from_json(j["higgs2"], s.X.get(), s.prime);
    if (j.contains("tau")) {
        DerivationCochain tau;
        const Json& arr = j["tau"];
        if (arr.size() != s.X->overlaps.size()) throw bad("one tau entry per overlap required");
        for (size_t oi = 0; oi < arr.size(); ++oi) {
            TwistedDerivation d = TwistedDerivation::zero(s.lifts.f1_overlap(oi));
            const RingPtr& xo = s.X->overlaps[oi].ring;
            const RingPtr& yo = s.Y->overlaps[oi].ring;
            for (size_t v = 0; v < xo->nvars(); ++v)
                d.values[v] = elem_from_json(arr[oi].at(xo->vars[v].name), yo,
                                             Modulus::fp(s.prime));
            tau.entries.push_back(std::move(d));
        }
        s.tau_override = std::move(tau);
    }
    if (j.contains("checks")) s.checks = j["checks"].get<std::vector<std::string>>();
    return s;
}

Json scenario_to_json(const Scenario& s) {
    Json lifts = {{"FX", Json::array()}, {"FY", Json::array()}, {"f", Json::array()}};
    for (size_t i = 0; i < s.lifts.FX.size(); ++i) {
        lifts["FX"].push_back(hom_to_json(s.lifts.FX[i]));
        lifts["FY"].push_back(hom_to_json(s.lifts.FY[i]));
        lifts["f"].push_back(hom_to_json(s.lifts.f[i]));
    }
    Json out = {{"name", s.name},
                {"prime", s.prime},
                {"r", s.r},
                {"X", covering_to_json(*s.X)},
                {"Y", covering_to_json(*s.Y)},
                {"lifts", lifts},
                {"higgs", higgs_to_json(s.higgs)},
                {"checks", s.checks}};
    if (s.higgs2) out["higgs2"] = higgs_to_json(*s.higgs2);
    if (s.tau_override) {
        Json arr = Json::array();
        for (size_t oi = 0; oi < s.tau_override->entries.size(); ++oi) {
            const TwistedDerivation& d = s.tau_override->entries[oi];
            Json entry = Json::object();
            const RingPtr& xo = s.X->overlaps[oi].ring;
            for (size_t v = 0; v < xo->nvars(); ++v)
                entry[xo->vars[v].name] = elem_to_json(d.values[v]);
            arr.push_back(std::move(entry));
        }
        out["tau"] = arr;
    }
    return out;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bad("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw bad("JSON parse error in " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

// ---- validation ----

void Scenario::validate() const {
    X->validate();
    Y->validate();
    for (size_t i = 0; i < X->nchart(); ++i)
        if (r > prime - 1)
            throw Error(ErrKind::ExponentTooLarge,
                        "chart " + std::to_string(i) + ": truncation order r = " +
                            std::to_string(r) + " needs r <= p-1 = " + std::to_string(prime - 1));
    std::string why;
    if (!frobenius_lift_check(*X, lifts.FX, &why))
        throw Error(ErrKind::NotAFrobeniusLift, "FX: " + why);
    if (!frobenius_lift_check(*Y, lifts.FY, &why))
        throw Error(ErrKind::NotAFrobeniusLift, "FY: " + why);
    lifts.validate();
    higgs.validate();
    if (higgs2) higgs2->validate();
    if (tau_override) {
        std::string where;
        if (!check_cocycle(*tau_override, *Y, &where))
            throw Error(ErrKind::CocycleFailure, "tau fails the cocycle relation on " + where);
    }
}

// ---- execution ----

static const std::vector<std::pair<std::string, std::string>>& check_statements() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"lemma32", "Lemma 3.2: gauge equivalence across Frobenius lifts"},
        {"lemma33", "Lemma 3.3: coboundary of nu splits into obstruction terms"},
        {"descent", "Section 3 descent square on transitions"},
        {"theorem", "Theorem 1.1 / Corollary 1.2: C_Y^{-1} f-circle E isomorphic to f* C_X^{-1} E"},
        {"tp-compare", "Prop 2.4: the twisted pullback constructions agree"},
        {"tensor", "Prop 2.5(iii): tensor compatibility of the twisted pullback"},
        {"prop28", "Prop 2.8 + Lemma 2.6: F^r vs E^r and the symmetric-power filtration"},
        {"exp-inverse", "exp(A) exp(-A) = 1 for nilpotent A"},
        {"exp-additive", "exp(A+B) = exp(A) exp(B) for commuting nilpotents"},
        {"assumption-gate", "Assumption 2.1: r >= p rejected"},
        {"roundtrip", "Lemma 2.2: Higgs <-> A_r-module round-trip"},
    };
    return table;
}

static std::string statement_for(const std::string& name) {
    for (const auto& [n, s] : check_statements())
        if (n == name) return s;
    return "unknown check";
}

// Deterministic second Frobenius lift for the Lemma 3.2 check: multiply log
// images by (1 + p x_v), shift others by p x_v^2.
static RingHom perturb_lift(const RingHom& lift) {
    const RingPtr& ring = lift.source();
    Modulus mod = lift.mod();
    int p = mod.p;
    std::vector<RingElem> images;
    for (size_t v = 0; v < ring->nvars(); ++v) {
        RingElem x = RingElem::var(ring, mod, v);
        if (ring->vars[v].is_log)
            images.push_back(lift.image(v) *
                             (RingElem::constant(ring, mod, 1) + x.scale(p)));
        else
            images.push_back(lift.image(v) + (x * x).scale(p));
    }
    return RingHom(ring, ring, mod, std::move(images));
}

static CheckResult run_check(const Scenario& s, const std::string& name, int degree_cap) {
    CheckResult res;
    res.name = name;
    res.detail = "";
    PullbackContext ctx = context_from_lifts(s.lifts, s.r);
    if (s.tau_override) ctx.tau = *s.tau_override;
    if (name == "lemma32") {
        bool ok = true;
        std::string why;
        for (size_t i = 0; i < s.X->nchart() && ok; ++i)
            ok = verify_lemma32(s.higgs.locals[i], s.lifts.FX[i], perturb_lift(s.lifts.FX[i]),
                                &why);
        GluedHiggsBundle fe = plain_pullback(s.higgs, ctx);
        for (size_t i = 0; i < s.Y->nchart() && ok; ++i)
            ok = verify_lemma32(fe.locals[i], s.lifts.FY[i], perturb_lift(s.lifts.FY[i]), &why);
        res.ok = ok;
        res.detail = ok ? "all charts of X and Y" : why;
    } else if (name == "lemma33") {
        std::string why;
        res.ok = verify_lemma33(s.lifts, &why);
        res.detail = res.ok ? "cochain identity on every overlap" : why;
    } else if (name == "descent") {
        DescentSquare sq = verify_descent(s.lifts, s.higgs, s.r);
        res.ok = sq.transitions_match && sq.ok;
        res.detail = res.ok ? "a_ij matches C_Y^{-1}(tp2) and the square commutes" : sq.why;
    } else if (name == "theorem") {
        DescentSquare sq = verify_theorem(s.lifts, s.higgs, s.r);
        res.ok = sq.ok;
        res.detail = res.ok ? "witnessed isomorphism of flat bundles" : sq.why;
    } else if (name == "tp-compare") {
        GluedHiggsBundle a = tp1(s.higgs, ctx);
        GluedHiggsBundle b = tp2(s.higgs, ctx);
        std::vector<MatE> id;
        for (size_t i = 0; i < s.Y->nchart(); ++i)
            id.push_back(MatE::identity(a.rank, s.Y->charts[i], a.mod));
        std::string why;
        bool ok = bundle_iso_check(a, b, id, &why);
        bool curve = true;
        for (const auto& c : s.X->charts)
            if (c->nvars() != 1) curve = false;
        if (ok && curve) {
            GluedHiggsBundle c = tp3(s.higgs, ctx);
            ok = bundle_iso_check(a, c, id, &why);
            if (ok) res.detail = "tp1 = tp2 = tp3 through the identity witness";
        } else if (ok) {
            res.detail = "tp1 = tp2 through the identity witness";
        }
        res.ok = ok;
        if (!ok) res.detail = why;
    } else if (name == "tensor") {
        if (!s.higgs2) {
            res.ok = false;
            res.detail = "scenario provides no second Higgs bundle";
        } else {
            std::string why;
            res.ok = check_tensor_compat(s.higgs, *s.higgs2, ctx, &why);
            res.detail = res.ok ? "tp2(E1 (x) E2) = tp2(E1) (x) tp2(E2)" : why;
        }
    } else if (name == "prop28") {
        int cap = degree_cap > 0 ? degree_cap : 2 * s.prime;
        bool ok = true;
        std::string detail;
        for (int rr = 1; rr <= 2 && ok; ++rr) {
            PullbackContext c = ctx;
            c.r = rr;
            Prop28Report rep = prop28_report(c, rr, cap);
            bool expect = rr <= 1;
            if (rep.iso_found != expect) {
                ok = false;
                detail = "r=" + std::to_string(rr) + ": " + rep.note;
                break;
            }
            FiltrationReport fr = sym_filtration(c, rr);
            if (!fr.ok) {
                ok = false;
                detail = "r=" + std::to_string(rr) + " filtration: " + fr.text;
                break;
            }
            detail += "r=" + std::to_string(rr) + (expect ? ": iso found; " : ": no iso (cap " +
                                                                  std::to_string(cap) + "); ");
        }
        res.ok = ok;
        res.detail = detail;
    } else {
        throw bad("unknown check \"" + name + "\"");
    }
    return res;
}

ScenarioReport run_scenario(const Scenario& s, const std::vector<std::string>& only,
                            int degree_cap) {
    s.validate();
    ScenarioReport rep;
    rep.scenario = s.name;
    const std::vector<std::string>& todo = only.empty() ? s.checks : only;
    for (const auto& name : todo) {
        CheckResult res;
        try {
            res = run_check(s, name, degree_cap);
        } catch (const Error& e) {
            if (e.kind() == ErrKind::BadInput && std::string(e.what()).find("unknown check") == 0)
                throw;
            res.name = name;
            res.ok = false;
            res.detail = std::string(errkind_name(e.kind())) + ": " + e.what();
        }
        rep.ok = rep.ok && res.ok;
        rep.checks.push_back(std::move(res));
    }
    return rep;
}

Json report_to_json(const ScenarioReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"statement", statement_for(c.name)},
                          {"name", c.name},
                          {"result", c.ok},
                          {"detail", c.detail}});
    return {{"scenario", r.scenario}, {"result", r.ok}, {"checks", checks}};
}

std::string report_to_text(const ScenarioReport& r) {
    std::string out = "scenario " + r.scenario + "\n";
    for (const auto& c : r.checks) {
        out += std::string(c.ok ? "[ ok ] " : "[fail] ") + c.name + " — " +
               statement_for(c.name);
        if (!c.detail.empty()) out += " (" + c.detail + ")";
        out += "\n";
    }
    out += r.ok ? "PASS\n" : "FAIL\n";
    return out;
}

}  // namespace charp
