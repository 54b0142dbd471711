#include "charp/cech.hpp"

#include <algorithm>

namespace charp {

const OverlapSide& Overlap::side(size_t chart) const {
    if (chart == i) return side_i;
    if (chart == j) return side_j;
    throw Error(ErrKind::BadInput, "chart " + std::to_string(chart) + " not a side of overlap (" +
                                       std::to_string(i) + "," + std::to_string(j) + ")");
}

bool Covering::has_overlap(size_t i, size_t j) const {
    for (const auto& o : overlaps)
        if (o.i == i && o.j == j) return true;
    return false;
}

size_t Covering::overlap_index(size_t i, size_t j) const {
    for (size_t oi = 0; oi < overlaps.size(); ++oi)
        if (overlaps[oi].i == i && overlaps[oi].j == j) return oi;
    throw Error(ErrKind::BadInput,
                "no overlap (" + std::to_string(i) + "," + std::to_string(j) + ")");
}

const Overlap& Covering::overlap(size_t i, size_t j) const {
    return overlaps[overlap_index(i, j)];
}

static void validate_side(const Overlap& o, const OverlapSide& s, size_t chart) {
    s.rho.validate();
    if (s.num.size() != o.ring->nvars() || s.den.size() != o.ring->nvars())
        throw Error(ErrKind::BadInput, "frac data size mismatch on overlap side " +
                                           std::to_string(chart));
    for (size_t v = 0; v < o.ring->nvars(); ++v) {
        RingElem lhs = s.rho.apply(s.num[v]);
        RingElem rhs = RingElem::var(o.ring, s.rho.mod(), v) * s.rho.apply(s.den[v]);
        if (!(lhs == rhs))
            throw Error(ErrKind::BadInput, "frac data inconsistent for variable " +
                                               o.ring->vars[v].name + " on chart " +
                                               std::to_string(chart) + " side");
    }
}

void Covering::validate() const {
    for (const auto& o : overlaps) {
        if (o.i >= o.j || o.j >= charts.size())
            throw Error(ErrKind::BadInput, "bad overlap pair");
        if (!(*o.side_i.rho.source() == *charts[o.i]) || !(*o.side_j.rho.source() == *charts[o.j]))
            throw Error(ErrKind::BadInput, "restriction hom source mismatch");
        validate_side(o, o.side_i, o.i);
        validate_side(o, o.side_j, o.j);
    }
    for (const auto& t : triples) {
        if (!(t.i < t.j && t.j < t.k && t.k < charts.size()))
            throw Error(ErrKind::BadInput, "bad triple");
        t.from_ij.validate();
        t.from_jk.validate();
        t.from_ik.validate();
    }
}

RingHom transport_lift(const OverlapSide& b_side, const RingHom& L, const RingHom& a_rho) {
    const RingPtr& b_overlap = b_side.rho.target();
    std::vector<RingElem> images;
    images.reserve(b_overlap->nvars());
    for (size_t v = 0; v < b_overlap->nvars(); ++v) {
        RingElem n = a_rho.apply(L.apply(b_side.num[v]));
        RingElem d = a_rho.apply(L.apply(b_side.den[v]));
        images.push_back(n * d.inverse());
    }
    RingHom g(b_overlap, a_rho.target(), a_rho.mod(), std::move(images));
    if (!(g.compose(b_side.rho) == a_rho.compose(L)))
        throw Error(ErrKind::NotLiftPair, "transported lift does not cover the chart lift");
    return g;
}

bool DerivationCochain::is_zero() const {
    for (const auto& e : entries)
        if (!e.is_zero()) return false;
    return true;
}

DerivationCochain DerivationCochain::operator-(const DerivationCochain& o) const {
    DerivationCochain r;
    for (size_t t = 0; t < entries.size(); ++t) r.entries.push_back(entries[t] - o.entries[t]);
    return r;
}

// Transport one cochain value into a triple ring, matching the form variable
// by name across the three (possibly distinct) source rings.
static RingElem triple_value(const TwistedDerivation& d, const RingHom& into,
                             const std::string& var) {
    int v = d.base.source()->var_index(var);
    if (v < 0) throw Error(ErrKind::ShapeMismatch, "variable " + var + " missing on overlap");
    return into.apply(d.values[size_t(v)]);
}

bool check_cocycle(const DerivationCochain& c, const Covering& cov, std::string* where) {
    for (const auto& t : cov.triples) {
        const TwistedDerivation& dij = c.entries[cov.overlap_index(t.i, t.j)];
        const TwistedDerivation& djk = c.entries[cov.overlap_index(t.j, t.k)];
        const TwistedDerivation& dik = c.entries[cov.overlap_index(t.i, t.k)];
        RingHom fij = t.from_ij, fjk = t.from_jk, fik = t.from_ik;
        if (dij.base.mod().level == 1) {
            fij = fij.reduce_mod_p();
            fjk = fjk.reduce_mod_p();
            fik = fik.reduce_mod_p();
        }
        for (const auto& vi : dik.base.source()->vars) {
            RingElem lhs = triple_value(dik, fik, vi.name);
            RingElem rhs = triple_value(dij, fij, vi.name) + triple_value(djk, fjk, vi.name);
            if (!(lhs == rhs)) {
                if (where)
                    *where = "triple (" + std::to_string(t.i) + "," + std::to_string(t.j) + "," +
                             std::to_string(t.k) + ") at d" + vi.name;
                return false;
            }
        }
    }
    return true;
}

static RingHom at_level(const RingHom& h, const Modulus& mod) {
    return mod.level == 1 ? h.reduce_mod_p() : h;
}

void GluedHiggsBundle::validate() const {
    if (locals.size() != cov->nchart() || transitions.size() != cov->overlaps.size())
        throw Error(ErrKind::ShapeMismatch, "glued bundle shape mismatch");
    for (const auto& l : locals) {
        if (l.rank != rank) throw Error(ErrKind::ShapeMismatch, "chart rank mismatch");
        check_nilpotent(l);
    }
    for (size_t oi = 0; oi < transitions.size(); ++oi) {
        const Overlap& o = cov->overlaps[oi];
        const MatE& t = transitions[oi];
        try {
            (void)t.inverse();
        } catch (const Error&) {
            throw Error(ErrKind::CocycleFailure, "transition (" + std::to_string(o.i) + "," +
                                                     std::to_string(o.j) + ") not invertible");
        }
        RingHom ri = at_level(o.side_i.rho, mod), rj = at_level(o.side_j.rho, mod);
        MatF ti = locals[o.i].field().pullback(ri);
        MatF tj = locals[o.j].field().pullback(rj);
        if (!(tj * t == t * ti))
            throw Error(ErrKind::HiggsMismatch, "Higgs fields not intertwined on overlap (" +
                                                    std::to_string(o.i) + "," +
                                                    std::to_string(o.j) + ")");
    }
    for (const auto& tr : cov->triples) {
        MatE tij = transitions[cov->overlap_index(tr.i, tr.j)].map(at_level(tr.from_ij, mod));
        MatE tjk = transitions[cov->overlap_index(tr.j, tr.k)].map(at_level(tr.from_jk, mod));
        MatE tik = transitions[cov->overlap_index(tr.i, tr.k)].map(at_level(tr.from_ik, mod));
        if (!(tik == tjk * tij))
            throw Error(ErrKind::CocycleFailure,
                        "cocycle fails on triple (" + std::to_string(tr.i) + "," +
                            std::to_string(tr.j) + "," + std::to_string(tr.k) + ")");
    }
}

int GluedHiggsBundle::exponent() const {
    int e = 0;
    for (const auto& l : locals) e = std::max(e, check_nilpotent(l));
    return e;
}

MatW GluedConnectionBundle::curvature(size_t chart) const {
    const MatF& a = locals[chart];
    return d_entrywise(a) + wedge(a, a);
}

void GluedConnectionBundle::validate() const {
    if (locals.size() != cov->nchart() || transitions.size() != cov->overlaps.size())
        throw Error(ErrKind::ShapeMismatch, "glued bundle shape mismatch");
    for (size_t i = 0; i < locals.size(); ++i)
        if (!curvature(i).is_zero())
            throw Error(ErrKind::HiggsMismatch,
                        "nonzero curvature on chart " + std::to_string(i));
    for (size_t oi = 0; oi < transitions.size(); ++oi) {
        const Overlap& o = cov->overlaps[oi];
        const MatE& t = transitions[oi];
        try {
            (void)t.inverse();
        } catch (const Error&) {
            throw Error(ErrKind::CocycleFailure, "transition (" + std::to_string(o.i) + "," +
                                                     std::to_string(o.j) + ") not invertible");
        }
        MatF ai = locals[o.i].pullback(at_level(o.side_i.rho, mod));
        MatF aj = locals[o.j].pullback(at_level(o.side_j.rho, mod));
        if (!(aj * t + d_entrywise(t) == t * ai))
            throw Error(ErrKind::HiggsMismatch, "gauge condition fails on overlap (" +
                                                    std::to_string(o.i) + "," +
                                                    std::to_string(o.j) + ")");
    }
    for (const auto& tr : cov->triples) {
        MatE tij = transitions[cov->overlap_index(tr.i, tr.j)].map(at_level(tr.from_ij, mod));
        MatE tjk = transitions[cov->overlap_index(tr.j, tr.k)].map(at_level(tr.from_jk, mod));
        MatE tik = transitions[cov->overlap_index(tr.i, tr.k)].map(at_level(tr.from_ik, mod));
        if (!(tik == tjk * tij))
            throw Error(ErrKind::CocycleFailure,
                        "cocycle fails on triple (" + std::to_string(tr.i) + "," +
                            std::to_string(tr.j) + "," + std::to_string(tr.k) + ")");
    }
}

RingHom LiftData::f1(size_t chart) const { return f[chart].reduce_mod_p(); }

RingHom LiftData::frobenius_on_overlap(const Covering& cov, const std::vector<RingHom>& lifts,
                                       size_t oi, size_t s) const {
    const Overlap& o = cov.overlaps[oi];
    return transport_lift(o.side(s), lifts[s], o.side(s).rho);
}

RingHom LiftData::morphism_on_overlap(size_t oi, size_t s) const {
    const Overlap& ox = X->overlaps[oi];
    const Overlap& oy = Y->overlaps[oi];
    return transport_lift(ox.side(s), f[s], oy.side(s).rho);
}

RingHom LiftData::f1_overlap(size_t oi) const {
    const Overlap& o = X->overlaps[oi];
    RingHom a = morphism_on_overlap(oi, o.i).reduce_mod_p();
    RingHom b = morphism_on_overlap(oi, o.j).reduce_mod_p();
    if (!(a == b))
        throw Error(ErrKind::NotLiftPair,
                    "morphism reductions disagree on overlap " + std::to_string(oi));
    return a;
}

RingHom frobenius_endo(RingPtr ring, int p) {
    Modulus m = Modulus::fp(p);
    std::vector<RingElem> images;
    for (size_t v = 0; v < ring->nvars(); ++v)
        images.push_back(RingElem::var(ring, m, v).pow(p));
    return RingHom(ring, ring, m, std::move(images));
}

void LiftData::validate() const {
    size_t n = X->nchart();
    if (Y->nchart() != n || FX.size() != n || FY.size() != n || f.size() != n)
        throw Error(ErrKind::BadInput, "lift data chart count mismatch");
    if (X->overlaps.size() != Y->overlaps.size())
        throw Error(ErrKind::BadInput, "coverings have mismatched overlap structure");
    for (size_t oi = 0; oi < X->overlaps.size(); ++oi)
        if (X->overlaps[oi].i != Y->overlaps[oi].i || X->overlaps[oi].j != Y->overlaps[oi].j)
            throw Error(ErrKind::BadInput, "coverings have mismatched overlap pairs");
    int p = X->mod.p;
    for (size_t i = 0; i < n; ++i) {
        RingHom fi = f1(i);
        RingHom lhs = fi.compose(frobenius_endo(X->charts[i], p));
        RingHom rhs = frobenius_endo(Y->charts[i], p).compose(fi);
        if (!(lhs == rhs))
            throw Error(ErrKind::NotAFrobeniusLift,
                        "g-naturality fails on chart " + std::to_string(i));
    }
    for (size_t oi = 0; oi < X->overlaps.size(); ++oi) (void)f1_overlap(oi);
}

DerivationCochain obstruction_class(const LiftData& L, ObKind kind) {
    DerivationCochain c;
    const Covering* cov = (kind == ObKind::FrobeniusY) ? L.Y : L.X;
    for (size_t oi = 0; oi < cov->overlaps.size(); ++oi) {
        const Overlap& o = cov->overlaps[oi];
        RingHom a, b;
        switch (kind) {
            case ObKind::FrobeniusX:
                a = L.frobenius_on_overlap(*L.X, L.FX, oi, o.i);
                b = L.frobenius_on_overlap(*L.X, L.FX, oi, o.j);
                break;
            case ObKind::FrobeniusY:
                a = L.frobenius_on_overlap(*L.Y, L.FY, oi, o.i);
                b = L.frobenius_on_overlap(*L.Y, L.FY, oi, o.j);
                break;
            case ObKind::Morphism:
                a = L.morphism_on_overlap(oi, o.i);
                b = L.morphism_on_overlap(oi, o.j);
                break;
        }
        c.entries.push_back(hom_difference_derivation(a, b));
    }
    return c;
}

DerivationCochain pushforward_cochain(const DerivationCochain& c, PushMode mode,
                                      const LiftData& L) {
    DerivationCochain r;
    int p = L.X->mod.p;
    for (size_t oi = 0; oi < c.entries.size(); ++oi) {
        const TwistedDerivation& d = c.entries[oi];
        RingHom fo = L.f1_overlap(oi);
        RingHom g = fo.compose(frobenius_endo(L.X->overlaps[oi].ring, p));
        TwistedDerivation out = TwistedDerivation::zero(g);
        switch (mode) {
            case PushMode::PullbackByF: {
                // delta on Omega_{O_Y} becomes delta o f* on Omega_{O_X}.
                for (size_t v = 0; v < g.source()->nvars(); ++v)
                    out.values[v] = d.apply(pullback_basis_form(fo, v));
                break;
            }
            case PushMode::PrecomposeFY: {
                RingHom fy = frobenius_endo(fo.target(), p);
                for (size_t v = 0; v < d.values.size(); ++v)
                    out.values[v] = fy.apply(d.values[v]);
                break;
            }
            case PushMode::TangentMapF: {
                for (size_t v = 0; v < d.values.size(); ++v)
                    out.values[v] = fo.apply(d.values[v]);
                break;
            }
        }
        r.entries.push_back(std::move(out));
    }
    return r;
}

MatE contract(const TwistedDerivation& d, const MatF& m) {
    MatE r(m.size(), m.size(), d.base.target(), d.base.mod());
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) r.at(i, j) = d.apply(m.at(i, j));
    return r;
}

static bool witness_transitions_ok(const Covering& cov, const Modulus& mod,
                                   const std::vector<MatE>& ta, const std::vector<MatE>& tb,
                                   const std::vector<MatE>& witness, std::string* why) {
    for (size_t oi = 0; oi < ta.size(); ++oi) {
        const Overlap& o = cov.overlaps[oi];
        MatE wi = witness[o.i].map(at_level(o.side_i.rho, mod));
        MatE wj = witness[o.j].map(at_level(o.side_j.rho, mod));
        if (!(wj * ta[oi] == tb[oi] * wi)) {
            if (why)
                *why = "witness fails transition on overlap (" + std::to_string(o.i) + "," +
                       std::to_string(o.j) + ")";
            return false;
        }
    }
    return true;
}

bool bundle_iso_check(const GluedHiggsBundle& a, const GluedHiggsBundle& b,
                      const std::vector<MatE>& witness, std::string* why) {
    if (a.cov != b.cov || a.rank != b.rank) {
        if (why) *why = "bundles not comparable";
        return false;
    }
    for (size_t i = 0; i < witness.size(); ++i) {
        try {
            (void)witness[i].inverse();
        } catch (const Error&) {
            if (why) *why = "witness not invertible on chart " + std::to_string(i);
            return false;
        }
        if (!(b.locals[i].field() * witness[i] == witness[i] * a.locals[i].field())) {
            if (why) *why = "witness fails Higgs intertwining on chart " + std::to_string(i);
            return false;
        }
    }
    return witness_transitions_ok(*a.cov, a.mod, a.transitions, b.transitions, witness, why);
}

bool bundle_iso_check(const GluedConnectionBundle& a, const GluedConnectionBundle& b,
                      const std::vector<MatE>& witness, std::string* why) {
    if (a.cov != b.cov || a.rank != b.rank) {
        if (why) *why = "bundles not comparable";
        return false;
    }
    for (size_t i = 0; i < witness.size(); ++i) {
        try {
            (void)witness[i].inverse();
        } catch (const Error&) {
            if (why) *why = "witness not invertible on chart " + std::to_string(i);
            return false;
        }
        if (!(b.locals[i] * witness[i] + d_entrywise(witness[i]) == witness[i] * a.locals[i])) {
            if (why) *why = "witness fails connection intertwining on chart " + std::to_string(i);
            return false;
        }
    }
    return witness_transitions_ok(*a.cov, a.mod, a.transitions, b.transitions, witness, why);
}

}  // namespace charp
