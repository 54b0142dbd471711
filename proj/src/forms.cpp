#include "charp/forms.hpp"

#include <algorithm>

namespace charp {

// ---- LogOneForm ----

LogOneForm LogOneForm::zero(RingPtr ring, Modulus mod) {
    LogOneForm w;
    w.ring = ring;
    w.mod = mod;
    w.coeffs.assign(ring->nvars(), RingElem::zero(ring, mod));
    return w;
}

LogOneForm LogOneForm::basis(RingPtr ring, Modulus mod, size_t var) {
    LogOneForm w = zero(ring, mod);
    w.coeffs[var] = RingElem::constant(ring, mod, 1);
    return w;
}

bool LogOneForm::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const RingElem& c) { return c.is_zero(); });
}

LogOneForm LogOneForm::operator+(const LogOneForm& o) const {
    LogOneForm r = *this;
    for (size_t v = 0; v < coeffs.size(); ++v) r.coeffs[v] += o.coeffs[v];
    return r;
}

LogOneForm LogOneForm::operator-(const LogOneForm& o) const { return *this + (-o); }

LogOneForm LogOneForm::operator-() const {
    LogOneForm r = *this;
    for (auto& c : r.coeffs) c = -c;
    return r;
}

LogOneForm LogOneForm::operator*(const RingElem& c) const {
    LogOneForm r = *this;
    for (auto& a : r.coeffs) a *= c;
    return r;
}

bool LogOneForm::operator==(const LogOneForm& o) const {
    for (size_t v = 0; v < coeffs.size(); ++v)
        if (!(coeffs[v] == o.coeffs[v])) return false;
    return true;
}

LogOneForm LogOneForm::divide_by_p() const {
    LogOneForm r;
    r.ring = ring;
    r.mod = Modulus::fp(mod.p);
    for (const auto& c : coeffs) r.coeffs.push_back(c.divide_by_p());
    return r;
}

LogOneForm LogOneForm::reduce_mod_p() const {
    LogOneForm r;
    r.ring = ring;
    r.mod = Modulus::fp(mod.p);
    for (const auto& c : coeffs) r.coeffs.push_back(c.reduce_mod_p());
    return r;
}

// ---- TwoForm ----

TwoForm TwoForm::zero(RingPtr ring, Modulus mod) {
    TwoForm w;
    w.ring = ring;
    w.mod = mod;
    size_t n = ring->nvars();
    w.coeffs.assign(n * (n - 1) / 2, RingElem::zero(ring, mod));
    return w;
}

size_t TwoForm::pair_index(size_t v, size_t w, size_t nvars) {
    // v < w; row-major over the strict upper triangle.
    return v * nvars - v * (v + 1) / 2 + (w - v - 1);
}

bool TwoForm::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const RingElem& c) { return c.is_zero(); });
}

TwoForm TwoForm::operator+(const TwoForm& o) const {
    TwoForm r = *this;
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] += o.coeffs[i];
    return r;
}

TwoForm TwoForm::operator-(const TwoForm& o) const {
    TwoForm r = *this;
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] -= o.coeffs[i];
    return r;
}

bool TwoForm::operator==(const TwoForm& o) const {
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (!(coeffs[i] == o.coeffs[i])) return false;
    return true;
}

// ---- differential / wedge ----

LogOneForm differential(const RingElem& e) {
    const RingPtr& ring = e.ring();
    LogOneForm w = LogOneForm::zero(ring, e.mod());
    for (size_t v = 0; v < ring->nvars(); ++v) {
        RingElem d = e.derivative(v);
        if (ring->vars[v].is_log) d = d * RingElem::var(ring, e.mod(), v);
        w.coeffs[v] = d;
    }
    return w;
}

TwoForm differential(const LogOneForm& w) {
    TwoForm r = TwoForm::zero(w.ring, w.mod);
    size_t n = w.ring->nvars();
    for (size_t v = 0; v < n; ++v) {
        LogOneForm da = differential(w.coeffs[v]);
        // da ^ e_v
        for (size_t u = 0; u < n; ++u) {
            if (u == v || da.coeffs[u].is_zero()) continue;
            if (u < v)
                r.coeffs[TwoForm::pair_index(u, v, n)] += da.coeffs[u];
            else
                r.coeffs[TwoForm::pair_index(v, u, n)] -= da.coeffs[u];
        }
    }
    return r;
}

TwoForm wedge(const LogOneForm& a, const LogOneForm& b) {
    TwoForm r = TwoForm::zero(a.ring, a.mod);
    size_t n = a.ring->nvars();
    for (size_t v = 0; v < n; ++v)
        for (size_t w = v + 1; w < n; ++w)
            r.coeffs[TwoForm::pair_index(v, w, n)] =
                a.coeffs[v] * b.coeffs[w] - a.coeffs[w] * b.coeffs[v];
    return r;
}

// ---- RingHom ----

RingHom::RingHom(RingPtr source, RingPtr target, Modulus mod, std::vector<RingElem> images)
    : source_(std::move(source)), target_(std::move(target)), mod_(mod), images_(std::move(images)) {
    if (images_.size() != source_->nvars())
        throw Error(ErrKind::BadInput, "hom image count mismatch");
}

RingHom RingHom::identity(RingPtr ring, Modulus mod) {
    std::vector<RingElem> imgs;
    for (size_t v = 0; v < ring->nvars(); ++v) imgs.push_back(RingElem::var(ring, mod, v));
    return RingHom(ring, ring, mod, std::move(imgs));
}

RingElem RingHom::apply(const Poly& p) const {
    RingElem r = RingElem::zero(target_, mod_);
    for (const auto& [e, c] : p) {
        RingElem term = RingElem::constant(target_, mod_, c);
        for (size_t v = 0; v < e.size(); ++v)
            if (e[v] != 0) term *= images_[v].pow(e[v]);
        r += term;
    }
    return r;
}

RingElem RingHom::apply(const RingElem& e) const {
    if (!(*e.ring() == *source_) || !(e.mod() == mod_))
        throw Error(ErrKind::Internal, "hom applied to element of wrong ring");
    RingElem r = apply(e.num());
    for (size_t j = 0; j < e.den().size(); ++j) {
        if (e.den()[j] == 0) continue;
        RingElem s = apply(source_->inverted[j]);
        RingElem sinv = s.inverse();  // throws NotAUnit when the invariant fails
        r *= sinv.pow(e.den()[j]);
    }
    return r;
}

RingHom RingHom::compose(const RingHom& other) const {
    std::vector<RingElem> imgs;
    for (size_t v = 0; v < other.source_->nvars(); ++v) imgs.push_back(apply(other.images_[v]));
    return RingHom(other.source_, target_, mod_, std::move(imgs));
}

RingHom RingHom::reduce_mod_p() const {
    std::vector<RingElem> imgs;
    for (const auto& e : images_) imgs.push_back(e.reduce_mod_p());
    return RingHom(source_, target_, Modulus::fp(mod_.p), std::move(imgs));
}

void RingHom::validate() const {
    for (const auto& s : source_->inverted) {
        if (!apply(s).is_unit())
            throw Error(ErrKind::NotAUnit, "inverted element does not map to a unit");
    }
    for (size_t v = 0; v < source_->nvars(); ++v) {
        if (!source_->vars[v].is_log) continue;
        (void)split_log_monomial(images_[v]);  // throws LogViolation
    }
}

bool RingHom::operator==(const RingHom& o) const {
    if (!(*source_ == *o.source_) || !(*target_ == *o.target_) || !(mod_ == o.mod_)) return false;
    for (size_t v = 0; v < images_.size(); ++v)
        if (!(images_[v] == o.images_[v])) return false;
    return true;
}

// ---- pullback of forms ----

LogOneForm pullback_basis_form(const RingHom& h, size_t v) {
    const RingPtr& src = h.source();
    if (!src->vars[v].is_log) return differential(h.image(v));
    // h*(dlog x) = dlog(monomial part) + d(unit)/unit
    LogMonomialSplit sp = split_log_monomial(h.image(v));
    LogOneForm r = LogOneForm::zero(h.target(), h.mod());
    for (size_t w = 0; w < h.target()->nvars(); ++w)
        if (sp.log_exponents[w] != 0)
            r.coeffs[w] = RingElem::constant(h.target(), h.mod(), sp.log_exponents[w]);
    r = r + differential(sp.unit) * sp.unit.inverse();
    return r;
}

LogOneForm pullback_form(const RingHom& h, const LogOneForm& w) {
    LogOneForm r = LogOneForm::zero(h.target(), h.mod());
    for (size_t v = 0; v < w.coeffs.size(); ++v) {
        if (w.coeffs[v].is_zero()) continue;
        r = r + pullback_basis_form(h, v) * h.apply(w.coeffs[v]);
    }
    return r;
}

// ---- TwistedDerivation ----

TwistedDerivation TwistedDerivation::zero(RingHom base) {
    TwistedDerivation d;
    d.values.assign(base.source()->nvars(), RingElem::zero(base.target(), base.mod()));
    d.base = std::move(base);
    return d;
}

RingElem TwistedDerivation::apply(const LogOneForm& w) const {
    RingElem r = RingElem::zero(base.target(), base.mod());
    for (size_t v = 0; v < values.size(); ++v) {
        if (w.coeffs[v].is_zero()) continue;
        r += base.apply(w.coeffs[v]) * values[v];
    }
    return r;
}

RingElem TwistedDerivation::apply_to_diff(const RingElem& e) const {
    return apply(differential(e));
}

bool TwistedDerivation::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](const RingElem& c) { return c.is_zero(); });
}

TwistedDerivation TwistedDerivation::operator+(const TwistedDerivation& o) const {
    TwistedDerivation r = *this;
    for (size_t v = 0; v < values.size(); ++v) r.values[v] += o.values[v];
    return r;
}

TwistedDerivation TwistedDerivation::operator-(const TwistedDerivation& o) const {
    TwistedDerivation r = *this;
    for (size_t v = 0; v < values.size(); ++v) r.values[v] -= o.values[v];
    return r;
}

TwistedDerivation TwistedDerivation::operator-() const {
    TwistedDerivation r = *this;
    for (auto& c : r.values) c = -c;
    return r;
}

bool TwistedDerivation::operator==(const TwistedDerivation& o) const {
    for (size_t v = 0; v < values.size(); ++v)
        if (!(values[v] == o.values[v])) return false;
    return true;
}

// ---- hom_difference_derivation ----

TwistedDerivation hom_difference_derivation(const RingHom& a, const RingHom& b) {
    if (a.mod().level != 2 || b.mod().level != 2)
        throw Error(ErrKind::BadInput, "hom_difference_derivation expects level-2 homs");
    RingHom base = a.reduce_mod_p();
    if (!(base == b.reduce_mod_p()))
        throw Error(ErrKind::NotLiftPair, "homs do not reduce to a common map mod p");
    TwistedDerivation d = TwistedDerivation::zero(base);
    const RingPtr& src = a.source();
    for (size_t v = 0; v < src->nvars(); ++v) {
        RingElem diff = a.image(v) - b.image(v);
        if (!src->vars[v].is_log) {
            d.values[v] = diff.divide_by_p();
            continue;
        }
        if (diff.is_zero()) {
            d.values[v] = RingElem::zero(base.target(), base.mod());
            continue;
        }
        // delta(dlog x) = ((a(x)-b(x))/p) / base(x); base(x) is a log monomial
        // times a unit, so divide monomial-wise then by the unit.
        LogMonomialSplit sa = split_log_monomial(a.image(v));
        LogMonomialSplit sb = split_log_monomial(b.image(v));
        if (sa.log_exponents == sb.log_exponents) {
            RingElem val = (sa.unit - sb.unit).divide_by_p();
            d.values[v] = val * sa.unit.reduce_mod_p().inverse();
        } else {
            RingElem val = diff.divide_by_p();
            LogMonomialSplit sbase = split_log_monomial(base.apply(RingElem::var(src, base.mod(), v)));
            for (size_t w = 0; w < sbase.log_exponents.size(); ++w)
                val = val.divide_by_var_power(w, sbase.log_exponents[w]);
            d.values[v] = val * sbase.unit.inverse();
        }
    }
    return d;
}

}  // namespace charp
