#include "charp/ring.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace charp {

bool is_small_odd_prime(int p) {
    if (p < 3 || p > 31 || p % 2 == 0) return false;
    for (int d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

Modulus Modulus::fp(int p) {
    if (!is_small_odd_prime(p)) throw Error(ErrKind::BadInput, "p must be an odd prime in [3,31]");
    return Modulus{p, 1};
}

Modulus Modulus::w2(int p) {
    if (!is_small_odd_prime(p)) throw Error(ErrKind::BadInput, "p must be an odd prime in [3,31]");
    return Modulus{p, 2};
}

int64_t inv_mod(int64_t a, int64_t m) {
    int64_t t = 0, newt = 1, r = m, newr = ((a % m) + m) % m;
    while (newr != 0) {
        int64_t q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw Error(ErrKind::NotAUnit, "not invertible mod " + std::to_string(m));
    return ((t % m) + m) % m;
}

int RingDescriptor::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return int(i);
    throw Error(ErrKind::BadInput, "unknown variable " + name);
}

RingPtr RingDescriptor::make(std::vector<VarInfo> vars, std::vector<Poly> inverted) {
    for (size_t i = 0; i < vars.size(); ++i)
        for (size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i].name == vars[j].name)
                throw Error(ErrKind::BadInput, "duplicate variable " + vars[i].name);
    auto rd = std::make_shared<RingDescriptor>();
    rd->vars = std::move(vars);
    rd->inverted = std::move(inverted);
    for (const auto& s : rd->inverted) {
        if (s.empty()) throw Error(ErrKind::BadInput, "cannot invert zero");
        if (s.rbegin()->first.size() != rd->vars.size())
            throw Error(ErrKind::BadInput, "inverted element exponent arity mismatch");
    }
    return rd;
}

// ---- Poly helpers ----

static void poly_trim(Poly& a, const Modulus& mod) {
    int64_t m = mod.m();
    for (auto it = a.begin(); it != a.end();) {
        it->second = ((it->second % m) + m) % m;
        if (it->second == 0)
            it = a.erase(it);
        else
            ++it;
    }
}

Poly poly_zero() { return Poly{}; }

Poly poly_const(int64_t c, size_t nvars, const Modulus& mod) {
    Poly r;
    r[Exponents(nvars, 0)] = c;
    poly_trim(r, mod);
    return r;
}

Poly poly_var(size_t idx, size_t nvars) {
    Poly r;
    Exponents e(nvars, 0);
    e[idx] = 1;
    r[e] = 1;
    return r;
}

Poly poly_add(const Poly& a, const Poly& b, const Modulus& mod) {
    Poly r = a;
    for (const auto& [e, c] : b) r[e] += c;
    poly_trim(r, mod);
    return r;
}

Poly poly_sub(const Poly& a, const Poly& b, const Modulus& mod) {
    Poly r = a;
    for (const auto& [e, c] : b) r[e] -= c;
    poly_trim(r, mod);
    return r;
}

Poly poly_neg(const Poly& a, const Modulus& mod) {
    Poly r;
    for (const auto& [e, c] : a) r[e] = -c;
    poly_trim(r, mod);
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b, const Modulus& mod) {
    Poly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exponents e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r[e] = (r[e] + ca * cb) % mod.m();
        }
    poly_trim(r, mod);
    return r;
}

Poly poly_scale(const Poly& a, int64_t c, const Modulus& mod) {
    Poly r;
    for (const auto& [e, ca] : a) r[e] = ca * (c % mod.m());
    poly_trim(r, mod);
    return r;
}

Poly poly_pow(const Poly& a, int e, const Modulus& mod) {
    size_t nv = a.empty() ? 0 : a.begin()->first.size();
    Poly r = poly_const(1, nv, mod);
    for (int i = 0; i < e; ++i) r = poly_mul(r, a, mod);
    return r;
}

Poly poly_derivative(const Poly& a, size_t idx, const Modulus& mod) {
    Poly r;
    for (const auto& [e, c] : a) {
        if (e[idx] == 0) continue;
        Exponents e2 = e;
        e2[idx] -= 1;
        r[e2] = (r[e2] + c * e[idx]) % mod.m();
    }
    poly_trim(r, mod);
    return r;
}

bool poly_is_monic_unit_lead(const Poly& b, const Modulus& mod) {
    if (b.empty()) return false;
    return std::gcd(int64_t(b.rbegin()->second), int64_t(mod.p)) == 1;
}

std::optional<Poly> poly_exact_divide(const Poly& a, const Poly& b, const Modulus& mod) {
    if (b.empty()) throw Error(ErrKind::BadInput, "division by zero polynomial");
    if (!poly_is_monic_unit_lead(b, mod)) throw Error(ErrKind::BadInput, "divisor leading coefficient not a unit");
    Poly rem = a, quot;
    const auto& [elead, clead] = *b.rbegin();
    int64_t clead_inv = inv_mod(clead, mod.m());
    while (!rem.empty()) {
        // copy: er is used after rem is reassigned below
        const auto [er, cr] = *rem.rbegin();
        Exponents eq(er.size());
        for (size_t i = 0; i < er.size(); ++i) {
            eq[i] = er[i] - elead[i];
            if (eq[i] < 0) return std::nullopt;
        }
        int64_t cq = (cr * clead_inv) % mod.m();
        Poly term;
        term[eq] = cq;
        quot = poly_add(quot, term, mod);
        rem = poly_sub(rem, poly_mul(term, b, mod), mod);
        if (!rem.empty() && !(rem.rbegin()->first < er)) return std::nullopt;
    }
    return quot;
}

// ---- RingElem ----

RingElem::RingElem(RingPtr ring, Modulus mod, Poly num, std::vector<int> den)
    : ring_(std::move(ring)), mod_(mod), num_(std::move(num)), den_(std::move(den)) {
    if (den_.size() != ring_->inverted.size())
        throw Error(ErrKind::BadInput, "denominator arity mismatch");
    canonicalize();
}

RingElem RingElem::zero(RingPtr ring, Modulus mod) {
    return RingElem(ring, mod, poly_zero(), std::vector<int>(ring->inverted.size(), 0));
}

RingElem RingElem::constant(RingPtr ring, Modulus mod, int64_t c) {
    size_t nv = ring->nvars();
    return RingElem(ring, mod, poly_const(c, nv, mod), std::vector<int>(ring->inverted.size(), 0));
}

RingElem RingElem::var(RingPtr ring, Modulus mod, size_t idx) {
    size_t nv = ring->nvars();
    return RingElem(ring, mod, poly_var(idx, nv), std::vector<int>(ring->inverted.size(), 0));
}

RingElem RingElem::var(RingPtr ring, Modulus mod, const std::string& name) {
    return var(ring, mod, size_t(ring->var_index(name)));
}

void RingElem::canonicalize() {
    poly_trim(num_, mod_);
    if (num_.empty()) {
        std::fill(den_.begin(), den_.end(), 0);
        return;
    }
    for (size_t j = 0; j < den_.size(); ++j) {
        while (den_[j] > 0) {
            auto q = poly_exact_divide(num_, ring_->inverted[j], mod_);
            if (!q) break;
            num_ = std::move(*q);
            den_[j]--;
        }
    }
}

Poly RingElem::den_poly() const {
    Poly d = poly_const(1, ring_->nvars(), mod_);
    for (size_t j = 0; j < den_.size(); ++j)
        for (int k = 0; k < den_[j]; ++k) d = poly_mul(d, ring_->inverted[j], mod_);
    return d;
}

bool RingElem::is_polynomial() const {
    return std::all_of(den_.begin(), den_.end(), [](int k) { return k == 0; });
}

std::optional<int64_t> RingElem::as_constant() const {
    if (!is_polynomial()) return std::nullopt;
    if (num_.empty()) return 0;
    if (num_.size() != 1) return std::nullopt;
    const auto& [e, c] = *num_.begin();
    if (std::any_of(e.begin(), e.end(), [](int k) { return k != 0; })) return std::nullopt;
    return c;
}

static void check_compat(const RingElem& a, const RingElem& b) {
    if (!(a.mod() == b.mod()) || !(*a.ring() == *b.ring()))
        throw Error(ErrKind::Internal, "ring/modulus mismatch in element arithmetic");
}

RingElem RingElem::operator+(const RingElem& o) const {
    check_compat(*this, o);
    std::vector<int> den(den_.size());
    for (size_t j = 0; j < den.size(); ++j) den[j] = std::max(den_[j], o.den_[j]);
    Poly na = num_, nb = o.num_;
    for (size_t j = 0; j < den.size(); ++j) {
        for (int k = den_[j]; k < den[j]; ++k) na = poly_mul(na, ring_->inverted[j], mod_);
        for (int k = o.den_[j]; k < den[j]; ++k) nb = poly_mul(nb, ring_->inverted[j], mod_);
    }
    return RingElem(ring_, mod_, poly_add(na, nb, mod_), den);
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator-() const {
    return RingElem(ring_, mod_, poly_neg(num_, mod_), den_);
}

RingElem RingElem::operator*(const RingElem& o) const {
    check_compat(*this, o);
    std::vector<int> den(den_.size());
    for (size_t j = 0; j < den.size(); ++j) den[j] = den_[j] + o.den_[j];
    return RingElem(ring_, mod_, poly_mul(num_, o.num_, mod_), den);
}

RingElem RingElem::scale(int64_t c) const {
    return RingElem(ring_, mod_, poly_scale(num_, c, mod_), den_);
}

RingElem RingElem::pow(int e) const {
    RingElem r = constant(ring_, mod_, 1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

bool RingElem::operator==(const RingElem& o) const {
    check_compat(*this, o);
    // Cross-multiplication; valid because inverted elements are monic, hence
    // nonzerodivisors mod p^2.
    Poly lhs = poly_mul(num_, o.den_poly(), mod_);
    Poly rhs = poly_mul(o.num_, den_poly(), mod_);
    return lhs == rhs;
}

RingElem RingElem::inverse() const {
    if (num_.empty()) throw Error(ErrKind::NotAUnit, "zero is not a unit");
    if (mod_.level == 2) {
        RingElem w = reduce_mod_p().inverse().lift_to_w2();
        RingElem t = *this * w;
        RingElem w2 = w * (constant(ring_, mod_, 2) - t);
        if (!(*this * w2 == constant(ring_, mod_, 1)))
            throw Error(ErrKind::Internal, "Newton lift of inverse failed");
        return w2;
    }
    Poly n = num_;
    std::vector<int> acc(den_.size(), 0);
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t j = 0; j < ring_->inverted.size(); ++j) {
            auto q = poly_exact_divide(n, ring_->inverted[j], mod_);
            if (q) {
                n = std::move(*q);
                acc[j]++;
                progress = true;
            }
        }
    }
    if (n.size() != 1) throw Error(ErrKind::NotAUnit, "element is not a unit of the localization");
    const auto& [e, c] = *n.begin();
    if (std::any_of(e.begin(), e.end(), [](int k) { return k != 0; }))
        throw Error(ErrKind::NotAUnit, "element is not a unit of the localization");
    int64_t cinv = inv_mod(c, mod_.m());
    return RingElem(ring_, mod_, poly_scale(den_poly(), cinv, mod_), acc);
}

bool RingElem::is_unit() const {
    try {
        (void)inverse();
        return true;
    } catch (const Error&) {
        return false;
    }
}

RingElem RingElem::reduce_mod_p() const {
    if (mod_.level != 2) throw Error(ErrKind::BadInput, "reduce_mod_p expects a level-2 element");
    Modulus m1 = Modulus::fp(mod_.p);
    Poly n;
    for (const auto& [e, c] : num_) n[e] = c % mod_.p;
    poly_trim(n, m1);
    return RingElem(ring_, m1, std::move(n), den_);
}

RingElem RingElem::divide_by_p() const {
    if (mod_.level != 2) throw Error(ErrKind::BadInput, "divide_by_p expects a level-2 element");
    Modulus m1 = Modulus::fp(mod_.p);
    Poly n;
    for (const auto& [e, c] : num_) {
        if (c % mod_.p != 0)
            throw Error(ErrKind::NotDivisible, "coefficient not divisible by p");
        n[e] = c / mod_.p;
    }
    poly_trim(n, m1);
    return RingElem(ring_, m1, std::move(n), den_);
}

RingElem RingElem::lift_to_w2() const {
    if (mod_.level != 1) throw Error(ErrKind::BadInput, "lift_to_w2 expects a level-1 element");
    return RingElem(ring_, Modulus::w2(mod_.p), num_, den_);
}

RingElem RingElem::derivative(size_t idx) const {
    RingElem r(ring_, mod_, poly_derivative(num_, idx, mod_), den_);
    for (size_t j = 0; j < den_.size(); ++j) {
        if (den_[j] == 0) continue;
        // -k * n * s' / (D * s)
        std::vector<int> den = den_;
        den[j] += 1;
        Poly sp = poly_derivative(ring_->inverted[j], idx, mod_);
        RingElem term(ring_, mod_, poly_scale(poly_mul(num_, sp, mod_), -int64_t(den_[j]), mod_), den);
        r += term;
    }
    return r;
}

RingElem RingElem::divide_by_var_power(size_t idx, int k) const {
    if (k == 0 || is_zero()) return *this;
    if (k < 0) {
        RingElem x = var(ring_, mod_, idx);
        return *this * x.pow(-k);
    }
    int minexp = k;
    for (const auto& [e, c] : num_) minexp = std::min(minexp, e[idx]);
    Poly n;
    for (const auto& [e, c] : num_) {
        Exponents e2 = e;
        e2[idx] -= minexp;
        n[e2] = c;
    }
    int rest = k - minexp;
    std::vector<int> den = den_;
    if (rest > 0) {
        Poly xmon = poly_var(idx, ring_->nvars());
        bool found = false;
        for (size_t j = 0; j < ring_->inverted.size(); ++j) {
            if (ring_->inverted[j] == xmon) {
                den[j] += rest;
                found = true;
                break;
            }
        }
        if (!found)
            throw Error(ErrKind::NotDivisible,
                        "not divisible by " + ring_->vars[idx].name + "^" + std::to_string(k));
    }
    return RingElem(ring_, mod_, std::move(n), den);
}

std::string RingElem::to_string() const {
    if (num_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest lex term first for readability.
    for (auto it = num_.rbegin(); it != num_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        bool has_var = std::any_of(it->first.begin(), it->first.end(), [](int e) { return e != 0; });
        if (it->second != 1 || !has_var) os << it->second;
        bool printed = it->second != 1 || !has_var;
        for (size_t i = 0; i < it->first.size(); ++i) {
            if (it->first[i] == 0) continue;
            if (printed) os << "*";
            os << ring_->vars[i].name;
            if (it->first[i] != 1) os << "^" << it->first[i];
            printed = true;
        }
    }
    bool has_den = !is_polynomial();
    if (has_den) {
        os << " / (";
        bool f2 = true;
        for (size_t j = 0; j < den_.size(); ++j) {
            if (den_[j] == 0) continue;
            if (!f2) os << "*";
            f2 = false;
            os << "(inv" << j << ")^" << den_[j];
        }
        os << ")";
    }
    return os.str();
}

LogMonomialSplit split_log_monomial(const RingElem& e) {
    if (e.is_zero()) throw Error(ErrKind::LogViolation, "zero has no log-monomial factorization");
    const auto& ring = e.ring();
    LogMonomialSplit out;
    out.log_exponents.assign(ring->nvars(), 0);
    RingElem rest = e;
    // Move denominator factors that are bare log variables into the monomial.
    std::vector<int> den = rest.den();
    Poly num = rest.num();
    for (size_t j = 0; j < ring->inverted.size(); ++j) {
        if (den[j] == 0) continue;
        for (size_t v = 0; v < ring->nvars(); ++v) {
            if (!ring->vars[v].is_log) continue;
            if (ring->inverted[j] == poly_var(v, ring->nvars())) {
                out.log_exponents[v] -= den[j];
                den[j] = 0;
            }
        }
    }
    rest = RingElem(ring, e.mod(), num, den);
    // Strip positive powers of log variables from the numerator.
    for (size_t v = 0; v < ring->nvars(); ++v) {
        if (!ring->vars[v].is_log) continue;
        int minexp = INT32_MAX;
        for (const auto& [ex, c] : rest.num()) minexp = std::min(minexp, ex[v]);
        if (minexp > 0) {
            rest = rest.divide_by_var_power(v, minexp);
            out.log_exponents[v] += minexp;
        }
    }
    if (!rest.is_unit())
        throw Error(ErrKind::LogViolation, "element is not (log monomial) x (unit)");
    out.unit = rest;
    return out;
}

}  // namespace charp
