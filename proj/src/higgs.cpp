#include "charp/higgs.hpp"

#include <algorithm>
#include <functional>

namespace charp {

HiggsLocal HiggsLocal::zero(RingPtr ring, Modulus mod, size_t rank) {
    HiggsLocal h;
    h.ring = ring;
    h.mod = mod;
    h.rank = rank;
    h.theta.assign(ring->nvars(), MatE::zero(rank, ring, mod));
    h.exponent_bound = 0;
    return h;
}

MatF HiggsLocal::field() const {
    MatF f(rank, ring, mod);
    for (size_t v = 0; v < theta.size(); ++v)
        f = f + tensor_basis(theta[v], LogOneForm::basis(ring, mod, v));
    return f;
}

bool HiggsLocal::operator==(const HiggsLocal& o) const {
    if (rank != o.rank || theta.size() != o.theta.size()) return false;
    for (size_t v = 0; v < theta.size(); ++v)
        if (!(theta[v] == o.theta[v])) return false;
    return true;
}

int check_nilpotent(const HiggsLocal& h) {
    size_t m = h.theta.size();
    for (size_t v = 0; v < m; ++v)
        for (size_t w = v + 1; w < m; ++w)
            if (!(h.theta[v] * h.theta[w] == h.theta[w] * h.theta[v]))
                throw Error(ErrKind::NotCommuting, "theta ^ theta != 0 (components " +
                                                       std::to_string(v) + "," + std::to_string(w) + ")");
    int bound = int(h.rank * std::max<size_t>(m, 1));
    std::vector<MatE> products{MatE::identity(h.rank, h.ring, h.mod)};
    for (int d = 1; d <= bound + 1; ++d) {
        std::vector<MatE> next;
        bool all_zero = true;
        for (const auto& prod : products)
            for (size_t v = 0; v < m; ++v) {
                MatE q = prod * h.theta[v];
                if (!q.is_zero()) {
                    all_zero = false;
                    next.push_back(std::move(q));
                }
            }
        if (all_zero) return d - 1;
        products = std::move(next);
    }
    throw Error(ErrKind::NotNilpotent, "no exponent <= rank * nvars");
}

// ---- TruncSymAlgebra ----

static void gen_monomials(size_t m, int maxdeg, std::vector<Exponents>& out) {
    // Total degree then lex within a degree.
    for (int d = 0; d <= maxdeg; ++d) {
        std::vector<Exponents> level;
        Exponents e(m, 0);
        // enumerate all e with |e| = d
        std::function<void(size_t, int)> rec = [&](size_t pos, int rest) {
            if (pos + 1 == m) {
                e[pos] = rest;
                level.push_back(e);
                return;
            }
            for (int k = 0; k <= rest; ++k) {
                e[pos] = k;
                rec(pos + 1, rest - k);
            }
        };
        if (m == 0) {
            if (d == 0) out.push_back({});
            continue;
        }
        rec(0, d);
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
}

TruncSymAlgebra TruncSymAlgebra::make(RingPtr ring, Modulus mod, int r) {
    return make(ring, mod, r, ring->nvars());
}

TruncSymAlgebra TruncSymAlgebra::make(RingPtr ring, Modulus mod, int r, size_t ngens) {
    TruncSymAlgebra alg;
    alg.ring = ring;
    alg.mod = mod;
    alg.r = r;
    alg.ngens = ngens;
    gen_monomials(ngens, r, alg.basis);
    return alg;
}

size_t TruncSymAlgebra::index_of(const Exponents& e) const {
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == e) return i;
    throw Error(ErrKind::Internal, "monomial not in A_r basis");
}

// ---- AlgebraElem ----

AlgebraElem AlgebraElem::zero(const TruncSymAlgebra& alg) {
    AlgebraElem a;
    a.alg = &alg;
    a.coeffs.assign(alg.dim(), RingElem::zero(alg.ring, alg.mod));
    return a;
}

AlgebraElem AlgebraElem::one(const TruncSymAlgebra& alg) {
    AlgebraElem a = zero(alg);
    a.coeffs[0] = RingElem::constant(alg.ring, alg.mod, 1);
    return a;
}

AlgebraElem AlgebraElem::degree_one(const TruncSymAlgebra& alg, const std::vector<RingElem>& tau) {
    AlgebraElem a = zero(alg);
    size_t m = alg.ngens;
    for (size_t v = 0; v < m; ++v) {
        Exponents e(m, 0);
        e[v] = 1;
        a.coeffs[alg.index_of(e)] = tau[v];
    }
    return a;
}

AlgebraElem AlgebraElem::operator+(const AlgebraElem& o) const {
    AlgebraElem r = *this;
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] += o.coeffs[i];
    return r;
}

AlgebraElem AlgebraElem::operator*(const AlgebraElem& o) const {
    AlgebraElem r = zero(*alg);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        for (size_t j = 0; j < o.coeffs.size(); ++j) {
            if (o.coeffs[j].is_zero()) continue;
            const Exponents& a = alg->basis[i];
            const Exponents& b = alg->basis[j];
            Exponents e(a.size());
            int total = 0;
            for (size_t v = 0; v < a.size(); ++v) total += (e[v] = a[v] + b[v]);
            if (total > alg->r) continue;  // truncation
            r.coeffs[alg->index_of(e)] += coeffs[i] * o.coeffs[j];
        }
    }
    return r;
}

bool AlgebraElem::operator==(const AlgebraElem& o) const {
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (!(coeffs[i] == o.coeffs[i])) return false;
    return true;
}

AlgebraElem AlgebraElem::exp() const {
    if (!coeffs[0].is_zero())
        throw Error(ErrKind::BadInput, "exp needs zero constant term");
    int r = alg->r;
    if (r >= alg->mod.p)
        throw Error(ErrKind::FactorialNotInvertible, "r! not invertible: r >= p");
    AlgebraElem result = one(*alg);
    AlgebraElem power = one(*alg);
    int64_t fact = 1;
    for (int k = 1; k <= r; ++k) {
        power = power * *this;
        fact = (fact * k) % alg->mod.m();
        AlgebraElem term = power;
        int64_t finv = inv_mod(fact, alg->mod.m());
        for (auto& c : term.coeffs) c = c.scale(finv);
        result = result + term;
    }
    return result;
}

MatE AlgebraElem::action(const std::vector<MatE>& gens, size_t rank) const {
    MatE r = MatE::zero(rank, alg->ring, alg->mod);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        MatE mono = MatE::identity(rank, alg->ring, alg->mod);
        const Exponents& e = alg->basis[i];
        for (size_t v = 0; v < e.size(); ++v)
            for (int k = 0; k < e[v]; ++k) mono = mono * gens[v];
        r = r + mono * coeffs[i];
    }
    return r;
}

// ---- Lemma 2.2 correspondence at chart level ----

ArModule higgs_to_armodule(const HiggsLocal& e, int r) {
    int expn = check_nilpotent(e);
    if (expn > r)
        throw Error(ErrKind::ExponentTooLarge,
                    "exponent " + std::to_string(expn) + " exceeds r = " + std::to_string(r));
    if (r > e.mod.p - 1)
        throw Error(ErrKind::ExponentTooLarge, "r exceeds p-1");
    ArModule m;
    m.algebra = TruncSymAlgebra::make(e.ring, e.mod, r);
    m.rank = e.rank;
    m.action = e.theta;
    return m;
}

HiggsLocal armodule_to_higgs(const ArModule& m) {
    HiggsLocal h;
    h.ring = m.algebra.ring;
    h.mod = m.algebra.mod;
    h.rank = m.rank;
    h.theta = m.action;
    h.exponent_bound = m.algebra.r;
    return h;
}

HiggsLocal higgs_from_field(const MatF& f) {
    HiggsLocal h;
    h.ring = f.ring();
    h.mod = f.mod();
    h.rank = f.size();
    for (size_t v = 0; v < f.ring()->nvars(); ++v) {
        MatE comp(f.size(), f.size(), f.ring(), f.mod());
        for (size_t i = 0; i < f.size(); ++i)
            for (size_t j = 0; j < f.size(); ++j) comp.at(i, j) = f.at(i, j).coeffs[v];
        h.theta.push_back(std::move(comp));
    }
    h.exponent_bound = check_nilpotent(h);
    return h;
}

int nilpotent_order(const MatE& n) {
    MatE power = n;
    for (int r = 0; r <= int(n.rows()); ++r) {
        if (power.is_zero()) return r;
        power = power * n;
    }
    throw Error(ErrKind::NotNilpotent, "matrix is not nilpotent");
}

// ---- truncated exponential ----

MatE trunc_exp(const MatE& n, int r) {
    if (r >= n.mod().p)
        throw Error(ErrKind::FactorialNotInvertible,
                    "r! not invertible mod p: r = " + std::to_string(r));
    if (!n.pow(r + 1).is_zero())
        throw Error(ErrKind::NotNilpotentEnough, "N^(r+1) != 0");
    MatE result = MatE::identity(n.rows(), n.ring(), n.mod());
    MatE power = result;
    int64_t fact = 1;
    int64_t m = n.mod().m();
    for (int k = 1; k <= r; ++k) {
        power = power * n;
        fact = (fact * k) % m;
        result = result + power * RingElem::constant(n.ring(), n.mod(), inv_mod(fact, m));
    }
    return result;
}

// ---- tensor / direct sum ----

HiggsLocal tensor_higgs(const HiggsLocal& a, const HiggsLocal& b) {
    if (!(*a.ring == *b.ring) || !(a.mod == b.mod))
        throw Error(ErrKind::ShapeMismatch, "tensor of Higgs modules over different rings");
    HiggsLocal h;
    h.ring = a.ring;
    h.mod = a.mod;
    h.rank = a.rank * b.rank;
    MatE ia = MatE::identity(a.rank, a.ring, a.mod);
    MatE ib = MatE::identity(b.rank, b.ring, b.mod);
    for (size_t v = 0; v < a.theta.size(); ++v)
        h.theta.push_back(MatE::kron(a.theta[v], ib) + MatE::kron(ia, b.theta[v]));
    h.exponent_bound = a.exponent_bound + b.exponent_bound;
    return h;
}

HiggsLocal direct_sum_higgs(const HiggsLocal& a, const HiggsLocal& b) {
    if (!(*a.ring == *b.ring) || !(a.mod == b.mod))
        throw Error(ErrKind::ShapeMismatch, "direct sum of Higgs modules over different rings");
    HiggsLocal h;
    h.ring = a.ring;
    h.mod = a.mod;
    h.rank = a.rank + b.rank;
    for (size_t v = 0; v < a.theta.size(); ++v)
        h.theta.push_back(MatE::direct_sum(a.theta[v], b.theta[v]));
    h.exponent_bound = std::max(a.exponent_bound, b.exponent_bound);
    return h;
}

}  // namespace charp
