#include "charp/registry.hpp"

namespace charp {

const std::vector<RegistryEntry>& registry_list() {
    static const std::vector<RegistryEntry> entries = {
        {"affine-2chart",
         "A^1 covered by x != 0 and x != 1; identity morphism with distinct "
         "chartwise lifts, rank-2 nilpotent Higgs bundle",
         {"Theorem 1.1", "Lemma 3.2", "Lemma 3.3", "Prop 2.4",
          "Section 3 descent square"}},
        {"p1-log-rank2",
         "P^1 with the log divisor {0, infinity}; rank-2 log Higgs bundle "
         "with nonzero Frobenius and morphism obstruction classes",
         {"Theorem 1.1", "Definition 3.1", "Lemma 3.2", "Lemma 3.3", "Prop 2.4"}},
        {"p1-frobenius-pullback",
         "degree-p self-map of log P^1; globally liftable morphism, so "
         "ob(f) = 0 and the twisted pullback degenerates to f*",
         {"Corollary 1.2", "Theorem 1.1", "Lemma 3.2", "Lemma 3.3"}},
        {"prop28-curve",
         "affine curve with tau(dx) = 1/x; the F^r vs E^r comparison and "
         "the symmetric-power filtration at r = 1, 2",
         {"Prop 2.8", "Lemma 2.6", "Prop 2.4", "Theorem 1.1"}},
        {"tensor-pair",
         "two rank-2 Higgs bundles on the affine 2-chart curve for the "
         "tensor compatibility of the twisted pullback",
         {"Prop 2.5(iii)", "Prop 2.4"}},
    };
    return entries;
}

// ---- shared geometry ----

static Poly int_poly(std::vector<std::pair<Exponents, int64_t>> terms, int64_t m) {
    Poly p;
    for (auto& [e, c] : terms) {
        int64_t cc = ((c % m) + m) % m;
        if (cc) p[e] = cc;
    }
    return p;
}

// A^1 over F_p: charts x != 0 and x != 1, overlap inverts both.
static std::shared_ptr<Covering> affine_covering(int p) {
    int64_t m = int64_t(p) * p;
    auto cov = std::make_shared<Covering>();
    cov->mod = Modulus::w2(p);
    Poly px = int_poly({{{1}, 1}}, m);
    Poly pxm1 = int_poly({{{1}, 1}, {{0}, -1}}, m);
    RingPtr r0 = RingDescriptor::make({{"x", false}}, {px});
    RingPtr r1 = RingDescriptor::make({{"x", false}}, {pxm1});
    RingPtr o = RingDescriptor::make({{"x", false}}, {px, pxm1});
    cov->charts = {r0, r1};
    Overlap ov;
    ov.i = 0;
    ov.j = 1;
    ov.ring = o;
    auto side = [&](const RingPtr& chart) {
        OverlapSide s;
        s.rho = RingHom(chart, o, cov->mod, {RingElem::var(o, cov->mod, size_t(0))});
        s.num = {RingElem::var(chart, cov->mod, size_t(0))};
        s.den = {RingElem::constant(chart, cov->mod, 1)};
        return s;
    };
    ov.side_i = side(r0);
    ov.side_j = side(r1);
    cov->overlaps.push_back(std::move(ov));
    return cov;
}

// Log P^1: charts F_p[x] (x log) and F_p[y] (y log), glued by y = 1/x.
static std::shared_ptr<Covering> p1_log_covering(int p) {
    int64_t m = int64_t(p) * p;
    auto cov = std::make_shared<Covering>();
    cov->mod = Modulus::w2(p);
    RingPtr r0 = RingDescriptor::make({{"x", true}}, {});
    RingPtr r1 = RingDescriptor::make({{"y", true}}, {});
    RingPtr o = RingDescriptor::make({{"x", true}}, {int_poly({{{1}, 1}}, m)});
    cov->charts = {r0, r1};
    Overlap ov;
    ov.i = 0;
    ov.j = 1;
    ov.ring = o;
    ov.side_i.rho = RingHom(r0, o, cov->mod, {RingElem::var(o, cov->mod, size_t(0))});
    ov.side_i.num = {RingElem::var(r0, cov->mod, size_t(0))};
    ov.side_i.den = {RingElem::constant(r0, cov->mod, 1)};
    RingElem inv_x(o, cov->mod, int_poly({{{0}, 1}}, m), {1});  // 1/x
    ov.side_j.rho = RingHom(r1, o, cov->mod, {inv_x});
    ov.side_j.num = {RingElem::constant(r1, cov->mod, 1)};
    ov.side_j.den = {RingElem::var(r1, cov->mod, size_t(0))};
    cov->overlaps.push_back(std::move(ov));
    return cov;
}

static RingHom power_lift(const RingPtr& ring, const Modulus& w2, int e) {
    std::vector<RingElem> images;
    for (size_t v = 0; v < ring->nvars(); ++v)
        images.push_back(RingElem::var(ring, w2, v).pow(e));
    return RingHom(ring, ring, w2, std::move(images));
}

// Constant-component rank-2 Higgs bundle theta = [[0,n01],[0,0]] per chart.
static GluedHiggsBundle rank2_higgs(const Covering* cov, int p,
                                    const std::vector<std::vector<RingElem>>& upper,
                                    const std::vector<MatE>& transitions) {
    GluedHiggsBundle e;
    e.cov = cov;
    e.mod = Modulus::fp(p);
    e.rank = 2;
    for (size_t i = 0; i < cov->nchart(); ++i) {
        HiggsLocal h;
        h.ring = cov->charts[i];
        h.mod = e.mod;
        h.rank = 2;
        for (size_t v = 0; v < h.ring->nvars(); ++v) {
            MatE n = MatE::zero(2, h.ring, e.mod);
            n.at(0, 1) = upper[i][v];
            h.theta.push_back(std::move(n));
        }
        h.exponent_bound = 1;
        e.locals.push_back(std::move(h));
    }
    e.transitions = transitions;
    return e;
}

static void finish(Scenario& s) {
    s.lifts.X = s.X.get();
    s.lifts.Y = s.Y.get();
    for (const auto& entry : registry_list())
        if (entry.name == s.name) s.statements = entry.statements;
}

static Scenario affine_2chart(int p) {
    Scenario s;
    s.name = "affine-2chart";
    s.prime = p;
    s.r = 1;
    s.X = affine_covering(p);
    s.Y = affine_covering(p);
    Modulus w2 = Modulus::w2(p);
    Modulus m1 = Modulus::fp(p);
    for (size_t i = 0; i < 2; ++i) {
        s.lifts.FX.push_back(power_lift(s.X->charts[i], w2, p));
        s.lifts.FY.push_back(power_lift(s.Y->charts[i], w2, p));
    }
    // f = id mod p; the chart-1 lift is bent by p x^2, so ob(f)(dx) = -x^2.
    RingElem x0 = RingElem::var(s.X->charts[0], w2, size_t(0));
    RingElem x1 = RingElem::var(s.X->charts[1], w2, size_t(0));
    s.lifts.f.push_back(RingHom(s.X->charts[0], s.Y->charts[0], w2, {x0}));
    s.lifts.f.push_back(RingHom(s.X->charts[1], s.Y->charts[1], w2, {x1 + (x1 * x1).scale(p)}));
    const RingPtr& o = s.X->overlaps[0].ring;
    RingElem one_over = RingElem(o, m1, int_poly({{{0}, 1}}, p), {1, 1});  // 1/(x(x-1))
    MatE t = MatE::identity(2, o, m1);
    t.at(0, 1) = one_over;
    std::vector<RingElem> upper0 = {RingElem::var(s.X->charts[0], m1, size_t(0))};
    std::vector<RingElem> upper1 = {RingElem::var(s.X->charts[1], m1, size_t(0))};
    s.higgs = rank2_higgs(s.X.get(), p, {upper0, upper1}, {t});
    s.checks = {"lemma32", "lemma33", "descent", "theorem", "tp-compare"};
    finish(s);
    return s;
}

static Scenario p1_log_rank2(int p, bool global_f) {
    Scenario s;
    s.name = global_f ? "p1-frobenius-pullback" : "p1-log-rank2";
    s.prime = p;
    s.r = 1;
    s.X = p1_log_covering(p);
    s.Y = p1_log_covering(p);
    Modulus w2 = Modulus::w2(p);
    Modulus m1 = Modulus::fp(p);
    RingElem x = RingElem::var(s.X->charts[0], w2, size_t(0));
    RingElem y = RingElem::var(s.X->charts[1], w2, size_t(0));
    RingElem oney = RingElem::constant(s.X->charts[1], w2, 1);
    s.lifts.FX = {power_lift(s.X->charts[0], w2, p), power_lift(s.X->charts[1], w2, p)};
    // FY on the y-chart carries the unit twist y^p (1 + p y): ob(F_Y) != 0.
    s.lifts.FY = {power_lift(s.Y->charts[0], w2, p),
                  RingHom(s.Y->charts[1], s.Y->charts[1], w2,
                          {y.pow(p) * (oney + y.scale(p))})};
    if (global_f) {
        // f is the degree-p self-map x -> x^p, same lift on both charts:
        // ob(f) = 0 (Corollary 1.2 configuration).
        s.lifts.f = {RingHom(s.X->charts[0], s.Y->charts[0], w2, {x.pow(p)}),
                     RingHom(s.X->charts[1], s.Y->charts[1], w2, {y.pow(p)})};
    } else {
        // f = id mod p with the chart-1 lift twisted to y (1 + p y):
        // ob(f)(dlog x) != 0.
        s.lifts.f = {RingHom(s.X->charts[0], s.Y->charts[0], w2, {x}),
                     RingHom(s.X->charts[1], s.Y->charts[1], w2,
                             {y * (oney + y.scale(p))})};
    }
    std::vector<RingElem> upper0 = {RingElem::constant(s.X->charts[0], m1, 1)};
    std::vector<RingElem> upper1 = {RingElem::constant(s.X->charts[1], m1, -1)};
    MatE t = MatE::identity(2, s.X->overlaps[0].ring, m1);
    s.higgs = rank2_higgs(s.X.get(), p, {upper0, upper1}, {t});
    s.checks = {"lemma32", "lemma33", "descent", "theorem", "tp-compare"};
    finish(s);
    return s;
}

static Scenario prop28_curve(int p) {
    Scenario s;
    s.name = "prop28-curve";
    s.prime = p;
    s.r = 2;
    s.X = affine_covering(p);
    s.Y = affine_covering(p);
    Modulus w2 = Modulus::w2(p);
    Modulus m1 = Modulus::fp(p);
    for (size_t i = 0; i < 2; ++i) {
        s.lifts.FX.push_back(power_lift(s.X->charts[i], w2, p));
        s.lifts.FY.push_back(power_lift(s.Y->charts[i], w2, p));
    }
    // f = id with the chart-0 lift bent by p/x: tau(dx) = 1/x on the overlap.
    RingElem x0 = RingElem::var(s.X->charts[0], w2, size_t(0));
    RingElem invx0 = RingElem(s.X->charts[0], w2, int_poly({{{0}, 1}}, int64_t(p) * p), {1});
    RingElem x1 = RingElem::var(s.X->charts[1], w2, size_t(0));
    s.lifts.f.push_back(RingHom(s.X->charts[0], s.Y->charts[0], w2, {x0 + invx0.scale(p)}));
    s.lifts.f.push_back(RingHom(s.X->charts[1], s.Y->charts[1], w2, {x1}));
    std::vector<RingElem> upper0 = {RingElem::constant(s.X->charts[0], m1, 1)};
    std::vector<RingElem> upper1 = {RingElem::constant(s.X->charts[1], m1, 1)};
    MatE t = MatE::identity(2, s.X->overlaps[0].ring, m1);
    s.higgs = rank2_higgs(s.X.get(), p, {upper0, upper1}, {t});
    s.checks = {"lemma32", "lemma33", "descent", "theorem", "tp-compare", "prop28"};
    finish(s);
    return s;
}

static Scenario tensor_pair(int p) {
    Scenario s = affine_2chart(p);
    s.name = "tensor-pair";
    s.r = 2;
    Modulus m1 = Modulus::fp(p);
    // Second factor: constant Higgs field, unipotent transition.
    std::vector<RingElem> upper0 = {RingElem::constant(s.X->charts[0], m1, 1)};
    std::vector<RingElem> upper1 = {RingElem::constant(s.X->charts[1], m1, 1)};
    const RingPtr& o = s.X->overlaps[0].ring;
    RingElem one_over = RingElem(o, m1, int_poly({{{0}, 1}}, p), {1, 1});
    MatE t = MatE::identity(2, o, m1);
    t.at(0, 1) = one_over;
    s.higgs2 = rank2_higgs(s.X.get(), p, {upper0, upper1}, {t});
    // First factor uses the identity transition so the pair stays simple.
    s.higgs.transitions = {MatE::identity(2, o, m1)};
    s.checks = {"tensor", "tp-compare"};
    finish(s);
    return s;
}

Scenario make_scenario(const std::string& name, int prime) {
    int p = prime == 0 ? 5 : prime;
    if (!is_small_odd_prime(p))
        throw Error(ErrKind::BadInput, "prime must be an odd prime in [3,31]");
    if (name == "affine-2chart") return affine_2chart(p);
    if (name == "p1-log-rank2") return p1_log_rank2(p, false);
    if (name == "p1-frobenius-pullback") return p1_log_rank2(p, true);
    if (name == "prop28-curve") return prop28_curve(p);
    if (name == "tensor-pair") return tensor_pair(p);
    throw Error(ErrKind::BadInput, "unknown registry scenario \"" + name + "\"");
}

}  // namespace charp
