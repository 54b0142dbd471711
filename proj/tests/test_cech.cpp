#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"

using namespace charp;

TEST_CASE("registry coverings validate") {
    for (const char* name : {"affine-2chart", "p1-log-rank2"}) {
        Scenario s = make_scenario(name);
        s.X->validate();
        s.Y->validate();
        s.lifts.validate();
    }
}

TEST_CASE("transport_lift carries chart lifts to overlaps") {
    Scenario s = make_scenario("p1-log-rank2");
    const Overlap& o = s.Y->overlaps[0];
    // chart-1 Frobenius y -> y^p (1 + p y) transported through y = 1/x
    RingHom g = transport_lift(o.side_j, s.lifts.FY[1], o.side_j.rho);
    Modulus w2 = s.Y->mod;
    RingElem x = RingElem::var(o.ring, w2, size_t(0));
    RingElem one = RingElem::constant(o.ring, w2, 1);
    RingElem invx(o.ring, w2, poly_const(1, 1, w2), {1});
    // G(x) = (x^{-p}(1 + p/x))^{-1} = x^p (1 - p/x)
    CHECK(g.image(0) == x.pow(5) * (one - invx.scale(5)));
}

TEST_CASE("f1_overlap rejects chart morphisms whose reductions disagree") {
    Scenario s = make_scenario("affine-2chart");
    Modulus w2 = s.X->mod;
    RingElem y = RingElem::var(s.Y->charts[1], w2, size_t(0));
    RingElem one = RingElem::constant(s.Y->charts[1], w2, 1);
    s.lifts.f[1] = RingHom(s.X->charts[1], s.Y->charts[1], w2, {y + one});
    try {
        (void)s.lifts.f1_overlap(0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::NotLiftPair);
    }
}

TEST_CASE("obstruction classes match hand computations") {
    Modulus m5 = Modulus::fp(5);
    SUBCASE("affine-2chart: ob(f)(dx) = -x^2 on the overlap") {
        Scenario s = make_scenario("affine-2chart");
        DerivationCochain ob = obstruction_class(s.lifts, ObKind::Morphism);
        const RingPtr& o = s.Y->overlaps[0].ring;
        RingElem x = RingElem::var(o, m5, size_t(0));
        CHECK(ob.entries[0].values[0] == -(x * x));
        CHECK(obstruction_class(s.lifts, ObKind::FrobeniusX).is_zero());
        CHECK(obstruction_class(s.lifts, ObKind::FrobeniusY).is_zero());
    }
    SUBCASE("p1-log-rank2: ob(f)(dlog x) = ob(F_Y)(dlog x) = 1/x") {
        Scenario s = make_scenario("p1-log-rank2");
        const RingPtr& o = s.Y->overlaps[0].ring;
        RingElem invx(o, m5, poly_const(1, 1, m5), {1});
        CHECK(obstruction_class(s.lifts, ObKind::Morphism).entries[0].values[0] == invx);
        CHECK(obstruction_class(s.lifts, ObKind::FrobeniusY).entries[0].values[0] == invx);
        CHECK(obstruction_class(s.lifts, ObKind::FrobeniusX).is_zero());
    }
    SUBCASE("globally lifted morphism has zero obstruction") {
        Scenario s = make_scenario("p1-frobenius-pullback");
        CHECK(obstruction_class(s.lifts, ObKind::Morphism).is_zero());
    }
}

TEST_CASE("pushforward cochain modes") {
    Scenario s = make_scenario("affine-2chart");
    DerivationCochain ob = obstruction_class(s.lifts, ObKind::Morphism);
    int p = s.prime;
    const RingPtr& oy = s.Y->overlaps[0].ring;
    RingHom frob = frobenius_endo(oy, p);
    // f = id mod p here: pullback-by-f and tangent-map-f act as the identity
    // on values, precompose-F_Y applies Frobenius to them.
    CHECK(pushforward_cochain(ob, PushMode::PullbackByF, s.lifts).entries[0].values[0] ==
          ob.entries[0].values[0]);
    CHECK(pushforward_cochain(ob, PushMode::TangentMapF, s.lifts).entries[0].values[0] ==
          ob.entries[0].values[0]);
    CHECK(pushforward_cochain(ob, PushMode::PrecomposeFY, s.lifts).entries[0].values[0] ==
          frob.apply(ob.entries[0].values[0]));
    // degree-p morphism: f*(dx) = p x^{p-1} dx = 0 mod p kills the pullback
    Scenario t = make_scenario("p1-frobenius-pullback");
    DerivationCochain oby = obstruction_class(t.lifts, ObKind::FrobeniusY);
    CHECK_FALSE(oby.is_zero());
    // dlog x pulls back to p dlog x = 0 mod p
    CHECK(pushforward_cochain(oby, PushMode::PullbackByF, t.lifts).is_zero());
}

TEST_CASE("pushforward along a non-identity morphism applies the form pullback") {
    // f(x) = 2x on the affine cover: delta(dx) = c becomes base(2) c.
    Scenario s = make_scenario("affine-2chart");
    Modulus w2 = s.X->mod;
    for (size_t i = 0; i < 2; ++i) {
        RingElem y = RingElem::var(s.Y->charts[i], w2, size_t(0));
        s.lifts.f[i] = RingHom(s.X->charts[i], s.Y->charts[i], w2, {y.scale(2)});
    }
    const RingPtr& oy = s.Y->overlaps[0].ring;
    Modulus m1 = Modulus::fp(s.prime);
    RingHom fo = s.lifts.f1_overlap(0);
    RingHom g = fo.compose(frobenius_endo(s.X->overlaps[0].ring, s.prime));
    DerivationCochain c;
    c.entries.push_back(TwistedDerivation::zero(g));
    c.entries[0].values[0] = RingElem::constant(oy, m1, 1);
    DerivationCochain out = pushforward_cochain(c, PushMode::PullbackByF, s.lifts);
    // f*(dx) = 2 dx, so the value picks up base(2) = 2
    CHECK(out.entries[0].values[0] == RingElem::constant(oy, m1, 2));
}

TEST_CASE("glued bundle validation catches broken data") {
    Scenario s = make_scenario("affine-2chart");
    s.higgs.validate();
    SUBCASE("non-invertible transition") {
        GluedHiggsBundle e = s.higgs;
        e.transitions[0].at(0, 0) = RingElem::zero(e.transitions[0].ring(), e.mod);
        e.transitions[0].at(0, 1) = RingElem::zero(e.transitions[0].ring(), e.mod);
        try {
            e.validate();
            CHECK(false);
        } catch (const Error& err) {
            CHECK(err.kind() == ErrKind::CocycleFailure);
        }
    }
    SUBCASE("fields not intertwined") {
        GluedHiggsBundle e = s.higgs;
        e.locals[1].theta[0].at(0, 1) = RingElem::constant(e.locals[1].ring, e.mod, 2);
        try {
            e.validate();
            CHECK(false);
        } catch (const Error& err) {
            CHECK(err.kind() == ErrKind::HiggsMismatch);
            CHECK(std::string(err.what()).find("(0,1)") != std::string::npos);
        }
    }
}

TEST_CASE("contract pairs a derivation with a form matrix") {
    Scenario s = make_scenario("affine-2chart");
    DerivationCochain ob = obstruction_class(s.lifts, ObKind::Morphism);
    Modulus m1 = Modulus::fp(s.prime);
    const Overlap& ox = s.X->overlaps[0];
    MatF theta = s.higgs.locals[0].field().pullback(ox.side_i.rho.reduce_mod_p());
    MatE n = contract(ob.entries[0], theta);
    // theta = [[0, x dx],[0,0]], delta(dx) = -x^2, base = id: entry -x^3
    const RingPtr& oy = s.Y->overlaps[0].ring;
    RingElem x = RingElem::var(oy, m1, size_t(0));
    CHECK(n.at(0, 1) == -x.pow(3));
    CHECK(n.at(0, 0).is_zero());
    CHECK(n.at(1, 0).is_zero());
}

TEST_CASE("bundle_iso_check reports the failing location") {
    Scenario s = make_scenario("affine-2chart");
    std::vector<MatE> w = testutil::identity_witness(s.higgs);
    std::string why;
    CHECK(bundle_iso_check(s.higgs, s.higgs, w, &why));
    // a witness that breaks the intertwining
    w[0].at(0, 0) = RingElem::constant(w[0].ring(), s.higgs.mod, 2);
    CHECK_FALSE(bundle_iso_check(s.higgs, s.higgs, w, &why));
    CHECK(why.find("chart 0") != std::string::npos);
    // a non-invertible witness
    w[0] = MatE::zero(2, s.X->charts[0], s.higgs.mod);
    CHECK_FALSE(bundle_iso_check(s.higgs, s.higgs, w, &why));
    CHECK(why.find("invertible") != std::string::npos);
}
