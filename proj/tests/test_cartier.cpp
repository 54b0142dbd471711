#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "test_util.hpp"

using namespace charp;

static const char* kScenarios[] = {"affine-2chart", "p1-log-rank2", "p1-frobenius-pullback",
                                   "prop28-curve", "tensor-pair"};

TEST_CASE("frobenius_lift_check accepts lifts and rejects non-lifts") {
    Scenario s = make_scenario("affine-2chart");
    std::string why;
    CHECK(frobenius_lift_check(*s.X, s.lifts.FX, &why));
    Modulus w2 = s.X->mod;
    RingElem x = RingElem::var(s.X->charts[0], w2, size_t(0));
    std::vector<RingHom> bad = s.lifts.FX;
    bad[0] = RingHom(s.X->charts[0], s.X->charts[0], w2, {x.pow(s.prime) + x});
    CHECK_FALSE(frobenius_lift_check(*s.X, bad, &why));
    CHECK(why.find("lift 0") != std::string::npos);
}

TEST_CASE("dF/p of the standard lift: x^p gives x^{p-1} dx") {
    Modulus w2 = Modulus::w2(5);
    RingPtr ring = RingDescriptor::make({{"x", false}}, {});
    RingElem x = RingElem::var(ring, w2, size_t(0));
    RingHom frob(ring, ring, w2, {x.pow(5)});
    LogOneForm w = df_over_p(frob, 0);
    RingElem xr = RingElem::var(ring, Modulus::fp(5), size_t(0));
    CHECK(w.coeffs[0] == xr.pow(4));
    // bent lift x^p + p x^2: dF/p picks up the derivative of the bend
    RingHom bent(ring, ring, w2, {x.pow(5) + (x * x).scale(5)});
    CHECK(df_over_p(bent, 0).coeffs[0] == xr.pow(4) + xr.scale(2));
}

TEST_CASE("inverse Cartier output is flat with zero curvature") {
    for (const char* name : kScenarios) {
        Scenario s = make_scenario(name);
        DerivationCochain obFX = obstruction_class(s.lifts, ObKind::FrobeniusX);
        GluedConnectionBundle c = inverse_cartier(s.higgs, s.lifts.FX, obFX);
        c.validate();  // includes gauge + curvature
        for (size_t i = 0; i < c.locals.size(); ++i) CHECK(c.curvature(i).is_zero());
        CHECK(c.rank == s.higgs.rank);
    }
}

TEST_CASE("inverse Cartier of the zero Higgs field is the flat trivial bundle") {
    Scenario s = make_scenario("affine-2chart");
    GluedHiggsBundle e = s.higgs;
    for (auto& l : e.locals) l = HiggsLocal::zero(l.ring, e.mod, e.rank);
    DerivationCochain obFX = obstruction_class(s.lifts, ObKind::FrobeniusX);
    GluedConnectionBundle c = inverse_cartier(e, s.lifts.FX, obFX);
    for (const auto& a : c.locals) CHECK(a.is_zero());
    // transitions are the Frobenius twists of the originals
    RingHom frob = frobenius_endo(s.X->overlaps[0].ring, s.prime);
    CHECK(c.transitions[0] == e.transitions[0].map(frob));
}

TEST_CASE("Lemma 3.2: chartwise gauge equivalence for any two lifts") {
    std::mt19937_64 rng(99);
    for (const char* name : kScenarios) {
        Scenario s = make_scenario(name);
        std::string why;
        for (size_t i = 0; i < s.X->nchart(); ++i) {
            CHECK(verify_lemma32(s.higgs.locals[i], s.lifts.FX[i],
                                 testutil::perturb(s.lifts.FX[i], rng), &why));
            // and on Y with the pulled-back module
            PullbackContext ctx = context_from_lifts(s.lifts, s.r);
            HiggsLocal pulled = higgs_from_field(s.higgs.locals[i].field().pullback(ctx.f[i]));
            CHECK(verify_lemma32(pulled, s.lifts.FY[i],
                                 testutil::perturb(s.lifts.FY[i], rng), &why));
        }
    }
}

TEST_CASE("Lemma 3.3: coboundary of nu splits into the three obstruction terms") {
    std::mt19937_64 rng(7);
    for (const char* name : kScenarios) {
        Scenario s = make_scenario(name);
        std::string why;
        CHECK(verify_lemma33(s.lifts, &why));
        // stays true for 20 independent re-choices of all lifts
        for (int it = 0; it < 20; ++it) {
            Scenario t = make_scenario(name);
            testutil::perturb_lifts(t, rng);
            t.lifts.validate();
            CHECK(verify_lemma33(t.lifts, &why));
        }
    }
}

TEST_CASE("Theorem 1.1: descent square and witnessed isomorphism") {
    for (const char* name : kScenarios) {
        Scenario s = make_scenario(name);
        DescentSquare sq = verify_theorem(s.lifts, s.higgs, s.r);
        std::string msg = std::string(name) + ": " + sq.why;
        INFO(msg);
        CHECK(sq.transitions_match);
        CHECK(sq.ok);
        CHECK(sq.witness.size() == s.Y->nchart());
    }
}

TEST_CASE("Corollary 1.2: global Frobenius pullback gives the identity witness") {
    Scenario s = make_scenario("p1-frobenius-pullback");
    CHECK(obstruction_class(s.lifts, ObKind::Morphism).is_zero());
    DescentSquare sq = verify_theorem(s.lifts, s.higgs, s.r);
    CHECK(sq.ok);
    // nu_i = 0 here, so W_i = exp(0) = id and V1 = V2 on the nose
    for (size_t i = 0; i < sq.witness.size(); ++i) {
        CHECK(sq.witness[i] == MatE::identity(sq.v1.rank, sq.witness[i].ring(), sq.v1.mod));
        CHECK(sq.v1.locals[i] == sq.v2.locals[i]);
    }
    CHECK(sq.v1.transitions[0] == sq.v2.transitions[0]);
}

TEST_CASE("theorem verification is invariant under re-choosing all lifts") {
    std::mt19937_64 rng(2024);
    for (const char* name : {"affine-2chart", "p1-log-rank2"}) {
        for (int it = 0; it < 20; ++it) {
            Scenario s = make_scenario(name);
            testutil::perturb_lifts(s, rng);
            s.lifts.validate();
            DescentSquare sq = verify_theorem(s.lifts, s.higgs, s.r);
            std::string msg = std::string(name) + ": " + sq.why;
            INFO(msg);
            CHECK(sq.ok);
        }
    }
}
