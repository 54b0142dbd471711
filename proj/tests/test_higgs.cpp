#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "charp/higgs.hpp"

using namespace charp;

static RingPtr plain_ring() { return RingDescriptor::make({{"x", false}}, {}); }

static MatE shift3(const RingPtr& ring, Modulus mod) {
    MatE n = MatE::zero(3, ring, mod);
    n.at(0, 1) = RingElem::constant(ring, mod, 1);
    n.at(1, 2) = RingElem::constant(ring, mod, 1);
    return n;
}

TEST_CASE("trunc_exp of the 3x3 Jordan block against the closed form") {
    Modulus m1 = Modulus::fp(7);
    RingPtr ring = plain_ring();
    MatE n = shift3(ring, m1);
    MatE e = trunc_exp(n, 2);
    MatE expect = MatE::identity(3, ring, m1);
    expect.at(0, 1) = RingElem::constant(ring, m1, 1);
    expect.at(1, 2) = RingElem::constant(ring, m1, 1);
    expect.at(0, 2) = RingElem::constant(ring, m1, inv_mod(2, 7));  // 1/2! = 4 mod 7
    CHECK(e == expect);
    CHECK(e.at(0, 2).as_constant() == 4);
}

TEST_CASE("trunc_exp gates: factorial invertibility and nilpotency") {
    Modulus m1 = Modulus::fp(3);
    RingPtr ring = plain_ring();
    MatE n = shift3(ring, m1);
    CHECK_THROWS_AS((void)trunc_exp(n, 3), Error);  // r = p
    try {
        (void)trunc_exp(n, 3);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::FactorialNotInvertible);
    }
    try {
        (void)trunc_exp(n, 1);  // N^2 != 0
    } catch (const Error& e) {
        CHECK(e.kind() == ErrKind::NotNilpotentEnough);
    }
}

TEST_CASE("exponential identities for commuting nilpotents") {
    std::mt19937_64 rng(42);
    for (int p : {3, 5, 7}) {
        Modulus mod = Modulus::fp(p);
        RingPtr ring = plain_ring();
        MatE id = MatE::identity(3, ring, mod);
        MatE s = shift3(ring, mod);
        std::uniform_int_distribution<int64_t> c(0, p - 1);
        auto rand_commuting = [&] {
            // random element of the commutant of the shift
            RingElem a = RingElem::var(ring, mod, size_t(0)).pow(int(c(rng) % 3)).scale(c(rng));
            RingElem b = RingElem::var(ring, mod, size_t(0)).scale(c(rng));
            return s * a + (s * s) * b;
        };
        for (int it = 0; it < 100; ++it) {
            MatE a = rand_commuting(), b = rand_commuting();
            CHECK(trunc_exp(a, 2) * trunc_exp(-a, 2) == id);
            CHECK(trunc_exp(a + b, 2) == trunc_exp(a, 2) * trunc_exp(b, 2));
        }
    }
}

TEST_CASE("check_nilpotent: exponent, commutation, failure modes") {
    Modulus m1 = Modulus::fp(5);
    RingPtr ring = RingDescriptor::make({{"x", false}, {"y", false}}, {});
    HiggsLocal h = HiggsLocal::zero(ring, m1, 3);
    h.theta[0] = shift3(ring, m1);
    h.theta[1] = shift3(ring, m1) * shift3(ring, m1);
    CHECK(check_nilpotent(h) == 2);
    // non-commuting components
    HiggsLocal bad = HiggsLocal::zero(ring, m1, 2);
    bad.theta[0].at(0, 1) = RingElem::constant(ring, m1, 1);
    bad.theta[1].at(1, 0) = RingElem::constant(ring, m1, 1);
    CHECK_THROWS_AS((void)check_nilpotent(bad), Error);
    // non-nilpotent component
    HiggsLocal id = HiggsLocal::zero(ring, m1, 2);
    id.theta[0] = MatE::identity(2, ring, m1);
    id.theta[1] = MatE::zero(2, ring, m1);
    CHECK_THROWS_AS((void)check_nilpotent(id), Error);
}

TEST_CASE("Lemma 2.2 round-trip on randomized nilpotent Higgs modules") {
    std::mt19937_64 rng(1234);
    RingPtr ring = plain_ring();
    for (int p : {3, 5, 7}) {
        Modulus mod = Modulus::fp(p);
        std::uniform_int_distribution<int64_t> c(0, p - 1);
        size_t maxrank = std::min<size_t>(4, size_t(p));
        std::uniform_int_distribution<size_t> rk(2, maxrank);
        for (int it = 0; it < 100; ++it) {
            size_t rank = rk(rng);
            HiggsLocal h = HiggsLocal::zero(ring, mod, rank);
            for (size_t i = 0; i < rank; ++i)
                for (size_t j = i + 1; j < rank; ++j)
                    h.theta[0].at(i, j) =
                        RingElem::var(ring, mod, size_t(0)).pow(int(c(rng) % 3)).scale(c(rng));
            ArModule m = higgs_to_armodule(h, int(rank) - 1);
            HiggsLocal back = armodule_to_higgs(m);
            CHECK(back == h);
            CHECK(back.rank == h.rank);
        }
    }
    // exponent gate: a rank-3 module with exponent 2 is rejected at r = 1
    Modulus m5 = Modulus::fp(5);
    HiggsLocal h = HiggsLocal::zero(ring, m5, 3);
    h.theta[0] = shift3(ring, m5);
    CHECK_THROWS_AS((void)higgs_to_armodule(h, 1), Error);
}

TEST_CASE("truncated symmetric algebra: basis, product truncation, exp") {
    Modulus m1 = Modulus::fp(5);
    RingPtr ring = RingDescriptor::make({{"x", false}, {"y", false}}, {});
    TruncSymAlgebra alg = TruncSymAlgebra::make(ring, m1, 2);
    CHECK(alg.dim() == 6);  // 1, two generators, three quadratics
    RingElem one = RingElem::constant(ring, m1, 1);
    AlgebraElem t = AlgebraElem::degree_one(alg, {one, one.scale(2)});
    AlgebraElem sq = t * t;
    // (d1 + 2 d2)^2 = d1^2 + 4 d1 d2 + 4 d2^2
    CHECK(sq.coeffs[alg.index_of({2, 0})] == one);
    CHECK(sq.coeffs[alg.index_of({1, 1})] == one.scale(4));
    CHECK(sq.coeffs[alg.index_of({0, 2})] == one.scale(4));
    CHECK((sq * t).coeffs == AlgebraElem::zero(alg).coeffs);  // truncated away
    // exp against the matrix exponential through the action
    MatE g1 = MatE::zero(3, ring, m1), g2 = MatE::zero(3, ring, m1);
    g1.at(0, 1) = one;
    g1.at(1, 2) = one;
    g2 = g1 * g1;
    MatE lhs = t.exp().action({g1, g2}, 3);
    CHECK(lhs == trunc_exp(g1 + g2 * RingElem::constant(ring, m1, 2), 2));
}

TEST_CASE("tensor and direct sum of Higgs modules") {
    Modulus m1 = Modulus::fp(7);
    RingPtr ring = plain_ring();
    HiggsLocal a = HiggsLocal::zero(ring, m1, 2);
    a.theta[0].at(0, 1) = RingElem::var(ring, m1, size_t(0));
    HiggsLocal b = HiggsLocal::zero(ring, m1, 2);
    b.theta[0].at(0, 1) = RingElem::constant(ring, m1, 1);
    HiggsLocal t = tensor_higgs(a, b);
    CHECK(t.rank == 4);
    CHECK(check_nilpotent(t) == 2);  // exponents add
    HiggsLocal s = direct_sum_higgs(a, b);
    CHECK(s.rank == 4);
    CHECK(check_nilpotent(s) == 1);
    // tensor component = theta_a (x) 1 + 1 (x) theta_b
    MatE expect = MatE::kron(a.theta[0], MatE::identity(2, ring, m1)) +
                  MatE::kron(MatE::identity(2, ring, m1), b.theta[0]);
    CHECK(t.theta[0] == expect);
}

TEST_CASE("higgs_from_field inverts HiggsLocal::field") {
    Modulus m1 = Modulus::fp(5);
    RingPtr ring = RingDescriptor::make({{"x", true}, {"y", false}}, {});
    HiggsLocal h = HiggsLocal::zero(ring, m1, 2);
    h.theta[0].at(0, 1) = RingElem::var(ring, m1, size_t(1));
    h.theta[1].at(0, 1) = RingElem::constant(ring, m1, 3);
    HiggsLocal back = higgs_from_field(h.field());
    CHECK(back == h);
    CHECK(nilpotent_order(h.theta[0]) == 1);
    CHECK(nilpotent_order(MatE::zero(2, ring, m1)) == 0);
    CHECK_THROWS_AS((void)nilpotent_order(MatE::identity(2, ring, m1)), Error);
}
