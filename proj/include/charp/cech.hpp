#ifndef CHARP_CECH_HPP
#define CHARP_CECH_HPP

#include "charp/higgs.hpp"

namespace charp {

// One side of an overlap: the level-2 restriction hom from the chart, plus
// fraction data expressing every overlap variable as rho(num)/rho(den) of
// chart elements.  The fractions are what let chart-level mod-p^2 lifts be
// transported to the overlap ring.
struct OverlapSide {
    RingHom rho;
    std::vector<RingElem> num, den;  // indexed by overlap variable
};

struct Overlap {
    size_t i = 0, j = 0;  // i < j
    RingPtr ring;
    OverlapSide side_i, side_j;

    const OverlapSide& side(size_t chart) const;
};

// Triple intersection data for coverings with >= 3 charts; carries homs from
// the three pairwise overlap rings so cocycle conditions can be compared in
// one place.
struct TripleOverlap {
    size_t i = 0, j = 0, k = 0;  // i < j < k
    RingPtr ring;
    RingHom from_ij, from_jk, from_ik;  // level 2
};

struct Covering {
    Modulus mod{};  // level 2; level-1 data obtained by reduction
    std::vector<RingPtr> charts;
    std::vector<Overlap> overlaps;
    std::vector<TripleOverlap> triples;

    size_t nchart() const { return charts.size(); }
    bool has_overlap(size_t i, size_t j) const;
    const Overlap& overlap(size_t i, size_t j) const;      // i < j
    size_t overlap_index(size_t i, size_t j) const;
    // Restriction homs, hom validity, frac consistency rho(num)/rho(den) = v.
    void validate() const;
};

// Transport of a level-2 lift to an overlap.  Given L : chart_s(B) ->
// chart_s(A) and the frac data of the B-overlap at side s, returns
// G : O_B -> O_A with G o rho_B = rho_A o L (checked).  For endomorphism
// lifts (Frobenius) B = A and a_rho is the same overlap's restriction.
RingHom transport_lift(const OverlapSide& b_side, const RingHom& L, const RingHom& a_rho);

// Cech 1-cochain of twisted derivations, one entry per overlap (i < j) of a
// covering; the (j,i) entry is implicitly the negative.
struct DerivationCochain {
    std::vector<TwistedDerivation> entries;

    bool is_zero() const;
    DerivationCochain operator-(const DerivationCochain& o) const;
};

// Additive cocycle identity delta_ik = delta_ij + delta_jk on every triple
// overlap (vacuous for two-chart coverings).  Values are compared after
// transport into the triple ring, matching variables by name.
bool check_cocycle(const DerivationCochain& c, const Covering& cov, std::string* where = nullptr);

struct GluedHiggsBundle {
    const Covering* cov = nullptr;
    Modulus mod{};  // level of the module data (usually 1)
    size_t rank = 0;
    std::vector<HiggsLocal> locals;  // per chart
    std::vector<MatE> transitions;   // per overlap, T_ij with v_j = T_ij v_i

    // Invertible transitions, cocycle on triples, Higgs intertwining
    // Theta_j T = T Theta_i after restriction.  Throws CocycleFailure /
    // HiggsMismatch naming the offending pair.
    void validate() const;
    int exponent() const;  // max chartwise nilpotency exponent
};

struct GluedConnectionBundle {
    const Covering* cov = nullptr;
    Modulus mod{};
    size_t rank = 0;
    std::vector<MatF> locals;  // connection matrices A_i, nabla = d + A_i
    std::vector<MatE> transitions;

    // Invertibility, cocycle, gauge condition A_j T + dT = T A_i, and
    // chartwise curvature dA + A^A = 0.
    void validate() const;
    // Curvature of one chart (zero for all validated bundles).
    MatW curvature(size_t chart) const;
};

// Frobenius + morphism lift package for a morphism f : Y -> X given by
// chartwise ring homs R_{X,i} -> R_{Y,i}.
struct LiftData {
    const Covering* X = nullptr;
    const Covering* Y = nullptr;
    std::vector<RingHom> FX, FY;  // level-2 Frobenius lifts per chart
    std::vector<RingHom> f;       // level-2 morphism lifts chart_X -> chart_Y

    RingHom f1(size_t chart) const;  // level-1 morphism on a chart
    // Level-1 morphism transported to overlap index oi (checked to agree
    // from both sides).
    RingHom f1_overlap(size_t oi) const;
    // Frobenius/morphism lifts transported to overlap oi via chart side s.
    RingHom frobenius_on_overlap(const Covering& cov, const std::vector<RingHom>& lifts,
                                 size_t oi, size_t s) const;
    RingHom morphism_on_overlap(size_t oi, size_t s) const;

    // Lift shapes, f-reductions agreeing on overlaps, g-naturality
    // f o Frob_Y = Frob_X o f at level 1.
    void validate() const;
};

// The level-1 p-power Frobenius endomorphism of a chart or overlap ring.
RingHom frobenius_endo(RingPtr ring, int p);

enum class ObKind { FrobeniusX, FrobeniusY, Morphism };
// ob(F_X), ob(F_Y) or ob(f): entry (i,j) is (lift_i - lift_j)/p transported
// to the overlap.  Always passes check_cocycle.
DerivationCochain obstruction_class(const LiftData& L, ObKind kind);

// The three transports of section 3 landing in cochains twisted over
// g = Frob o f:
//   PullbackByF   delta |-> delta o f*   (precompose with form pullback)
//   PrecomposeFY  delta |-> Frob_Y o delta  (Frobenius applied to values)
//   TangentMapF   delta |-> f o delta       (f applied to values)
enum class PushMode { PullbackByF, PrecomposeFY, TangentMapF };
DerivationCochain pushforward_cochain(const DerivationCochain& c, PushMode mode, const LiftData& L);

// Entrywise contraction <delta, m>: sum_v base(coeff_v) * delta(omega_v).
MatE contract(const TwistedDerivation& d, const MatF& m);

// Explicit-witness isomorphism test; on failure *why names the first chart
// or overlap where the identity breaks.
bool bundle_iso_check(const GluedHiggsBundle& a, const GluedHiggsBundle& b,
                      const std::vector<MatE>& witness, std::string* why = nullptr);
bool bundle_iso_check(const GluedConnectionBundle& a, const GluedConnectionBundle& b,
                      const std::vector<MatE>& witness, std::string* why = nullptr);

}  // namespace charp

#endif
