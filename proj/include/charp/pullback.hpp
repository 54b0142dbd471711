#ifndef CHARP_PULLBACK_HPP
#define CHARP_PULLBACK_HPP

#include "charp/cech.hpp"

namespace charp {

// Pullback situation along a morphism f : Y -> X given chartwise, together
// with a Cech cochain tau valued in f*T_X (one twisted derivation per
// overlap, base f, values in the Y overlap ring).
struct PullbackContext {
    const Covering* X = nullptr;
    const Covering* Y = nullptr;
    std::vector<RingHom> f;       // level-1 chartwise morphisms R_{X,i} -> R_{Y,i}
    std::vector<RingHom> f_over;  // level-1 morphisms on overlaps
    DerivationCochain tau;
    int r = 0;  // truncation order, Assumption: r <= p-1

    // Cocycle condition on tau, base consistency, r bound.
    void validate() const;
};

// Convenience constructor from lift data: f at level 1 and tau = ob(f).
PullbackContext context_from_lifts(const LiftData& lifts, int r);

// Plain pullback f*(E, theta): chartwise pullback of fields and transitions,
// no twisting.
GluedHiggsBundle plain_pullback(const GluedHiggsBundle& e, const PullbackContext& ctx);

// First construction: F^r_tau (x)_{f*A_r} f*E, computed through truncated
// symmetric algebra arithmetic (exp of tau in A_r, then its action on f*E).
GluedHiggsBundle tp1(const GluedHiggsBundle& e, const PullbackContext& ctx);

// Second construction: exponential twisting, transitions
// exp(tau_ij . f*theta) * f*(T_ij) via the matrix truncated exponential.
GluedHiggsBundle tp2(const GluedHiggsBundle& e, const PullbackContext& ctx);

// Third construction: E^r_tau (x)_{f*A_r} f*E through the extension bundle
// and its symmetric power (curve case: one-variable charts).
GluedHiggsBundle tp3(const GluedHiggsBundle& e, const PullbackContext& ctx);

// The rank-2 extension 0 -> f*T_X -> E_tau -> O_Y -> 0 (curve case) with its
// square-zero Higgs structure valued in f*Omega_X.  Matrices are stored in
// the coordinate convention (v_j = T_ij v_i); the paper's displays use the
// basis convention, i.e. transposes.
struct ExtensionE {
    const PullbackContext* ctx = nullptr;
    size_t rank = 0;
    std::vector<MatE> transitions;           // per overlap, over the Y overlap ring
    std::vector<std::vector<MatE>> action;   // per chart, per X-variable generator

    void validate() const;  // theta != 0 (non-split data), theta^2 = 0, intertwining
};
ExtensionE build_extension(const PullbackContext& ctx);

// Sym^r(E_tau) in the monomial basis e0^{r-d} (f*d)^d with the Leibniz
// action; same storage conventions as ExtensionE.
struct SymExtension {
    int r = 0;
    std::vector<MatE> transitions;
    std::vector<std::vector<MatE>> action;
};
SymExtension sym_power(const ExtensionE& e, int r);

// Lemma 2.6 filtration check on Sym^r(E_tau): F^i spanned by monomials of
// f*T-degree >= i, transitions and action filtered, graded pieces matching
// the degree pieces of f*A_r through the identity witness.
struct FiltrationReport {
    bool ok = false;
    std::vector<int> graded_ranks;
    std::string text;
};
FiltrationReport sym_filtration(const PullbackContext& ctx, int r);

// Prop 2.8 artifacts for the curve case.  gluing/higgs matrices are produced
// in the paper's basis convention; the E-side is expressed in the divided
// frame (1/r!, d/(r-1)!, ..., d^r).  iso_search runs a bounded-degree
// search for a chartwise f*A_r-module isomorphism between the F-side data
// and the displayed E-side data.
struct Prop28Report {
    int r = 0;
    int degree_cap = 0;
    MatE gluing_f, gluing_e;  // overlap (0,1)
    MatE higgs_f, higgs_e;    // chart 0 generator action
    bool iso_found = false;
    std::vector<MatE> iso_witness;  // chartwise, when found
    std::string note;
};
Prop28Report prop28_report(const PullbackContext& ctx, int r, int degree_cap);

// Prop 2.5(iii): tp2(E1 (x) E2) vs tp2(E1) (x) tp2(E2) with the witness
// supplied by the commuting-exponential identity.
bool check_tensor_compat(const GluedHiggsBundle& e1, const GluedHiggsBundle& e2,
                         const PullbackContext& ctx, std::string* why = nullptr);

// Glued tensor / direct sum of bundles over one covering.
GluedHiggsBundle tensor_bundle(const GluedHiggsBundle& a, const GluedHiggsBundle& b);
GluedHiggsBundle direct_sum_bundle(const GluedHiggsBundle& a, const GluedHiggsBundle& b);

}  // namespace charp

#endif
