#ifndef CHARP_SCENARIO_HPP
#define CHARP_SCENARIO_HPP

#include <memory>

#include "json.hpp"

#include "charp/cartier.hpp"

namespace charp {

using Json = nlohmann::json;

// A fully materialized verification scenario.  Coverings are heap-held so the
// internal pointers of LiftData / bundles stay valid across moves.
struct Scenario {
    std::string name;
    int prime = 0;
    int r = 1;
    std::shared_ptr<Covering> X, Y;
    LiftData lifts;
    GluedHiggsBundle higgs;                        // on X
    std::optional<GluedHiggsBundle> higgs2;        // for the tensor check
    std::optional<DerivationCochain> tau_override; // replaces ob(f) when present
    std::vector<std::string> checks;
    std::vector<std::string> statements;  // paper statements exercised

    // Structural validation: coverings, lifts, Frobenius shape, Higgs gluing,
    // r <= p-1 per chart, explicit tau cocycle.  Throws Error (exit-2 class).
    void validate() const;
};

// ---- JSON wire formats ----
// element: {"num":[{"c":int,"e":[int,...]},...],"den":[int,...]}
// ring:    {"vars":[{"name":str,"log":bool},...],"inverted":[poly,...]}
// hom:     {varname: element of the target ring, ...}
// covering:{"charts":[ring,...],"overlaps":[{"pair":[i,j],"ring":ring,
//            "restrict_i":hom,"restrict_j":hom,
//            "frac_i":{overlapvar:{"num":elem,"den":elem}},"frac_j":{...}}],
//           "triples":[{"trio":[i,j,k],"ring":ring,
//                       "from_ij":hom,"from_jk":hom,"from_ik":hom}]}

Poly poly_from_json(const Json& j, size_t nvars, const Modulus& mod);
Json poly_to_json(const Poly& p);
RingElem elem_from_json(const Json& j, const RingPtr& ring, const Modulus& mod);
Json elem_to_json(const RingElem& e);
// Inverted-element coefficients are canonicalized mod p^2 so the same
// descriptor serves both levels.
RingPtr ring_from_json(const Json& j, const Modulus& mod);
Json ring_to_json(const RingPtr& r);
RingHom hom_from_json(const Json& j, const RingPtr& src, const RingPtr& tgt, const Modulus& mod);
Json hom_to_json(const RingHom& h);
std::shared_ptr<Covering> covering_from_json(const Json& j, int p);
Json covering_to_json(const Covering& cov);

Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

// ---- execution ----

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct ScenarioReport {
    std::string scenario;
    bool ok = true;
    std::vector<CheckResult> checks;
};

// Runs the requested checks (or the full list when `only` is empty) in
// declared order.  Structural errors surface as thrown Error; check failures
// are reported, not thrown.
ScenarioReport run_scenario(const Scenario& s, const std::vector<std::string>& only = {},
                            int degree_cap = 0);

Json report_to_json(const ScenarioReport& r);
std::string report_to_text(const ScenarioReport& r);

}  // namespace charp

#endif
