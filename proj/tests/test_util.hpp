#ifndef CHARP_TEST_UTIL_HPP
#define CHARP_TEST_UTIL_HPP

#include <random>

#include "charp/registry.hpp"

namespace charp::testutil {

// Random level-2 perturbation of a lift: adds p * (random poly) to non-log
// images and multiplies log images by (1 + p * random poly), preserving both
// the mod-p reduction and the log shape.
inline RingHom perturb(const RingHom& h, std::mt19937_64& rng) {
    const RingPtr& tgt = h.target();
    Modulus mod = h.mod();
    int p = mod.p;
    std::uniform_int_distribution<int64_t> c(0, p - 1);
    std::uniform_int_distribution<int> d(0, 2);
    auto rand_poly = [&] {
        RingElem e = RingElem::zero(tgt, mod);
        for (size_t v = 0; v < tgt->nvars(); ++v)
            e += RingElem::var(tgt, mod, v).pow(d(rng)).scale(c(rng));
        if (tgt->nvars() == 0) e = RingElem::constant(tgt, mod, c(rng));
        return e;
    };
    std::vector<RingElem> images;
    for (size_t v = 0; v < h.source()->nvars(); ++v) {
        if (h.source()->vars[v].is_log)
            images.push_back(h.image(v) *
                             (RingElem::constant(tgt, mod, 1) + rand_poly().scale(p)));
        else
            images.push_back(h.image(v) + rand_poly().scale(p));
    }
    return RingHom(h.source(), h.target(), mod, std::move(images));
}

// Re-chooses every local lift of a scenario at random (same reductions).
inline void perturb_lifts(Scenario& s, std::mt19937_64& rng) {
    for (auto& h : s.lifts.FX) h = perturb(h, rng);
    for (auto& h : s.lifts.FY) h = perturb(h, rng);
    for (auto& h : s.lifts.f) h = perturb(h, rng);
}

inline std::vector<MatE> identity_witness(const GluedHiggsBundle& e) {
    std::vector<MatE> w;
    for (const auto& l : e.locals) w.push_back(MatE::identity(e.rank, l.ring, e.mod));
    return w;
}

}  // namespace charp::testutil

#endif
