#ifndef CHARP_FORMS_HPP
#define CHARP_FORMS_HPP

#include <vector>

#include "charp/ring.hpp"

namespace charp {

// Logarithmic one-form: coefficient per variable, in the dlog basis for log
// variables and the dx basis for ordinary ones.
struct LogOneForm {
    RingPtr ring;
    Modulus mod;
    std::vector<RingElem> coeffs;  // indexed by variable

    static LogOneForm zero(RingPtr ring, Modulus mod);
    static LogOneForm basis(RingPtr ring, Modulus mod, size_t var);

    bool is_zero() const;
    LogOneForm operator+(const LogOneForm& o) const;
    LogOneForm operator-(const LogOneForm& o) const;
    LogOneForm operator-() const;
    LogOneForm operator*(const RingElem& c) const;  // scalar multiplication
    bool operator==(const LogOneForm& o) const;

    LogOneForm divide_by_p() const;  // coefficientwise, level 2 -> 1
    LogOneForm reduce_mod_p() const;
};

// Two-form in the wedge basis e_v ^ e_w (v < w in variable order).
struct TwoForm {
    RingPtr ring;
    Modulus mod;
    std::vector<RingElem> coeffs;  // indexed by pair_index(v,w), v < w

    static TwoForm zero(RingPtr ring, Modulus mod);
    static size_t pair_index(size_t v, size_t w, size_t nvars);

    bool is_zero() const;
    TwoForm operator+(const TwoForm& o) const;
    TwoForm operator-(const TwoForm& o) const;
    bool operator==(const TwoForm& o) const;
};

// d on ring elements: Leibniz rule, d(x) = x dlog x on log variables.
LogOneForm differential(const RingElem& e);
// d on one-forms (the basis forms are closed).
TwoForm differential(const LogOneForm& w);
TwoForm wedge(const LogOneForm& a, const LogOneForm& b);

// Ring homomorphism determined by variable images.  Inverted elements of the
// source must map to units (checked lazily when denominators are crossed).
class RingHom {
  public:
    RingHom() = default;
    RingHom(RingPtr source, RingPtr target, Modulus mod, std::vector<RingElem> images);

    static RingHom identity(RingPtr ring, Modulus mod);

    const RingPtr& source() const { return source_; }
    const RingPtr& target() const { return target_; }
    const Modulus& mod() const { return mod_; }
    const RingElem& image(size_t v) const { return images_[v]; }

    RingElem apply(const RingElem& e) const;
    RingElem apply(const Poly& p) const;

    // this o other (apply other first).
    RingHom compose(const RingHom& other) const;
    RingHom reduce_mod_p() const;

    // Checks the construction invariants: inverted source elements map to
    // units, log variables map to (log monomial) x (unit).
    void validate() const;

    bool operator==(const RingHom& o) const;

  private:
    RingPtr source_, target_;
    Modulus mod_{};
    std::vector<RingElem> images_;
};

// Functorial pullback of forms: h*(dx) = d(h(x)), h*(dlog x) = dlog of the
// monomial part plus d(unit)/unit.  Throws LogViolation when a log variable
// image is not of monomial x unit shape.
LogOneForm pullback_form(const RingHom& h, const LogOneForm& w);
// Pullback of the basis form of variable v.
LogOneForm pullback_basis_form(const RingHom& h, size_t v);

// Derivation twisted along a base homomorphism: values on the basis forms of
// the source ring, extended to forms by delta(a w) = base(a) delta(w).
struct TwistedDerivation {
    RingHom base;                   // level-1 hom source -> target
    std::vector<RingElem> values;   // per source var, element of the target ring

    static TwistedDerivation zero(RingHom base);

    RingElem apply(const LogOneForm& w) const;
    RingElem apply_to_diff(const RingElem& e) const;

    bool is_zero() const;
    TwistedDerivation operator+(const TwistedDerivation& o) const;
    TwistedDerivation operator-(const TwistedDerivation& o) const;
    TwistedDerivation operator-() const;
    // Value-wise equality (bases are assumed to agree).
    bool operator==(const TwistedDerivation& o) const;
};

// The divided difference (a - b)/p of two level-2 homomorphisms with equal
// reduction mod p, as a derivation twisted along that reduction.
TwistedDerivation hom_difference_derivation(const RingHom& a, const RingHom& b);

}  // namespace charp

#endif
