#ifndef CHARP_RING_HPP
#define CHARP_RING_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "charp/error.hpp"

namespace charp {

// Coefficient modulus: Z/p (level 1) or Z/p^2 (level 2).  Primes are kept
// desk-scale so factorials and modular inverses stay trivial.
struct Modulus {
    int p = 0;
    int level = 1;

    int64_t m() const {
        return level == 1 ? int64_t(p) : int64_t(p) * p;
    }
    bool operator==(const Modulus&) const = default;

    static Modulus fp(int p);   // Z/p
    static Modulus w2(int p);   // Z/p^2
};

bool is_small_odd_prime(int p);

// Inverse of a mod m (m = p or p^2); throws NotAUnit when gcd(a,m) != 1.
int64_t inv_mod(int64_t a, int64_t m);

struct VarInfo {
    std::string name;
    bool is_log = false;
    bool operator==(const VarInfo&) const = default;
};

// Exponent vector indexed by the ring's declared variable order.
using Exponents = std::vector<int>;

// Plain polynomial: monomial -> coefficient in [0, m).  std::map gives the
// lexicographic monomial order used for all serialized output.
using Poly = std::map<Exponents, int64_t>;

struct RingDescriptor;
using RingPtr = std::shared_ptr<const RingDescriptor>;

// A localized polynomial ring: variables (some carrying the log flag) and a
// list of monic polynomials whose multiplicative span is inverted.
struct RingDescriptor {
    std::vector<VarInfo> vars;
    std::vector<Poly> inverted;

    size_t nvars() const { return vars.size(); }
    int var_index(const std::string& name) const;
    bool operator==(const RingDescriptor&) const = default;

    static RingPtr make(std::vector<VarInfo> vars, std::vector<Poly> inverted);
};

// ---- Poly helpers (coefficients always normalized into [0, m)) ----

Poly poly_zero();
Poly poly_const(int64_t c, size_t nvars, const Modulus& mod);
Poly poly_var(size_t idx, size_t nvars);
Poly poly_add(const Poly& a, const Poly& b, const Modulus& mod);
Poly poly_sub(const Poly& a, const Poly& b, const Modulus& mod);
Poly poly_neg(const Poly& a, const Modulus& mod);
Poly poly_mul(const Poly& a, const Poly& b, const Modulus& mod);
Poly poly_scale(const Poly& a, int64_t c, const Modulus& mod);
Poly poly_pow(const Poly& a, int e, const Modulus& mod);
// Partial derivative with respect to variable idx.
Poly poly_derivative(const Poly& a, size_t idx, const Modulus& mod);
// Exact division; nullopt when b does not divide a.  Requires the leading
// coefficient of b (lex order) to be a unit mod m.
std::optional<Poly> poly_exact_divide(const Poly& a, const Poly& b, const Modulus& mod);
bool poly_is_monic_unit_lead(const Poly& b, const Modulus& mod);

// An element of the localized ring: numerator polynomial over a denominator
// that is a monomial in the inverted list.  Kept in canonical form: nonzero
// coefficients, denominator exponents minimal.
class RingElem {
  public:
    RingElem() = default;
    RingElem(RingPtr ring, Modulus mod, Poly num, std::vector<int> den);

    static RingElem zero(RingPtr ring, Modulus mod);
    static RingElem constant(RingPtr ring, Modulus mod, int64_t c);
    static RingElem var(RingPtr ring, Modulus mod, size_t idx);
    static RingElem var(RingPtr ring, Modulus mod, const std::string& name);

    const RingPtr& ring() const { return ring_; }
    const Modulus& mod() const { return mod_; }
    const Poly& num() const { return num_; }
    const std::vector<int>& den() const { return den_; }

    bool is_zero() const { return num_.empty(); }
    bool is_polynomial() const;
    // Constant value when the element is a scalar (den trivial after
    // canonicalization and numerator constant).
    std::optional<int64_t> as_constant() const;

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator-() const;
    RingElem operator*(const RingElem& o) const;
    RingElem& operator+=(const RingElem& o) { return *this = *this + o; }
    RingElem& operator-=(const RingElem& o) { return *this = *this - o; }
    RingElem& operator*=(const RingElem& o) { return *this = *this * o; }

    RingElem scale(int64_t c) const;
    RingElem pow(int e) const;

    // Equality by cross-multiplication in the polynomial ring (decidable
    // because inverted elements are nonzerodivisors).
    bool operator==(const RingElem& o) const;
    bool operator!=(const RingElem& o) const { return !(*this == o); }

    // Multiplicative inverse in the localization.  Level 1: strips inverted
    // factors from the numerator until a unit scalar remains.  Level 2:
    // Newton-lifts the level-1 inverse.  Throws NotAUnit.
    RingElem inverse() const;
    bool is_unit() const;

    // Coefficientwise reduction Z/p^2 -> Z/p.
    RingElem reduce_mod_p() const;
    // Divide every coefficient by p (level 2 -> level 1); throws NotDivisible.
    RingElem divide_by_p() const;
    // Lift level 1 -> level 2 by taking representatives in [0,p).
    RingElem lift_to_w2() const;

    // Partial derivative with respect to variable idx (quotient rule over
    // the inverted denominators).
    RingElem derivative(size_t idx) const;

    // Divide by the monomial x_idx^k: exact division of the numerator where
    // possible, denominator bookkeeping when x_idx itself is inverted.
    // Throws NotDivisible otherwise.
    RingElem divide_by_var_power(size_t idx, int k) const;

    std::string to_string() const;

  private:
    void canonicalize();
    Poly den_poly() const;

    RingPtr ring_;
    Modulus mod_{};
    Poly num_;
    std::vector<int> den_;
};

// Factorization of an element as (monomial in log variables) x (unit).
// Used for log-shape checks on Frobenius and morphism lifts.  The exponent
// of a log variable may be negative when that variable is inverted.
struct LogMonomialSplit {
    std::vector<int> log_exponents;  // indexed by variable; zero on non-log vars
    RingElem unit;                   // remaining factor, a unit of the localization
};
// Throws LogViolation when the element is not of that shape.
LogMonomialSplit split_log_monomial(const RingElem& e);

}  // namespace charp

#endif
