#ifndef CHARP_HIGGS_HPP
#define CHARP_HIGGS_HPP

#include "charp/matrix.hpp"

namespace charp {

// Nilpotent Higgs module on one chart: free module of the given rank with one
// component matrix per variable of the chart ring, theta = sum theta_v (x)
// basis_v.  Components must commute pairwise (theta ^ theta = 0).
struct HiggsLocal {
    RingPtr ring;
    Modulus mod{};
    size_t rank = 0;
    std::vector<MatE> theta;  // indexed by variable
    int exponent_bound = 0;   // r: all (r+1)-fold products of components vanish

    static HiggsLocal zero(RingPtr ring, Modulus mod, size_t rank);
    // Higgs field as a matrix of one-forms.
    MatF field() const;
    bool operator==(const HiggsLocal& o) const;
};

// Smallest r with all (r+1)-fold products of components zero.  Throws
// NotCommuting when theta ^ theta != 0, NotNilpotent when no r <= rank *
// nvars works.
int check_nilpotent(const HiggsLocal& h);

// Truncated symmetric algebra A_r = Sym(T)/Sym^{>= r+1}(T): free module on
// the monomials of total degree <= r in the tangent generators, ordered by
// total degree then lex.
struct TruncSymAlgebra {
    RingPtr ring;  // coefficient ring
    Modulus mod{};
    int r = 0;
    size_t ngens = 0;              // tangent generators; defaults to ring->nvars()
    std::vector<Exponents> basis;  // generator-exponent vectors, |e| <= r

    static TruncSymAlgebra make(RingPtr ring, Modulus mod, int r);
    static TruncSymAlgebra make(RingPtr ring, Modulus mod, int r, size_t ngens);
    size_t dim() const { return basis.size(); }
    size_t index_of(const Exponents& e) const;
};

// Element of A_r with coefficients in the (possibly localized) base ring.
struct AlgebraElem {
    const TruncSymAlgebra* alg = nullptr;
    std::vector<RingElem> coeffs;  // indexed by alg->basis

    static AlgebraElem zero(const TruncSymAlgebra& alg);
    static AlgebraElem one(const TruncSymAlgebra& alg);
    // Degree-one element sum tau_v * generator_v.
    static AlgebraElem degree_one(const TruncSymAlgebra& alg, const std::vector<RingElem>& tau);

    AlgebraElem operator+(const AlgebraElem& o) const;
    AlgebraElem operator*(const AlgebraElem& o) const;
    bool operator==(const AlgebraElem& o) const;

    // exp of an element with zero constant term (nilpotent in A_r); requires
    // r <= p-1.
    AlgebraElem exp() const;

    // Image under the action homomorphism sending generator v to gens[v]
    // (commuting matrices).
    MatE action(const std::vector<MatE>& gens, size_t rank) const;
};

// A_r-module on a chart: Lemma-2.2 counterpart of a nilpotent Higgs module.
struct ArModule {
    TruncSymAlgebra algebra;
    size_t rank = 0;
    std::vector<MatE> action;  // one matrix per degree-one generator
};

ArModule higgs_to_armodule(const HiggsLocal& e, int r);
HiggsLocal armodule_to_higgs(const ArModule& m);

// Recover the component matrices of a Higgs field given as a matrix of
// one-forms.
HiggsLocal higgs_from_field(const MatF& f);

// Smallest r with n^{r+1} = 0; throws NotNilpotent past the size bound.
int nilpotent_order(const MatE& n);

// exp(N) truncated at degree r with exact modular factorial inverses.
// Requires r <= p-1 (FactorialNotInvertible) and N^{r+1} = 0
// (NotNilpotentEnough).
MatE trunc_exp(const MatE& n, int r);

HiggsLocal tensor_higgs(const HiggsLocal& a, const HiggsLocal& b);
HiggsLocal direct_sum_higgs(const HiggsLocal& a, const HiggsLocal& b);

}  // namespace charp

#endif
