#ifndef CHARP_MATRIX_HPP
#define CHARP_MATRIX_HPP

#include "charp/forms.hpp"

namespace charp {

// Dense matrix over a localized ring.  Sizes stay desk-scale (rank <= ~10),
// so inversion goes through the adjugate and determinants are expanded
// recursively.
class MatE {
  public:
    MatE() = default;
    MatE(size_t rows, size_t cols, RingPtr ring, Modulus mod);

    static MatE identity(size_t n, RingPtr ring, Modulus mod);
    static MatE zero(size_t n, RingPtr ring, Modulus mod) { return MatE(n, n, ring, mod); }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    const RingPtr& ring() const { return ring_; }
    const Modulus& mod() const { return mod_; }

    RingElem& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const RingElem& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    MatE operator+(const MatE& o) const;
    MatE operator-(const MatE& o) const;
    MatE operator-() const;
    MatE operator*(const MatE& o) const;
    MatE operator*(const RingElem& c) const;
    bool operator==(const MatE& o) const;
    bool is_zero() const;

    MatE pow(int e) const;
    RingElem det() const;
    MatE inverse() const;  // adjugate / det; throws NotAUnit when det is not a unit

    MatE map(const RingHom& h) const;  // entrywise hom application
    MatE reduce_mod_p() const;
    MatE divide_by_p() const;

    // Kronecker product (tensor of Higgs components) and block direct sum.
    static MatE kron(const MatE& a, const MatE& b);
    static MatE direct_sum(const MatE& a, const MatE& b);

  private:
    size_t rows_ = 0, cols_ = 0;
    RingPtr ring_;
    Modulus mod_{};
    std::vector<RingElem> data_;
};

// Matrix of logarithmic one-forms (connection matrices, Higgs fields as
// forms).
class MatF {
  public:
    MatF() = default;
    MatF(size_t n, RingPtr ring, Modulus mod);

    size_t size() const { return n_; }
    const RingPtr& ring() const { return ring_; }
    const Modulus& mod() const { return mod_; }
    LogOneForm& at(size_t i, size_t j) { return data_[i * n_ + j]; }
    const LogOneForm& at(size_t i, size_t j) const { return data_[i * n_ + j]; }

    MatF operator+(const MatF& o) const;
    MatF operator-(const MatF& o) const;
    bool operator==(const MatF& o) const;
    bool is_zero() const;

    // Form-coefficient matrix products.
    friend MatF operator*(const MatE& a, const MatF& b);
    friend MatF operator*(const MatF& a, const MatE& b);

    // Entrywise functorial transport along a hom (coefficients and basis
    // forms both move).
    MatF pullback(const RingHom& h) const;

  private:
    size_t n_ = 0;
    RingPtr ring_;
    Modulus mod_{};
    std::vector<LogOneForm> data_;
};

// Entrywise differential of an element matrix.
MatF d_entrywise(const MatE& a);
// coeff-matrix tensor basis one-form (each entry coeff[i][j] * w).
MatF tensor_basis(const MatE& coeff, const LogOneForm& w);

// Matrix of two-forms; only needed for the chartwise curvature check.
class MatW {
  public:
    MatW() = default;
    MatW(size_t n, RingPtr ring, Modulus mod);

    MatW operator+(const MatW& o) const;
    bool is_zero() const;

    TwoForm& at(size_t i, size_t j) { return data_[i * n_ + j]; }
    const TwoForm& at(size_t i, size_t j) const { return data_[i * n_ + j]; }

  private:
    size_t n_ = 0;
    std::vector<TwoForm> data_;
};

// d of a one-form matrix (entrywise).
MatW d_entrywise(const MatF& a);
// Wedge-product of two one-form matrices (matrix product, wedge on entries).
MatW wedge(const MatF& a, const MatF& b);

}  // namespace charp

#endif
