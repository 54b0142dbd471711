#include "charp/matrix.hpp"

namespace charp {

MatE::MatE(size_t rows, size_t cols, RingPtr ring, Modulus mod)
    : rows_(rows), cols_(cols), ring_(std::move(ring)), mod_(mod) {
    data_.assign(rows_ * cols_, RingElem::zero(ring_, mod_));
}

MatE MatE::identity(size_t n, RingPtr ring, Modulus mod) {
    MatE m(n, n, ring, mod);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = RingElem::constant(ring, mod, 1);
    return m;
}

MatE MatE::operator+(const MatE& o) const {
    MatE r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
}

MatE MatE::operator-(const MatE& o) const {
    MatE r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
}

MatE MatE::operator-() const {
    MatE r = *this;
    for (auto& e : r.data_) e = -e;
    return r;
}

MatE MatE::operator*(const MatE& o) const {
    if (cols_ != o.rows_) throw Error(ErrKind::ShapeMismatch, "matrix product shape mismatch");
    MatE r(rows_, o.cols_, ring_, mod_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (size_t j = 0; j < o.cols_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
        }
    return r;
}

MatE MatE::operator*(const RingElem& c) const {
    MatE r = *this;
    for (auto& e : r.data_) e *= c;
    return r;
}

bool MatE::operator==(const MatE& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < data_.size(); ++i)
        if (!(data_[i] == o.data_[i])) return false;
    return true;
}

bool MatE::is_zero() const {
    for (const auto& e : data_)
        if (!e.is_zero()) return false;
    return true;
}

MatE MatE::pow(int e) const {
    MatE r = identity(rows_, ring_, mod_);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

static RingElem det_rec(const MatE& m, std::vector<size_t> rows, std::vector<size_t> cols) {
    if (rows.size() == 1) return m.at(rows[0], cols[0]);
    RingElem r = RingElem::zero(m.ring(), m.mod());
    std::vector<size_t> subrows(rows.begin() + 1, rows.end());
    for (size_t j = 0; j < cols.size(); ++j) {
        const RingElem& piv = m.at(rows[0], cols[j]);
        if (piv.is_zero()) continue;
        std::vector<size_t> subcols;
        for (size_t k = 0; k < cols.size(); ++k)
            if (k != j) subcols.push_back(cols[k]);
        RingElem minor = det_rec(m, subrows, subcols);
        RingElem term = piv * minor;
        r += (j % 2 == 0) ? term : -term;
    }
    return r;
}

RingElem MatE::det() const {
    if (rows_ != cols_) throw Error(ErrKind::ShapeMismatch, "determinant of non-square matrix");
    std::vector<size_t> idx(rows_);
    for (size_t i = 0; i < rows_; ++i) idx[i] = i;
    return det_rec(*this, idx, idx);
}

MatE MatE::inverse() const {
    if (rows_ != cols_) throw Error(ErrKind::ShapeMismatch, "inverse of non-square matrix");
    RingElem d = det();
    RingElem dinv = d.inverse();
    size_t n = rows_;
    MatE adj(n, n, ring_, mod_);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::vector<size_t> rr, cc;
            for (size_t k = 0; k < n; ++k) {
                if (k != i) rr.push_back(k);
                if (k != j) cc.push_back(k);
            }
            RingElem minor = (n == 1) ? RingElem::constant(ring_, mod_, 1) : det_rec(*this, rr, cc);
            RingElem cof = ((i + j) % 2 == 0) ? minor : -minor;
            adj.at(j, i) = cof * dinv;
        }
    return adj;
}

MatE MatE::map(const RingHom& h) const {
    MatE r(rows_, cols_, h.target(), h.mod());
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) r.at(i, j) = h.apply(at(i, j));
    return r;
}

MatE MatE::reduce_mod_p() const {
    MatE r(rows_, cols_, ring_, Modulus::fp(mod_.p));
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].reduce_mod_p();
    return r;
}

MatE MatE::divide_by_p() const {
    MatE r(rows_, cols_, ring_, Modulus::fp(mod_.p));
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].divide_by_p();
    return r;
}

MatE MatE::kron(const MatE& a, const MatE& b) {
    MatE r(a.rows_ * b.rows_, a.cols_ * b.cols_, a.ring_, a.mod_);
    for (size_t i = 0; i < a.rows_; ++i)
        for (size_t j = 0; j < a.cols_; ++j) {
            if (a.at(i, j).is_zero()) continue;
            for (size_t k = 0; k < b.rows_; ++k)
                for (size_t l = 0; l < b.cols_; ++l)
                    r.at(i * b.rows_ + k, j * b.cols_ + l) = a.at(i, j) * b.at(k, l);
        }
    return r;
}

MatE MatE::direct_sum(const MatE& a, const MatE& b) {
    MatE r(a.rows_ + b.rows_, a.cols_ + b.cols_, a.ring_, a.mod_);
    for (size_t i = 0; i < a.rows_; ++i)
        for (size_t j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (size_t i = 0; i < b.rows_; ++i)
        for (size_t j = 0; j < b.cols_; ++j) r.at(a.rows_ + i, a.cols_ + j) = b.at(i, j);
    return r;
}

// ---- MatF ----

MatF::MatF(size_t n, RingPtr ring, Modulus mod) : n_(n), ring_(std::move(ring)), mod_(mod) {
    data_.assign(n_ * n_, LogOneForm::zero(ring_, mod_));
}

MatF MatF::operator+(const MatF& o) const {
    MatF r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] + o.data_[i];
    return r;
}

MatF MatF::operator-(const MatF& o) const {
    MatF r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] - o.data_[i];
    return r;
}

bool MatF::operator==(const MatF& o) const {
    if (n_ != o.n_) return false;
    for (size_t i = 0; i < data_.size(); ++i)
        if (!(data_[i] == o.data_[i])) return false;
    return true;
}

bool MatF::is_zero() const {
    for (const auto& e : data_)
        if (!e.is_zero()) return false;
    return true;
}

MatF operator*(const MatE& a, const MatF& b) {
    MatF r(b.size(), b.ring(), b.mod());
    for (size_t i = 0; i < b.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (size_t j = 0; j < b.size(); ++j)
                r.at(i, j) = r.at(i, j) + b.at(k, j) * a.at(i, k);
        }
    return r;
}

MatF operator*(const MatF& a, const MatE& b) {
    MatF r(a.size(), a.ring(), a.mod());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < a.size(); ++k)
            for (size_t j = 0; j < a.size(); ++j) {
                if (b.at(k, j).is_zero()) continue;
                r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
            }
    return r;
}

MatF MatF::pullback(const RingHom& h) const {
    MatF r(n_, h.target(), h.mod());
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = pullback_form(h, data_[i]);
    return r;
}

MatF d_entrywise(const MatE& a) {
    MatF r(a.rows(), a.ring(), a.mod());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r.at(i, j) = differential(a.at(i, j));
    return r;
}

MatF tensor_basis(const MatE& coeff, const LogOneForm& w) {
    MatF r(coeff.rows(), coeff.ring(), coeff.mod());
    for (size_t i = 0; i < coeff.rows(); ++i)
        for (size_t j = 0; j < coeff.cols(); ++j) r.at(i, j) = w * coeff.at(i, j);
    return r;
}

// ---- MatW ----

MatW::MatW(size_t n, RingPtr ring, Modulus mod) : n_(n) {
    data_.assign(n_ * n_, TwoForm::zero(ring, mod));
}

MatW MatW::operator+(const MatW& o) const {
    MatW r = *this;
    for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] + o.data_[i];
    return r;
}

bool MatW::is_zero() const {
    for (const auto& e : data_)
        if (!e.is_zero()) return false;
    return true;
}

MatW d_entrywise(const MatF& a) {
    MatW r(a.size(), a.at(0, 0).ring, a.at(0, 0).mod);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j) r.at(i, j) = differential(a.at(i, j));
    return r;
}

MatW wedge(const MatF& a, const MatF& b) {
    size_t n = a.size();
    MatW r(n, a.at(0, 0).ring, a.at(0, 0).mod);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
                r.at(i, j) = r.at(i, j) + wedge(a.at(i, k), b.at(k, j));
    return r;
}

}  // namespace charp
