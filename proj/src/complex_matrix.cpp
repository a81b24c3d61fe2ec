#include "asymlab/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "asymlab/errors.hpp"

namespace asymlab {

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_)
        fail(ErrorCode::InvalidArgument, "entry count does not equal dim^2");
    if (!all_finite())
        fail(ErrorCode::InvalidArgument, "matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t n = rows.size();
    ComplexMatrix m(n);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n) fail(ErrorCode::InvalidArgument, "ragged row in matrix literal");
        std::size_t j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            m(j, i) = (*this)(i, j);
    return m;
}

ComplexMatrix ComplexMatrix::hermitized() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        m(i, i) = Complex((*this)(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < dim_; ++j) {
            const Complex v = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

std::vector<Complex> ComplexMatrix::apply(const std::vector<Complex>& x) const {
    std::vector<Complex> y(dim_, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < dim_; ++i) {
        Complex acc(0.0, 0.0);
        const Complex* row = entries_.data() + i * dim_;
        for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

std::vector<Complex> ComplexMatrix::apply_adjoint(const std::vector<Complex>& x) const {
    std::vector<Complex> y(dim_, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < dim_; ++i) {
        const Complex xi = x[i];
        const Complex* row = entries_.data() + i * dim_;
        for (std::size_t j = 0; j < dim_; ++j) y[j] += std::conj(row[j]) * xi;
    }
    return y;
}

double ComplexMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (const auto& e : entries_) acc += std::norm(e);
    return std::sqrt(acc);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& e : entries_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c) const {
    // rectangular requests come back zero-padded in a square container
    ComplexMatrix out(std::max(r, c));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
}

std::vector<Complex> ComplexMatrix::column(std::size_t j) const {
    std::vector<Complex> col(dim_);
    for (std::size_t i = 0; i < dim_; ++i) col[i] = (*this)(i, j);
    return col;
}

void ComplexMatrix::set_column(std::size_t j, const std::vector<Complex>& col) {
    for (std::size_t i = 0; i < dim_; ++i) (*this)(i, j) = col[i];
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs += rhs;
    return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
    lhs -= rhs;
    return lhs;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    const std::size_t n = lhs.dim();
    ComplexMatrix out(n);
    const Complex* b = rhs.entries().data();
    for (std::size_t i = 0; i < n; ++i) {
        Complex* ci = out.entries().data() + i * n;
        const Complex* ai = lhs.entries().data() + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = ai[k];
            if (aik.real() == 0.0 && aik.imag() == 0.0) continue;
            const Complex* bk = b + k * n;
            for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
    return out;
}

ComplexMatrix operator*(Complex scalar, ComplexMatrix mat) {
    mat *= scalar;
    return mat;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

double vec_norm(const std::vector<Complex>& x) {
    double acc = 0.0;
    for (const auto& v : x) acc += std::norm(v);
    return std::sqrt(acc);
}

Complex vec_dot(const std::vector<Complex>& x, const std::vector<Complex>& y) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

ComplexMatrix random_ginibre(std::size_t dim, Rng& rng) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            m(i, j) = rng.gaussian_complex();
    return m;
}

} // namespace asymlab
