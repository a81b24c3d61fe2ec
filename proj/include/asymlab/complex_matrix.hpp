#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "asymlab/rng.hpp"

namespace asymlab {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major.  The finite-dimensional stand-in
// for a bounded Hilbert-space operator; all spectral machinery in the library
// operates on this type.  Values are immutable once built by an operation and
// safe to share across threads.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, Complex(0.0, 0.0)) {}
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(const std::vector<double>& values);
    static ComplexMatrix diagonal(const std::vector<Complex>& values);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    const std::vector<Complex>& entries() const noexcept { return entries_; }
    std::vector<Complex>& entries() noexcept { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    // (A + A*)/2, used to re-symmetrize Hermitian iterates after roundoff
    ComplexMatrix hermitized() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

    std::vector<Complex> apply(const std::vector<Complex>& x) const;
    std::vector<Complex> apply_adjoint(const std::vector<Complex>& x) const;

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;
    bool is_hermitian(double tol) const;

    // contiguous principal block rows [r0, r0+r) x cols [c0, c0+c)
    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t r, std::size_t c_rows) const;
    std::vector<Complex> column(std::size_t j) const;
    void set_column(std::size_t j, const std::vector<Complex>& col);

private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(Complex scalar, ComplexMatrix mat);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// vector helpers shared by the modules
double vec_norm(const std::vector<Complex>& x);
Complex vec_dot(const std::vector<Complex>& x, const std::vector<Complex>& y); // <x, y>, conjugate-linear in x

// random model operators (deterministic given the Rng state)
ComplexMatrix random_ginibre(std::size_t dim, Rng& rng);

} // namespace asymlab
