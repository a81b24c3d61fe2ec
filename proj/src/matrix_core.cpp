#include "asymlab/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asymlab/errors.hpp"

namespace asymlab {

namespace {

double off_diagonal_mass(const ComplexMatrix& a) {
    double acc = 0.0;
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) acc += std::norm(a(i, j));
    return std::sqrt(acc);
}

// One complex Jacobi rotation annihilating b(p,q).  The rotation
//   J = [[c, -s e^{i phi}], [s e^{-i phi}, c]],  phi = arg b(p,q)
// is applied as B <- J* B J and accumulated into V <- V J.
void jacobi_rotate(ComplexMatrix& b, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex bpq = b(p, q);
    const double abs_bpq = std::abs(bpq);
    if (abs_bpq == 0.0) return;

    const double app = b(p, p).real();
    const double aqq = b(q, q).real();
    const double tau = (app - aqq) / (2.0 * abs_bpq);
    const double sign = (tau >= 0.0) ? 1.0 : -1.0;
    const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Complex phase = bpq / abs_bpq;

    const std::size_t n = b.dim();
    for (std::size_t r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        const Complex brp = b(r, p);
        const Complex brq = b(r, q);
        b(r, p) = c * brp + s * std::conj(phase) * brq;
        b(r, q) = -s * phase * brp + c * brq;
        b(p, r) = std::conj(b(r, p));
        b(q, r) = std::conj(b(r, q));
    }
    b(p, p) = Complex(app + t * abs_bpq, 0.0);
    b(q, q) = Complex(aqq - t * abs_bpq, 0.0);
    b(p, q) = Complex(0.0, 0.0);
    b(q, p) = Complex(0.0, 0.0);

    for (std::size_t r = 0; r < n; ++r) {
        const Complex vrp = v(r, p);
        const Complex vrq = v(r, q);
        v(r, p) = c * vrp + s * std::conj(phase) * vrq;
        v(r, q) = -s * phase * vrp + c * vrq;
    }
}

struct LuFactor {
    ComplexMatrix lu;
    std::vector<std::size_t> perm;
    bool singular = false;
    double min_pivot = 0.0;
    double scale = 0.0;
};

LuFactor lu_factor(const ComplexMatrix& x) {
    const std::size_t n = x.dim();
    LuFactor f;
    f.lu = x;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    f.scale = x.max_abs();
    f.min_pivot = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double cand = std::abs(f.lu(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        const double pivot_abs = std::abs(f.lu(k, k));
        f.min_pivot = std::min(f.min_pivot, pivot_abs);
        if (pivot_abs <= 1e-300 * std::max(1.0, f.scale)) {
            f.singular = true;
            return f;
        }
        const Complex inv_pivot = 1.0 / f.lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex m = f.lu(i, k) * inv_pivot;
            f.lu(i, k) = m;
            if (m.real() == 0.0 && m.imag() == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

std::vector<Complex> lu_solve(const LuFactor& f, const std::vector<Complex>& rhs) {
    const std::size_t n = f.perm.size();
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc = rhs[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * y[j];
        y[i] = acc;
    }
    std::vector<Complex> z(n);
    for (std::size_t ii = n; ii-- > 0;) {
        Complex acc = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu(ii, j) * z[j];
        z[ii] = acc / f.lu(ii, ii);
    }
    return z;
}

} // namespace

HermEigen herm_eig(const ComplexMatrix& a, double eig_tol) {
    const std::size_t n = a.dim();
    const double scale = a.frobenius_norm();
    if (!a.is_hermitian(std::max(eig_tol * scale, 1e-14 * std::max(scale, 1.0)) * 10.0))
        fail(ErrorCode::NotHermitian, "herm_eig requires a Hermitian input");

    ComplexMatrix b = a.hermitized();
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double target = std::max(eig_tol * scale, 1e-300);

    const int max_sweeps = 64;
    int sweep = 0;
    while (off_diagonal_mass(b) > target) {
        if (++sweep > max_sweeps)
            fail(ErrorCode::NoConvergence, "Jacobi sweep budget exhausted");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                jacobi_rotate(b, v, p, q);
    }

    HermEigen out;
    out.eigenvalues.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = b(i, i).real();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

double op_norm(const ComplexMatrix& a, double eig_tol) {
    if (a.dim() == 0) return 0.0;
    const auto sv = singular_values(a, eig_tol);
    return sv.empty() ? 0.0 : sv.back();
}

std::vector<double> singular_values(const ComplexMatrix& a, double eig_tol) {
    const ComplexMatrix gram = (a.adjoint() * a).hermitized();
    auto eig = herm_eig(gram, eig_tol);
    for (auto& w : eig.eigenvalues) w = std::sqrt(std::max(w, 0.0));
    return eig.eigenvalues;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a, double eig_tol) {
    const auto eig = herm_eig(a, eig_tol);
    const double scale = std::abs(eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back());
    const std::size_t n = a.dim();
    ComplexMatrix root(n);
    for (std::size_t k = 0; k < n; ++k) {
        double w = eig.eigenvalues[k];
        if (w < 0.0) {
            if (w < -100.0 * std::max(eig_tol * scale, eig_tol))
                fail(ErrorCode::SingularPositiveOperator,
                     "matrix is not positive semidefinite (eigenvalue " + std::to_string(w) + ")");
            w = 0.0;
        }
        const double s = std::sqrt(w);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                root(i, j) += s * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
    }
    return root.hermitized();
}

std::pair<ComplexMatrix, ComplexMatrix>
psd_sqrt_and_invsqrt(const ComplexMatrix& a, double floor, double eig_tol) {
    const auto eig = herm_eig(a, eig_tol);
    const std::size_t n = a.dim();
    if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < floor)
        fail(ErrorCode::SingularPositiveOperator,
             "minimum eigenvalue " + std::to_string(eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front()) +
                 " below floor " + std::to_string(floor));
    ComplexMatrix root(n);
    ComplexMatrix inv_root(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = std::sqrt(eig.eigenvalues[k]);
        const double si = 1.0 / s;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const Complex outer = eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
                root(i, j) += s * outer;
                inv_root(i, j) += si * outer;
            }
    }
    return {root.hermitized(), inv_root.hermitized()};
}

GammaResult reduced_min_modulus(const ComplexMatrix& a, double kernel_tol, double eig_tol) {
    GammaResult res;
    res.kernel_tol = kernel_tol;
    const auto sv = singular_values(a, eig_tol);
    double min_above = std::numeric_limits<double>::infinity();
    for (const double s : sv) {
        if (s <= kernel_tol)
            ++res.kernel_dim;
        else
            min_above = std::min(min_above, s);
    }
    if (res.kernel_dim == sv.size()) {
        res.zero_operator = true;
        res.value = std::numeric_limits<double>::infinity();
    } else {
        res.value = min_above;
    }
    return res;
}

BlockSplit spectral_subspace(const ComplexMatrix& a, double lo, double hi, double eig_tol) {
    const auto eig = herm_eig(a, eig_tol);
    const std::size_t n = a.dim();
    std::vector<std::vector<Complex>> selected, rest;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = eig.eigenvalues[k];
        auto col = eig.eigenvectors.column(k);
        if (w >= lo && w < hi)
            selected.push_back(std::move(col));
        else
            rest.push_back(std::move(col));
    }
    BlockSplit split;
    split.k_dim = selected.size();
    std::vector<std::vector<Complex>> all = selected;
    all.insert(all.end(), rest.begin(), rest.end());
    split.basis = orthonormalize_columns(all, n);
    return split;
}

BlockSplit kernel_split(const ComplexMatrix& a, double kernel_tol, double eig_tol) {
    return spectral_subspace(a, -std::numeric_limits<double>::infinity(),
                             std::nextafter(kernel_tol, std::numeric_limits<double>::infinity()),
                             eig_tol);
}

ComplexMatrix block_upper_inverse(const ComplexMatrix& x, const BlockSplit& split, double tol) {
    const std::size_t n = x.dim();
    const std::size_t k = split.k_dim;
    const std::size_t m = n - k;
    const ComplexMatrix y = split.basis.adjoint() * x * split.basis;

    double lower_mass = 0.0;
    for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            lower_mass += std::norm(y(i, j));
    lower_mass = std::sqrt(lower_mass);
    const double scale = op_norm(x);
    if (lower_mass > tol * std::max(scale, 1e-300))
        fail(ErrorCode::NotUpperTriangularInSplit,
             "lower-left block mass " + std::to_string(lower_mass) + " exceeds tolerance");

    ComplexMatrix y11(k), y22(m);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) y11(i, j) = y(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) y22(i, j) = y(k + i, k + j);

    ComplexMatrix y11_inv, y22_inv;
    try {
        y11_inv = (k > 0) ? invert(y11) : ComplexMatrix(0);
        y22_inv = (m > 0) ? invert(y22) : ComplexMatrix(0);
    } catch (const Error&) {
        fail(ErrorCode::SingularBlock, "a diagonal block of the split is numerically singular");
    }

    ComplexMatrix inv(n);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) inv(i, j) = y11_inv(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) inv(k + i, k + j) = y22_inv(i, j);
    // top-right: -Y11^-1 Y12 Y22^-1
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Complex acc(0.0, 0.0);
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t q = 0; q < m; ++q)
                    acc += y11_inv(i, p) * y(p, k + q) * y22_inv(q, j);
            inv(i, k + j) = -acc;
        }

    return split.basis * inv * split.basis.adjoint();
}

ComplexMatrix invert(const ComplexMatrix& x) {
    const std::size_t n = x.dim();
    const auto f = lu_factor(x);
    if (f.singular || f.min_pivot <= 1e-14 * std::max(1.0, f.scale))
        fail(ErrorCode::SingularBlock, "matrix numerically singular (min pivot " +
                                           std::to_string(f.min_pivot) + ")");
    ComplexMatrix inv(n);
    std::vector<Complex> e(n, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        inv.set_column(j, lu_solve(f, e));
        e[j] = 0.0;
    }
    return inv;
}

bool is_invertible(const ComplexMatrix& x, double rel_pivot_tol) {
    const auto f = lu_factor(x);
    return !f.singular && f.min_pivot > rel_pivot_tol * std::max(1.0, f.scale);
}

double cond_estimate(const ComplexMatrix& x, double eig_tol) {
    const auto sv = singular_values(x, eig_tol);
    if (sv.empty()) return 1.0;
    if (sv.front() <= 0.0) return std::numeric_limits<double>::infinity();
    return sv.back() / sv.front();
}

PsdCheckResult psd_check(const ComplexMatrix& h, double tol) {
    const std::size_t n = h.dim();
    ComplexMatrix a = h;
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), std::size_t{0});

    PsdCheckResult res;
    while (!active.empty()) {
        std::size_t best_pos = 0;
        double best = a(active[0], active[0]).real();
        for (std::size_t t = 1; t < active.size(); ++t) {
            const double d = a(active[t], active[t]).real();
            if (d > best) {
                best = d;
                best_pos = t;
            }
        }
        if (best <= tol) {
            // remaining block is numerically zero or negative
            for (const auto idx : active) {
                const double d = a(idx, idx).real();
                res.min_diag = std::min(res.min_diag, d);
                if (d < -tol) res.psd = false;
            }
            return res;
        }
        const std::size_t p = active[best_pos];
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_pos));
        const double pivot = best;
        for (const auto i : active) {
            const Complex lip = a(i, p) / pivot;
            for (const auto j : active) a(i, j) -= lip * std::conj(a(j, p));
        }
        for (const auto i : active) a(i, i) = Complex(a(i, i).real(), 0.0);
    }
    return res;
}

ComplexMatrix orthonormalize_columns(const std::vector<std::vector<Complex>>& cols,
                                     std::size_t dim, double drop_tol) {
    std::vector<std::vector<Complex>> kept;
    for (const auto& candidate : cols) {
        std::vector<Complex> v = candidate;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : kept) {
                const Complex proj = vec_dot(u, v);
                for (std::size_t i = 0; i < dim; ++i) v[i] -= proj * u[i];
            }
        const double norm = vec_norm(v);
        if (norm <= drop_tol) continue;
        for (auto& entry : v) entry /= norm;
        kept.push_back(std::move(v));
    }
    ComplexMatrix basis(dim);
    for (std::size_t j = 0; j < kept.size() && j < dim; ++j) basis.set_column(j, kept[j]);
    return basis;
}

ComplexMatrix complete_basis(const std::vector<std::vector<Complex>>& k_cols, std::size_t dim) {
    std::vector<std::vector<Complex>> cols = k_cols;
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<Complex> e(dim, Complex(0.0, 0.0));
        e[i] = 1.0;
        cols.push_back(std::move(e));
    }
    return orthonormalize_columns(cols, dim);
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    const ComplexMatrix g = random_ginibre(dim, rng);
    std::vector<std::vector<Complex>> cols;
    cols.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) cols.push_back(g.column(j));
    ComplexMatrix q = orthonormalize_columns(cols, dim);
    // phase fix: make the first nonzero entry of each column real positive so
    // the draw is independent of the Gram-Schmidt sign conventions
    for (std::size_t j = 0; j < dim; ++j) {
        Complex lead(0.0, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            if (std::abs(q(i, j)) > 1e-12) {
                lead = q(i, j);
                break;
            }
        }
        if (std::abs(lead) == 0.0) continue;
        const Complex phase = std::conj(lead) / std::abs(lead);
        for (std::size_t i = 0; i < dim; ++i) q(i, j) *= phase;
    }
    return q;
}

ComplexMatrix matrix_power(const ComplexMatrix& t, unsigned long long n) {
    ComplexMatrix result = ComplexMatrix::identity(t.dim());
    ComplexMatrix base = t;
    while (n > 0) {
        if (n & 1ULL) result = result * base;
        n >>= 1ULL;
        if (n > 0) base = base * base;
    }
    return result;
}

} // namespace asymlab
