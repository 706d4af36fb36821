#ifndef XFT_MATLIN_HPP
#define XFT_MATLIN_HPP

// Dense complex linear algebra for small Hilbert spaces (dim <= ~16):
// Hermitian eigendecomposition (cyclic Jacobi), Hermitian/unitary matrix
// exponentials, tensor products, commutator norms, and real nullspace
// extraction. Everything here is a pure function on value types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "xft/errors.hpp"

namespace xft {

using cplx = std::complex<double>;

class CMatrix {
public:
    CMatrix() : dim_(0) {}
    explicit CMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}
    CMatrix(int dim, std::vector<cplx> entries) : dim_(dim), a_(std::move(entries)) {
        if (a_.size() != static_cast<size_t>(dim) * dim)
            throw DimensionMismatch("CMatrix: entry count does not match dim*dim");
    }

    int dim() const { return dim_; }
    cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const std::vector<cplx>& data() const { return a_; }

    static CMatrix identity(int dim) {
        CMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
    static CMatrix zero(int dim) { return CMatrix(dim); }

    CMatrix adjoint() const {
        CMatrix m(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double fro_norm() const {
        double s = 0.0;
        for (const auto& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    bool finite() const {
        for (const auto& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    friend CMatrix operator+(const CMatrix& x, const CMatrix& y) {
        check_same_dim(x, y);
        CMatrix r(x.dim_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] + y.a_[k];
        return r;
    }
    friend CMatrix operator-(const CMatrix& x, const CMatrix& y) {
        check_same_dim(x, y);
        CMatrix r(x.dim_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = x.a_[k] - y.a_[k];
        return r;
    }
    friend CMatrix operator*(const CMatrix& x, const CMatrix& y) {
        check_same_dim(x, y);
        const int d = x.dim_;
        CMatrix r(d);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                const cplx xik = x(i, k);
                if (xik == cplx(0.0)) continue;
                for (int j = 0; j < d; ++j) r(i, j) += xik * y(k, j);
            }
        return r;
    }
    friend CMatrix operator*(cplx s, const CMatrix& x) {
        CMatrix r(x.dim_);
        for (size_t k = 0; k < x.a_.size(); ++k) r.a_[k] = s * x.a_[k];
        return r;
    }
    friend CMatrix operator*(double s, const CMatrix& x) { return cplx(s) * x; }

private:
    static void check_same_dim(const CMatrix& x, const CMatrix& y) {
        if (x.dim_ != y.dim_) throw DimensionMismatch("CMatrix: dims differ");
    }
    int dim_;
    std::vector<cplx> a_;
};

inline double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).fro_norm(); }

inline bool is_hermitian(const CMatrix& m, double rel_tol = 1e-10) {
    return hermiticity_defect(m) <= rel_tol * std::max(1.0, m.fro_norm());
}

inline void require_hermitian(const CMatrix& m, const char* who) {
    if (!is_hermitian(m)) throw NotHermitian(std::string(who) + ": matrix is not Hermitian");
}

// Eigendecomposition of a Hermitian matrix. Values ascending; vectors are the
// columns of `vectors`, pairwise orthonormal, with the largest-magnitude
// component of each vector made real and nonnegative (ties by lowest index).
struct HermEig {
    std::vector<double> values;
    CMatrix vectors;
};

namespace detail {

inline void phase_fix_column(CMatrix& v, int col) {
    const int d = v.dim();
    int imax = 0;
    double amax = -1.0;
    for (int i = 0; i < d; ++i) {
        const double a = std::abs(v(i, col));
        if (a > amax) {  // strict: ties resolve to the lowest index
            amax = a;
            imax = i;
        }
    }
    if (amax <= 0.0) return;
    const cplx ph = v(imax, col) / amax;
    for (int i = 0; i < d; ++i) v(i, col) /= ph;
    v(imax, col) = cplx(std::abs(v(imax, col)), 0.0);
}

// Gram-Schmidt a degenerate eigenspace onto canonical axes, in index order, so
// that repeated eigenvalues still yield a deterministic basis.
inline void canonicalize_cluster(CMatrix& v, int first, int last) {
    const int d = v.dim();
    const int k = last - first;
    if (k <= 1) return;
    // projector columns of the cluster
    std::vector<std::vector<cplx>> basis;
    basis.reserve(k);
    for (int axis = 0; axis < d && static_cast<int>(basis.size()) < k; ++axis) {
        // project e_axis onto the cluster span
        std::vector<cplx> w(d, cplx(0.0));
        for (int c = first; c < last; ++c) {
            const cplx coef = std::conj(v(axis, c));
            for (int i = 0; i < d; ++i) w[i] += coef * v(i, c);
        }
        // orthogonalize against already accepted vectors (twice, for stability)
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                cplx ip = 0.0;
                for (int i = 0; i < d; ++i) ip += std::conj(b[i]) * w[i];
                for (int i = 0; i < d; ++i) w[i] -= ip * b[i];
            }
        }
        double nrm = 0.0;
        for (const auto& z : w) nrm += std::norm(z);
        nrm = std::sqrt(nrm);
        if (nrm > 1e-6) {
            for (auto& z : w) z /= nrm;
            basis.push_back(std::move(w));
        }
    }
    if (static_cast<int>(basis.size()) != k) return;  // keep Jacobi basis as fallback
    for (int c = 0; c < k; ++c)
        for (int i = 0; i < d; ++i) v(i, first + c) = basis[c][i];
}

}  // namespace detail

inline HermEig herm_eig(const CMatrix& m) {
    require_hermitian(m, "herm_eig");
    const int d = m.dim();
    CMatrix a = 0.5 * (m + m.adjoint());  // symmetrize away the tolerance slack
    CMatrix v = CMatrix::identity(d);

    const double scale = std::max(1.0, a.fro_norm());
    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-15 * scale) break;

        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const cplx apq = a(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq <= 1e-18 * scale) continue;
                const cplx ph = apq / abs_apq;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * abs_apq);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- J^H A J,  V <- V J with J the (p,q) plane rotation
                for (int i = 0; i < d; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * std::conj(ph) * aiq;
                    a(i, q) = s * ph * aip + c * aiq;
                }
                for (int j = 0; j < d; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * ph * aqj;
                    a(q, j) = s * std::conj(ph) * apj + c * aqj;
                }
                for (int i = 0; i < d; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * std::conj(ph) * viq;
                    v(i, q) = s * ph * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    HermEig e;
    e.values.resize(d);
    e.vectors = CMatrix(d);
    for (int c = 0; c < d; ++c) {
        e.values[c] = a(order[c], order[c]).real();
        for (int i = 0; i < d; ++i) e.vectors(i, c) = v(i, order[c]);
    }

    // deterministic basis inside (near-)degenerate clusters
    const double gap_tol = 1e-12 * scale;
    int first = 0;
    for (int c = 1; c <= d; ++c) {
        if (c == d || e.values[c] - e.values[c - 1] > gap_tol) {
            detail::canonicalize_cluster(e.vectors, first, c);
            first = c;
        }
    }
    for (int c = 0; c < d; ++c) detail::phase_fix_column(e.vectors, c);
    return e;
}

// V f(h) V^H for a scalar function f of the eigenvalues.
template <class F>
inline CMatrix herm_function(const HermEig& e, F&& f) {
    const int d = e.vectors.dim();
    CMatrix r(d);
    for (int k = 0; k < d; ++k) {
        const cplx fk = f(e.values[k]);
        for (int i = 0; i < d; ++i) {
            const cplx vik = e.vectors(i, k);
            if (vik == cplx(0.0)) continue;
            for (int j = 0; j < d; ++j) r(i, j) += fk * vik * std::conj(e.vectors(j, k));
        }
    }
    return r;
}

// e^{s M} for Hermitian M.
inline CMatrix expm_hermitian(const CMatrix& m, double s) {
    require_hermitian(m, "expm_hermitian");
    const HermEig e = herm_eig(m);
    return herm_function(e, [s](double h) { return cplx(std::exp(s * h), 0.0); });
}

// e^{-i tau H} for Hermitian H.
inline CMatrix unitary_exp(const CMatrix& h, double tau) {
    require_hermitian(h, "unitary_exp");
    const HermEig e = herm_eig(h);
    return herm_function(e, [tau](double hk) { return std::exp(cplx(0.0, -tau * hk)); });
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    const int da = a.dim(), db = b.dim();
    CMatrix r(da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0)) continue;
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l) r(i * db + k, j * db + l) = aij * b(k, l);
        }
    return r;
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

inline double comm_norm(const CMatrix& a, const CMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("comm_norm: dims differ");
    return commutator(a, b).fro_norm();
}

inline double unitarity_defect(const CMatrix& u) {
    return (u.adjoint() * u - CMatrix::identity(u.dim())).fro_norm();
}

// --- real rectangular matrices (nullspace extraction) -----------------------

struct RealMatrix {
    int rows = 0, cols = 0;
    std::vector<double> a;  // row-major

    RealMatrix() = default;
    RealMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Orthonormal basis of {x : ||Mx|| <= tol * ||M||_2}, columns returned as
// vectors. Deterministic: ordered by descending alignment with the canonical
// axes, ties broken by axis index.
inline std::vector<std::vector<double>> real_nullspace(const RealMatrix& m, double tol) {
    const int c = m.cols;
    // Gram matrix M^T M, diagonalized through the Hermitian path.
    CMatrix g(c);
    for (int i = 0; i < c; ++i)
        for (int j = i; j < c; ++j) {
            double s = 0.0;
            for (int r = 0; r < m.rows; ++r) s += m(r, i) * m(r, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    const HermEig e = herm_eig(g);
    const double sv_max = std::sqrt(std::max(0.0, e.values.empty() ? 0.0 : e.values.back()));
    // the Gram route squares the condition number: singular values below
    // ~sqrt(eps) of sv_max are numerically indistinguishable from zero, so
    // floor the requested cut there
    const double cut = std::max(tol, 1e-7) * sv_max;

    std::vector<int> kernel_cols;
    for (int k = 0; k < c; ++k) {
        const double sv = std::sqrt(std::max(0.0, e.values[k]));
        if (sv <= cut || sv_max == 0.0) kernel_cols.push_back(k);
    }
    const int kdim = static_cast<int>(kernel_cols.size());
    if (kdim == 0) return {};

    // alignment of each canonical axis with the kernel subspace
    std::vector<double> align(c, 0.0);
    for (int axis = 0; axis < c; ++axis)
        for (int kc : kernel_cols) align[axis] += std::norm(e.vectors(axis, kc));
    std::vector<int> axes(c);
    std::iota(axes.begin(), axes.end(), 0);
    std::stable_sort(axes.begin(), axes.end(), [&](int i, int j) {
        if (align[i] != align[j]) return align[i] > align[j];
        return i < j;
    });

    // Gram-Schmidt the projected axes in that order
    std::vector<std::vector<double>> basis;
    for (int axis : axes) {
        if (static_cast<int>(basis.size()) == kdim) break;
        std::vector<double> w(c, 0.0);
        for (int kc : kernel_cols) {
            const cplx coef = std::conj(e.vectors(axis, kc));
            for (int i = 0; i < c; ++i) w[i] += (coef * e.vectors(i, kc)).real();
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                double ip = 0.0;
                for (int i = 0; i < c; ++i) ip += b[i] * w[i];
                for (int i = 0; i < c; ++i) w[i] -= ip * b[i];
            }
        }
        double nrm = 0.0;
        for (double x : w) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm > 1e-8) {
            for (double& x : w) x /= nrm;
            // sign fix: largest-magnitude component positive
            int imax = 0;
            for (int i = 1; i < c; ++i)
                if (std::abs(w[i]) > std::abs(w[imax])) imax = i;
            if (w[imax] < 0.0)
                for (double& x : w) x = -x;
            basis.push_back(std::move(w));
        }
    }
    return basis;
}

}  // namespace xft

#endif
