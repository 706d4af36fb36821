#ifndef XFT_COMMUTANT_HPP
#define XFT_COMMUTANT_HPP

// Charge-preserving interactions: certification of [U, Q_i^A + Q_i^B] = 0,
// the solver for the full space of allowed interaction Hamiltonians, and the
// generalized SWAP family for the two-qubit example.

#include <cmath>
#include <optional>
#include <vector>

#include "xft/gibbs.hpp"
#include "xft/matlin.hpp"

namespace xft {

struct Interaction {
    std::optional<CMatrix> hint;       // interaction Hamiltonian on A (x) B, if known
    CMatrix u;                         // unitary on A (x) B
    double tau = 0.0;                  // interaction time when u = e^{-i tau hint}
    std::vector<double> certificate;   // per-charge residuals ||[U, Q_i^A + Q_i^B]||_F
};

inline CMatrix total_charge(const Bath& bathA, const Bath& bathB, int i) {
    return kron(bathA.charges[i].matrix, CMatrix::identity(bathB.dim)) +
           kron(CMatrix::identity(bathA.dim), bathB.charges[i].matrix);
}

inline std::vector<double> verify_charge_preserving(const CMatrix& u, const Bath& bathA,
                                                    const Bath& bathB) {
    if (bathA.num_charges() != bathB.num_charges())
        throw DimensionMismatch("verify_charge_preserving: charge count mismatch");
    if (u.dim() != bathA.dim * bathB.dim)
        throw DimensionMismatch("verify_charge_preserving: unitary dim != d_A * d_B");
    if (unitarity_defect(u) > 1e-11)
        throw NotUnitary("verify_charge_preserving: matrix is not unitary");
    std::vector<double> residuals;
    residuals.reserve(bathA.charges.size());
    for (int i = 0; i < bathA.num_charges(); ++i)
        residuals.push_back(comm_norm(u, total_charge(bathA, bathB, i)));
    return residuals;
}

inline bool certificate_passes(const std::vector<double>& residuals, double tol = 1e-10) {
    for (double r : residuals)
        if (r > tol) return false;
    return true;
}

// Orthonormal Hermitian basis of C^{d x d} (Hilbert-Schmidt inner product).
// Canonical order: identity/sqrt(d); symmetric then antisymmetric pair
// elements for j < k in row-major order; diagonal Gell-Mann elements.
inline std::vector<CMatrix> hermitian_basis(int d) {
    std::vector<CMatrix> basis;
    basis.reserve(static_cast<size_t>(d) * d);
    CMatrix id = CMatrix::identity(d);
    basis.push_back((1.0 / std::sqrt(double(d))) * id);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            CMatrix sym(d), asym(d);
            sym(j, k) = inv_sqrt2;
            sym(k, j) = inv_sqrt2;
            asym(j, k) = cplx(0.0, -inv_sqrt2);
            asym(k, j) = cplx(0.0, inv_sqrt2);
            basis.push_back(sym);
            basis.push_back(asym);
        }
    for (int l = 1; l < d; ++l) {
        CMatrix g(d);
        const double norm = 1.0 / std::sqrt(double(l) * (l + 1));
        for (int i = 0; i < l; ++i) g(i, i) = norm;
        g(l, l) = -double(l) * norm;
        basis.push_back(g);
    }
    return basis;
}

inline double hs_inner(const CMatrix& a, const CMatrix& b) {
    // both Hermitian, so tr(a b) is real
    return (a * b).trace().real();
}

// Basis of the real vector space of Hermitian X on A (x) B with
// [X, Q_i^A + Q_i^B] = 0 for all i. The commutator map is vectorized over the
// Hermitian operator basis (real coefficients) and handed to real_nullspace.
// The identity is always a solution, so the dimension is >= 1.
inline std::vector<CMatrix> solve_allowed_interactions(const Bath& bathA, const Bath& bathB,
                                                       double tol = 1e-9) {
    if (bathA.num_charges() != bathB.num_charges())
        throw DimensionMismatch("solve_allowed_interactions: charge count mismatch");
    const int d = bathA.dim * bathB.dim;
    const int nb = d * d;
    const int nc = bathA.num_charges();
    const auto basis = hermitian_basis(d);

    std::vector<CMatrix> totals;
    totals.reserve(nc);
    for (int i = 0; i < nc; ++i) totals.push_back(total_charge(bathA, bathB, i));

    // rows: (charge, basis coefficient of i[Q_tot, G_j]); columns: G_j
    RealMatrix map(nc * nb, nb);
    for (int j = 0; j < nb; ++j) {
        for (int i = 0; i < nc; ++i) {
            const CMatrix comm = cplx(0.0, 1.0) * commutator(totals[i], basis[j]);  // Hermitian
            for (int k = 0; k < nb; ++k) map(i * nb + k, j) = hs_inner(basis[k], comm);
        }
    }

    const auto kernel = real_nullspace(map, tol);
    std::vector<CMatrix> out;
    out.reserve(kernel.size());
    for (const auto& coeffs : kernel) {
        CMatrix x(d);
        for (int j = 0; j < nb; ++j)
            if (coeffs[j] != 0.0) x = x + coeffs[j] * basis[j];
        out.push_back(std::move(x));
    }
    return out;
}

// SWAP[alpha]: e^{i alpha} on the diagonal corners, central block
// [[cos a, i sin a], [i sin a, cos a]]. Equals e^{i alpha SWAP}.
inline CMatrix generalized_swap(double alpha) {
    CMatrix u(4);
    const cplx corner = std::exp(cplx(0.0, alpha));
    u(0, 0) = corner;
    u(3, 3) = corner;
    u(1, 1) = std::cos(alpha);
    u(2, 2) = std::cos(alpha);
    u(1, 2) = cplx(0.0, std::sin(alpha));
    u(2, 1) = cplx(0.0, std::sin(alpha));
    return u;
}

inline Interaction unitary_from_interaction(const CMatrix& hint, double tau) {
    require_hermitian(hint, "unitary_from_interaction");
    Interaction in;
    in.hint = hint;
    in.tau = tau;
    in.u = unitary_exp(hint, tau);
    return in;
}

// |tr(U^dag V)| == dim iff U and V agree up to a global phase.
inline double phase_free_overlap(const CMatrix& u, const CMatrix& v) {
    return std::abs((u.adjoint() * v).trace());
}

}  // namespace xft

#endif
