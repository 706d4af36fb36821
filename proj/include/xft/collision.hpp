#ifndef XFT_COLLISION_HPP
#define XFT_COLLISION_HPP

// Exhaustive two-point-measurement trajectories of one collision: P(gamma),
// per-charge changes dQ_i(n->m), dh^A/dh^B, the non-commutativity correction
// Delta(gamma) in both its residual and explicit forms, and trajectory
// reversal.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "xft/commutant.hpp"
#include "xft/gibbs.hpp"
#include "xft/matlin.hpp"

namespace xft {

struct Trajectory {
    int n = 0, nu = 0, m = 0, mu = 0;  // indices into eig(H_A), eig(H_B)
    double prob = 0.0;
    double dhA = 0.0, dhB = 0.0;       // h^A_m - h^A_n, h^B_mu - h^B_nu
    std::vector<double> dq;            // dQ_i(n->m), measured on A
    double delta = 0.0;                // residual of the conservation relation
    std::optional<double> delta_explicit;  // double-sum formula, when applicable
    bool supported = true;             // prob above the support threshold
};

struct TrajectoryTable {
    Bath bathA, bathB;
    Interaction interaction;
    GibbsState gibbsA, gibbsB;
    std::vector<double> delta_lambda;      // lambda^A_i - lambda^B_i
    std::vector<Trajectory> rows;          // lexicographic in (n, nu, m, mu)
    double support_threshold = 1e-14;
    double max_delta_explicit_imag = 0.0;  // diagnostic: worst |Im| before taking Re

    int dA() const { return bathA.dim; }
    int dB() const { return bathB.dim; }

    int row_index(int n, int nu, int m, int mu) const {
        return ((n * dB() + nu) * dA() + m) * dB() + mu;
    }
    const Trajectory& row(int n, int nu, int m, int mu) const {
        if (n < 0 || n >= dA() || m < 0 || m >= dA() || nu < 0 || nu >= dB() || mu < 0 ||
            mu >= dB())
            throw IndexOutOfRange("TrajectoryTable::row: index out of range");
        return rows[row_index(n, nu, m, mu)];
    }
    const Trajectory& reverse_of(const Trajectory& t) const {
        return row(t.m, t.mu, t.n, t.nu);
    }
};

// dQ_i(n->m) = <h_m|Q_i|h_m> - <h_n|Q_i|h_n> on bath A's eigenbasis.
inline double charge_change(const Bath& bathA, const GibbsState& gibbsA, int charge, int n,
                            int m) {
    if (charge < 0 || charge >= bathA.num_charges())
        throw IndexOutOfRange("charge_change: bad charge index");
    if (n < 0 || n >= bathA.dim || m < 0 || m >= bathA.dim)
        throw IndexOutOfRange("charge_change: bad eigenstate index");
    const CMatrix& q = bathA.charges[charge].matrix;
    const CMatrix& v = gibbsA.eig.vectors;
    auto diag = [&](int k) {
        cplx s = 0.0;
        for (int i = 0; i < bathA.dim; ++i)
            for (int j = 0; j < bathA.dim; ++j) s += std::conj(v(i, k)) * q(i, j) * v(j, k);
        return s.real();
    };
    return diag(m) - diag(n);
}

inline void require_nondegenerate(const HermEig& e, const char* who) {
    const int d = static_cast<int>(e.values.size());
    if (d < 2) return;
    const double range = e.values.back() - e.values.front();
    double min_gap = range;
    for (int k = 1; k < d; ++k) min_gap = std::min(min_gap, e.values[k] - e.values[k - 1]);
    if (range <= 0.0 || min_gap <= 1e-9 * range)
        throw DegenerateSpectrum(std::string(who) +
                                 ": exchange operator spectrum is degenerate; "
                                 "trajectory charge changes would be ill-defined");
}

namespace detail {

// conjugate M into the product eigenbasis: (V_A (x) V_B)^H M (V_A (x) V_B)
inline CMatrix to_product_eigenbasis(const CMatrix& m, const CMatrix& va, const CMatrix& vb) {
    const CMatrix w = kron(va, vb);
    return w.adjoint() * (m * w);
}

}  // namespace detail

inline TrajectoryTable enumerate_trajectories(const Bath& bathA, const Bath& bathB,
                                              const Interaction& interaction,
                                              double support_threshold = 1e-14) {
    TrajectoryTable t;
    t.bathA = bathA;
    t.bathB = bathB;
    t.interaction = interaction;
    t.support_threshold = support_threshold;
    t.delta_lambda = affinity_differences(bathA, bathB);

    const auto cert = verify_charge_preserving(interaction.u, bathA, bathB);
    if (!certificate_passes(cert)) {
        std::string msg = "enumerate_trajectories: interaction is not charge preserving;";
        for (size_t i = 0; i < cert.size(); ++i)
            msg += " ||[U,Q_" + std::to_string(i + 1) + "]|| = " + std::to_string(cert[i]);
        throw CertificateFailure(msg);
    }
    t.interaction.certificate = cert;

    t.gibbsA = gibbs_state(bathA);
    t.gibbsB = gibbs_state(bathB);
    require_nondegenerate(t.gibbsA.eig, "bath A");
    require_nondegenerate(t.gibbsB.eig, "bath B");

    const int dA = bathA.dim, dB = bathB.dim, nc = bathA.num_charges();
    const double z_total = t.gibbsA.Z * t.gibbsB.Z;

    // U and (optionally) H_int in the product eigenbasis of H_A, H_B
    const CMatrix u_eig =
        detail::to_product_eigenbasis(interaction.u, t.gibbsA.eig.vectors, t.gibbsB.eig.vectors);
    std::optional<CMatrix> h_eig;
    double hint_norm = 0.0;
    if (interaction.hint) {
        h_eig = detail::to_product_eigenbasis(*interaction.hint, t.gibbsA.eig.vectors,
                                              t.gibbsB.eig.vectors);
        hint_norm = interaction.hint->fro_norm();
    }

    // <h_a|Q_i|h_b> on bath A, per charge
    std::vector<CMatrix> q_eig;
    q_eig.reserve(nc);
    for (int i = 0; i < nc; ++i) {
        const CMatrix& v = t.gibbsA.eig.vectors;
        q_eig.push_back(v.adjoint() * (bathA.charges[i].matrix * v));
    }

    t.rows.reserve(static_cast<size_t>(dA) * dB * dA * dB);
    for (int n = 0; n < dA; ++n)
        for (int nu = 0; nu < dB; ++nu)
            for (int m = 0; m < dA; ++m)
                for (int mu = 0; mu < dB; ++mu) {
                    Trajectory row;
                    row.n = n;
                    row.nu = nu;
                    row.m = m;
                    row.mu = mu;
                    const double weight =
                        std::exp(-(t.gibbsA.eig.values[n] + t.gibbsB.eig.values[nu])) / z_total;
                    const cplx amp = u_eig(m * dB + mu, n * dB + nu);
                    row.prob = weight * std::norm(amp);
                    row.supported = row.prob >= support_threshold;
                    row.dhA = t.gibbsA.eig.values[m] - t.gibbsA.eig.values[n];
                    row.dhB = t.gibbsB.eig.values[mu] - t.gibbsB.eig.values[nu];
                    row.dq.resize(nc);
                    double sum_dl_dq = 0.0;
                    for (int i = 0; i < nc; ++i) {
                        row.dq[i] = q_eig[i](m, m).real() - q_eig[i](n, n).real();
                        sum_dl_dq += t.delta_lambda[i] * row.dq[i];
                    }
                    row.delta = (row.dhA + row.dhB) - sum_dl_dq;

                    if (h_eig) {
                        const cplx denom = (*h_eig)(m * dB + mu, n * dB + nu);
                        if (std::abs(denom) >= 1e-12 * hint_norm) {
                            cplx val = 0.0;
                            for (int i = 0; i < nc; ++i) {
                                const double dl = t.delta_lambda[i];
                                if (dl == 0.0) continue;
                                for (int k = 0; k < dA; ++k) {
                                    if (k != m)
                                        val += dl * q_eig[i](m, k) *
                                               ((*h_eig)(k * dB + mu, n * dB + nu) / denom);
                                    if (k != n)
                                        val -= dl * q_eig[i](k, n) *
                                               ((*h_eig)(m * dB + mu, k * dB + nu) / denom);
                                }
                            }
                            row.delta_explicit = val.real();
                            t.max_delta_explicit_imag =
                                std::max(t.max_delta_explicit_imag, std::abs(val.imag()));
                        }
                    }
                    t.rows.push_back(std::move(row));
                }
    return t;
}

// delta as the residual of the conservation relation; defined for every row.
inline double delta_residual(const Trajectory& row, const std::vector<double>& delta_lambda) {
    double s = 0.0;
    for (size_t i = 0; i < delta_lambda.size(); ++i) s += delta_lambda[i] * row.dq[i];
    return (row.dhA + row.dhB) - s;
}

// Index-swapped view of a trajectory; prob is looked up in the table.
inline Trajectory reverse_trajectory(const TrajectoryTable& table, const Trajectory& row) {
    return table.reverse_of(row);
}

}  // namespace xft

#endif
