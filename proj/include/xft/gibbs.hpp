#ifndef XFT_GIBBS_HPP
#define XFT_GIBBS_HPP

// Baths as sets of conserved charges with affinities, and the generalized
// Gibbs (non-Abelian thermal) states they equilibrate to.

#include <cmath>
#include <string>
#include <vector>

#include "xft/matlin.hpp"

namespace xft {

struct Charge {
    std::string label;
    CMatrix matrix;
};

struct Bath {
    int dim = 0;
    std::vector<Charge> charges;       // Q_1..Q_N, Hermitian, all dim x dim
    std::vector<double> affinities;    // lambda_1..lambda_N

    int num_charges() const { return static_cast<int>(charges.size()); }

    void validate() const {
        if (dim < 1) throw DimensionMismatch("Bath: dim must be >= 1");
        if (charges.empty()) throw DimensionMismatch("Bath: at least one charge required");
        if (charges.size() != affinities.size())
            throw DimensionMismatch("Bath: charges/affinities count mismatch");
        for (const auto& q : charges) {
            if (q.matrix.dim() != dim) throw DimensionMismatch("Bath: charge dim mismatch");
            if (!q.matrix.finite()) throw NotHermitian("Bath: charge has non-finite entries");
            require_hermitian(q.matrix, "Bath charge");
        }
        for (double l : affinities)
            if (!std::isfinite(l)) throw DimensionMismatch("Bath: non-finite affinity");
    }
};

// H = sum_i lambda_i Q_i
inline CMatrix exchange_hamiltonian(const Bath& bath) {
    CMatrix h(bath.dim);
    for (int i = 0; i < bath.num_charges(); ++i)
        h = h + bath.affinities[i] * bath.charges[i].matrix;
    return h;
}

struct GibbsState {
    CMatrix hop;   // H = sum_i lambda_i Q_i
    HermEig eig;   // eigenpairs of hop, ascending, phase-fixed
    double Z = 0;  // tr e^{-hop}
    CMatrix rho;   // e^{-hop} / Z
};

inline GibbsState gibbs_state(const Bath& bath) {
    bath.validate();
    GibbsState g;
    g.hop = exchange_hamiltonian(bath);
    g.eig = herm_eig(g.hop);
    g.Z = 0.0;
    for (double h : g.eig.values) g.Z += std::exp(-h);
    const double z = g.Z;
    g.rho = herm_function(g.eig, [z](double h) { return cplx(std::exp(-h) / z, 0.0); });
    return g;
}

struct CommutationEntry {
    int i, j;
    double norm;
};

struct CommutationReport {
    std::vector<CommutationEntry> pairs;  // all unordered pairs i < j
    bool abelian = true;
};

inline CommutationReport commutation_report(const Bath& bath) {
    bath.validate();
    CommutationReport rep;
    const int n = bath.num_charges();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double cn = comm_norm(bath.charges[i].matrix, bath.charges[j].matrix);
            rep.pairs.push_back({i, j, cn});
            if (cn >= 1e-12) rep.abelian = false;
        }
    return rep;
}

// Affinity differences delta_lambda_i = lambda_i^A - lambda_i^B. Both baths
// must declare the same charges (count, labels, order).
inline std::vector<double> affinity_differences(const Bath& bathA, const Bath& bathB) {
    if (bathA.num_charges() != bathB.num_charges())
        throw DimensionMismatch("baths declare different numbers of charges");
    for (int i = 0; i < bathA.num_charges(); ++i)
        if (bathA.charges[i].label != bathB.charges[i].label)
            throw DimensionMismatch("bath charge labels disagree at index " + std::to_string(i));
    std::vector<double> dl(bathA.num_charges());
    for (int i = 0; i < bathA.num_charges(); ++i)
        dl[i] = bathA.affinities[i] - bathB.affinities[i];
    return dl;
}

}  // namespace xft

#endif
