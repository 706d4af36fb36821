#ifndef XFT_STATISTICS_HPP
#define XFT_STATISTICS_HPP

// Joint current distribution P(dQ_1..dQ_N; Delta) and the universal relations
// built on it: detailed and integral exchange fluctuation theorems, the naive
// (commuting-charge) integral FT, second law, TUR, tail bound, and contrast
// functions.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "xft/collision.hpp"

namespace xft {

using ojson = nlohmann::ordered_json;

// Quantized-key map from (dQ_1..dQ_N, Delta) tuples to probabilities. Keys are
// component-wise rounded to the nearest multiple of eps; `values` keeps the
// probability-weighted mean of the exact tuples landing in the bin, so
// downstream exponentials are not limited by the quantization step.
struct CurrentDistribution {
    double eps = 1e-9;
    std::vector<double> delta_lambda;

    struct Entry {
        double prob = 0.0;
        std::vector<double> values;  // exact representative (dq_1..dq_N, delta)
    };
    std::map<std::vector<int64_t>, Entry> bins;

    static std::vector<int64_t> quantize(const std::vector<double>& v, double eps) {
        std::vector<int64_t> key(v.size());
        for (size_t i = 0; i < v.size(); ++i) key[i] = std::llround(v[i] / eps);
        return key;
    }
    static std::vector<int64_t> negate(const std::vector<int64_t>& key) {
        std::vector<int64_t> nk(key.size());
        for (size_t i = 0; i < key.size(); ++i) nk[i] = -key[i];
        return nk;
    }

    double total_mass() const {
        double s = 0.0;
        for (const auto& [k, e] : bins) s += e.prob;
        return s;
    }
};

inline CurrentDistribution build_distribution(const TrajectoryTable& table, double eps = 1e-9) {
    CurrentDistribution dist;
    dist.eps = eps;
    dist.delta_lambda = table.delta_lambda;
    for (const auto& row : table.rows) {
        std::vector<double> tuple = row.dq;
        tuple.push_back(row.delta);
        const auto key = CurrentDistribution::quantize(tuple, eps);
        auto& entry = dist.bins[key];
        if (entry.values.empty()) entry.values.assign(tuple.size(), 0.0);
        for (size_t i = 0; i < tuple.size(); ++i)
            entry.values[i] += row.prob * tuple[i];
        entry.prob += row.prob;
    }
    for (auto& [k, e] : dist.bins) {
        if (e.prob > 0.0)
            for (auto& v : e.values) v /= e.prob;
        else  // zero-probability bin: fall back to the dequantized key
            for (size_t i = 0; i < e.values.size(); ++i) e.values[i] = double(k[i]) * eps;
    }
    return dist;
}

// sigma for a bin: sum_i delta_lambda_i dq_i + Delta
inline double bin_sigma(const CurrentDistribution& dist,
                        const CurrentDistribution::Entry& e) {
    double s = 0.0;
    const size_t n = dist.delta_lambda.size();
    for (size_t i = 0; i < n; ++i) s += dist.delta_lambda[i] * e.values[i];
    return s + e.values[n];
}

struct FTReport {
    std::string relation;
    bool pass = false;
    bool degenerate = false;  // bound undefined; nothing asserted
    double residual = 0.0;    // worst case, relation-specific sign convention
    double tolerance = 0.0;
    ojson details;

    ojson to_json() const {
        ojson j;
        j["relation"] = relation;
        j["pass"] = pass;
        if (degenerate) j["degenerate"] = true;
        j["residual"] = residual;
        j["tolerance"] = tolerance;
        j["details"] = details;
        return j;
    }
};

// Detailed XFT: ln(P(v)/P(-v)) = sum_i delta_lambda_i dQ_i + Delta on every
// bin pair with both sides supported. One-sided bins are listed, not asserted.
inline FTReport detailed_ft_report(const CurrentDistribution& dist,
                                   double support = 1e-14, double tol = 1e-8) {
    FTReport rep;
    rep.relation = "detailed_xft";
    rep.tolerance = tol;
    double worst = 0.0;
    int pairs = 0;
    std::vector<std::string> one_sided;
    for (const auto& [key, entry] : dist.bins) {
        if (entry.prob <= support) continue;
        const auto nkey = CurrentDistribution::negate(key);
        auto it = dist.bins.find(nkey);
        if (it == dist.bins.end() || it->second.prob <= support) {
            std::string s = "(";
            for (size_t i = 0; i < key.size(); ++i)
                s += (i ? "," : "") + std::to_string(double(key[i]) * dist.eps);
            one_sided.push_back(s + ")");
            continue;
        }
        const double lhs = std::log(entry.prob / it->second.prob);
        const double rhs = bin_sigma(dist, entry);
        worst = std::max(worst, std::abs(lhs - rhs));
        ++pairs;
    }
    rep.residual = worst;
    rep.pass = worst < tol;
    rep.details["bin_pairs"] = pairs;
    rep.details["one_sided_bins"] = one_sided;
    return rep;
}

// <e^{-sum_i delta_lambda_i dQ_i - Delta}>; equals 1 for any valid model.
inline double integral_ft(const CurrentDistribution& dist) {
    double s = 0.0;
    for (const auto& [key, entry] : dist.bins) s += entry.prob * std::exp(-bin_sigma(dist, entry));
    return s;
}

// <e^{-sum_i delta_lambda_i dQ_i}> with Delta left out of the exponent; the
// commuting-charge FT, which non-Abelian models are free to break.
inline double naive_integral_ft(const CurrentDistribution& dist) {
    double s = 0.0;
    const size_t n = dist.delta_lambda.size();
    for (const auto& [key, entry] : dist.bins) {
        double expo = 0.0;
        for (size_t i = 0; i < n; ++i) expo += dist.delta_lambda[i] * entry.values[i];
        s += entry.prob * std::exp(-expo);
    }
    return s;
}

struct Averages {
    std::vector<double> avg_dq;
    double avg_delta = 0.0;
    double sigma_avg = 0.0;  // sum_i delta_lambda_i <dQ_i> + <Delta>
    double avg_dhA = 0.0, avg_dhB = 0.0;
};

inline Averages averages(const TrajectoryTable& table) {
    Averages a;
    const int nc = table.bathA.num_charges();
    a.avg_dq.assign(nc, 0.0);
    for (const auto& row : table.rows) {
        for (int i = 0; i < nc; ++i) a.avg_dq[i] += row.prob * row.dq[i];
        a.avg_dhA += row.prob * row.dhA;
        a.avg_dhB += row.prob * row.dhB;
    }
    double sum_dl_dq = 0.0;
    for (int i = 0; i < nc; ++i) sum_dl_dq += table.delta_lambda[i] * a.avg_dq[i];
    a.avg_delta = a.avg_dhA + a.avg_dhB - sum_dl_dq;
    a.sigma_avg = sum_dl_dq + a.avg_delta;
    return a;
}

// Diagnostic: gap between the trajectory average <dQ_i> and the operator
// formula tr[Q_i^A (x) 1 (U rho_0 U^dag - rho_0)]. The two differ when Q_i has
// off-diagonal elements in the H_A eigenbasis; reported, never asserted.
inline std::vector<double> operator_current_gap(const TrajectoryTable& table,
                                                const Averages& a) {
    const CMatrix rho0 = kron(table.gibbsA.rho, table.gibbsB.rho);
    const CMatrix rho1 = table.interaction.u * rho0 * table.interaction.u.adjoint();
    const CMatrix diff = rho1 - rho0;
    std::vector<double> gap(table.bathA.num_charges());
    for (int i = 0; i < table.bathA.num_charges(); ++i) {
        const CMatrix qa =
            kron(table.bathA.charges[i].matrix, CMatrix::identity(table.bathB.dim));
        gap[i] = std::abs(a.avg_dq[i] - (qa * diff).trace().real());
    }
    return gap;
}

inline FTReport second_law_report(const TrajectoryTable& table, const Averages& a,
                                  double tol = 1e-10) {
    FTReport rep;
    rep.relation = "second_law";
    rep.tolerance = tol;
    double uncorrected = 0.0;
    for (size_t i = 0; i < table.delta_lambda.size(); ++i)
        uncorrected += table.delta_lambda[i] * a.avg_dq[i];
    rep.residual = -a.sigma_avg;  // positive residual would be a violation
    rep.pass = a.sigma_avg >= -tol;
    rep.details["corrected"] = a.sigma_avg;
    rep.details["uncorrected"] = uncorrected;
    rep.details["avg_delta"] = a.avg_delta;
    rep.details["apparent_violation"] = uncorrected < -tol;
    return rep;
}

// TUR for charge j: Var[dQ_j]/<dQ_j>^2 >= 2/(e^{<sigma>} - 1).
inline FTReport tur_report(const TrajectoryTable& table, const Averages& a, int j,
                           double tol = 1e-9) {
    FTReport rep;
    rep.relation = "tur";
    rep.tolerance = tol;
    if (j < 0 || j >= table.bathA.num_charges())
        throw IndexOutOfRange("tur_report: bad charge index");
    double mean = 0.0, mean2 = 0.0;
    for (const auto& row : table.rows) {
        mean += row.prob * row.dq[j];
        mean2 += row.prob * row.dq[j] * row.dq[j];
    }
    const double var = mean2 - mean * mean;
    rep.details["charge"] = table.bathA.charges[j].label;
    rep.details["mean"] = mean;
    rep.details["variance"] = var;
    rep.details["sigma_avg"] = a.sigma_avg;
    if (std::abs(mean) < 1e-12 || a.sigma_avg < 1e-12) {
        rep.degenerate = true;
        rep.pass = true;
        rep.details["note"] = "bound infinite or ratio undefined; nothing asserted";
        return rep;
    }
    const double ratio = var / (mean * mean);
    const double bound = 2.0 / std::expm1(a.sigma_avg);
    rep.residual = bound - ratio;  // positive residual would be a violation
    rep.pass = ratio >= bound - tol;
    rep.details["ratio"] = ratio;
    rep.details["bound"] = bound;
    rep.details["margin"] = ratio - bound;
    return rep;
}

// P(sigma(gamma) < -zeta) <= e^{-zeta} for each requested zeta >= 0.
inline FTReport tail_bound_report(const TrajectoryTable& table,
                                  const std::vector<double>& zeta_grid, double tol = 1e-12) {
    FTReport rep;
    rep.relation = "tail_bound";
    rep.tolerance = tol;
    rep.pass = true;
    ojson points = ojson::array();
    double worst = -1e300;
    for (double zeta : zeta_grid) {
        if (zeta < 0.0) throw IndexOutOfRange("tail_bound_report: zeta must be >= 0");
        double p = 0.0;
        for (const auto& row : table.rows) {
            double sigma = 0.0;
            for (size_t i = 0; i < table.delta_lambda.size(); ++i)
                sigma += table.delta_lambda[i] * row.dq[i];
            sigma += row.delta;
            if (sigma < -zeta) p += row.prob;
        }
        const double bound = std::exp(-zeta);
        worst = std::max(worst, p - bound);
        if (p > bound + tol) rep.pass = false;
        ojson pt;
        pt["zeta"] = zeta;
        pt["prob"] = p;
        pt["bound"] = bound;
        points.push_back(pt);
    }
    rep.residual = worst;
    rep.details["points"] = points;
    return rep;
}

enum class ContrastKind { identity, neglog };

// S_g(rho||sigma) = sum_ij rho_i g(sigma_j / rho_i) |<sigma_j|rho_i>|^2.
// identity: tr sigma = 1. neglog: quantum relative entropy S(rho||sigma).
inline double contrast_divergence(ContrastKind gid, const CMatrix& rho, const CMatrix& sigma) {
    const HermEig er = herm_eig(rho);
    const HermEig es = herm_eig(sigma);
    for (double s : es.values)
        if (s < 1e-14) throw SingularState("contrast_divergence: sigma is (near) singular");
    const int d = rho.dim();
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        const double ri = er.values[i];
        if (ri < 1e-300) continue;  // 0 * g(x/0) -> 0 for both kinds
        for (int j = 0; j < d; ++j) {
            cplx ov = 0.0;
            for (int k = 0; k < d; ++k) ov += std::conj(es.vectors(k, j)) * er.vectors(k, i);
            const double w = std::norm(ov);
            if (w == 0.0) continue;
            const double x = es.values[j] / ri;
            const double g = (gid == ContrastKind::identity) ? x : -std::log(x);
            total += ri * g * w;
        }
    }
    return total;
}

}  // namespace xft

#endif
