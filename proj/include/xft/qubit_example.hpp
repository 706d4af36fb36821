#ifndef XFT_QUBIT_EXAMPLE_HPP
#define XFT_QUBIT_EXAMPLE_HPP

// The spin-1/2 model: charges sigma_z and sigma_x with affinities beta and
// chi on each bath, interaction SWAP[alpha], plus parameter sweeps and
// current-inversion detection.

#include <cmath>
#include <string>
#include <vector>

#include "xft/collision.hpp"
#include "xft/commutant.hpp"
#include "xft/io.hpp"
#include "xft/statistics.hpp"

namespace xft {

inline CMatrix pauli_x() { return CMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
inline CMatrix pauli_y() { return CMatrix(2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}); }
inline CMatrix pauli_z() { return CMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

// sum_i sigma_i (x) sigma_i = 2 SWAP - 1
inline CMatrix pauli_exchange() {
    return kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()) + kron(pauli_z(), pauli_z());
}

struct QubitModelParams {
    double betaA = 0.5, chiA = 0.8;
    double betaB = 0.5, chiB = 0.2;
    double alpha = 1.0;

    void validate() const {
        if (std::hypot(betaA, chiA) <= 1e-9)
            throw DegenerateSpectrum("qubit model: bath A exchange operator is degenerate");
        if (std::hypot(betaB, chiB) <= 1e-9)
            throw DegenerateSpectrum("qubit model: bath B exchange operator is degenerate");
    }
};

struct QubitModel {
    Bath bathA, bathB;
    Interaction interaction;
};

inline Bath qubit_bath(double beta, double chi) {
    Bath b;
    b.dim = 2;
    b.charges = {{"sigma_z", pauli_z()}, {"sigma_x", pauli_x()}};
    b.affinities = {beta, chi};
    return b;
}

// SWAP[alpha] = e^{i alpha SWAP}, so hint = -alpha SWAP reproduces it with
// tau = 1 and no leftover global phase.
inline QubitModel build_qubit_model(const QubitModelParams& p) {
    p.validate();
    QubitModel m;
    m.bathA = qubit_bath(p.betaA, p.chiA);
    m.bathB = qubit_bath(p.betaB, p.chiB);
    m.interaction.u = generalized_swap(p.alpha);
    m.interaction.tau = 1.0;
    m.interaction.hint = (-p.alpha / 2.0) * (pauli_exchange() + CMatrix::identity(4));
    m.interaction.certificate = verify_charge_preserving(m.interaction.u, m.bathA, m.bathB);
    return m;
}

struct SweepPoint {
    QubitModelParams params;
    double avg_dq_z = 0.0, avg_dq_x = 0.0;
    double avg_delta = 0.0, sigma_avg = 0.0;
    double integral_ft = 0.0, naive_ft = 0.0;
    double uncorrected_second_law = 0.0;
    bool inversion_z = false, inversion_x = false, double_inversion = false;
    double tur_min_margin = 0.0;
    bool tur_degenerate = false;
    bool failed = false;       // model error at this grid node
    std::string flag = "ok";
};

inline void detect_inversions(SweepPoint& pt) {
    const double dbeta = pt.params.betaA - pt.params.betaB;
    const double dchi = pt.params.chiA - pt.params.chiB;
    pt.inversion_z = pt.avg_dq_z * dbeta < -1e-12;
    pt.inversion_x = pt.avg_dq_x * dchi < -1e-12;
    pt.double_inversion = pt.inversion_z && pt.inversion_x;
}

inline SweepPoint evaluate_qubit_point(const QubitModelParams& p) {
    SweepPoint pt;
    pt.params = p;
    try {
        const QubitModel model = build_qubit_model(p);
        const TrajectoryTable table =
            enumerate_trajectories(model.bathA, model.bathB, model.interaction);
        const CurrentDistribution dist = build_distribution(table);
        const Averages avg = averages(table);
        pt.avg_dq_z = avg.avg_dq[0];
        pt.avg_dq_x = avg.avg_dq[1];
        pt.avg_delta = avg.avg_delta;
        pt.sigma_avg = avg.sigma_avg;
        pt.integral_ft = integral_ft(dist);
        pt.naive_ft = naive_integral_ft(dist);
        for (size_t i = 0; i < table.delta_lambda.size(); ++i)
            pt.uncorrected_second_law += table.delta_lambda[i] * avg.avg_dq[i];
        detect_inversions(pt);

        pt.tur_degenerate = true;
        double min_margin = 0.0;
        for (int j = 0; j < 2; ++j) {
            const FTReport tur = tur_report(table, avg, j);
            if (tur.degenerate) continue;
            const double margin = tur.details["margin"].get<double>();
            if (pt.tur_degenerate || margin < min_margin) min_margin = margin;
            pt.tur_degenerate = false;
        }
        pt.tur_min_margin = pt.tur_degenerate ? 0.0 : min_margin;
        if (pt.tur_degenerate) pt.flag = "tur_degenerate";
    } catch (const std::exception& err) {
        pt.failed = true;
        pt.flag = std::string("error: ") + err.what();
    }
    return pt;
}

struct SweepGrid {
    std::string var = "chiA";  // one of betaA, chiA, betaB, chiB, alpha
    double start = -2.0, stop = 2.0;
    int count = 201;
    QubitModelParams fixed;  // values for the non-swept parameters
};

inline double* sweep_var_slot(QubitModelParams& p, const std::string& var) {
    if (var == "betaA") return &p.betaA;
    if (var == "chiA") return &p.chiA;
    if (var == "betaB") return &p.betaB;
    if (var == "chiB") return &p.chiB;
    if (var == "alpha") return &p.alpha;
    return nullptr;
}

inline std::vector<SweepPoint> sweep_fig2(const SweepGrid& grid) {
    if (grid.count < 1) throw IndexOutOfRange("sweep: grid count must be >= 1");
    std::vector<SweepPoint> points;
    points.reserve(grid.count);
    for (int k = 0; k < grid.count; ++k) {
        QubitModelParams p = grid.fixed;
        double* slot = sweep_var_slot(p, grid.var);
        if (!slot) throw IndexOutOfRange("sweep: unknown variable '" + grid.var + "'");
        *slot = grid.count == 1
                    ? grid.start
                    : grid.start + (grid.stop - grid.start) * k / double(grid.count - 1);
        points.push_back(evaluate_qubit_point(p));
    }
    return points;
}

inline std::string sweep_csv_header() {
    return "betaA,chiA,betaB,chiB,alpha,avg_dq_z,avg_dq_x,avg_delta,sigma_avg,integral_ft,"
           "naive_ft,uncorrected_second_law,inversion_z,inversion_x,double_inversion,"
           "tur_min_margin,flags";
}

inline std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string out = sweep_csv_header() + "\n";
    for (const auto& pt : points) {
        out += render_double(pt.params.betaA) + "," + render_double(pt.params.chiA) + "," +
               render_double(pt.params.betaB) + "," + render_double(pt.params.chiB) + "," +
               render_double(pt.params.alpha) + "," + render_double(pt.avg_dq_z) + "," +
               render_double(pt.avg_dq_x) + "," + render_double(pt.avg_delta) + "," +
               render_double(pt.sigma_avg) + "," + render_double(pt.integral_ft) + "," +
               render_double(pt.naive_ft) + "," + render_double(pt.uncorrected_second_law) +
               "," + (pt.inversion_z ? "1" : "0") + "," + (pt.inversion_x ? "1" : "0") + "," +
               (pt.double_inversion ? "1" : "0") + ",";
        out += pt.tur_degenerate ? "na" : render_double(pt.tur_min_margin);
        std::string flag = pt.flag;
        for (char& c : flag)
            if (c == ',' || c == '\n') c = ';';
        out += "," + flag + "\n";
    }
    return out;
}

}  // namespace xft

#endif
