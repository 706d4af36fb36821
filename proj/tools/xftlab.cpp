// xftlab: verification front end for exchange statistics of non-commuting
// conserved charges. Subcommands: validate, verify, sweep, commutant.
// Exit codes: 0 pass, 1 validation failure, 2 relation violation,
// 3 usage/config error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xft/config.hpp"
#include "xft/io.hpp"
#include "xft/qubit_example.hpp"
#include "xft/statistics.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitRelationViolation = 2;
constexpr int kExitUsageError = 3;

void write_output(const std::optional<std::string>& out_path, const std::string& text) {
    if (out_path) {
        std::ofstream f(*out_path, std::ios::binary);
        if (!f) throw xft::ConfigError("", "cannot open output file '" + *out_path + "'");
        f << text;
    } else {
        std::cout << text;
    }
}

xft::ojson error_json(const std::string& kind, const std::string& message,
                      const std::string& path = "") {
    xft::ojson j;
    j["error"] = kind;
    j["message"] = message;
    if (!path.empty()) j["path"] = path;
    return j;
}

// validate: certificate + commutation report + nondegeneracy. Throws nothing;
// returns the exit code and fills the report.
int run_validation(const xft::ModelConfig& cfg, xft::ojson& report) {
    using namespace xft;
    bool pass = true;

    report["unitarity_defect"] = unitarity_defect(cfg.interaction.u);
    if (unitarity_defect(cfg.interaction.u) > 1e-11) {
        report["unitary"] = false;
        report["pass"] = false;
        return kExitValidationFailure;  // guard ordering: nothing else runs
    }
    report["unitary"] = true;

    const auto cert = verify_charge_preserving(cfg.interaction.u, cfg.bathA, cfg.bathB);
    ojson jcert = ojson::array();
    for (size_t i = 0; i < cert.size(); ++i) {
        ojson c;
        c["charge"] = cfg.bathA.charges[i].label;
        c["residual"] = cert[i];
        jcert.push_back(c);
    }
    report["charge_preservation"] = jcert;
    if (!certificate_passes(cert, cfg.options.certificate_tol)) pass = false;

    for (const char* side : {"A", "B"}) {
        const Bath& bath = (*side == 'A') ? cfg.bathA : cfg.bathB;
        const auto comm = commutation_report(bath);
        ojson jc;
        jc["abelian"] = comm.abelian;
        ojson pairs = ojson::array();
        for (const auto& p : comm.pairs) {
            ojson e;
            e["i"] = bath.charges[p.i].label;
            e["j"] = bath.charges[p.j].label;
            e["comm_norm"] = p.norm;
            pairs.push_back(e);
        }
        jc["pairs"] = pairs;
        try {
            require_nondegenerate(gibbs_state(bath).eig, side);
            jc["nondegenerate"] = true;
        } catch (const DegenerateSpectrum&) {
            jc["nondegenerate"] = false;
            pass = false;
        }
        report[std::string("bath_") + side] = jc;
    }

    report["pass"] = pass;
    return pass ? kExitPass : kExitValidationFailure;
}

int cmd_validate(const xft::ModelConfig& cfg) {
    xft::ojson report;
    const int code = run_validation(cfg, report);
    std::cout << report.dump(2) << "\n";
    return code;
}

int cmd_verify(const xft::ModelConfig& cfg, const std::optional<std::string>& out_path,
               const std::optional<std::string>& dump_path) {
    using namespace xft;
    ojson validation;
    if (run_validation(cfg, validation) != kExitPass) {
        ojson report;
        report["validation"] = validation;
        std::cout << report.dump(2) << "\n";
        return kExitValidationFailure;
    }

    const TrajectoryTable table = enumerate_trajectories(
        cfg.bathA, cfg.bathB, cfg.interaction, cfg.options.support_threshold);
    if (dump_path) write_output(dump_path, trajectory_csv(table));

    const CurrentDistribution dist = build_distribution(table, cfg.options.quantization_eps);
    const Averages avg = averages(table);

    std::vector<FTReport> reports;
    reports.push_back(detailed_ft_report(dist, cfg.options.support_threshold));

    FTReport integral;
    integral.relation = "integral_xft";
    integral.tolerance = 1e-10;
    const double ift = integral_ft(dist);
    integral.residual = std::abs(ift - 1.0);
    integral.pass = integral.residual < integral.tolerance;
    integral.details["value"] = ift;
    integral.details["naive_value"] = naive_integral_ft(dist);
    reports.push_back(integral);

    reports.push_back(second_law_report(table, avg));
    for (int j = 0; j < table.bathA.num_charges(); ++j)
        reports.push_back(tur_report(table, avg, j));
    reports.push_back(tail_bound_report(table, {0.0, 0.5, 1.0, 2.0, 4.0}));

    bool all_pass = true;
    ojson jreports = ojson::array();
    for (const auto& r : reports) {
        jreports.push_back(r.to_json());
        if (!r.degenerate && !r.pass) all_pass = false;
    }

    ojson out;
    out["validation"] = validation;
    out["relations"] = jreports;
    ojson javg;
    for (int i = 0; i < table.bathA.num_charges(); ++i)
        javg["avg_dq_" + table.bathA.charges[i].label] = avg.avg_dq[i];
    javg["avg_delta"] = avg.avg_delta;
    javg["sigma_avg"] = avg.sigma_avg;
    out["averages"] = javg;
    out["pass"] = all_pass;

    const std::string text = out.dump(2) + "\n";
    write_output(out_path, text);
    return all_pass ? kExitPass : kExitRelationViolation;
}

struct GridSpec {
    std::string var;
    double start = 0.0, stop = 0.0;
    int count = 0;
};

GridSpec parse_grid(const std::string& spec) {
    GridSpec g;
    std::istringstream ss(spec);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 4)
        throw xft::ConfigError("--grid", "expected VAR:START:STOP:COUNT, got '" + spec + "'");
    g.var = parts[0];
    try {
        g.start = std::stod(parts[1]);
        g.stop = std::stod(parts[2]);
        g.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw xft::ConfigError("--grid", "non-numeric bounds in '" + spec + "'");
    }
    if (g.count < 1) throw xft::ConfigError("--grid", "COUNT must be >= 1");
    return g;
}

int cmd_sweep(const xft::ModelConfig& cfg, const std::string& grid_flag,
              const std::vector<std::string>& sets, const std::optional<std::string>& out_path,
              const std::optional<std::string>& svg_path, const std::string& svg_cols) {
    using namespace xft;
    if (!cfg.swap_alpha || cfg.bathA.dim != 2 || cfg.bathB.dim != 2 ||
        cfg.bathA.num_charges() != 2)
        throw ConfigError("interaction.type",
                          "sweep requires a two-qubit, two-charge model with a "
                          "generalized_swap interaction");

    SweepGrid grid;
    const GridSpec spec = parse_grid(grid_flag);
    grid.var = spec.var;
    grid.start = spec.start;
    grid.stop = spec.stop;
    grid.count = spec.count;
    grid.fixed.betaA = cfg.bathA.affinities[0];
    grid.fixed.chiA = cfg.bathA.affinities[1];
    grid.fixed.betaB = cfg.bathB.affinities[0];
    grid.fixed.chiB = cfg.bathB.affinities[1];
    grid.fixed.alpha = *cfg.swap_alpha;

    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set", "expected KEY=VALUE, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        double* slot = sweep_var_slot(grid.fixed, key);
        if (!slot) throw ConfigError("--set", "unknown parameter '" + key + "'");
        try {
            *slot = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--set", "non-numeric value in '" + kv + "'");
        }
    }
    if (!sweep_var_slot(grid.fixed, grid.var))
        throw ConfigError("--grid", "unknown sweep variable '" + grid.var + "'");

    const auto points = sweep_fig2(grid);
    write_output(out_path, sweep_csv(points));

    if (svg_path) {
        std::vector<double> xs;
        for (const auto& pt : points) {
            QubitModelParams p = pt.params;
            xs.push_back(*sweep_var_slot(p, grid.var));
        }
        std::vector<SvgSeries> series;
        std::istringstream cols(svg_cols);
        std::string col;
        while (std::getline(cols, col, ',')) {
            SvgSeries s;
            s.name = col;
            for (const auto& pt : points) {
                double v;
                if (col == "avg_dq_z") v = pt.avg_dq_z;
                else if (col == "avg_dq_x") v = pt.avg_dq_x;
                else if (col == "avg_delta") v = pt.avg_delta;
                else if (col == "sigma_avg") v = pt.sigma_avg;
                else if (col == "integral_ft") v = pt.integral_ft;
                else if (col == "naive_ft") v = pt.naive_ft;
                else if (col == "uncorrected_second_law") v = pt.uncorrected_second_law;
                else if (col == "tur_min_margin")
                    v = pt.tur_degenerate ? std::nan("") : pt.tur_min_margin;
                else
                    throw ConfigError("--cols", "unknown column '" + col + "'");
                s.y.push_back(pt.failed ? std::nan("") : v);
            }
            series.push_back(std::move(s));
        }
        std::ofstream f(*svg_path, std::ios::binary);
        if (!f) throw ConfigError("", "cannot open SVG output '" + *svg_path + "'");
        f << svg_line_chart(grid.var, xs, series);
    }
    return kExitPass;
}

int cmd_commutant(const xft::ModelConfig& cfg, const std::optional<std::string>& out_path) {
    using namespace xft;
    const auto basis =
        solve_allowed_interactions(cfg.bathA, cfg.bathB, cfg.options.nullspace_tol);
    ojson out;
    out["dimension"] = basis.size();
    ojson jb = ojson::array();
    for (const auto& b : basis) jb.push_back(ojson(matrix_to_json(b)));
    out["basis"] = jb;
    write_output(out_path, out.dump(2) + "\n");
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exchange statistics of non-commuting conserved charges"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_path, svg_path, dump_path;
    std::string grid_flag;
    std::vector<std::string> sets;
    std::string svg_cols = "integral_ft,naive_ft,sigma_avg,uncorrected_second_law";
    double eps = 1e-9;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "model config (JSON)")->required();
        sub->add_option("--out", out_path, "output file (default: stdout)");
    };

    CLI::App* validate = app.add_subcommand("validate", "check model invariants");
    validate->add_option("--config", config_path, "model config (JSON)")->required();

    CLI::App* verify = app.add_subcommand("verify", "run every fluctuation relation");
    add_common(verify);
    verify->add_option("--dump-trajectories", dump_path, "write the trajectory table CSV");
    verify->add_option("--eps", eps, "current-distribution quantization step");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over the qubit model");
    add_common(sweep);
    sweep->add_option("--grid", grid_flag, "VAR:START:STOP:COUNT")->required();
    sweep->add_option("--set", sets, "fixed-value override KEY=VALUE");
    sweep->add_option("--svg", svg_path, "render selected columns as an SVG line chart");
    sweep->add_option("--cols", svg_cols, "comma-separated columns for --svg");

    CLI::App* commutant = app.add_subcommand("commutant", "solve for allowed interactions");
    add_common(commutant);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsageError;
    }

    try {
        xft::ModelConfig cfg = xft::load_model_config(config_path);
        if (verify->parsed()) cfg.options.quantization_eps = eps;

        if (validate->parsed()) return cmd_validate(cfg);
        if (verify->parsed()) return cmd_verify(cfg, out_path, dump_path);
        if (sweep->parsed())
            return cmd_sweep(cfg, grid_flag, sets, out_path, svg_path, svg_cols);
        if (commutant->parsed()) return cmd_commutant(cfg, out_path);
        return kExitUsageError;
    } catch (const xft::ConfigError& e) {
        std::cout << error_json("config", e.what(), e.path).dump(2) << "\n";
        return kExitUsageError;
    } catch (const xft::NotUnitary& e) {
        std::cout << error_json("validation", e.what()).dump(2) << "\n";
        return kExitValidationFailure;
    } catch (const xft::DegenerateSpectrum& e) {
        std::cout << error_json("validation", e.what()).dump(2) << "\n";
        return kExitValidationFailure;
    } catch (const xft::CertificateFailure& e) {
        std::cout << error_json("validation", e.what()).dump(2) << "\n";
        return kExitValidationFailure;
    } catch (const std::exception& e) {
        std::cout << error_json("validation", e.what()).dump(2) << "\n";
        return kExitValidationFailure;
    }
}
