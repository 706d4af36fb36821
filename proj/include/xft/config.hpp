#ifndef XFT_CONFIG_HPP
#define XFT_CONFIG_HPP

// JSON model configs. Complex entries are [re, im] pairs; parse failures carry
// the path into the config (e.g. "baths.A.charges[0].matrix").

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xft/commutant.hpp"
#include "xft/gibbs.hpp"

namespace xft {

using json = nlohmann::json;

struct ModelOptions {
    double quantization_eps = 1e-9;
    double support_threshold = 1e-14;
    double certificate_tol = 1e-10;
    double nullspace_tol = 1e-9;
};

struct ModelConfig {
    Bath bathA, bathB;
    Interaction interaction;
    ModelOptions options;
    std::optional<double> swap_alpha;  // set when interaction.type == generalized_swap
};

namespace detail {

inline const json& require_field(const json& node, const char* key, const std::string& path) {
    if (!node.is_object() || !node.contains(key))
        throw ConfigError(path, std::string("missing field '") + key + "'");
    return node.at(key);
}

inline double parse_real(const json& node, const std::string& path) {
    if (!node.is_number()) throw ConfigError(path, "expected a number");
    return node.get<double>();
}

inline cplx parse_complex(const json& node, const std::string& path) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number())
        throw ConfigError(path, "expected a [re, im] pair");
    return {node[0].get<double>(), node[1].get<double>()};
}

inline CMatrix parse_matrix(const json& node, const std::string& path) {
    if (!node.is_array() || node.empty()) throw ConfigError(path, "expected a nested array");
    const int d = static_cast<int>(node.size());
    CMatrix m(d);
    for (int i = 0; i < d; ++i) {
        const json& row = node[i];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw ConfigError(path, "matrix is not square");
        for (int j = 0; j < d; ++j)
            m(i, j) = parse_complex(row[j], path + "[" + std::to_string(i) + "][" +
                                                std::to_string(j) + "]");
    }
    if (!m.finite()) throw ConfigError(path, "matrix has non-finite entries");
    return m;
}

inline Bath parse_bath(const json& node, const std::string& path) {
    Bath b;
    b.dim = static_cast<int>(parse_real(require_field(node, "dim", path), path + ".dim"));
    if (b.dim < 1) throw ConfigError(path + ".dim", "dim must be >= 1");
    const json& charges = require_field(node, "charges", path);
    if (!charges.is_array() || charges.empty())
        throw ConfigError(path + ".charges", "expected a non-empty array");
    for (size_t k = 0; k < charges.size(); ++k) {
        const std::string cpath = path + ".charges[" + std::to_string(k) + "]";
        const json& c = charges[k];
        Charge charge;
        if (c.contains("label") && c.at("label").is_string())
            charge.label = c.at("label").get<std::string>();
        else
            charge.label = "Q" + std::to_string(k + 1);
        charge.matrix = parse_matrix(require_field(c, "matrix", cpath), cpath + ".matrix");
        if (charge.matrix.dim() != b.dim)
            throw ConfigError(cpath + ".matrix", "matrix dim does not match bath dim");
        if (!is_hermitian(charge.matrix))
            throw ConfigError(cpath + ".matrix", "charge matrix is not Hermitian");
        b.charges.push_back(std::move(charge));
    }
    const json& aff = require_field(node, "affinities", path);
    if (!aff.is_array() || aff.size() != charges.size())
        throw ConfigError(path + ".affinities", "expected one affinity per charge");
    for (size_t k = 0; k < aff.size(); ++k)
        b.affinities.push_back(
            parse_real(aff[k], path + ".affinities[" + std::to_string(k) + "]"));
    return b;
}

}  // namespace detail

inline ModelConfig parse_model_config(const json& root) {
    ModelConfig cfg;
    const json& baths = detail::require_field(root, "baths", "");
    cfg.bathA = detail::parse_bath(detail::require_field(baths, "A", "baths"), "baths.A");
    cfg.bathB = detail::parse_bath(detail::require_field(baths, "B", "baths"), "baths.B");
    if (cfg.bathA.num_charges() != cfg.bathB.num_charges())
        throw ConfigError("baths", "baths must declare the same number of charges");
    for (int i = 0; i < cfg.bathA.num_charges(); ++i)
        if (cfg.bathA.charges[i].label != cfg.bathB.charges[i].label)
            throw ConfigError("baths.B.charges[" + std::to_string(i) + "].label",
                              "charge labels must match bath A in the same order");

    const json& inter = detail::require_field(root, "interaction", "");
    const json& type = detail::require_field(inter, "type", "interaction");
    if (!type.is_string()) throw ConfigError("interaction.type", "expected a string");
    const std::string kind = type.get<std::string>();
    const int d = cfg.bathA.dim * cfg.bathB.dim;
    if (kind == "generalized_swap") {
        if (d != 4)
            throw ConfigError("interaction.type",
                              "generalized_swap requires two qubit baths (d_A = d_B = 2)");
        const double alpha =
            detail::parse_real(detail::require_field(inter, "alpha", "interaction"),
                               "interaction.alpha");
        cfg.interaction.u = generalized_swap(alpha);
        cfg.interaction.tau = 1.0;
        cfg.swap_alpha = alpha;
        // SWAP[a] = e^{-i(-a SWAP)}; keep hint so the explicit Delta applies
        CMatrix swap(4);
        swap(0, 0) = swap(3, 3) = 1.0;
        swap(1, 2) = swap(2, 1) = 1.0;
        cfg.interaction.hint = -alpha * swap;
    } else if (kind == "hamiltonian") {
        CMatrix h = detail::parse_matrix(
            detail::require_field(inter, "matrix", "interaction"), "interaction.matrix");
        if (h.dim() != d)
            throw ConfigError("interaction.matrix", "matrix dim must be d_A * d_B");
        if (!is_hermitian(h))
            throw ConfigError("interaction.matrix", "interaction Hamiltonian is not Hermitian");
        const double tau = detail::parse_real(
            detail::require_field(inter, "tau", "interaction"), "interaction.tau");
        cfg.interaction = unitary_from_interaction(h, tau);
    } else if (kind == "unitary") {
        CMatrix u = detail::parse_matrix(
            detail::require_field(inter, "matrix", "interaction"), "interaction.matrix");
        if (u.dim() != d)
            throw ConfigError("interaction.matrix", "matrix dim must be d_A * d_B");
        cfg.interaction.u = u;
    } else {
        throw ConfigError("interaction.type",
                          "unknown type '" + kind +
                              "' (expected generalized_swap, hamiltonian, or unitary)");
    }

    if (root.contains("options")) {
        const json& opt = root.at("options");
        if (!opt.is_object()) throw ConfigError("options", "expected an object");
        if (opt.contains("quantization_eps"))
            cfg.options.quantization_eps =
                detail::parse_real(opt.at("quantization_eps"), "options.quantization_eps");
        if (opt.contains("support_threshold"))
            cfg.options.support_threshold =
                detail::parse_real(opt.at("support_threshold"), "options.support_threshold");
        if (opt.contains("certificate_tol"))
            cfg.options.certificate_tol =
                detail::parse_real(opt.at("certificate_tol"), "options.certificate_tol");
        if (opt.contains("nullspace_tol"))
            cfg.options.nullspace_tol =
                detail::parse_real(opt.at("nullspace_tol"), "options.nullspace_tol");
    }
    return cfg;
}

inline ModelConfig load_model_config(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw ConfigError("", "cannot open config file '" + file_path + "'");
    json root;
    try {
        in >> root;
    } catch (const json::parse_error& err) {
        throw ConfigError("", std::string("JSON parse error: ") + err.what());
    }
    return parse_model_config(root);
}

inline json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.dim(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace xft

#endif
