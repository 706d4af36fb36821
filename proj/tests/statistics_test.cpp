#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "xft/qubit_example.hpp"
#include "xft/statistics.hpp"

using namespace xft;

namespace {

TrajectoryTable qubit_table(double betaA, double chiA, double betaB, double chiB,
                            double alpha) {
    const QubitModel m = build_qubit_model({betaA, chiA, betaB, chiB, alpha});
    return enumerate_trajectories(m.bathA, m.bathB, m.interaction);
}

TrajectoryTable commuting_table(double l1A, double l2A, double l1B, double l2B, double alpha) {
    // two commuting (diagonal) charges, swap-family interaction
    const CMatrix q2(2, {1.0, 0.0, 0.0, 0.0});
    Bath a{2, {{"sigma_z", pauli_z()}, {"upper", q2}}, {l1A, l2A}};
    Bath b{2, {{"sigma_z", pauli_z()}, {"upper", q2}}, {l1B, l2B}};
    Interaction in;
    in.u = generalized_swap(alpha);
    CMatrix swap(4);
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    in.hint = -alpha * swap;
    return enumerate_trajectories(a, b, in);
}

}  // namespace

TEST_CASE("build_distribution") {
    SUBCASE("alpha = 0 collapses to a single zero bin") {
        const auto dist = build_distribution(qubit_table(0.5, 0.8, 0.5, 0.2, 0.0));
        int massive = 0;
        for (const auto& [k, e] : dist.bins)
            if (e.prob > 1e-14) {
                ++massive;
                for (auto key : k) CHECK(key == 0);
            }
        CHECK(massive == 1);
        CHECK(std::abs(dist.total_mass() - 1.0) < 1e-12);
    }
    SUBCASE("generic qubit point: at most 16 bins, unit mass") {
        const auto dist = build_distribution(qubit_table(0.5, 0.8, 0.5, 0.2, 1.0));
        CHECK(dist.bins.size() <= 16);
        CHECK(std::abs(dist.total_mass() - 1.0) < 1e-12);
    }
    SUBCASE("equal baths: distribution symmetric under key negation") {
        const auto dist = build_distribution(qubit_table(0.5, 0.8, 0.5, 0.8, 1.0));
        for (const auto& [k, e] : dist.bins) {
            const auto it = dist.bins.find(CurrentDistribution::negate(k));
            const double pneg = (it == dist.bins.end()) ? 0.0 : it->second.prob;
            CHECK(std::abs(e.prob - pneg) < 1e-12);
        }
    }
}

TEST_CASE("detailed_ft_report") {
    SUBCASE("qubit example passes at 1e-8") {
        const auto dist = build_distribution(qubit_table(0.5, 0.8, 0.5, 0.2, 1.0));
        const FTReport rep = detailed_ft_report(dist);
        CHECK(rep.pass);
        CHECK(rep.residual < 1e-8);
        CHECK(rep.details["bin_pairs"].get<int>() > 0);
    }
    SUBCASE("alpha = 0 is a vacuous pass") {
        const auto dist = build_distribution(qubit_table(0.5, 0.8, 0.5, 0.2, 0.0));
        CHECK(detailed_ft_report(dist).pass);
    }
    SUBCASE("commuting reduction: standard XFT with Delta identically zero") {
        const auto table = commuting_table(0.9, 0.2, 0.3, 0.7, 1.0);
        for (const auto& r : table.rows)
            if (r.prob > 1e-14) CHECK(std::abs(r.delta) < 1e-10);
        const auto dist = build_distribution(table);
        const FTReport rep = detailed_ft_report(dist);
        CHECK(rep.pass);
        CHECK(rep.residual < 1e-8);
    }
}

TEST_CASE("integral_ft equals 1") {
    SUBCASE("qubit parameter points") {
        for (double chiA : {-1.0, 0.2, 0.8}) {
            const auto dist = build_distribution(qubit_table(0.5, chiA, 0.5, 0.2, 1.0));
            CHECK(std::abs(integral_ft(dist) - 1.0) < 1e-10);
        }
    }
    SUBCASE("alpha = 0 exactly") {
        const auto dist = build_distribution(qubit_table(0.5, 0.8, 0.5, 0.2, 0.0));
        CHECK(integral_ft(dist) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("100 random charge-preserving models") {
        std::mt19937_64 rng(2024);
        for (int rep = 0; rep < 100; ++rep) {
            const auto model = test::random_charge_preserving_model(rng);
            const auto table =
                enumerate_trajectories(model.bathA, model.bathB, model.interaction);
            const auto dist = build_distribution(table);
            CHECK(std::abs(integral_ft(dist) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("detailed and integral FT are mutually consistent") {
    const auto dist = build_distribution(qubit_table(0.3, 0.9, 0.8, 0.4, 1.0));
    // reconstruct the integral as sum_v P(-v) through the detailed relation
    double via_detailed = 0.0;
    for (const auto& [k, e] : dist.bins) {
        if (e.prob <= 1e-14) continue;
        const auto it = dist.bins.find(CurrentDistribution::negate(k));
        via_detailed += (it == dist.bins.end()) ? 0.0 : it->second.prob;
    }
    // bins whose negation has zero mass contribute their own e^{-sigma} weight
    double direct = 0.0;
    for (const auto& [k, e] : dist.bins) {
        if (e.prob <= 1e-14) continue;
        const auto it = dist.bins.find(CurrentDistribution::negate(k));
        if (it != dist.bins.end() && it->second.prob > 1e-14)
            direct += e.prob * (it->second.prob / e.prob);
        else
            direct += e.prob * std::exp(-bin_sigma(dist, e));
    }
    CHECK(std::abs(via_detailed - integral_ft(dist)) < 1e-10);
    CHECK(std::abs(direct - integral_ft(dist)) < 1e-10);
}

TEST_CASE("naive_integral_ft") {
    SUBCASE("commuting charges recover 1") {
        const auto dist = build_distribution(commuting_table(0.9, 0.2, 0.3, 0.7, 1.0));
        CHECK(std::abs(naive_integral_ft(dist) - 1.0) < 1e-10);
    }
    SUBCASE("zero affinity differences give exactly 1") {
        const auto dist = build_distribution(qubit_table(0.5, 0.8, 0.5, 0.8, 1.0));
        CHECK(naive_integral_ft(dist) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("non-Abelian bias breaks the naive FT somewhere") {
        double worst = 0.0;
        for (double chiA = -1.6; chiA <= 2.4; chiA += 0.25) {
            const auto dist = build_distribution(qubit_table(0.3, chiA, 0.8, 0.4, 1.0));
            worst = std::max(worst, std::abs(naive_integral_ft(dist) - 1.0));
        }
        CHECK(worst > 1e-6);
    }
}

TEST_CASE("averages") {
    SUBCASE("alpha = 0 gives zeros") {
        const Averages a = averages(qubit_table(0.5, 0.8, 0.5, 0.2, 0.0));
        CHECK(std::abs(a.avg_dq[0]) < 1e-14);
        CHECK(std::abs(a.avg_dq[1]) < 1e-14);
        CHECK(std::abs(a.avg_delta) < 1e-14);
        CHECK(std::abs(a.sigma_avg) < 1e-14);
    }
    SUBCASE("sigma_avg equals the relative entropy S(U rho0 U^dag || rho0)") {
        const auto table = qubit_table(0.5, 0.8, 0.5, 0.2, 1.0);
        const Averages a = averages(table);
        const CMatrix rho0 = kron(table.gibbsA.rho, table.gibbsB.rho);
        const CMatrix rho1 = table.interaction.u * rho0 * table.interaction.u.adjoint();
        CHECK(std::abs(a.sigma_avg - contrast_divergence(ContrastKind::neglog, rho1, rho0)) <
              1e-10);
    }
    SUBCASE("operator-formula gap is a reported diagnostic") {
        const auto table = qubit_table(0.5, 0.8, 0.5, 0.2, 1.0);
        const auto gap = operator_current_gap(table, averages(table));
        REQUIRE(gap.size() == 2);
        for (double g : gap) CHECK(std::isfinite(g));
    }
}

TEST_CASE("second_law_report") {
    SUBCASE("alpha = 0: equality at zero") {
        const auto table = qubit_table(0.5, 0.8, 0.5, 0.2, 0.0);
        const FTReport rep = second_law_report(table, averages(table));
        CHECK(rep.pass);
        CHECK(std::abs(rep.details["corrected"].get<double>()) < 1e-12);
    }
    SUBCASE("corrected value is nonnegative across a parameter scan") {
        bool saw_apparent_violation = false;
        for (double chiA = -1.6; chiA <= 2.4; chiA += 0.1) {
            const auto table = qubit_table(0.3, chiA, 0.8, 0.4, 1.0);
            const FTReport rep = second_law_report(table, averages(table));
            CHECK(rep.pass);
            if (rep.details["apparent_violation"].get<bool>()) saw_apparent_violation = true;
        }
        CHECK(saw_apparent_violation);
    }
}

TEST_CASE("tur_report") {
    SUBCASE("alpha = 0 is degenerate") {
        const auto table = qubit_table(0.5, 0.8, 0.5, 0.2, 0.0);
        const FTReport rep = tur_report(table, averages(table), 0);
        CHECK(rep.degenerate);
    }
    SUBCASE("holds on an affinity grid for both charges") {
        for (double betaA : {0.2, 0.5, 1.0})
            for (double chiA : {-1.2, -0.3, 0.6, 1.4}) {
                const auto table = qubit_table(betaA, chiA, 0.5, 0.2, 1.0);
                const Averages a = averages(table);
                for (int j = 0; j < 2; ++j) {
                    const FTReport rep = tur_report(table, a, j);
                    if (!rep.degenerate) CHECK(rep.pass);
                }
            }
    }
    SUBCASE("commuting single-charge reduction") {
        Bath a{2, {{"sigma_z", pauli_z()}}, {1.1}};
        Bath b{2, {{"sigma_z", pauli_z()}}, {0.3}};
        Interaction in;
        in.u = generalized_swap(1.0);
        const auto table = enumerate_trajectories(a, b, in);
        const FTReport rep = tur_report(table, averages(table), 0);
        CHECK_FALSE(rep.degenerate);
        CHECK(rep.pass);
    }
}

TEST_CASE("tail_bound_report") {
    SUBCASE("qubit example at several zeta values") {
        const auto table = qubit_table(0.3, 0.9, 0.8, 0.4, 1.0);
        const FTReport rep = tail_bound_report(table, {0.0, 0.5, 1.0, 2.0, 4.0});
        CHECK(rep.pass);
    }
    SUBCASE("alpha = 0: empty tail for zeta > 0") {
        const auto table = qubit_table(0.5, 0.8, 0.5, 0.2, 0.0);
        const FTReport rep = tail_bound_report(table, {0.5, 1.0});
        CHECK(rep.pass);
        for (const auto& pt : rep.details["points"])
            CHECK(pt["prob"].get<double>() < 1e-14);
    }
    SUBCASE("rejects negative zeta") {
        const auto table = qubit_table(0.5, 0.8, 0.5, 0.2, 1.0);
        CHECK_THROWS_AS(tail_bound_report(table, {-1.0}), IndexOutOfRange);
    }
}

TEST_CASE("contrast_divergence") {
    const auto table = qubit_table(0.5, 0.8, 0.5, 0.2, 1.0);
    const CMatrix rho0 = kron(table.gibbsA.rho, table.gibbsB.rho);
    const CMatrix rho1 = table.interaction.u * rho0 * table.interaction.u.adjoint();
    SUBCASE("identity contrast is 1") {
        CHECK(std::abs(contrast_divergence(ContrastKind::identity, rho1, rho0) - 1.0) < 1e-12);
    }
    SUBCASE("neglog of a state against itself is 0") {
        CHECK(std::abs(contrast_divergence(ContrastKind::neglog, rho0, rho0)) < 1e-12);
    }
    SUBCASE("trajectory identity for both contrast kinds") {
        for (ContrastKind kind : {ContrastKind::identity, ContrastKind::neglog}) {
            double traj = 0.0;
            for (const auto& r : table.rows) {
                const double x = std::exp(-(r.dhA + r.dhB));
                traj += r.prob * (kind == ContrastKind::identity ? x : -std::log(x));
            }
            CHECK(std::abs(contrast_divergence(kind, rho1, rho0) - traj) < 1e-10);
        }
    }
    SUBCASE("singular sigma is rejected") {
        CMatrix proj(4);
        proj(0, 0) = 1.0;
        CHECK_THROWS_AS(contrast_divergence(ContrastKind::neglog, rho1, proj), SingularState);
    }
}

TEST_CASE("equilibrium trivializes every relation") {
    const auto table = qubit_table(0.5, 0.8, 0.5, 0.8, 1.0);
    const Averages a = averages(table);
    CHECK(std::abs(a.sigma_avg) < 1e-12);
    for (double dq : a.avg_dq) CHECK(std::abs(dq) < 1e-12);
}
