#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "xft/collision.hpp"
#include "xft/qubit_example.hpp"

using namespace xft;

namespace {

TrajectoryTable qubit_table(double betaA, double chiA, double betaB, double chiB,
                            double alpha) {
    const QubitModel m = build_qubit_model({betaA, chiA, betaB, chiB, alpha});
    return enumerate_trajectories(m.bathA, m.bathB, m.interaction);
}

double total_prob(const TrajectoryTable& t) {
    double s = 0.0;
    for (const auto& r : t.rows) s += r.prob;
    return s;
}

}  // namespace

TEST_CASE("enumerate_trajectories: qubit example basics") {
    const TrajectoryTable t = qubit_table(0.5, 0.8, 0.5, 0.2, 1.0);
    CHECK(t.rows.size() == 16);
    CHECK(std::abs(total_prob(t) - 1.0) < 1e-12);
    // lexicographic order and reversal closure
    int idx = 0;
    for (int n = 0; n < 2; ++n)
        for (int nu = 0; nu < 2; ++nu)
            for (int m = 0; m < 2; ++m)
                for (int mu = 0; mu < 2; ++mu) {
                    const Trajectory& r = t.rows[idx++];
                    CHECK(r.n == n);
                    CHECK(r.nu == nu);
                    CHECK(r.m == m);
                    CHECK(r.mu == mu);
                    const Trajectory& rev = t.reverse_of(r);
                    CHECK(rev.n == m);
                    CHECK(rev.m == n);
                }
}

TEST_CASE("enumerate_trajectories: identity dynamics at alpha = 0") {
    const TrajectoryTable t = qubit_table(0.5, 0.8, 0.5, 0.2, 0.0);
    for (const auto& r : t.rows) {
        if (r.m == r.n && r.mu == r.nu) {
            CHECK(r.prob > 0.0);
            CHECK(std::abs(r.delta) < 1e-12);
            for (double q : r.dq) CHECK(std::abs(q) < 1e-12);
        } else {
            CHECK(r.prob < 1e-28);
        }
    }
}

TEST_CASE("enumerate_trajectories: equal affinities conserve dhA + dhB") {
    const TrajectoryTable t = qubit_table(0.5, 0.8, 0.5, 0.8, 1.0);
    for (const auto& r : t.rows)
        if (r.prob > 1e-14) CHECK(std::abs(r.dhA + r.dhB) < 1e-11);
}

TEST_CASE("enumerate_trajectories: guards") {
    SUBCASE("degenerate exchange operator is refused") {
        QubitModel m = build_qubit_model({0.5, 0.8, 0.5, 0.2, 1.0});
        m.bathB.affinities = {0.0, 0.0};
        CHECK_THROWS_AS(enumerate_trajectories(m.bathA, m.bathB, m.interaction),
                        DegenerateSpectrum);
    }
    SUBCASE("non-charge-preserving unitary is refused") {
        QubitModel m = build_qubit_model({0.5, 0.8, 0.5, 0.2, 1.0});
        m.interaction.hint.reset();
        m.interaction.u = unitary_exp(kron(pauli_x(), CMatrix::identity(2)), 1.0);
        CHECK_THROWS_AS(enumerate_trajectories(m.bathA, m.bathB, m.interaction),
                        CertificateFailure);
    }
}

TEST_CASE("charge_change") {
    SUBCASE("n = m gives zero") {
        const Bath b = qubit_bath(1.0, 0.0);
        const GibbsState g = gibbs_state(b);
        CHECK(charge_change(b, g, 0, 1, 1) == 0.0);
    }
    SUBCASE("sigma_z eigenstates: ground to excited = 2") {
        const Bath b = qubit_bath(1.0, 0.0);
        const GibbsState g = gibbs_state(b);
        // ascending order: ground of H = sigma_z at index 0 has <sigma_z> = -1
        CHECK(charge_change(b, g, 0, 0, 1) == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("beta=0.3, chi=0.4: <h±|sigma_z|h±> = ±0.6 via the eigenvector oracle") {
        const Bath b = qubit_bath(0.3, 0.4);
        const GibbsState g = gibbs_state(b);
        // oracle: eigenvector of [[0.3, 0.4], [0.4, -0.3]]
        const auto [lo, hi] = test::eig2_oracle(0.3, 0.4, -0.3);
        const auto [x, y] = test::eigvec2_oracle(0.3, 0.4, -0.3, hi);
        const double expect_hi = std::norm(x) - std::norm(y);
        CHECK(expect_hi == doctest::Approx(0.6).epsilon(1e-13));
        CHECK(charge_change(b, g, 0, 0, 1) == doctest::Approx(1.2).epsilon(1e-12));
        (void)lo;
    }
    SUBCASE("index guards") {
        const Bath b = qubit_bath(1.0, 0.0);
        const GibbsState g = gibbs_state(b);
        CHECK_THROWS_AS(charge_change(b, g, 5, 0, 1), IndexOutOfRange);
        CHECK_THROWS_AS(charge_change(b, g, 0, 0, 2), IndexOutOfRange);
    }
}

TEST_CASE("delta: commuting charges give zero on supported rows") {
    // single charge sigma_z on both baths, swap interaction
    Bath a{2, {{"sigma_z", pauli_z()}}, {1.1}};
    Bath b{2, {{"sigma_z", pauli_z()}}, {0.3}};
    Interaction in;
    in.u = generalized_swap(1.0);
    in.hint = -1.0 * (0.5 * (pauli_exchange() + CMatrix::identity(4)));
    const TrajectoryTable t = enumerate_trajectories(a, b, in);
    for (const auto& r : t.rows)
        if (r.prob > 1e-14) {
            CHECK(std::abs(r.delta) < 1e-10);
            if (r.delta_explicit) CHECK(std::abs(*r.delta_explicit) < 1e-10);
        }
}

TEST_CASE("delta: zero affinity differences give zero on supported rows") {
    const TrajectoryTable t = qubit_table(0.5, 0.8, 0.5, 0.8, 1.0);
    for (const auto& r : t.rows)
        if (r.prob > 1e-14) CHECK(std::abs(r.delta) < 1e-11);
}

TEST_CASE("delta: residual and explicit forms agree where applicable") {
    const TrajectoryTable t = qubit_table(0.5, 0.8, 0.5, 0.2, 1.0);
    int applicable = 0;
    for (const auto& r : t.rows) {
        CHECK(r.delta == doctest::Approx(delta_residual(r, t.delta_lambda)).epsilon(1e-15));
        if (r.delta_explicit) {
            ++applicable;
            CHECK(std::abs(r.delta - *r.delta_explicit) < 1e-8);
        }
    }
    CHECK(applicable > 0);
    CHECK(t.max_delta_explicit_imag < 1e-9);
}

TEST_CASE("delta_explicit: antisymmetric under reversal") {
    const TrajectoryTable t = qubit_table(0.4, 0.9, 0.7, 0.1, 1.0);
    for (const auto& r : t.rows) {
        const Trajectory& rev = t.reverse_of(r);
        if (r.delta_explicit && rev.delta_explicit)
            CHECK(std::abs(*r.delta_explicit + *rev.delta_explicit) < 1e-9);
    }
}

TEST_CASE("reverse_trajectory") {
    const TrajectoryTable t = qubit_table(0.5, 0.8, 0.5, 0.2, 1.0);
    SUBCASE("involution and sign flips") {
        for (const auto& r : t.rows) {
            const Trajectory& rev = t.reverse_of(r);
            const Trajectory& back = t.reverse_of(rev);
            CHECK(back.n == r.n);
            CHECK(back.nu == r.nu);
            CHECK(back.m == r.m);
            CHECK(back.mu == r.mu);
            CHECK(rev.dhA == doctest::Approx(-r.dhA).epsilon(1e-15));
            CHECK(rev.dhB == doctest::Approx(-r.dhB).epsilon(1e-15));
            for (size_t i = 0; i < r.dq.size(); ++i)
                CHECK(rev.dq[i] == doctest::Approx(-r.dq[i]).epsilon(1e-15));
            CHECK(rev.delta == doctest::Approx(-r.delta).epsilon(1e-12));
        }
    }
    SUBCASE("diagonal rows are their own reverse with delta = 0") {
        for (const auto& r : t.rows)
            if (r.n == r.m && r.nu == r.mu) CHECK(std::abs(r.delta) < 1e-12);
    }
    SUBCASE("micro-reversibility: P(g)/P(g~) = e^{dhA+dhB}") {
        for (const auto& r : t.rows) {
            const Trajectory& rev = t.reverse_of(r);
            if (r.prob > 1e-14 && rev.prob > 1e-14)
                CHECK(std::abs(std::log(r.prob / rev.prob) - (r.dhA + r.dhB)) < 1e-9);
        }
    }
}

TEST_CASE("trajectory-level fluctuation relation") {
    const TrajectoryTable t = qubit_table(0.3, 0.8, 0.8, 0.4, 1.0);
    for (const auto& r : t.rows) {
        const Trajectory& rev = t.reverse_of(r);
        if (r.prob <= 1e-14 || rev.prob <= 1e-14) continue;
        double expo = r.delta;
        for (size_t i = 0; i < t.delta_lambda.size(); ++i)
            expo += t.delta_lambda[i] * r.dq[i];
        CHECK(std::abs(std::log(r.prob / rev.prob) - expo) < 1e-9);
    }
}

TEST_CASE("delta_explicit reality over random qubit parameter draws") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    int draws = 0;
    while (draws < 50) {
        const QubitModelParams p{u(rng), u(rng), u(rng), u(rng), 1.0};
        if (std::hypot(p.betaA, p.chiA) < 0.05 || std::hypot(p.betaB, p.chiB) < 0.05) continue;
        ++draws;
        const QubitModel m = build_qubit_model(p);
        const TrajectoryTable t = enumerate_trajectories(m.bathA, m.bathB, m.interaction);
        CHECK(t.max_delta_explicit_imag < 1e-9);
    }
}

TEST_CASE("non-commuting charges with nonzero bias produce a nonzero delta") {
    const TrajectoryTable t = qubit_table(0.5, 0.8, 0.5, 0.2, 1.0);
    double max_delta = 0.0;
    for (const auto& r : t.rows)
        if (r.prob > 1e-14) max_delta = std::max(max_delta, std::abs(r.delta));
    CHECK(max_delta > 1e-6);
}
