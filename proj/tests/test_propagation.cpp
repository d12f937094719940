#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavitygate/propagation.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

using namespace cavitygate;

static SpaceDescriptor make(int n, int cutoff, bool control) {
    SystemConfig cfg;
    cfg.n_targets = n;
    cfg.fock_cutoff = cutoff;
    cfg.include_control = control;
    return build_space(cfg);
}

TEST_CASE("step-size rule: fastest frequency and dt resolution") {
    PhysicalParams p;
    p.delta_c = 10.0 * p.g;
    CHECK(fastest_frequency(p, 4) == doctest::Approx(p.delta_c));
    p.delta_c = 0.5 * p.g;
    CHECK(fastest_frequency(p, 4) == doctest::Approx(2.0 * p.g));  // g sqrt(4)
    p.g_r = 100.0 * p.g;
    CHECK(fastest_frequency(p, 1) == doctest::Approx(p.g_r));

    EvolutionSettings s;
    s.dt_max = 1e-3;
    s.steps_per_fastest_period = 50;
    CHECK(resolve_dt(s, 0.0) == doctest::Approx(1e-3));
    CHECK(resolve_dt(s, two_pi * 1e6) == doctest::Approx(1.0 / (1e6 * 50.0)));
    s.dt_max = 1e-12;
    CHECK(resolve_dt(s, two_pi * 1e6) == doctest::Approx(1e-12));

    s.dt_max = -1.0;
    CHECK_THROWS_AS(resolve_dt(s, 1.0), std::invalid_argument);
}

TEST_CASE("control-cavity exchange follows the closed-form rotation") {
    const auto space = make(1, 1, true);
    PhysicalParams p;

    SUBCASE("quarter period swaps |1;0> to -i|0;1>") {
        const double t1 = std::numbers::pi / (2.0 * p.g_r);
        const auto out = jc_propagate(basis_state(space, {1, 0, 0}), p, t1, space);
        CHECK(std::abs(out.amplitudes(pack_labels(space, {0, 0, 1})) -
                       Complex(0.0, -1.0)) < 1e-12);
        CHECK(std::abs(out.amplitudes(pack_labels(space, {1, 0, 0}))) < 1e-12);
    }
    SUBCASE("three-quarter period returns |0;1> to +i|1;0>") {
        const double t3 = 3.0 * std::numbers::pi / (2.0 * p.g_r);
        const auto out = jc_propagate(basis_state(space, {0, 0, 1}), p, t3, space);
        CHECK(std::abs(out.amplitudes(pack_labels(space, {1, 0, 0})) -
                       Complex(0.0, 1.0)) < 1e-12);
    }
    SUBCASE("generic time mixes with cos / -i sin weights") {
        const double t = 0.3 / p.g_r;
        const auto out = jc_propagate(basis_state(space, {1, 0, 0}), p, t, space);
        CHECK(std::abs(out.amplitudes(pack_labels(space, {1, 0, 0})) -
                       Complex(std::cos(0.3), 0.0)) < 1e-12);
        CHECK(std::abs(out.amplitudes(pack_labels(space, {0, 0, 1})) -
                       Complex(0.0, -std::sin(0.3))) < 1e-12);
    }
    SUBCASE("the empty state does not evolve") {
        const auto out = jc_propagate(basis_state(space, {0, 0, 0}), p,
                                      0.7 / p.g_r, space);
        CHECK(std::abs(out.amplitudes(pack_labels(space, {0, 0, 0})) - Complex(1.0)) <
              1e-12);
    }
    SUBCASE("target factors pass through untouched") {
        const Vector t_factor = testutil::random_state(3);
        const Vector ctrl = (Vector(2) << 1.0, 0.0).finished();
        const Vector photon = (Vector(2) << 0.0, 1.0).finished();
        const auto psi = product_state(space, {ctrl, t_factor, photon});
        const double t3 = 3.0 * std::numbers::pi / (2.0 * p.g_r);
        const auto out = jc_propagate(psi, p, t3, space);
        const Vector expect =
            kron(kron(Complex(0.0, 1.0) * (Vector(2) << 0.0, 1.0).finished(), t_factor),
                 (Vector(2) << 1.0, 0.0).finished());
        CHECK((out.amplitudes - expect).norm() < 1e-12);
    }
}

TEST_CASE("analytic exchange equals eigendecomposition of the exchange Hamiltonian") {
    // includes the sqrt(2) two-photon ladder rung
    const auto space = make(1, 2, true);
    PhysicalParams p;
    const double t = 0.83 / p.g_r;
    PureState psi;
    psi.amplitudes = testutil::random_state(space.total_dim);
    const auto analytic = jc_propagate(psi, p, t, space);
    const auto numeric = unitary_propagate(psi, jc_hamiltonian(p, space), t);
    CHECK((analytic.amplitudes - numeric.amplitudes).norm() < 1e-10);
    CHECK(analytic.norm() == doctest::Approx(1.0));

    const Operator u = jc_propagator_matrix(p, t, space);
    CHECK(max_abs(u * u.adjoint() - Operator::Identity(u.rows(), u.cols())) < 1e-12);
}

TEST_CASE("dispersive phase propagator conditions the phase on photons times ones") {
    const auto space = make(2, 1, false);
    PhysicalParams p;
    const double t = std::numbers::pi * p.delta_c / (p.g * p.g) / 3.0;  // phi = pi/3
    const double phi = p.g * p.g * t / p.delta_c;

    PureState psi;
    psi.amplitudes = Vector::Zero(space.total_dim);
    const long i00 = pack_labels(space, {0, 0, 1});
    const long i01 = pack_labels(space, {0, 1, 1});
    const long i11 = pack_labels(space, {1, 1, 1});
    const long i10_dark = pack_labels(space, {1, 0, 0});
    psi.amplitudes(i00) = 0.5;
    psi.amplitudes(i01) = 0.5;
    psi.amplitudes(i11) = 0.5;
    psi.amplitudes(i10_dark) = 0.5;

    const auto out = dispersive_phase_propagate(psi, p, t, space);
    CHECK(std::abs(out.amplitudes(i00) - Complex(0.5)) < 1e-12);
    CHECK(std::abs(out.amplitudes(i01) - 0.5 * std::exp(Complex(0.0, phi))) < 1e-12);
    CHECK(std::abs(out.amplitudes(i11) - 0.5 * std::exp(Complex(0.0, 2.0 * phi))) <
          1e-12);
    CHECK(std::abs(out.amplitudes(i10_dark) - Complex(0.5)) < 1e-12);

    SUBCASE("at the gate time every photon-dressed |1> flips sign") {
        const double t2 = std::numbers::pi * p.delta_c / (p.g * p.g);
        const auto flipped = dispersive_phase_propagate(psi, p, t2, space);
        CHECK(std::abs(flipped.amplitudes(i01) - Complex(-0.5)) < 1e-12);
        CHECK(std::abs(flipped.amplitudes(i11) - Complex(0.5)) < 1e-12);  // two ones
        CHECK(std::abs(flipped.amplitudes(i00) - Complex(0.5)) < 1e-12);
    }

    SUBCASE("|2> population is rejected") {
        psi.amplitudes(pack_labels(space, {2, 0, 0})) = 1e-3;
        CHECK_THROWS_AS(dispersive_phase_propagate(psi, p, t, space),
                        std::invalid_argument);
    }
}

TEST_CASE("full exchange dynamics converge to the analytic dispersive phase") {
    const auto space = make(2, 1, false);
    const Vector plus = (Vector(3) << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0)
                            .finished();
    const Vector one_photon = (Vector(2) << 0.0, 1.0).finished();
    const auto psi = product_state(space, {plus, plus, one_photon});

    double previous = 1.0;
    for (const double ratio : {5.0, 10.0, 20.0, 50.0}) {
        PhysicalParams p;
        p.delta_c = ratio * p.g;
        const double t2 = std::numbers::pi * p.delta_c / (p.g * p.g);
        const auto numeric = unitary_propagate(psi, dispersive_hamiltonian(p, space), t2);
        const auto analytic = dispersive_phase_propagate(psi, p, t2, space);
        const double overlap =
            std::abs(analytic.amplitudes.dot(numeric.amplitudes));
        const double infidelity = 1.0 - overlap * overlap;
        CHECK(infidelity < previous);
        previous = infidelity;
    }
    CHECK(previous < 1e-3);  // ratio 50
}

TEST_CASE("unitary_propagate matches the matrix exponential and rejects bad input") {
    const Operator h = testutil::random_hermitian(8);
    PureState psi;
    psi.amplitudes = testutil::random_state(8);
    const double t = 0.37;

    const Operator u_ref = (Complex(0.0, -1.0) * t * h).exp();
    const auto out = unitary_propagate(psi, h, t);
    CHECK((out.amplitudes - u_ref * psi.amplitudes).norm() < 1e-10);
    CHECK(out.norm() == doctest::Approx(1.0));
    CHECK(max_abs(propagator_matrix(h, t) - u_ref) < 1e-10);

    Operator skew = testutil::random_operator(8);
    CHECK_THROWS_AS(unitary_propagate(psi, skew, t), std::invalid_argument);
    PureState wrong;
    wrong.amplitudes = testutil::random_state(5);
    CHECK_THROWS_AS(unitary_propagate(wrong, h, t), std::invalid_argument);
}

TEST_CASE("master equation with zero rates reproduces unitary evolution") {
    const auto space = make(1, 1, false);
    PhysicalParams p;
    p.kappa = p.gamma_21 = p.gamma_20 = p.gamma_10 = 0.0;
    const Operator h = dispersive_hamiltonian(p, space);
    const double t = 0.1 * std::numbers::pi * p.delta_c / (p.g * p.g);

    PureState psi;
    psi.amplitudes = testutil::random_state(space.total_dim);
    const auto rho0 = to_density(psi);

    EvolutionSettings settings;
    settings.steps_per_fastest_period = 500;  // push RK4 truncation below tolerance
    LindbladDiagnostics diag;
    const auto rho_t = lindblad_evolve(rho0, h, collapse_operators(p, space), t,
                                       settings, fastest_frequency(p, 1), &diag);

    const auto psi_t = unitary_propagate(psi, h, t);
    const auto expect = to_density(psi_t);
    CHECK(max_abs(rho_t.rho - expect.rho) < 1e-8);
    CHECK(diag.trace_drift < 1e-10);

    // with no dissipation the conserved charge stays put
    const Operator a = cavity_annihilation(space);
    Operator charge = a.adjoint() * a +
                      embed(level_projector(3, 2), space.target_subsystem(0), space);
    const double before = (charge * rho0.rho).trace().real();
    const double after = (charge * rho_t.rho).trace().real();
    CHECK(after == doctest::Approx(before).epsilon(1e-9));
}

TEST_CASE("cavity decay: populations fall at 2 kappa, coherences at kappa") {
    const auto space = make(1, 1, false);
    PhysicalParams p;
    p.kappa = 1.0;  // units drop out, H = 0
    p.gamma_21 = p.gamma_20 = p.gamma_10 = 0.0;

    const Vector ground = (Vector(3) << 1.0, 0.0, 0.0).finished();
    const Vector cav = (Vector(2) << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0))
                           .finished();
    const auto rho0 = to_density(product_state(space, {ground, cav}));
    const Operator h = Operator::Zero(space.total_dim, space.total_dim);
    const double t = 1.0;

    EvolutionSettings settings;
    settings.dt_max = t / 2000.0;
    const auto rho_t = lindblad_evolve(rho0, h, collapse_operators(p, space), t,
                                       settings, 0.0);

    const long v = pack_labels(space, {0, 0});
    const long one = pack_labels(space, {0, 1});
    const double pop = rho_t.rho(one, one).real();
    const double coh = std::abs(rho_t.rho(v, one));
    CHECK(std::abs(pop - 0.5 * std::exp(-2.0 * p.kappa * t)) <
          1e-6 * 0.5 * std::exp(-2.0));
    CHECK(std::abs(coh - 0.5 * std::exp(-p.kappa * t)) < 1e-6);
    CHECK(std::abs(rho_t.rho(v, v).real() - (1.0 - 0.5 * std::exp(-2.0))) < 1e-6);
}

TEST_CASE("integrator error falls sixteen-fold when the step is halved") {
    const auto space = make(1, 1, false);
    PhysicalParams p;
    p.kappa = 1.0;
    p.gamma_21 = p.gamma_20 = p.gamma_10 = 0.0;
    const auto rho0 = to_density(basis_state(space, {0, 1}));
    const Operator h = Operator::Zero(space.total_dim, space.total_dim);
    const double t = 1.0;
    const long one = pack_labels(space, {0, 1});
    const double exact = std::exp(-2.0 * t);

    const auto error_with = [&](long steps) {
        EvolutionSettings settings;
        settings.dt_max = t / static_cast<double>(steps);
        const auto rho_t =
            lindblad_evolve(rho0, h, collapse_operators(p, space), t, settings, 0.0);
        return std::abs(rho_t.rho(one, one).real() - exact);
    };
    const double ratio = error_with(8) / error_with(16);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("lossy evolution keeps the state physical over a full gate horizon") {
    const auto space = make(1, 1, false);
    PhysicalParams p;  // paper-scale rates, ratio 10
    const double t2 = std::numbers::pi * p.delta_c / (p.g * p.g);

    const Vector plus = (Vector(3) << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0)
                            .finished();
    const Vector one_photon = (Vector(2) << 0.0, 1.0).finished();
    const auto rho0 = to_density(product_state(space, {plus, one_photon}));

    EvolutionSettings settings;
    LindbladDiagnostics diag;
    const auto rho_t =
        lindblad_evolve(rho0, dispersive_hamiltonian(p, space),
                        collapse_operators(p, space), t2, settings,
                        fastest_frequency(p, 1), &diag);

    CHECK(diag.steps >= 2500);
    CHECK(diag.steps <= 2501);
    CHECK(diag.trace_drift <= 1e-8);
    CHECK(diag.herm_defect <= 1e-10);
    Eigen::SelfAdjointEigenSolver<Operator> eig(rho_t.rho);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("step budget and input validation") {
    const auto space = make(1, 1, false);
    PhysicalParams p;
    const auto rho0 = to_density(basis_state(space, {0, 1}));
    const Operator h = Operator::Zero(space.total_dim, space.total_dim);

    EvolutionSettings settings;
    settings.dt_max = 1e-3;
    settings.max_steps = 10;
    CHECK_THROWS_AS(lindblad_evolve(rho0, h, collapse_operators(p, space), 1.0,
                                    settings, 0.0),
                    IntegrationError);

    settings.max_steps = 100000;
    Operator skew = testutil::random_operator(space.total_dim);
    CHECK_THROWS_AS(lindblad_evolve(rho0, skew, {}, 1e-3, settings, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(lindblad_evolve(rho0, h, {}, -1.0, settings, 0.0),
                    std::invalid_argument);
}
