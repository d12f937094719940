#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cavitygate/operators.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

using namespace cavitygate;

static SpaceDescriptor make(int n, int cutoff, bool control) {
    SystemConfig cfg;
    cfg.n_targets = n;
    cfg.fock_cutoff = cutoff;
    cfg.include_control = control;
    return build_space(cfg);
}

TEST_CASE("parameter validation and dispersive-regime check") {
    PhysicalParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.ratio() == doctest::Approx(10.0));

    PhysicalParams bad = p;
    bad.g = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.delta_c = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.gamma_10 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    // threshold is 5 sqrt(n) g
    PhysicalParams q;
    q.delta_c = 10.0 * q.g;
    CHECK(dispersive_regime_ok(q, 4));
    q.delta_c = 9.99 * q.g;
    CHECK_FALSE(dispersive_regime_ok(q, 4));
    CHECK(dispersive_regime_ok(q, 1));
}

TEST_CASE("annihilation operator has sqrt(n) ladder entries") {
    const Operator a = annihilation(3);
    CHECK(a(0, 1).real() == doctest::Approx(1.0));
    CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(max_abs(a * a * a) == doctest::Approx(0.0));
    CHECK_THROWS_AS(annihilation(1), std::invalid_argument);
}

TEST_CASE("hadamard3 is unitary and fixes the spectator level") {
    const Operator h = hadamard3();
    CHECK(max_abs(h * h.adjoint() - Operator::Identity(3, 3)) < 1e-14);
    CHECK(h(2, 2).real() == doctest::Approx(1.0));
    CHECK(h(0, 2) == Complex(0.0));
    CHECK(max_abs(h * h - Operator::Identity(3, 3)) < 1e-14);
}

TEST_CASE("control exchange: matrix element g_r between |1;0> and |0;1>") {
    const auto space = make(1, 1, true);
    PhysicalParams p;
    const Operator h = jc_hamiltonian(p, space);

    CHECK(is_hermitian(h, 1e-9));
    const long bra = pack_labels(space, {0, 0, 1});
    const long ket = pack_labels(space, {1, 0, 0});
    CHECK(h(bra, ket).real() == doctest::Approx(p.g_r));
    CHECK(h(bra, ket).imag() == doctest::Approx(0.0));

    // conserves photon number + control excitation
    const Operator a = cavity_annihilation(space);
    const Operator n_exc = a.adjoint() * a +
                           embed(level_projector(2, 1), space.control_subsystem(), space);
    CHECK(max_abs(h * n_exc - n_exc * h) < 1e-9);

    // acts as the identity on targets
    const Operator t_op = embed(testutil::random_operator(3), 1, space);
    CHECK(max_abs(h * t_op - t_op * h) < 1e-8);
}

TEST_CASE("target exchange: matrix element g between |1;1> and |2;0>, conserved charge") {
    const auto space = make(2, 1, false);
    PhysicalParams p;
    const Operator h = dispersive_hamiltonian(p, space);

    CHECK(is_hermitian(h, 1e-9));
    const long bra = pack_labels(space, {1, 0, 1});
    const long ket = pack_labels(space, {2, 0, 0});
    CHECK(h(bra, ket).real() == doctest::Approx(p.g));

    const Operator a = cavity_annihilation(space);
    Operator charge = a.adjoint() * a;
    for (int k = 0; k < 2; ++k)
        charge += embed(level_projector(3, 2), space.target_subsystem(k), space);
    CHECK(max_abs(h * charge - charge * h) < 1e-9);
}

TEST_CASE("target level |0> is fully decoupled from the exchange dynamics") {
    const auto space = make(2, 1, false);
    const Operator h = dispersive_hamiltonian(PhysicalParams{}, space);
    for (int k = 0; k < 2; ++k) {
        const Operator p0 =
            embed(level_projector(3, 0), space.target_subsystem(k), space);
        CHECK(max_abs(h * p0 - p0 * h) < 1e-9);
    }
}

TEST_CASE("single-excitation eigenvalue approaches the -g^2/delta_c Stark shift") {
    const auto space = make(1, 1, false);
    double previous = 1.0;
    for (const double ratio : {20.0, 50.0, 100.0}) {
        PhysicalParams p;
        p.delta_c = ratio * p.g;
        const Operator h = dispersive_hamiltonian(p, space);
        Eigen::SelfAdjointEigenSolver<Operator> eig(h);
        const double shift = -p.g * p.g / p.delta_c;
        double best = 1e300;
        for (long i = 0; i < eig.eigenvalues().size(); ++i)
            best = std::min(best, std::abs(eig.eigenvalues()(i) - shift));
        const double rel = best / std::abs(shift);
        CHECK(rel < 2.0 / (ratio * ratio));  // second-order accuracy
        CHECK(rel < previous);
        previous = rel;
    }
}

TEST_CASE("static frame reproduces direct integration of the rotating-frame coupling") {
    // independent oracle: RK4 on i psi' = H(t) psi with
    // H(t) = g (a^dag sum_k |1><2|_k e^{-i delta_c t} + h.c.)
    const auto space = make(1, 1, false);
    PhysicalParams p;
    p.delta_c = 10.0 * p.g;

    Operator lower = Operator::Zero(space.total_dim, space.total_dim);
    lower = cavity_annihilation(space).adjoint() *
            embed(transition(3, 1, 2), space.target_subsystem(0), space);

    Vector psi0 = Vector::Zero(space.total_dim);
    psi0(pack_labels(space, {1, 0})) = 0.5;
    psi0(pack_labels(space, {1, 1})) = 0.5;
    psi0(pack_labels(space, {2, 0})) = 0.5;
    psi0(pack_labels(space, {0, 1})) = 0.5;

    const double t_final = std::numbers::pi * p.delta_c / (p.g * p.g);
    const long steps = 20000;
    const double dt = t_final / steps;
    const auto h_of = [&](double t) -> Operator {
        const Complex phase = std::exp(Complex(0.0, -p.delta_c * t));
        return p.g * (phase * lower + std::conj(phase) * lower.adjoint());
    };
    Vector psi = psi0;
    const Complex mi(0.0, -1.0);
    for (long s = 0; s < steps; ++s) {
        const double t = s * dt;
        const Vector k1 = mi * (h_of(t) * psi);
        const Vector k2 = mi * (h_of(t + 0.5 * dt) * (psi + 0.5 * dt * k1));
        const Vector k3 = mi * (h_of(t + 0.5 * dt) * (psi + 0.5 * dt * k2));
        const Vector k4 = mi * (h_of(t + dt) * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    // static route: exp(-i H t) then the diagonal frame correction
    const Operator h_static = dispersive_hamiltonian(p, space);
    Eigen::SelfAdjointEigenSolver<Operator> eig(h_static);
    Vector evolved = eig.eigenvectors().adjoint() * psi0;
    for (long i = 0; i < evolved.size(); ++i)
        evolved(i) *= std::exp(Complex(0.0, -eig.eigenvalues()(i) * t_final));
    evolved = eig.eigenvectors() * evolved;
    evolved = static_frame_correction(p, t_final, space) * evolved;

    CHECK((psi - evolved).norm() < 1e-5);
}

TEST_CASE("frame correction is the identity when no target occupies |2>") {
    const auto space = make(2, 1, false);
    PhysicalParams p;
    const Operator u = static_frame_correction(p, 0.37e-4, space);
    for (long idx = 0; idx < space.total_dim; ++idx) {
        const auto labels = unpack_index(space, idx);
        const bool has_two = labels[0] == 2 || labels[1] == 2;
        if (!has_two) CHECK(std::abs(u(idx, idx) - Complex(1.0)) < 1e-15);
        CHECK(std::abs(std::abs(u(idx, idx)) - 1.0) < 1e-15);
    }
}

TEST_CASE("effective Hamiltonian: Stark shifts and pair exchange at g^2/delta_c") {
    PhysicalParams p;
    const double j = p.g * p.g / p.delta_c;

    const auto one = make(1, 1, false);
    const Operator h1 = effective_hamiltonian(p, one);
    CHECK(is_hermitian(h1, 1e-9));
    const long n1p1 = pack_labels(one, {1, 1});
    const long n2p0 = pack_labels(one, {2, 0});
    CHECK(h1(n1p1, n1p1).real() == doctest::Approx(-j));
    CHECK(h1(n2p0, n2p0).real() == doctest::Approx(+j));
    CHECK(h1(pack_labels(one, {0, 1}), pack_labels(one, {0, 1})).real() ==
          doctest::Approx(0.0));

    const auto two = make(2, 1, false);
    const Operator h2 = effective_hamiltonian(p, two);
    const long ket = pack_labels(two, {2, 1, 0});
    const long bra = pack_labels(two, {1, 2, 0});
    CHECK(h2(bra, ket).real() == doctest::Approx(j));
    CHECK(h2(ket, bra).real() == doctest::Approx(j));

    PhysicalParams degenerate;
    degenerate.delta_c = 0.0;
    CHECK_THROWS_AS(effective_hamiltonian(degenerate, one), std::invalid_argument);
    CHECK_THROWS_AS(effective_hamiltonian_reduced(degenerate, one),
                    std::invalid_argument);
}

TEST_CASE("with |2> unpopulated the effective Hamiltonian reduces to the photon-number form") {
    const auto space = make(2, 1, false);
    PhysicalParams p;
    const Operator full = effective_hamiltonian(p, space);
    const Operator reduced = effective_hamiltonian_reduced(p, space);

    Operator proj = Operator::Zero(space.total_dim, space.total_dim);
    for (long idx = 0; idx < space.total_dim; ++idx) {
        const auto labels = unpack_index(space, idx);
        if (labels[0] != 2 && labels[1] != 2) proj(idx, idx) = 1.0;
    }
    CHECK(max_abs(proj * (full - reduced) * proj) < 1e-12);
}

TEST_CASE("collapse channels: one cavity channel plus three per target") {
    const auto space = make(2, 1, false);
    PhysicalParams p;
    p.kappa = 11.0;
    p.gamma_21 = 7.0;
    p.gamma_20 = 5.0;
    p.gamma_10 = 3.0;
    const auto channels = collapse_operators(p, space);
    REQUIRE(channels.size() == 7);
    CHECK(channels[0].rate == doctest::Approx(11.0));
    CHECK(channels[1].rate == doctest::Approx(7.0));
    CHECK(channels[2].rate == doctest::Approx(5.0));
    CHECK(channels[3].rate == doctest::Approx(3.0));

    // every channel annihilates the dark state |0..0;0>
    const auto dark = basis_state(space, {0, 0, 0});
    for (const auto& ch : channels)
        CHECK((ch.op * dark.amplitudes).norm() == doctest::Approx(0.0));

    // first channel lowers the photon number
    const auto bright = basis_state(space, {0, 0, 1});
    const Vector lowered = channels[0].op * bright.amplitudes;
    CHECK(std::abs(lowered(pack_labels(space, {0, 0, 0})) - Complex(1.0)) < 1e-14);
}

TEST_CASE("ideal gate unitary: diag(1,1,1,-1) for one target, sign by parity in general") {
    const Operator u1 = ideal_gate_unitary(1);
    CHECK(u1.rows() == 4);
    CHECK(u1(0, 0).real() == doctest::Approx(1.0));
    CHECK(u1(1, 1).real() == doctest::Approx(1.0));
    CHECK(u1(2, 2).real() == doctest::Approx(1.0));
    CHECK(u1(3, 3).real() == doctest::Approx(-1.0));

    for (int n : {2, 3, 4}) {
        const Operator u = ideal_gate_unitary(n);
        CHECK(max_abs(u * u - Operator::Identity(u.rows(), u.cols())) < 1e-14);
        for (long idx = 0; idx < u.rows(); ++idx) {
            const bool control = (idx >> n) & 1;
            int ones = 0;
            for (int b = 0; b < n; ++b) ones += (idx >> b) & 1;
            const double expect = (control && ones % 2) ? -1.0 : 1.0;
            CHECK(u(idx, idx).real() == doctest::Approx(expect));
        }
    }
    CHECK_THROWS_AS(ideal_gate_unitary(0), std::invalid_argument);
}
