// protocol.cpp — gate scheduling, execution, and the derived circuits

#include "cavitygate/protocol.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavitygate {

namespace {

constexpr double pi = std::numbers::pi;

// sum of |amplitude|^2 over the photon-0 sector
double vacuum_weight(const Vector& amplitudes, const SpaceDescriptor& space) {
    const int cavity_dim = space.config.fock_cutoff + 1;
    double w = 0.0;
    for (long idx = 0; idx < amplitudes.size(); ++idx)
        if (idx % cavity_dim == 0) w += std::norm(amplitudes(idx));
    return w;
}

double vacuum_weight(const Operator& rho, const SpaceDescriptor& space) {
    const int cavity_dim = space.config.fock_cutoff + 1;
    double w = 0.0;
    for (long idx = 0; idx < rho.rows(); ++idx)
        if (idx % cavity_dim == 0) w += rho(idx, idx).real();
    return w;
}

void require_vacuum_input(const PureState& input, const SpaceDescriptor& space,
                          const char* fn) {
    if (input.dim() != space.total_dim)
        throw std::invalid_argument(std::string(fn) +
                                    ": state does not match space");
    check_normalized(input);
    if (1.0 - vacuum_weight(input.amplitudes, space) > 1e-12)
        throw std::invalid_argument(std::string(fn) +
                                    ": cavity input is not vacuum");
}

// product of the single-target Hadamards, embedded in the full space
Operator target_hadamards(const SpaceDescriptor& space) {
    Operator u = Operator::Identity(space.total_dim, space.total_dim);
    for (int k = 0; k < space.config.n_targets; ++k)
        u = embed(hadamard3(), space.target_subsystem(k), space) * u;
    return u;
}

}  // namespace

// ------- schedule -------

GateSchedule make_schedule(const PhysicalParams& params, int n_targets,
                           KScaling scaling) {
    params.validate();
    if (n_targets < 1)
        throw std::invalid_argument("make_schedule: n_targets must be positive");

    GateSchedule s;
    s.n_targets = n_targets;
    s.scaling = scaling;
    s.delta_c_eff = scaling == KScaling::sqrt_n
                        ? params.delta_c * std::sqrt(double(n_targets))
                        : params.delta_c;
    s.k = s.delta_c_eff / params.g;
    s.t1 = pi / (2.0 * params.g_r);
    s.t2 = pi * s.delta_c_eff / (params.g * params.g);
    s.t3 = 3.0 * s.t1;
    s.tau = two_pi / params.g_r + s.t2;
    s.sequential_time = two_pi / params.g_r + s.k * n_targets * pi / params.g;
    return s;
}

PhysicalParams apply_scaling(const PhysicalParams& params, int n_targets,
                             KScaling scaling) {
    PhysicalParams scaled = params;
    scaled.delta_c = make_schedule(params, n_targets, scaling).delta_c_eff;
    return scaled;
}

// ------- gate execution -------

GateOutcome run_ideal(const PureState& input, const PhysicalParams& params,
                      const SpaceDescriptor& space) {
    require_vacuum_input(input, space, "run_ideal");
    const auto sched =
        make_schedule(params, space.config.n_targets, KScaling::fixed);

    GateOutcome out;
    out.after_swap_in = jc_propagate(input, params, sched.t1, space);
    out.after_phase =
        dispersive_phase_propagate(out.after_swap_in, params, sched.t2, space);
    out.final_state = jc_propagate(out.after_phase, params, sched.t3, space);
    out.cavity_vacuum_overlap = vacuum_weight(out.final_state.amplitudes, space);
    return out;
}

GateOutcome run_lossy(const PureState& input, const PhysicalParams& params,
                      const SpaceDescriptor& space,
                      const EvolutionSettings& settings) {
    require_vacuum_input(input, space, "run_lossy");
    settings.validate();
    const int n = space.config.n_targets;
    const auto sched = make_schedule(params, n, KScaling::fixed);

    GateOutcome out;
    out.lossy = true;
    out.after_swap_in = jc_propagate(input, params, sched.t1, space);

    // the quarter-period swap leaves the control in |0> on every branch
    const long half = space.total_dim / 2;
    if (out.after_swap_in.amplitudes.tail(half).norm() > 1e-10)
        throw std::runtime_error(
            "run_lossy: control still excited after swap-in");

    SystemConfig reduced_cfg = space.config;
    reduced_cfg.include_control = false;
    const auto reduced = build_space(reduced_cfg);

    const Vector chi = out.after_swap_in.amplitudes.head(half);
    DensityMatrix rho;
    rho.rho = chi * chi.adjoint();

    rho = lindblad_evolve(rho, dispersive_hamiltonian(params, reduced),
                          collapse_operators(params, reduced), sched.t2,
                          settings, fastest_frequency(params, n),
                          &out.diagnostics);

    // undo the residual rotation of any leaked |2> population
    const Operator frame = static_frame_correction(params, sched.t2, reduced);
    const Vector phases = frame.diagonal();
    for (long i = 0; i < half; ++i)
        for (long j = 0; j < half; ++j)
            rho.rho(i, j) *= phases(i) * std::conj(phases(j));

    Operator full = Operator::Zero(space.total_dim, space.total_dim);
    full.topLeftCorner(half, half) = rho.rho;

    const Operator u3 = jc_propagator_matrix(params, sched.t3, space);
    out.final_density.rho = u3 * full * u3.adjoint();
    out.cavity_vacuum_overlap = vacuum_weight(out.final_density.rho, space);
    return out;
}

// ------- applications -------

TruthTable truth_table(int n_targets, const PhysicalParams& params,
                       const SpaceDescriptor& space) {
    if (n_targets < 1 || n_targets > 6)
        throw std::invalid_argument("truth_table: n_targets must be in [1,6]");
    if (space.config.n_targets != n_targets || !space.has_control())
        throw std::invalid_argument("truth_table: space does not fit n_targets");

    TruthTable table;
    table.all_match = true;
    const unsigned rows = 1u << (n_targets + 1);
    for (unsigned word = 0; word < rows; ++word) {
        TruthTableRow row;
        const int control = int(word >> n_targets);
        unsigned target_bits = word & ((1u << n_targets) - 1u);
        std::vector<int> labels(space.subsystem_count(), 0);
        labels[space.control_subsystem()] = control;
        row.input.push_back(control);
        for (int k = 0; k < n_targets; ++k) {
            const int bit = int(target_bits >> (n_targets - 1 - k)) & 1;
            labels[space.target_subsystem(k)] = bit;
            row.input.push_back(bit);
        }
        row.label = basis_label(space, pack_labels(space, labels));

        const auto outcome = run_ideal(basis_state(space, labels), params, space);
        row.after_swap_in = outcome.after_swap_in;
        row.after_phase = outcome.after_phase;
        row.output = outcome.final_state;

        // controlled phase: -1 iff control set and an odd number of 1-targets
        const double sign =
            (control == 1 && (std::popcount(target_bits) & 1)) ? -1.0 : 1.0;
        Vector expected = Vector::Zero(space.total_dim);
        expected(pack_labels(space, labels)) = sign;
        row.matches = (row.output.amplitudes - expected).cwiseAbs().maxCoeff() <=
                      1e-10;
        table.all_match = table.all_match && row.matches;
        table.rows.push_back(std::move(row));
    }
    return table;
}

GateOutcome cnot_variant(const PureState& input, const PhysicalParams& params,
                         const SpaceDescriptor& space) {
    const Operator h = target_hadamards(space);
    PureState rotated;
    rotated.amplitudes = h * input.amplitudes;
    GateOutcome out = run_ideal(rotated, params, space);
    out.final_state.amplitudes = h * out.final_state.amplitudes;
    out.cavity_vacuum_overlap = vacuum_weight(out.final_state.amplitudes, space);
    return out;
}

PureState ghz_prepare(int n_targets, const PhysicalParams& params,
                      const SpaceDescriptor& space) {
    if (space.config.n_targets != n_targets || !space.has_control())
        throw std::invalid_argument("ghz_prepare: space does not fit n_targets");
    PureState psi = basis_state(
        space, std::vector<int>(space.subsystem_count(), 0));
    psi.amplitudes =
        embed(hadamard2(), space.control_subsystem(), space) * psi.amplitudes;
    return cnot_variant(psi, params, space).final_state;
}

DensityMatrix ghz_prepare_lossy(int n_targets, const PhysicalParams& params,
                                const SpaceDescriptor& space,
                                const EvolutionSettings& settings) {
    if (space.config.n_targets != n_targets || !space.has_control())
        throw std::invalid_argument(
            "ghz_prepare_lossy: space does not fit n_targets");
    PureState psi = basis_state(
        space, std::vector<int>(space.subsystem_count(), 0));
    const Operator h = target_hadamards(space);
    psi.amplitudes =
        h * (embed(hadamard2(), space.control_subsystem(), space) *
             psi.amplitudes);

    GateOutcome out = run_lossy(psi, params, space, settings);
    DensityMatrix rho;
    rho.rho = h * out.final_density.rho * h.adjoint();
    return rho;
}

PureState ghz_target_state(const SpaceDescriptor& space) {
    if (!space.has_control())
        throw std::invalid_argument("ghz_target_state: space lacks a control");
    std::vector<int> ones(space.subsystem_count(), 1);
    ones.back() = 0;  // cavity stays in vacuum
    PureState psi;
    psi.amplitudes = Vector::Zero(space.total_dim);
    psi.amplitudes(0) = 1.0 / std::numbers::sqrt2;
    psi.amplitudes(pack_labels(space, ones)) = 1.0 / std::numbers::sqrt2;
    return psi;
}

}  // namespace cavitygate
