// fidelity.cpp — fidelity scoring and the ratio sweep

#include "cavitygate/fidelity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

namespace cavitygate {

namespace {

PureState plus_states_input(const SpaceDescriptor& space) {
    const Vector plus2 =
        (Vector(2) << 1.0, 1.0).finished() / std::numbers::sqrt2;
    Vector plus3 = Vector::Zero(3);
    plus3(0) = plus3(1) = 1.0 / std::numbers::sqrt2;
    Vector vacuum = Vector::Zero(space.config.fock_cutoff + 1);
    vacuum(0) = 1.0;

    std::vector<Vector> factors;
    factors.push_back(plus2);
    for (int k = 0; k < space.config.n_targets; ++k) factors.push_back(plus3);
    factors.push_back(vacuum);
    return product_state(space, factors);
}

SweepRow sweep_one(const SweepSpec& spec, const EvolutionSettings& settings,
                   const SpaceDescriptor& space, const PureState& input,
                   double ratio) {
    SweepRow row;
    row.ratio = ratio;

    PhysicalParams params = spec.params_base;
    params.delta_c = ratio * params.g;
    row.t2_seconds =
        make_schedule(params, spec.n_targets, KScaling::fixed).t2;

    const auto start = std::chrono::steady_clock::now();
    try {
        const auto ideal = run_ideal(input, params, space);
        const auto lossy = run_lossy(input, params, space, settings);
        row.fidelity = gate_fidelity(lossy.final_density, ideal.final_state);
        row.trace_drift = lossy.diagnostics.trace_drift;
        row.steps = lossy.diagnostics.steps;
    } catch (const IntegrationError& e) {
        row.fidelity = std::numeric_limits<double>::quiet_NaN();
        row.error = e.what();
    }
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return row;
}

}  // namespace

// ------- fidelity -------

double gate_fidelity(const DensityMatrix& rho_final,
                     const PureState& psi_ideal) {
    if (rho_final.dim() != psi_ideal.dim())
        throw std::invalid_argument("gate_fidelity: dimension mismatch");
    if (!is_hermitian(rho_final.rho, 1e-10))
        throw std::invalid_argument("gate_fidelity: density matrix not Hermitian");

    const Complex f = (psi_ideal.amplitudes.adjoint() * rho_final.rho *
                       psi_ideal.amplitudes)(0);
    if (std::abs(f.imag()) > 1e-10)
        throw std::runtime_error("gate_fidelity: overlap has an imaginary part");
    return std::clamp(f.real(), 0.0, 1.0);
}

PureState ideal_reference_state(int n_targets, InitialStatePolicy policy) {
    if (policy != InitialStatePolicy::plus_states)
        throw std::invalid_argument(
            "ideal_reference_state: custom policy needs an explicit state");
    SystemConfig cfg;
    cfg.n_targets = n_targets;
    const auto space = build_space(cfg);
    const PhysicalParams params;
    return run_ideal(plus_states_input(space), params, space).final_state;
}

// ------- sweep -------

void SweepSpec::validate() const {
    params_base.validate();
    if (ratios.empty())
        throw std::invalid_argument("SweepSpec: ratio list is empty");
    double previous = 0.0;
    for (const double r : ratios) {
        if (r <= previous)
            throw std::invalid_argument(
                "SweepSpec: ratios must be positive and strictly ascending");
        previous = r;
    }
    SystemConfig cfg;
    cfg.n_targets = n_targets;
    cfg.fock_cutoff = fock_cutoff;
    cfg.validate();
    if (initial_state == InitialStatePolicy::custom &&
        custom_initial.dim() == 0)
        throw std::invalid_argument(
            "SweepSpec: custom policy without an initial state");
}

SweepResult run_sweep(const SweepSpec& spec, const EvolutionSettings& settings) {
    spec.validate();
    settings.validate();

    SystemConfig cfg;
    cfg.n_targets = spec.n_targets;
    cfg.fock_cutoff = spec.fock_cutoff;
    const auto space = build_space(cfg);

    const PureState input = spec.initial_state == InitialStatePolicy::custom
                                ? spec.custom_initial
                                : plus_states_input(space);
    check_normalized(input);

    SweepResult result;
    result.spec = spec;
    result.rows.resize(spec.ratios.size());

    // rows are independent; bound the in-flight count by the hardware
    const size_t width = std::max<size_t>(1, std::thread::hardware_concurrency());
    std::vector<std::future<SweepRow>> inflight;
    size_t next = 0, done = 0;
    while (done < spec.ratios.size()) {
        while (next < spec.ratios.size() && inflight.size() < width) {
            inflight.push_back(std::async(std::launch::async, sweep_one,
                                          std::cref(spec), std::cref(settings),
                                          std::cref(space), std::cref(input),
                                          spec.ratios[next]));
            ++next;
        }
        result.rows[done] = inflight.front().get();
        inflight.erase(inflight.begin());
        ++done;
    }
    return result;
}

}  // namespace cavitygate
