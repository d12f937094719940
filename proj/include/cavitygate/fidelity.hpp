// fidelity.hpp — gate fidelity and the detuning-ratio sweep

#pragma once

#include "cavitygate/protocol.hpp"

#include <string>
#include <vector>

namespace cavitygate {

// ------- fidelity -------

// F = <psi_ideal| rho |psi_ideal>, clamped to [0,1] after a reality check
double gate_fidelity(const DensityMatrix& rho_final, const PureState& psi_ideal);

enum class InitialStatePolicy {
    plus_states,  // every atom in (|0>+|1>)/sqrt(2), cavity in vacuum
    custom,       // caller-provided full-space state
};

// Ideal gate output for the plus-states input: the reference of the sweeps.
// The custom policy needs an explicit state and is rejected here.
PureState ideal_reference_state(int n_targets, InitialStatePolicy policy);

// ------- sweep -------

struct SweepSpec {
    std::vector<double> ratios;  // delta_c/g axis, ascending and positive
    PhysicalParams params_base;  // delta_c is overwritten per row
    int n_targets = 4;
    int fock_cutoff = 1;
    InitialStatePolicy initial_state = InitialStatePolicy::plus_states;
    PureState custom_initial;  // consulted only under the custom policy

    void validate() const;
};

struct SweepRow {
    double ratio = 0.0;
    double fidelity = 0.0;  // NaN when this row failed
    double t2_seconds = 0.0;
    double trace_drift = 0.0;
    long steps = 0;
    double wall_seconds = 0.0;  // timing only; not part of the result proper
    std::string error;          // non-empty when integration failed
};

struct SweepResult {
    SweepSpec spec;  // echo: enough to re-run the computation
    std::vector<SweepRow> rows;
};

// One lossy gate per ratio with delta_c = ratio * g, scored against the
// ideal output of the same input state.  Rows that fail integration carry
// the error message; the sweep always returns all rows.
SweepResult run_sweep(const SweepSpec& spec, const EvolutionSettings& settings);

}  // namespace cavitygate
