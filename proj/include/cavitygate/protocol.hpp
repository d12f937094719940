// protocol.hpp — the three-step controlled-phase gate, ideal and lossy

#pragma once

#include "cavitygate/operators.hpp"
#include "cavitygate/propagation.hpp"
#include "cavitygate/space.hpp"

#include <string>
#include <vector>

namespace cavitygate {

// ------- schedule -------

enum class KScaling {
    fixed,   // use params.delta_c as given for any n
    sqrt_n,  // grow the detuning with sqrt(n) to hold the validity margin
};

struct GateSchedule {
    int n_targets = 0;
    KScaling scaling = KScaling::sqrt_n;
    double delta_c_eff = 0.0;  // detuning assumed during the phase step
    double k = 0.0;            // delta_c_eff / g
    double t1 = 0.0;           // control -> cavity swap, pi/(2 g_r)
    double t2 = 0.0;           // conditional phase, pi * delta_c_eff / g^2
    double t3 = 0.0;           // cavity -> control return, 3 pi/(2 g_r)
    double tau = 0.0;          // 2 pi/g_r + t2
    double sequential_time = 0.0;  // one target at a time: 2 pi/g_r + k n pi/g
};

// Plans the gate for n targets.  Under sqrt_n scaling the schedule assumes
// the detuning params.delta_c * sqrt(n); apply_scaling produces the matching
// parameter set for actually running at that operating point.
GateSchedule make_schedule(const PhysicalParams& params, int n_targets,
                           KScaling scaling = KScaling::sqrt_n);

PhysicalParams apply_scaling(const PhysicalParams& params, int n_targets,
                             KScaling scaling);

// ------- gate execution -------

struct GateOutcome {
    bool lossy = false;
    PureState final_state;        // filled by ideal runs
    DensityMatrix final_density;  // filled by lossy runs
    double cavity_vacuum_overlap = 0.0;
    PureState after_swap_in;  // state after step (i)
    PureState after_phase;    // state after step (ii), ideal runs only
    LindbladDiagnostics diagnostics;  // lossy runs only
};

// Runs swap-in, conditional phase, swap-out as exact unitaries.  The input
// must have the cavity factor in vacuum; the output returns it to vacuum.
GateOutcome run_ideal(const PureState& input, const PhysicalParams& params,
                      const SpaceDescriptor& space);

// Same protocol, but the long phase step integrates the master equation on
// the control-free subspace; the swaps stay ideal (they are fast on the
// dissipation timescales).
GateOutcome run_lossy(const PureState& input, const PhysicalParams& params,
                      const SpaceDescriptor& space,
                      const EvolutionSettings& settings);

// ------- applications -------

struct TruthTableRow {
    std::vector<int> input;  // control bit followed by target bits
    std::string label;
    PureState after_swap_in;
    PureState after_phase;
    PureState output;
    bool matches = false;  // output equals the expected signed basis state
};

struct TruthTable {
    std::vector<TruthTableRow> rows;  // 2^(n+1) rows, control bit first
    bool all_match = false;
};

// Runs every computational basis input through the ideal gate and compares
// against the controlled-phase action: -1 iff control=1 and an odd number
// of targets sit in |1>.
TruthTable truth_table(int n_targets, const PhysicalParams& params,
                       const SpaceDescriptor& space);

// Hadamard on every target, the phase gate, Hadamard again — flips all
// targets iff the control is |1>.
GateOutcome cnot_variant(const PureState& input, const PhysicalParams& params,
                         const SpaceDescriptor& space);

// Hadamard on the control of the all-ground state, then cnot_variant:
// yields (|0 0..0> + |1 1..1>)/sqrt(2).
PureState ghz_prepare(int n_targets, const PhysicalParams& params,
                      const SpaceDescriptor& space);

DensityMatrix ghz_prepare_lossy(int n_targets, const PhysicalParams& params,
                                const SpaceDescriptor& space,
                                const EvolutionSettings& settings);

// (|0 0..0> + |1 1..1>)/sqrt(2) with the cavity in vacuum
PureState ghz_target_state(const SpaceDescriptor& space);

}  // namespace cavitygate
