// operators.hpp — model parameters and operator builders: resonant exchange
// with the control qubit, detuned exchange with the target qutrits, the
// second-order effective Hamiltonian, collapse channels, and the ideal
// n-target controlled-phase unitary.
#pragma once

#include "cavitygate/space.hpp"

#include <numbers>
#include <vector>

namespace cavitygate {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Angular frequencies in rad/s, rates in 1/s, hbar = 1 throughout.
struct PhysicalParams {
    double g        = two_pi * 50e3;         // cavity <-> target 1-2 coupling
    double g_r      = two_pi * 50e3;         // cavity <-> control 0-1 coupling
    double delta_c  = 10.0 * two_pi * 50e3;  // 1-2 transition detuning from the cavity
    double kappa    = 1.0 / 3.0e-2;          // cavity field decay
    double gamma_21 = 1.0 / 3.0e-2;          // target |2> -> |1> decay
    double gamma_20 = 1.0 / 3.0e-2;          // target |2> -> |0> decay
    double gamma_10 = 1.0 / 3.0e-2;          // target |1> -> |0> decay
    double omega_c  = 0.0;                   // cavity frequency, informational
    double omega_21 = 0.0;                   // 1-2 transition frequency, informational

    double ratio() const { return delta_c / g; }

    // throws std::invalid_argument: couplings and delta_c must be positive,
    // decay rates non-negative
    void validate() const;
};

// dispersive treatment is trustworthy when delta_c >= 5 sqrt(n) g
bool dispersive_regime_ok(const PhysicalParams& params, int n_targets);

// --------------------------- local operators --------------------------------

Operator annihilation(int dim);                      // a|n> = sqrt(n)|n-1>
Operator transition(int dim, int lower, int upper);  // |lower><upper|
Operator level_projector(int dim, int level);        // |level><level|
Operator hadamard2();                                // qubit Hadamard
Operator hadamard3();  // Hadamard on the {0,1} block of a qutrit, |2> fixed

// --------------------------- full-space builders ----------------------------

Operator cavity_annihilation(const SpaceDescriptor& space);

// resonant exchange with the control qubit: g_r (a^dag |0><1|_c + h.c.);
// requires a space with a control subsystem
Operator jc_hamiltonian(const PhysicalParams& params, const SpaceDescriptor& space);

// Detuned exchange with every target, written in the frame where the cavity
// photon carries zero energy and target level |2> sits at delta_c:
//   H = delta_c sum_k |2><2|_k + g sum_k (a^dag |1><2|_k + h.c.).
// Equivalent to the rotating-frame interaction with coupling phase
// exp(-i delta_c t); static_frame_correction maps states back, and is the
// identity on anything without |2> population.
Operator dispersive_hamiltonian(const PhysicalParams& params, const SpaceDescriptor& space);

// diag exp(+i delta_c t * #targets at |2>)
Operator static_frame_correction(const PhysicalParams& params, double t,
                                 const SpaceDescriptor& space);

// Second-order dispersive Hamiltonian:
//   -(g^2/delta_c) sum_k (a^dag a |1><1|_k - a a^dag |2><2|_k)
//   +(g^2/delta_c) sum_{k<k'} (|2><1|_k |1><2|_k' + h.c.)
// throws when delta_c == 0
Operator effective_hamiltonian(const PhysicalParams& params, const SpaceDescriptor& space);

// photon-number-conditioned Stark term alone: -(g^2/delta_c) a^dag a sum_k |1><1|_k
Operator effective_hamiltonian_reduced(const PhysicalParams& params,
                                       const SpaceDescriptor& space);

// --------------------------- dissipation ------------------------------------

struct CollapseChannel {
    double   rate;  // prefactor of 2 L rho L^dag - L^dag L rho - rho L^dag L
    Operator op;
};

// cavity decay plus the three decay paths of every target: 1 + 3n channels,
// ordered [a, then per target: |1><2|, |0><2|, |0><1|]
std::vector<CollapseChannel> collapse_operators(const PhysicalParams& params,
                                                const SpaceDescriptor& space);

// --------------------------- logical reference ------------------------------

// Diagonal unitary on n+1 logical qubits (control first): flips the sign of
// every component whose control bit is 1, once per target bit that is 1.
Operator ideal_gate_unitary(int n_targets);

}  // namespace cavitygate
