// propagation.hpp — time evolution: closed-form propagators for the two
// analytic protocol steps, dense unitary evolution via eigendecomposition,
// and a fixed-step RK4 integrator for the dissipative master equation.
#pragma once

#include "cavitygate/operators.hpp"
#include "cavitygate/space.hpp"

#include <stdexcept>
#include <vector>

namespace cavitygate {

struct EvolutionSettings {
    double dt_max                   = 1e-6;  // seconds
    int    steps_per_fastest_period = 50;
    long   max_steps                = 5'000'000;

    void validate() const;  // throws std::invalid_argument
};

// stiffest angular frequency in the model: max(delta_c, g sqrt(n), g_r)
double fastest_frequency(const PhysicalParams& params, int n_targets);

// dt = min(dt_max, 2 pi / (omega_fast * steps_per_fastest_period));
// omega_fast <= 0 means "no oscillation to resolve" and yields dt_max
double resolve_dt(const EvolutionSettings& settings, double omega_fast);

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --------------------------- analytic propagators ---------------------------

// Exact resonant-exchange rotation between the control qubit and the cavity:
// within each photon ladder pair {|1;m>, |0;m+1>} rotates by
// theta = g_r sqrt(m+1) t,
//   |1;m>   ->  cos(theta)|1;m>   - i sin(theta)|0;m+1>
//   |0;m+1> -> -i sin(theta)|1;m> + cos(theta)|0;m+1>
// and leaves |0;0> alone.  Amplitudes at the truncation edge (control 1,
// photon = cutoff) have no partner level and stay fixed.
PureState jc_propagate(const PureState& psi, const PhysicalParams& params, double t,
                       const SpaceDescriptor& space);

// the same rotation as a dense unitary (columns of jc_propagate)
Operator jc_propagator_matrix(const PhysicalParams& params, double t,
                              const SpaceDescriptor& space);

// Closed-form dispersive phase: every basis amplitude gains
// exp(+i (g^2 t / delta_c) * photons * #targets-at-|1>).
// Requires |2> population below 1e-12 (throws std::invalid_argument).
PureState dispersive_phase_propagate(const PureState& psi, const PhysicalParams& params,
                                     double t, const SpaceDescriptor& space);

// exp(-i h t) psi via Hermitian eigendecomposition; throws on non-Hermitian h
PureState unitary_propagate(const PureState& psi, const Operator& h, double t);
Operator  propagator_matrix(const Operator& h, double t);  // exp(-i h t)

// --------------------------- master equation --------------------------------

struct LindbladDiagnostics {
    long   steps        = 0;
    double dt           = 0.0;
    double trace_drift  = 0.0;  // |tr(rho) - 1| of the returned state
    double herm_defect  = 0.0;  // max |rho - rho^dag| before the final symmetrization
};

// d rho/dt = -i[h, rho] + sum_j rate_j (2 L rho L^dag - L^dag L rho - rho L^dag L),
// classic RK4 with the step from resolve_dt(settings, omega_fast), the state
// re-symmetrized after every step.  Operators are applied in sparse form; the
// cost per step is O(nnz * dim) rather than O(dim^3).
// Throws IntegrationError when more than settings.max_steps steps are needed.
DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const Operator& h,
                              const std::vector<CollapseChannel>& channels, double t,
                              const EvolutionSettings& settings, double omega_fast,
                              LindbladDiagnostics* diagnostics = nullptr);

}  // namespace cavitygate
