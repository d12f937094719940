// space.hpp — composite Hilbert space bookkeeping: one optional control qubit,
// n target qutrits, one truncated cavity mode, in that fixed order.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace cavitygate {

using Complex  = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Vector   = Eigen::VectorXcd;

// --------------------------- system layout ---------------------------------

struct SystemConfig {
    int  n_targets       = 4;
    int  fock_cutoff     = 1;    // highest photon number kept
    bool include_control = true;

    // throws std::invalid_argument when outside supported ranges
    void validate() const;
};

// Subsystem order is part of the contract: control (when present) is
// subsystem 0, targets follow in ascending order, the cavity is last.
// Indices are packed row-major, so the control is the most significant digit.
struct SpaceDescriptor {
    SystemConfig     config;
    std::vector<int> dims;        // per-subsystem dimension
    long             total_dim = 0;

    int  subsystem_count() const { return static_cast<int>(dims.size()); }
    bool has_control() const     { return config.include_control; }
    int  control_subsystem() const;          // throws when absent
    int  target_subsystem(int k) const;      // k in [0, n_targets)
    int  cavity_subsystem() const { return subsystem_count() - 1; }
};

SpaceDescriptor build_space(const SystemConfig& config);

// --------------------------- index arithmetic -------------------------------

// labels[s] is the level of subsystem s; returns the packed basis index
long pack_labels(const SpaceDescriptor& space, const std::vector<int>& labels);

std::vector<int> unpack_index(const SpaceDescriptor& space, long index);

// "|c t1 .. tn;p>" rendering used by the CLI truth table and error messages
std::string basis_label(const SpaceDescriptor& space, long index);

// --------------------------- states ----------------------------------------

struct PureState {
    Vector amplitudes;

    long   dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }
};

struct DensityMatrix {
    Operator rho;

    long    dim() const { return rho.rows(); }
    Complex trace() const { return rho.trace(); }
};

// unit vector on the packed index of `labels`
PureState basis_state(const SpaceDescriptor& space, const std::vector<int>& labels);

// tensor product of per-subsystem factor vectors (factors[s].size() == dims[s])
PureState product_state(const SpaceDescriptor& space, const std::vector<Vector>& factors);

DensityMatrix to_density(const PureState& psi);

// Validation used at operation boundaries.  Tolerances are the module
// contract: norm within 1e-10, Hermiticity within 1e-10, trace within 1e-8.
void check_normalized(const PureState& psi, double tol = 1e-10);
void check_density(const DensityMatrix& rho, double herm_tol = 1e-10,
                   double trace_tol = 1e-8);

// --------------------------- operator helpers ------------------------------

Operator kron(const Operator& a, const Operator& b);
Vector   kron(const Vector& a, const Vector& b);

// lifts a dims[s] x dims[s] operator to the full space (identity elsewhere)
Operator embed(const Operator& local, int subsystem, const SpaceDescriptor& space);

// reduced density matrix over `keep` (subsystem indices, any order given,
// result ordered by ascending subsystem index)
Operator partial_trace(const Operator& rho, const std::vector<int>& keep,
                       const SpaceDescriptor& space);

bool     is_hermitian(const Operator& m, double tol = 1e-12);
Operator hermitize(const Operator& m);   // (m + m^dagger)/2
double   max_abs(const Operator& m);

}  // namespace cavitygate
