#include "cavitygate/operators.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace cavitygate {

void PhysicalParams::validate() const {
    if (!(g > 0.0)) throw std::invalid_argument("PhysicalParams: g must be positive");
    if (!(g_r > 0.0)) throw std::invalid_argument("PhysicalParams: g_r must be positive");
    if (!(delta_c > 0.0))
        throw std::invalid_argument("PhysicalParams: delta_c must be positive");
    if (kappa < 0.0 || gamma_21 < 0.0 || gamma_20 < 0.0 || gamma_10 < 0.0)
        throw std::invalid_argument("PhysicalParams: decay rates must be non-negative");
}

bool dispersive_regime_ok(const PhysicalParams& params, int n_targets) {
    return params.delta_c >= 5.0 * std::sqrt(static_cast<double>(n_targets)) * params.g;
}

// --------------------------- local operators --------------------------------

Operator annihilation(int dim) {
    if (dim < 2) throw std::invalid_argument("annihilation: dimension must be >= 2");
    Operator a = Operator::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Operator transition(int dim, int lower, int upper) {
    if (lower < 0 || upper < 0 || lower >= dim || upper >= dim)
        throw std::out_of_range("transition: level outside dimension");
    Operator t = Operator::Zero(dim, dim);
    t(lower, upper) = 1.0;
    return t;
}

Operator level_projector(int dim, int level) { return transition(dim, level, level); }

Operator hadamard2() {
    Operator h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    return h;
}

Operator hadamard3() {
    Operator h = Operator::Identity(3, 3);
    h.topLeftCorner(2, 2) = hadamard2();
    return h;
}

// --------------------------- full-space builders ----------------------------

Operator cavity_annihilation(const SpaceDescriptor& space) {
    return embed(annihilation(space.config.fock_cutoff + 1), space.cavity_subsystem(),
                 space);
}

Operator jc_hamiltonian(const PhysicalParams& params, const SpaceDescriptor& space) {
    params.validate();
    const Operator a = cavity_annihilation(space);
    const Operator lower01 =
        embed(transition(2, 0, 1), space.control_subsystem(), space);
    const Operator half = a.adjoint() * lower01;
    return params.g_r * (half + half.adjoint());
}

Operator dispersive_hamiltonian(const PhysicalParams& params,
                                const SpaceDescriptor& space) {
    params.validate();
    const Operator a_dag = cavity_annihilation(space).adjoint();
    Operator h = Operator::Zero(space.total_dim, space.total_dim);
    for (int k = 0; k < space.config.n_targets; ++k) {
        const int s = space.target_subsystem(k);
        h += params.delta_c * embed(level_projector(3, 2), s, space);
        const Operator half = a_dag * embed(transition(3, 1, 2), s, space);
        h += params.g * (half + half.adjoint());
    }
    return h;
}

Operator static_frame_correction(const PhysicalParams& params, double t,
                                 const SpaceDescriptor& space) {
    Operator u = Operator::Zero(space.total_dim, space.total_dim);
    for (long idx = 0; idx < space.total_dim; ++idx) {
        const auto labels = unpack_index(space, idx);
        int twos = 0;
        for (int k = 0; k < space.config.n_targets; ++k)
            if (labels[space.target_subsystem(k)] == 2) ++twos;
        u(idx, idx) = std::exp(Complex(0.0, params.delta_c * t * twos));
    }
    return u;
}

Operator effective_hamiltonian(const PhysicalParams& params,
                               const SpaceDescriptor& space) {
    if (params.delta_c == 0.0)
        throw std::invalid_argument("effective_hamiltonian: delta_c must be nonzero");
    const double j = params.g * params.g / params.delta_c;
    const Operator a = cavity_annihilation(space);
    const Operator n_photon = a.adjoint() * a;
    const Operator aa_dag = a * a.adjoint();

    Operator h = Operator::Zero(space.total_dim, space.total_dim);
    for (int k = 0; k < space.config.n_targets; ++k) {
        const int s = space.target_subsystem(k);
        h -= j * n_photon * embed(level_projector(3, 1), s, space);
        h += j * aa_dag * embed(level_projector(3, 2), s, space);
    }
    // photon-mediated exchange between every target pair
    for (int k = 0; k < space.config.n_targets; ++k)
        for (int kp = k + 1; kp < space.config.n_targets; ++kp) {
            const Operator raise_k =
                embed(transition(3, 2, 1), space.target_subsystem(k), space);
            const Operator lower_kp =
                embed(transition(3, 1, 2), space.target_subsystem(kp), space);
            const Operator half = raise_k * lower_kp;
            h += j * (half + half.adjoint());
        }
    return h;
}

Operator effective_hamiltonian_reduced(const PhysicalParams& params,
                                       const SpaceDescriptor& space) {
    if (params.delta_c == 0.0)
        throw std::invalid_argument(
            "effective_hamiltonian_reduced: delta_c must be nonzero");
    const double j = params.g * params.g / params.delta_c;
    const Operator a = cavity_annihilation(space);
    Operator ones = Operator::Zero(space.total_dim, space.total_dim);
    for (int k = 0; k < space.config.n_targets; ++k)
        ones += embed(level_projector(3, 1), space.target_subsystem(k), space);
    return -j * (a.adjoint() * a) * ones;
}

// --------------------------- dissipation ------------------------------------

std::vector<CollapseChannel> collapse_operators(const PhysicalParams& params,
                                                const SpaceDescriptor& space) {
    std::vector<CollapseChannel> channels;
    channels.reserve(1 + 3 * static_cast<size_t>(space.config.n_targets));
    channels.push_back({params.kappa, cavity_annihilation(space)});
    for (int k = 0; k < space.config.n_targets; ++k) {
        const int s = space.target_subsystem(k);
        channels.push_back({params.gamma_21, embed(transition(3, 1, 2), s, space)});
        channels.push_back({params.gamma_20, embed(transition(3, 0, 2), s, space)});
        channels.push_back({params.gamma_10, embed(transition(3, 0, 1), s, space)});
    }
    return channels;
}

// --------------------------- logical reference ------------------------------

Operator ideal_gate_unitary(int n_targets) {
    if (n_targets < 1 || n_targets > 20)
        throw std::invalid_argument("ideal_gate_unitary: n_targets must be in [1, 20]");
    const long dim = 1L << (n_targets + 1);
    Operator u = Operator::Zero(dim, dim);
    for (long idx = 0; idx < dim; ++idx) {
        const bool control = (idx >> n_targets) & 1;  // control is the top bit
        const int ones = static_cast<int>(std::popcount(static_cast<unsigned long>(
            idx & ((1L << n_targets) - 1))));
        u(idx, idx) = (control && (ones % 2 == 1)) ? -1.0 : 1.0;
    }
    return u;
}

}  // namespace cavitygate
