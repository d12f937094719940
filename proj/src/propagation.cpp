#include "cavitygate/propagation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>

namespace cavitygate {

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;

Sparse to_sparse(const Operator& m) {
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (long j = 0; j < m.cols(); ++j)
        for (long i = 0; i < m.rows(); ++i)
            if (m(i, j) != 0.0) triplets.emplace_back(i, j, m(i, j));
    Sparse s(m.rows(), m.cols());
    s.setFromTriplets(triplets.begin(), triplets.end());
    return s;
}

void symmetrize(Operator& rho) {
    for (long i = 0; i < rho.rows(); ++i) {
        rho(i, i) = Complex(rho(i, i).real(), 0.0);
        for (long j = i + 1; j < rho.cols(); ++j) {
            const Complex v = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = v;
            rho(j, i) = std::conj(v);
        }
    }
}

// right-hand side of the master equation; valid for Hermitian rho, which the
// RK4 stages preserve (each k_i is Hermitian when its input is)
// jump operator flattened to its nonzeros, values premultiplied by
// sqrt(2 rate): (2r) L rho L^dag lands as sum_ab v_a conj(v_b) rho(c_a, c_b)
struct JumpTriplets {
    std::vector<long> row, col;
    std::vector<Complex> val;
};

struct Liouvillian {
    Sparse h;
    std::vector<JumpTriplets> gather_jump;     // nnz^2 path, sparse channels
    std::vector<Sparse> jump, jump_dag;        // product path, dense channels
    std::vector<double> twice_rate;
    Eigen::MatrixXd damp;  // damp(i,j) = d_i + d_j with d = diag(sum_j r_j L^dag L)
    bool diagonal_damping = false;
    Sparse damping;        // used only when the damping operator is not diagonal

    Operator scratch;

    void init(const Operator& h_in, const std::vector<CollapseChannel>& channels) {
        h = to_sparse(h_in);
        const long dim = h_in.rows();
        Operator g = Operator::Zero(dim, dim);
        for (const auto& ch : channels) {
            if (ch.rate < 0.0)
                throw std::invalid_argument("lindblad_evolve: negative channel rate");
            if (ch.op.rows() != dim || ch.op.cols() != dim)
                throw std::invalid_argument(
                    "lindblad_evolve: channel dimension mismatch");
            if (ch.rate == 0.0) continue;

            JumpTriplets t;
            const double scale = std::sqrt(2.0 * ch.rate);
            for (long c = 0; c < dim; ++c)
                for (long r = 0; r < dim; ++r)
                    if (ch.op(r, c) != Complex(0.0)) {
                        t.row.push_back(r);
                        t.col.push_back(c);
                        t.val.push_back(scale * ch.op(r, c));
                    }
            // nnz^2 gather beats the two nnz*dim products for sparse ops
            if (long(t.row.size()) <= 2 * dim) {
                gather_jump.push_back(std::move(t));
            } else {
                jump.push_back(to_sparse(ch.op));
                jump_dag.push_back(to_sparse(ch.op.adjoint()));
                twice_rate.push_back(2.0 * ch.rate);
            }
            g += ch.rate * (ch.op.adjoint() * ch.op);
        }
        Operator offdiag = g;
        offdiag.diagonal().setZero();
        diagonal_damping = max_abs(offdiag) == 0.0;
        if (diagonal_damping) {
            const Eigen::VectorXd d = g.diagonal().real();
            damp = d.replicate(1, dim) + d.transpose().replicate(dim, 1);
        } else {
            damping = to_sparse(g);
        }
        scratch.resize(dim, dim);
    }

    void operator()(const Operator& rho, Operator& out) {
        // -i(h rho - (h rho)^dag) is -i[h, rho] for Hermitian rho
        scratch.noalias() = h * rho;
        out.noalias() = Complex(0.0, -1.0) * scratch;
        out.noalias() += Complex(0.0, 1.0) * scratch.adjoint();

        for (const auto& t : gather_jump) {
            const size_t m = t.row.size();
            for (size_t b = 0; b < m; ++b) {
                Complex* out_col = out.col(t.row[b]).data();
                const Complex* rho_col = rho.col(t.col[b]).data();
                const Complex vb = std::conj(t.val[b]);
                for (size_t a = 0; a < m; ++a)
                    out_col[t.row[a]] += t.val[a] * vb * rho_col[t.col[a]];
            }
        }
        for (size_t j = 0; j < jump.size(); ++j) {
            scratch.noalias() = jump[j] * rho;
            out.noalias() += twice_rate[j] * (scratch * jump_dag[j]);
        }

        if (diagonal_damping) {
            out.array() -= damp.array() * rho.array();
        } else {
            scratch.noalias() = damping * rho;
            out.noalias() -= scratch;
            out.noalias() -= scratch.adjoint();
        }
    }
};

}  // namespace

void EvolutionSettings::validate() const {
    if (!(dt_max > 0.0))
        throw std::invalid_argument("EvolutionSettings: dt_max must be positive");
    if (steps_per_fastest_period < 1)
        throw std::invalid_argument(
            "EvolutionSettings: steps_per_fastest_period must be >= 1");
    if (max_steps < 1)
        throw std::invalid_argument("EvolutionSettings: max_steps must be >= 1");
}

double fastest_frequency(const PhysicalParams& params, int n_targets) {
    return std::max({params.delta_c,
                     params.g * std::sqrt(static_cast<double>(n_targets)), params.g_r});
}

double resolve_dt(const EvolutionSettings& settings, double omega_fast) {
    settings.validate();
    if (omega_fast <= 0.0) return settings.dt_max;
    return std::min(settings.dt_max,
                    two_pi / (omega_fast * settings.steps_per_fastest_period));
}

// --------------------------- analytic propagators ---------------------------

PureState jc_propagate(const PureState& psi, const PhysicalParams& params, double t,
                       const SpaceDescriptor& space) {
    params.validate();
    if (!space.has_control())
        throw std::invalid_argument("jc_propagate: space has no control qubit");
    if (psi.dim() != space.total_dim)
        throw std::invalid_argument("jc_propagate: state does not match space");

    const int cutoff = space.config.fock_cutoff;
    PureState out = psi;
    for (long idx = 0; idx < space.total_dim; ++idx) {
        auto labels = unpack_index(space, idx);
        if (labels[space.control_subsystem()] != 1) continue;
        const int m = labels.back();
        if (m + 1 > cutoff) continue;  // truncation edge, no partner level
        labels[space.control_subsystem()] = 0;
        labels.back() = m + 1;
        const long partner = pack_labels(space, labels);

        const double theta = params.g_r * std::sqrt(m + 1.0) * t;
        const Complex c1 = psi.amplitudes(idx);      // |1;m>
        const Complex c0 = psi.amplitudes(partner);  // |0;m+1>
        const double cs = std::cos(theta), sn = std::sin(theta);
        out.amplitudes(idx)     = cs * c1 - Complex(0.0, sn) * c0;
        out.amplitudes(partner) = cs * c0 - Complex(0.0, sn) * c1;
    }
    return out;
}

Operator jc_propagator_matrix(const PhysicalParams& params, double t,
                              const SpaceDescriptor& space) {
    Operator u(space.total_dim, space.total_dim);
    PureState column;
    column.amplitudes = Vector::Zero(space.total_dim);
    for (long j = 0; j < space.total_dim; ++j) {
        column.amplitudes.setZero();
        column.amplitudes(j) = 1.0;
        u.col(j) = jc_propagate(column, params, t, space).amplitudes;
    }
    return u;
}

PureState dispersive_phase_propagate(const PureState& psi, const PhysicalParams& params,
                                     double t, const SpaceDescriptor& space) {
    params.validate();
    if (psi.dim() != space.total_dim)
        throw std::invalid_argument(
            "dispersive_phase_propagate: state does not match space");

    const int n = space.config.n_targets;
    double leaked = 0.0;
    const double phi = params.g * params.g * t / params.delta_c;
    PureState out = psi;
    for (long idx = 0; idx < space.total_dim; ++idx) {
        const auto labels = unpack_index(space, idx);
        int ones = 0;
        bool twos = false;
        for (int k = 0; k < n; ++k) {
            const int level = labels[space.target_subsystem(k)];
            ones += level == 1;
            twos |= level == 2;
        }
        if (twos) {
            leaked += std::norm(psi.amplitudes(idx));
            continue;
        }
        out.amplitudes(idx) *= std::exp(Complex(0.0, phi * labels.back() * ones));
    }
    if (leaked > 1e-12)
        throw std::invalid_argument(
            "dispersive_phase_propagate: state has |2> population");
    return out;
}

PureState unitary_propagate(const PureState& psi, const Operator& h, double t) {
    const double scale = std::max(1.0, max_abs(h));
    if (!is_hermitian(h, 1e-12 * scale))
        throw std::invalid_argument("unitary_propagate: Hamiltonian is not Hermitian");
    if (psi.dim() != h.rows())
        throw std::invalid_argument("unitary_propagate: dimension mismatch");

    Eigen::SelfAdjointEigenSolver<Operator> eig(h);
    Vector coeffs = eig.eigenvectors().adjoint() * psi.amplitudes;
    for (long i = 0; i < coeffs.size(); ++i)
        coeffs(i) *= std::exp(Complex(0.0, -eig.eigenvalues()(i) * t));
    PureState out;
    out.amplitudes = eig.eigenvectors() * coeffs;
    return out;
}

Operator propagator_matrix(const Operator& h, double t) {
    const double scale = std::max(1.0, max_abs(h));
    if (!is_hermitian(h, 1e-12 * scale))
        throw std::invalid_argument("propagator_matrix: Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Operator> eig(h);
    Vector phases(eig.eigenvalues().size());
    for (long i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(Complex(0.0, -eig.eigenvalues()(i) * t));
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

// --------------------------- master equation --------------------------------

DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const Operator& h,
                              const std::vector<CollapseChannel>& channels, double t,
                              const EvolutionSettings& settings, double omega_fast,
                              LindbladDiagnostics* diagnostics) {
    if (t < 0.0) throw std::invalid_argument("lindblad_evolve: negative time");
    if (rho0.rho.rows() != h.rows() || rho0.rho.cols() != h.cols())
        throw std::invalid_argument("lindblad_evolve: dimension mismatch");
    const double scale = std::max(1.0, max_abs(h));
    if (!is_hermitian(h, 1e-12 * scale))
        throw std::invalid_argument("lindblad_evolve: Hamiltonian is not Hermitian");

    const double dt = resolve_dt(settings, omega_fast);
    const long full_steps = static_cast<long>(t / dt);
    const double tail = t - full_steps * dt;
    const bool has_tail = tail > 1e-9 * dt;
    const long total_steps = full_steps + (has_tail ? 1 : 0);
    if (total_steps > settings.max_steps)
        throw IntegrationError("lindblad_evolve: step budget exceeded");

    Liouvillian rhs;
    rhs.init(h, channels);

    const long dim = rho0.rho.rows();
    Operator rho = rho0.rho;
    symmetrize(rho);
    Operator k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim);

    double herm_defect = 0.0;
    for (long s = 0; s < total_steps; ++s) {
        const double step = (has_tail && s == total_steps - 1) ? tail : dt;
        rhs(rho, k1);
        stage.noalias() = rho + (0.5 * step) * k1;
        rhs(stage, k2);
        stage.noalias() = rho + (0.5 * step) * k2;
        rhs(stage, k3);
        stage.noalias() = rho + step * k3;
        rhs(stage, k4);
        rho.noalias() += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s == total_steps - 1) herm_defect = max_abs(rho - rho.adjoint());
        symmetrize(rho);
    }

    if (diagnostics) {
        diagnostics->steps = total_steps;
        diagnostics->dt = dt;
        diagnostics->trace_drift = std::abs(rho.trace() - Complex(1.0));
        diagnostics->herm_defect = herm_defect;
    }
    DensityMatrix out;
    out.rho = std::move(rho);
    return out;
}

}  // namespace cavitygate
