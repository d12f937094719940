#include "cavitygate/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace cavitygate {

void SystemConfig::validate() const {
    if (n_targets < 1 || n_targets > 8)
        throw std::invalid_argument("SystemConfig: n_targets must be in [1, 8]");
    if (fock_cutoff < 1 || fock_cutoff > 16)
        throw std::invalid_argument("SystemConfig: fock_cutoff must be in [1, 16]");
}

int SpaceDescriptor::control_subsystem() const {
    if (!has_control())
        throw std::logic_error("SpaceDescriptor: space has no control qubit");
    return 0;
}

int SpaceDescriptor::target_subsystem(int k) const {
    if (k < 0 || k >= config.n_targets)
        throw std::out_of_range("SpaceDescriptor: target index out of range");
    return (has_control() ? 1 : 0) + k;
}

SpaceDescriptor build_space(const SystemConfig& config) {
    config.validate();
    SpaceDescriptor space;
    space.config = config;
    if (config.include_control) space.dims.push_back(2);
    for (int k = 0; k < config.n_targets; ++k) space.dims.push_back(3);
    space.dims.push_back(config.fock_cutoff + 1);
    long dim = 1;
    for (int d : space.dims) dim *= d;
    space.total_dim = dim;
    return space;
}

long pack_labels(const SpaceDescriptor& space, const std::vector<int>& labels) {
    if (labels.size() != space.dims.size())
        throw std::invalid_argument("pack_labels: expected one label per subsystem");
    long index = 0;
    for (size_t s = 0; s < labels.size(); ++s) {
        if (labels[s] < 0 || labels[s] >= space.dims[s])
            throw std::out_of_range("pack_labels: label exceeds subsystem dimension");
        index = index * space.dims[s] + labels[s];
    }
    return index;
}

std::vector<int> unpack_index(const SpaceDescriptor& space, long index) {
    if (index < 0 || index >= space.total_dim)
        throw std::out_of_range("unpack_index: index outside space");
    std::vector<int> labels(space.dims.size());
    for (int s = static_cast<int>(space.dims.size()) - 1; s >= 0; --s) {
        labels[s] = static_cast<int>(index % space.dims[s]);
        index /= space.dims[s];
    }
    return labels;
}

std::string basis_label(const SpaceDescriptor& space, long index) {
    const auto labels = unpack_index(space, index);
    std::string out = "|";
    const int atoms = space.subsystem_count() - 1;  // everything but the cavity
    for (int s = 0; s < atoms; ++s) {
        if (s) out += '.';
        out += std::to_string(labels[s]);
    }
    out += ';';
    out += std::to_string(labels.back());
    out += '>';
    return out;
}

PureState basis_state(const SpaceDescriptor& space, const std::vector<int>& labels) {
    PureState psi;
    psi.amplitudes = Vector::Zero(space.total_dim);
    psi.amplitudes(pack_labels(space, labels)) = 1.0;
    return psi;
}

PureState product_state(const SpaceDescriptor& space, const std::vector<Vector>& factors) {
    if (factors.size() != space.dims.size())
        throw std::invalid_argument("product_state: expected one factor per subsystem");
    Vector acc = Vector::Ones(1);
    for (size_t s = 0; s < factors.size(); ++s) {
        if (factors[s].size() != space.dims[s])
            throw std::invalid_argument("product_state: factor dimension mismatch");
        acc = kron(acc, factors[s]);
    }
    PureState psi;
    psi.amplitudes = std::move(acc);
    return psi;
}

DensityMatrix to_density(const PureState& psi) {
    DensityMatrix rho;
    rho.rho = psi.amplitudes * psi.amplitudes.adjoint();
    return rho;
}

void check_normalized(const PureState& psi, double tol) {
    if (std::abs(psi.norm() - 1.0) > tol)
        throw std::invalid_argument("check_normalized: state norm deviates from 1");
}

void check_density(const DensityMatrix& rho, double herm_tol, double trace_tol) {
    if (rho.rho.rows() != rho.rho.cols())
        throw std::invalid_argument("check_density: matrix is not square");
    if (!is_hermitian(rho.rho, herm_tol))
        throw std::invalid_argument("check_density: matrix is not Hermitian");
    if (std::abs(rho.trace() - 1.0) > trace_tol)
        throw std::invalid_argument("check_density: trace deviates from 1");
}

Operator kron(const Operator& a, const Operator& b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (long i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Operator embed(const Operator& local, int subsystem, const SpaceDescriptor& space) {
    if (subsystem < 0 || subsystem >= space.subsystem_count())
        throw std::out_of_range("embed: subsystem index out of range");
    const int d = space.dims[subsystem];
    if (local.rows() != d || local.cols() != d)
        throw std::invalid_argument("embed: operator does not match subsystem dimension");

    long left = 1, right = 1;
    for (int s = 0; s < subsystem; ++s) left *= space.dims[s];
    for (int s = subsystem + 1; s < space.subsystem_count(); ++s) right *= space.dims[s];

    Operator out = Operator::Zero(space.total_dim, space.total_dim);
    for (long l = 0; l < left; ++l)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (local(i, j) == 0.0) continue;
                const long row0 = (l * d + i) * right;
                const long col0 = (l * d + j) * right;
                for (long r = 0; r < right; ++r) out(row0 + r, col0 + r) = local(i, j);
            }
    return out;
}

Operator partial_trace(const Operator& rho, const std::vector<int>& keep,
                       const SpaceDescriptor& space) {
    if (rho.rows() != space.total_dim || rho.cols() != space.total_dim)
        throw std::invalid_argument("partial_trace: matrix does not match space");

    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
        throw std::invalid_argument("partial_trace: duplicate subsystem in keep list");
    for (int s : kept)
        if (s < 0 || s >= space.subsystem_count())
            throw std::out_of_range("partial_trace: subsystem index out of range");

    long kept_dim = 1;
    for (int s : kept) kept_dim *= space.dims[s];

    // per-index split into (kept part, traced part), both packed row-major
    std::vector<long> kept_part(space.total_dim), traced_part(space.total_dim);
    for (long idx = 0; idx < space.total_dim; ++idx) {
        const auto labels = unpack_index(space, idx);
        long kp = 0, tp = 0;
        size_t next_kept = 0;
        for (int s = 0; s < space.subsystem_count(); ++s) {
            if (next_kept < kept.size() && kept[next_kept] == s) {
                kp = kp * space.dims[s] + labels[s];
                ++next_kept;
            } else {
                tp = tp * space.dims[s] + labels[s];
            }
        }
        kept_part[idx] = kp;
        traced_part[idx] = tp;
    }

    Operator out = Operator::Zero(kept_dim, kept_dim);
    for (long i = 0; i < space.total_dim; ++i)
        for (long j = 0; j < space.total_dim; ++j)
            if (traced_part[i] == traced_part[j])
                out(kept_part[i], kept_part[j]) += rho(i, j);
    return out;
}

bool is_hermitian(const Operator& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) <= tol;
}

Operator hermitize(const Operator& m) { return 0.5 * (m + m.adjoint()); }

double max_abs(const Operator& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace cavitygate
