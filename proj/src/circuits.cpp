#include "wfsr/circuits.hpp"

#include "wfsr/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace wfsr {

std::string to_string(AnsatzFamily f) {
    switch (f) {
    case AnsatzFamily::None:
        return "none";
    case AnsatzFamily::Ansatz1:
        return "ansatz1";
    case AnsatzFamily::Ansatz2:
        return "ansatz2";
    }
    return "none";
}

AnsatzFamily parse_ansatz_family(const std::string &s) {
    if (s == "none" || s == "0")
        return AnsatzFamily::None;
    if (s == "1" || s == "ansatz1")
        return AnsatzFamily::Ansatz1;
    if (s == "2" || s == "ansatz2")
        return AnsatzFamily::Ansatz2;
    throw std::invalid_argument("unknown ansatz '" + s + "'");
}

AnsatzConfig AnsatzConfig::defaults(AnsatzFamily family, int n_qubits) {
    switch (family) {
    case AnsatzFamily::Ansatz1:
        return {family, n_qubits, 32, 0};
    case AnsatzFamily::Ansatz2:
        return {family, n_qubits, 3, 8};
    case AnsatzFamily::None:
        break;
    }
    return {AnsatzFamily::None, n_qubits, 0, 0};
}

std::size_t AnsatzConfig::parameter_count() const {
    const auto nq = static_cast<std::size_t>(n_qubits);
    switch (family) {
    case AnsatzFamily::Ansatz1:
        return nq * static_cast<std::size_t>(layers + 1);
    case AnsatzFamily::Ansatz2:
        return static_cast<std::size_t>(layers) *
               (1 + 2 * nq * static_cast<std::size_t>(sublayers + 1));
    case AnsatzFamily::None:
        break;
    }
    return 0;
}

SampleData SampleData::from_geometry(const Geometry &geom, double length, int n_qubits) {
    return {geom, potential_on_grid(length, geom, n_qubits), geom.center_of_mass()};
}

Circuit::Circuit(int n_qubits, std::size_t n_params, std::vector<double> potential)
    : n_qubits_(n_qubits), n_params_(n_params), potential_(std::move(potential)) {}

void Circuit::push_entangler() {
    for (int q = 0; q + 1 < n_qubits_; ++q)
        ops_.push_back({OpKind::CNOT, q, q + 1});
}

void Circuit::apply(Statevector &state, std::span<const double> theta, int offset) const {
    if (theta.size() != n_params_)
        throw DimensionMismatch("circuit: expected " + std::to_string(n_params_) +
                                " parameters, got " + std::to_string(theta.size()));
    for (const auto &op : ops_)
        apply_op(state, op, theta, offset, false);
}

void Circuit::apply_op(Statevector &state, const CircuitOp &op, std::span<const double> theta,
                       int offset, bool adjoint) const {
    const double sign = adjoint ? -1.0 : 1.0;
    const double angle = op.param >= 0 ? sign * theta[static_cast<std::size_t>(op.param)] : 0.0;
    switch (op.kind) {
    case OpKind::RX:
        apply_rx(state, offset + op.a, angle);
        break;
    case OpKind::RY:
        apply_ry(state, offset + op.a, angle);
        break;
    case OpKind::RZ:
        apply_rz(state, offset + op.a, angle);
        break;
    case OpKind::CNOT:
        apply_cnot(state, offset + op.a, offset + op.b);
        break;
    case OpKind::QFT:
        qft(state, offset + op.a, op.b, adjoint);
        break;
    case OpKind::InverseQFT:
        qft(state, offset + op.a, op.b, !adjoint);
        break;
    case OpKind::PotentialPhase:
        apply_diagonal_phase(state, offset + op.a, op.b, potential_, angle);
        break;
    }
}

void Circuit::apply_generator(Statevector &state, const CircuitOp &op, int offset) const {
    static const Matrix2 half_x{cplx{0.0}, cplx{0.5}, cplx{0.5}, cplx{0.0}};
    static const Matrix2 half_y{cplx{0.0}, cplx{0.0, -0.5}, cplx{0.0, 0.5}, cplx{0.0}};
    static const Matrix2 half_z{cplx{0.5}, cplx{0.0}, cplx{0.0}, cplx{-0.5}};
    switch (op.kind) {
    case OpKind::RX:
        apply_1q(state, offset + op.a, half_x);
        break;
    case OpKind::RY:
        apply_1q(state, offset + op.a, half_y);
        break;
    case OpKind::RZ:
        apply_1q(state, offset + op.a, half_z);
        break;
    case OpKind::PotentialPhase: {
        std::vector<cplx> diag(potential_.begin(), potential_.end());
        apply_diagonal(state, offset + op.a, op.b, diag);
        break;
    }
    default:
        throw std::logic_error("apply_generator: op has no parameter");
    }
}

Circuit build_ansatz_circuit(const AnsatzConfig &config, const SampleData *sample) {
    const int nq = config.n_qubits;
    const std::size_t n_params = config.parameter_count();
    switch (config.family) {
    case AnsatzFamily::None:
        return Circuit(nq, 0);
    case AnsatzFamily::Ansatz1: {
        Circuit c(nq, n_params);
        int p = 0;
        for (int q = 0; q < nq; ++q)
            c.push({OpKind::RY, q, 0, p++});
        for (int l = 1; l <= config.layers; ++l) {
            c.push_entangler();
            for (int q = 0; q < nq; ++q)
                c.push({OpKind::RY, q, 0, p++});
        }
        return c;
    }
    case AnsatzFamily::Ansatz2: {
        if (!sample)
            throw std::invalid_argument("ansatz2 needs sample data");
        if (sample->potential_grid.size() != (std::size_t{1} << nq))
            throw DimensionMismatch("ansatz2: potential grid length is not 2^n_qubits");
        Circuit c(nq, n_params, sample->potential_grid);
        int p = 0;
        for (int l = 0; l < config.layers; ++l) {
            c.push({OpKind::QFT, 0, nq});
            c.push({OpKind::PotentialPhase, 0, nq, p++});
            c.push({OpKind::InverseQFT, 0, nq});
            for (int s = 0; s <= config.sublayers; ++s) {
                if (s > 0)
                    c.push_entangler();
                for (int q = 0; q < nq; ++q) {
                    c.push({OpKind::RX, q, 0, p++});
                    c.push({OpKind::RZ, q, 0, p++});
                }
            }
        }
        return c;
    }
    }
    throw std::logic_error("unreachable ansatz family");
}

Statevector u_init(const Statevector &lr) {
    // The new ancilla is the MSB, so the LR amplitudes keep their indices.
    std::vector<cplx> amps(std::size_t{2} * lr.dim(), cplx{0.0});
    std::copy(lr.amplitudes().begin(), lr.amplitudes().end(), amps.begin());
    Statevector hr(lr.n_qubits() + 1, std::move(amps));
    apply_cnot(hr, 1, 0);
    return hr;
}

void u_init_inplace(Statevector &state, int first, int count) {
    if (count < 2 || first < 0 || first + count > state.n_qubits())
        throw std::invalid_argument("u_init: register out of range");
    const std::size_t anc = std::size_t{1} << (state.n_qubits() - 1 - first);
    for (std::size_t i = 0; i < state.dim(); ++i)
        if ((i & anc) && std::abs(state[i]) > 1e-12)
            throw std::invalid_argument("u_init: ancilla qubit is not in |0>");
    apply_cnot(state, first + 1, first);
}

void u_shift(Statevector &state, double center_of_mass, double length, int first, int count) {
    if (count < 0)
        count = state.n_qubits() - first;
    if (center_of_mass == 0.0)
        return;
    const MomentumIndexMap map{count};
    std::vector<cplx> phases(map.dim());
    for (std::size_t i = 0; i < map.dim(); ++i)
        phases[i] = std::polar(1.0, 2.0 * kPi * map.momentum(i) / length * center_of_mass);
    apply_diagonal(state, first, count, phases);
}

void apply_ansatz1(Statevector &state, std::span<const double> theta, const AnsatzConfig &config) {
    if (config.family != AnsatzFamily::Ansatz1)
        throw std::invalid_argument("apply_ansatz1: config is not Ansatz1");
    build_ansatz_circuit(config).apply(state, theta);
}

void apply_ansatz2(Statevector &state, std::span<const double> theta, const SampleData &sample,
                   const AnsatzConfig &config) {
    if (config.family != AnsatzFamily::Ansatz2)
        throw std::invalid_argument("apply_ansatz2: config is not Ansatz2");
    build_ansatz_circuit(config, &sample).apply(state, theta);
}

Statevector interpolate_linear(std::span<const cplx> coeffs_lr, int n_lr) {
    Statevector lr = encode_amplitudes(coeffs_lr, n_lr);
    qft(lr, 0, n_lr);
    const std::size_t n = lr.dim();
    std::vector<cplx> g(2 * n);
    for (std::size_t m = 0; m < n; ++m) {
        g[2 * m] = lr[m];
        g[2 * m + 1] = 0.5 * (lr[m] + lr[(m + 1) % n]);
    }
    Statevector hr(n_lr + 1, std::move(g));
    hr.normalize();
    qft(hr, 0, n_lr + 1, true);
    return hr;
}

} // namespace wfsr
