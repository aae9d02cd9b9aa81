#include "wfsr/qsim.hpp"

#include "wfsr/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wfsr {

namespace {

void check_qubit(const Statevector &s, int q) {
    if (q < 0 || q >= s.n_qubits())
        throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
}

void check_register(const Statevector &s, int first, int count) {
    if (first < 0 || count < 1 || first + count > s.n_qubits())
        throw std::invalid_argument("register [" + std::to_string(first) + ", +" +
                                    std::to_string(count) + ") out of range");
}

std::size_t bit_of(const Statevector &s, int q) {
    return std::size_t{1} << (s.n_qubits() - 1 - q);
}

} // namespace

Statevector::Statevector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > 24)
        throw std::invalid_argument("statevector: unsupported qubit count");
    amps_.assign(std::size_t{1} << n_qubits, cplx{0.0});
    amps_[0] = 1.0;
}

Statevector::Statevector(int n_qubits, std::vector<cplx> amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > 24 || amps_.size() != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("statevector: amplitude count is not 2^n");
}

double Statevector::norm() const {
    double acc = 0.0;
    for (const auto &a : amps_)
        acc += std::norm(a);
    return std::sqrt(acc);
}

void Statevector::normalize() {
    const double nrm = norm();
    if (nrm == 0.0)
        throw NormalizationError("cannot normalise the zero vector");
    for (auto &a : amps_)
        a /= nrm;
}

std::size_t MomentumIndexMap::index(int j) const {
    const int half = 1 << (n_qubits - 1);
    if (j < -half || j >= half)
        throw IndexOverflow("momentum " + std::to_string(j) + " does not fit in " +
                            std::to_string(n_qubits) + " qubits");
    return j >= 0 ? static_cast<std::size_t>(j) : static_cast<std::size_t>(j + 2 * half);
}

int MomentumIndexMap::momentum(std::size_t idx) const {
    const std::size_t half = std::size_t{1} << (n_qubits - 1);
    return idx < half ? static_cast<int>(idx) : static_cast<int>(idx) - static_cast<int>(2 * half);
}

Statevector encode_amplitudes(std::span<const cplx> coeffs, int n_qubits) {
    const int n_pw = static_cast<int>(coeffs.size());
    if (n_pw % 2 == 0)
        throw std::invalid_argument("encode: coefficient count must be odd");
    const int h = (n_pw - 1) / 2;
    if (n_qubits < 1 || h >= (1 << (n_qubits - 1)))
        throw IndexOverflow("encode: " + std::to_string(n_pw) + " plane waves need more than " +
                            std::to_string(n_qubits) + " qubits");
    double nrm2 = 0.0;
    for (const auto &c : coeffs)
        nrm2 += std::norm(c);
    const double dev = std::abs(std::sqrt(nrm2) - 1.0);
    if (dev > 1e-6)
        throw NormalizationError("encode: coefficient norm deviates from 1 by " +
                                 std::to_string(dev));
    const MomentumIndexMap map{n_qubits};
    std::vector<cplx> amps(map.dim(), cplx{0.0});
    for (int p = 0; p < n_pw; ++p)
        amps[map.index(p - h)] = coeffs[static_cast<std::size_t>(p)];
    Statevector s(n_qubits, std::move(amps));
    if (dev > 1e-8)
        s.normalize();
    return s;
}

std::vector<cplx> decode_amplitudes(const Statevector &state, int n_pw) {
    const MomentumIndexMap map{state.n_qubits()};
    const int h = (n_pw - 1) / 2;
    std::vector<cplx> out(static_cast<std::size_t>(n_pw));
    for (int p = 0; p < n_pw; ++p)
        out[static_cast<std::size_t>(p)] = state[map.index(p - h)];
    return out;
}

Matrix2 rx_matrix(double angle) {
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    return {cplx{c, 0.0}, cplx{0.0, -s}, cplx{0.0, -s}, cplx{c, 0.0}};
}

Matrix2 ry_matrix(double angle) {
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    return {cplx{c, 0.0}, cplx{-s, 0.0}, cplx{s, 0.0}, cplx{c, 0.0}};
}

Matrix2 rz_matrix(double angle) {
    return {std::polar(1.0, -0.5 * angle), cplx{0.0}, cplx{0.0}, std::polar(1.0, 0.5 * angle)};
}

void apply_1q(Statevector &state, int qubit, const Matrix2 &m) {
    check_qubit(state, qubit);
    const std::size_t bit = bit_of(state, qubit);
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & bit)
            continue;
        const cplx a0 = amps[i], a1 = amps[i | bit];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | bit] = m[2] * a0 + m[3] * a1;
    }
}

void apply_rx(Statevector &state, int qubit, double angle) { apply_1q(state, qubit, rx_matrix(angle)); }

void apply_ry(Statevector &state, int qubit, double angle) {
    check_qubit(state, qubit);
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    const std::size_t bit = bit_of(state, qubit);
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & bit)
            continue;
        const cplx a0 = amps[i], a1 = amps[i | bit];
        amps[i] = c * a0 - s * a1;
        amps[i | bit] = s * a0 + c * a1;
    }
}

void apply_rz(Statevector &state, int qubit, double angle) {
    check_qubit(state, qubit);
    const std::size_t bit = bit_of(state, qubit);
    const cplx p0 = std::polar(1.0, -0.5 * angle), p1 = std::polar(1.0, 0.5 * angle);
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        amps[i] *= (i & bit) ? p1 : p0;
}

void apply_cnot(Statevector &state, int control, int target) {
    check_qubit(state, control);
    check_qubit(state, target);
    if (control == target)
        throw std::invalid_argument("CNOT: control and target coincide");
    const std::size_t cb = bit_of(state, control), tb = bit_of(state, target);
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        if ((i & cb) && !(i & tb))
            std::swap(amps[i], amps[i | tb]);
}

void apply_swap(Statevector &state, int a, int b) {
    check_qubit(state, a);
    check_qubit(state, b);
    if (a == b)
        throw std::invalid_argument("SWAP: qubits coincide");
    const std::size_t ab = bit_of(state, a), bb = bit_of(state, b);
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        if ((i & ab) && !(i & bb))
            std::swap(amps[i], amps[(i ^ ab) | bb]);
}

void apply_diagonal(Statevector &state, int first, int count, std::span<const cplx> phases) {
    check_register(state, first, count);
    if (phases.size() != (std::size_t{1} << count))
        throw DimensionMismatch("diagonal: phase vector length is not 2^count");
    const int shift = state.n_qubits() - first - count;
    const std::size_t mask = (std::size_t{1} << count) - 1;
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i)
        amps[i] *= phases[(i >> shift) & mask];
}

void apply_diagonal_phase(Statevector &state, int first, int count,
                          std::span<const double> values, double angle) {
    check_register(state, first, count);
    if (values.size() != (std::size_t{1} << count))
        throw DimensionMismatch("diagonal phase: value vector length is not 2^count");
    std::vector<cplx> phases(values.size());
    for (std::size_t m = 0; m < values.size(); ++m)
        phases[m] = std::polar(1.0, -angle * values[m]);
    apply_diagonal(state, first, count, phases);
}

void apply_gate(Statevector &state, const Gate &gate) {
    auto need = [&](std::size_t k) {
        if (gate.targets.size() != k)
            throw std::invalid_argument("gate: wrong number of targets");
    };
    switch (gate.kind) {
    case GateKind::RX:
        need(1);
        apply_rx(state, gate.targets[0], gate.angle);
        break;
    case GateKind::RY:
        need(1);
        apply_ry(state, gate.targets[0], gate.angle);
        break;
    case GateKind::RZ:
        need(1);
        apply_rz(state, gate.targets[0], gate.angle);
        break;
    case GateKind::CNOT:
        need(2);
        apply_cnot(state, gate.targets[0], gate.targets[1]);
        break;
    case GateKind::SWAP:
        need(2);
        apply_swap(state, gate.targets[0], gate.targets[1]);
        break;
    case GateKind::DiagonalPhase:
        need(2);
        apply_diagonal(state, gate.targets[0], gate.targets[1], gate.phases);
        break;
    }
}

void qft(Statevector &state, int first, int count, bool inverse) {
    check_register(state, first, count);
    const std::size_t dim_r = std::size_t{1} << count;
    const int shift = state.n_qubits() - first - count;
    const std::size_t mask = (dim_r - 1) << shift;
    const double sign = inverse ? -1.0 : 1.0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim_r));

    std::vector<cplx> twiddle(dim_r);
    for (std::size_t t = 0; t < dim_r; ++t)
        twiddle[t] = std::polar(scale, sign * 2.0 * std::numbers::pi * static_cast<double>(t) /
                                           static_cast<double>(dim_r));

    auto amps = state.amplitudes();
    std::vector<cplx> in(dim_r), out(dim_r);
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & mask)
            continue;
        for (std::size_t j = 0; j < dim_r; ++j)
            in[j] = amps[base | (j << shift)];
        for (std::size_t m = 0; m < dim_r; ++m) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < dim_r; ++j)
                acc += twiddle[(j * m) & (dim_r - 1)] * in[j];
            out[m] = acc;
        }
        for (std::size_t m = 0; m < dim_r; ++m)
            amps[base | (m << shift)] = out[m];
    }
}

cplx inner_product(const Statevector &a, const Statevector &b) {
    if (a.n_qubits() != b.n_qubits())
        throw DimensionMismatch("inner product: qubit counts differ");
    cplx acc = 0.0;
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += std::conj(x[i]) * y[i];
    return acc;
}

double fidelity(const Statevector &a, const Statevector &b) {
    return std::norm(inner_product(a, b));
}

} // namespace wfsr
