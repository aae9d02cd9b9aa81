#pragma once
/**
 * @file
 * Exact statevector simulator.
 *
 * Bit order: qubit 0 is the most significant bit of the basis index, so for
 * an n-qubit state qubit q controls bit (n - 1 - q). A register of `count`
 * qubits starting at qubit `first` reads its local index from bits
 * (n - first - count) ... (n - first - 1).
 */

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wfsr {

using cplx = std::complex<double>;

class Statevector {
  public:
    /// |0...0> on n qubits.
    explicit Statevector(int n_qubits);
    /// @throws std::invalid_argument if the length is not 2^n_qubits.
    Statevector(int n_qubits, std::vector<cplx> amplitudes);

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<cplx> amplitudes() { return amps_; }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] cplx &operator[](std::size_t i) { return amps_[i]; }
    [[nodiscard]] const cplx &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const;
    void normalize();

  private:
    int n_;
    std::vector<cplx> amps_;
};

/// FFT-style map between signed momentum j and register index.
struct MomentumIndexMap {
    int n_qubits;

    [[nodiscard]] std::size_t dim() const { return std::size_t{1} << n_qubits; }
    /// j >= 0 -> j, j < 0 -> j + 2^n. @throws IndexOverflow outside [-2^(n-1), 2^(n-1)).
    [[nodiscard]] std::size_t index(int j) const;
    /// Inverse of index(); the Nyquist index 2^(n-1) maps to -2^(n-1).
    [[nodiscard]] int momentum(std::size_t idx) const;
};

/// Amplitude encoding of ascending-momentum coefficients (length N_pw, odd).
/// Renormalises when the norm is within 1e-6 of one.
/// @throws NormalizationError, IndexOverflow
[[nodiscard]] Statevector encode_amplitudes(std::span<const cplx> coeffs, int n_qubits);
/// Reads the N_pw ascending-momentum coefficients back out of a state.
[[nodiscard]] std::vector<cplx> decode_amplitudes(const Statevector &state, int n_pw);

using Matrix2 = std::array<cplx, 4>; // row-major

[[nodiscard]] Matrix2 rx_matrix(double angle);
[[nodiscard]] Matrix2 ry_matrix(double angle);
[[nodiscard]] Matrix2 rz_matrix(double angle);

void apply_1q(Statevector &state, int qubit, const Matrix2 &m);
void apply_rx(Statevector &state, int qubit, double angle);
void apply_ry(Statevector &state, int qubit, double angle);
void apply_rz(Statevector &state, int qubit, double angle);
void apply_cnot(Statevector &state, int control, int target);
void apply_swap(Statevector &state, int a, int b);
/// Multiplies amplitudes by phases[local register index].
void apply_diagonal(Statevector &state, int first, int count, std::span<const cplx> phases);
/// Multiplies by exp(-i angle * values[local index]).
void apply_diagonal_phase(Statevector &state, int first, int count,
                          std::span<const double> values, double angle);

enum class GateKind { RX, RY, RZ, CNOT, SWAP, DiagonalPhase };

/// Tagged gate for the generic dispatcher. `targets` holds one qubit for
/// rotations, (control, target) for CNOT, (a, b) for SWAP and (first, count)
/// for a register-wide diagonal.
struct Gate {
    GateKind kind;
    std::vector<int> targets;
    double angle = 0.0;
    std::vector<cplx> phases;
};

/// @throws std::invalid_argument on colliding or out-of-range targets.
void apply_gate(Statevector &state, const Gate &gate);

/// QFT|j> = 2^{-n/2} sum_m exp(+2 pi i j m / 2^n) |m> on the register, or its
/// inverse. Applied to FFT-ordered momentum amplitudes C_j this yields
/// amplitudes proportional to psi(x_m), x_m = m L / 2^n.
void qft(Statevector &state, int first, int count, bool inverse = false);

[[nodiscard]] cplx inner_product(const Statevector &a, const Statevector &b);
/// |<a|b>|^2. @throws DimensionMismatch
[[nodiscard]] double fidelity(const Statevector &a, const Statevector &b);

} // namespace wfsr
