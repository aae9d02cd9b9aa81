#pragma once
/**
 * @file
 * Composite unitaries of the resolution-enhancement model: register
 * initialisation, centre-of-mass shift, the two parameterised ansatz
 * families and the real-space linear-interpolation baseline.
 *
 * Ansatz circuits are stored as an op tape so the same description drives
 * forward simulation, adjoint differentiation and dense-matrix tests.
 *
 * Parameter layout
 *   Ansatz1: theta[l * n_q + q] is the RY angle of qubit q in layer l,
 *            l = 0 (initial RY layer) ... N_layer.
 *   Ansatz2: layer l occupies a block of 1 + 2 n_q (N_sub + 1) entries:
 *            [potential angle, then for s = 0..N_sub and q = 0..n_q-1 the
 *            pair (RX angle, RZ angle)].
 */

#include "wfsr/pwbasis.hpp"
#include "wfsr/qsim.hpp"

#include <span>
#include <string>
#include <vector>

namespace wfsr {

enum class AnsatzFamily { None, Ansatz1, Ansatz2 };

[[nodiscard]] std::string to_string(AnsatzFamily f);
/// Accepts "none", "1", "2", "ansatz1", "ansatz2".
[[nodiscard]] AnsatzFamily parse_ansatz_family(const std::string &s);

struct AnsatzConfig {
    AnsatzFamily family = AnsatzFamily::None;
    int n_qubits = 0;
    int layers = 0;
    int sublayers = 0;

    /// N_layer = 32 for Ansatz1; N_layer = 3, N_sub = 8 for Ansatz2.
    static AnsatzConfig defaults(AnsatzFamily family, int n_qubits);

    [[nodiscard]] std::size_t parameter_count() const;
    [[nodiscard]] bool needs_sample_data() const { return family == AnsatzFamily::Ansatz2; }
};

/// Classical per-sample data fed to data-dependent layers.
struct SampleData {
    Geometry geometry;
    std::vector<double> potential_grid;
    double center_of_mass = 0.0;

    static SampleData from_geometry(const Geometry &geom, double length, int n_qubits);
};

enum class OpKind { RX, RY, RZ, CNOT, QFT, InverseQFT, PotentialPhase };

struct CircuitOp {
    OpKind kind;
    int a = 0;      ///< qubit, control, or register start
    int b = 0;      ///< CNOT target or register width
    int param = -1; ///< index into theta, -1 when fixed
};

class Circuit {
  public:
    Circuit(int n_qubits, std::size_t n_params, std::vector<double> potential = {});

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t parameter_count() const { return n_params_; }
    [[nodiscard]] const std::vector<CircuitOp> &ops() const { return ops_; }
    [[nodiscard]] const std::vector<double> &potential() const { return potential_; }

    void push(CircuitOp op) { ops_.push_back(op); }
    /// CNOT chain i -> i+1, i = 0 .. n-2 (open chain).
    void push_entangler();

    /// Applies the tape to the register of n_qubits() qubits starting at
    /// `offset` inside a possibly larger state.
    /// @throws DimensionMismatch on a wrong theta length.
    void apply(Statevector &state, std::span<const double> theta, int offset = 0) const;
    void apply_op(Statevector &state, const CircuitOp &op, std::span<const double> theta,
                  int offset, bool adjoint) const;
    /// Multiplies by the Hermitian generator G of a parameterised op, where
    /// the op equals exp(-i theta G).
    void apply_generator(Statevector &state, const CircuitOp &op, int offset) const;

  private:
    int n_qubits_;
    std::size_t n_params_;
    std::vector<double> potential_;
    std::vector<CircuitOp> ops_;
};

/// Builds the tape for an ansatz. Ansatz2 requires sample data whose
/// potential grid has 2^n_qubits points.
/// @throws DimensionMismatch
[[nodiscard]] Circuit build_ansatz_circuit(const AnsatzConfig &config,
                                           const SampleData *sample = nullptr);

/// Embeds an n_LR-qubit state below a fresh ancilla (new MSB) and applies
/// CNOT(control = LR MSB, target = ancilla), relocating negative momenta.
[[nodiscard]] Statevector u_init(const Statevector &lr);
/// In-place variant on the HR register [first, first + count).
/// @throws std::invalid_argument if the ancilla is not |0>.
void u_init_inplace(Statevector &state, int first, int count);

/// amps[index(j)] *= exp(i k_j d_cm) on the register [first, first + count).
void u_shift(Statevector &state, double center_of_mass, double length, int first = 0,
             int count = -1);

/// @throws DimensionMismatch on parameter-length mismatch.
void apply_ansatz1(Statevector &state, std::span<const double> theta, const AnsatzConfig &config);
/// @throws DimensionMismatch on parameter- or grid-length mismatch.
void apply_ansatz2(Statevector &state, std::span<const double> theta, const SampleData &sample,
                   const AnsatzConfig &config);

/// Real-space linear interpolation with one extra qubit: QFT to a 2^n_LR
/// grid f, g_{2m} = f_m, g_{2m+1} = (f_m + f_{m+1}) / 2 (periodic), post-select
/// and renormalise, inverse QFT on n_LR + 1 qubits.
[[nodiscard]] Statevector interpolate_linear(std::span<const cplx> coeffs_lr, int n_lr);

} // namespace wfsr
