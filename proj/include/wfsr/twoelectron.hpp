#pragma once
/**
 * @file
 * Two-electron spatial wavefunctions in first quantisation: exact ground
 * states per exchange sector, register-wise resolution enhancement with a
 * one-particle model, fidelities and energy expectations.
 *
 * A two-electron state on 2n qubits stores C_{k0 k1} at index
 * idx(j0) * 2^n + idx(j1): electron 0 occupies the high register.
 */

#include "wfsr/circuits.hpp"
#include "wfsr/dataset.hpp"
#include "wfsr/pwbasis.hpp"
#include "wfsr/qsim.hpp"
#include "wfsr/trainer.hpp"

#include <span>
#include <string>
#include <vector>

namespace wfsr {

enum class ExchangeSymmetry { Singlet, Triplet };
[[nodiscard]] std::string to_string(ExchangeSymmetry s);

struct TwoElectronState {
    PlaneWaveBasis basis;
    CMatrix coefficients; ///< C(p, r): electron 0 at basis position p, electron 1 at r
    ExchangeSymmetry symmetry = ExchangeSymmetry::Singlet;
    double energy = 0.0;
};

/// Hamiltonian over all 2^n FFT frequencies of each electron register
/// (the Nyquist index is treated as the plane wave k = -2 pi 2^(n-1) / L).
class TwoElectronHamiltonian {
  public:
    TwoElectronHamiltonian(double length, int n_qubits, const Geometry &geom,
                           bool interacting = true);

    [[nodiscard]] int n_qubits() const { return n_; }
    [[nodiscard]] std::size_t register_dim() const { return std::size_t{1} << n_; }
    [[nodiscard]] double nuclear_repulsion() const { return e_nn_; }
    [[nodiscard]] const CMatrix &one_body() const { return h1_; }

    /// out = H in over the 2n-qubit space, parallel over output rows.
    void apply(std::span<const cplx> in, std::span<cplx> out) const;
    /// Single-threaded reference implementation of apply().
    void apply_serial(std::span<const cplx> in, std::span<cplx> out) const;

    /// Dense matrix restricted to the product basis of `basis` plane waves
    /// (rows/cols indexed p * N_pw + r).
    [[nodiscard]] CMatrix product_basis_matrix(const PlaneWaveBasis &basis) const;

  private:
    void apply_rows(std::span<const cplx> in, std::span<cplx> out, std::size_t row) const;

    double length_;
    int n_;
    bool interacting_;
    double e_nn_;
    CMatrix h1_;
    std::vector<int> momenta_;
    std::vector<double> vq_; ///< v~ indexed by q + (2^n - 1)
};

/// Lowest eigenpair within the singlet (symmetric) or triplet (antisymmetric)
/// sector of the plane-wave product basis. Energy includes E_nn.
/// @throws std::invalid_argument when N_pw^2 exceeds 961.
[[nodiscard]] TwoElectronState solve_two_electron(const PlaneWaveBasis &basis, const Geometry &geom,
                                                  ExchangeSymmetry symmetry,
                                                  bool interacting = true);

/// Amplitude-encodes the coefficient matrix on 2 n_qubits qubits.
[[nodiscard]] Statevector embed_two_electron(const TwoElectronState &state, int n_qubits);

/// Reorders |k0 k1> (x) |0 0> into |0 k0 0 k1> with adjacent SWAPs.
void u_swap(Statevector &state, int n_register);

/// Encodes the LR state, appends two ancillas, applies U_SWAP and then
/// U(theta, D) U_shift U_init on each electron register.
/// @throws std::invalid_argument on a model/case mismatch.
[[nodiscard]] Statevector enhance_two_electron(const TwoElectronState &state_lr, const Model &model,
                                               const SampleData &sample, const CaseConfig &config);

/// |<pred|truth>|^2 with truth embedded on pred's register size.
[[nodiscard]] double two_electron_fidelity(const Statevector &pred, const TwoElectronState &truth);

/// Real part of <psi|H|psi> for a normalised state.
[[nodiscard]] double energy_expectation(const Statevector &state,
                                        const TwoElectronHamiltonian &hamiltonian);

/// f ~ prod_mu f_mu over occupied orbitals.
[[nodiscard]] double product_fidelity_estimate(std::span<const double> orbital_fidelities);

struct TwoElectronRow {
    double bond_length = 0.0;
    ExchangeSymmetry symmetry = ExchangeSymmetry::Singlet;
    double f_noansatz = 0.0;
    double f_ansatz1 = kMissing;
    double f_ansatz2 = kMissing;
    double e_lr = 0.0;
    double e_hr = 0.0;
    double e_noansatz = 0.0;
    double e_ansatz1 = kMissing;
    double e_ansatz2 = kMissing;
};

/// H2 sweep over bond lengths for both exchange sectors, parallel over R.
[[nodiscard]] std::vector<TwoElectronRow> two_electron_study(const CaseConfig &config,
                                                             std::span<const double> bond_lengths,
                                                             const Model *ansatz1,
                                                             const Model *ansatz2);

} // namespace wfsr
