#pragma once
/**
 * @file
 * Restricted and unrestricted Hartree-Fock in the plane-wave basis.
 *
 * Density convention: D^sigma = C_occ C_occ^dagger, i.e.
 * D_{ll'} = sum_mu C_{l mu} C*_{l' mu}. The Fock matrix is
 *   F^sigma_{jj'} = h0_{jj'} + sum_{ll'} (D^up + D^down)_{l'l} <j l|v|j' l'>
 *                            - sum_{ll'} D^sigma_{l'l} <j l|v|l' j'>.
 */

#include "wfsr/pwbasis.hpp"

#include <array>
#include <string>
#include <vector>

namespace wfsr {

enum class Spin { Up = 0, Down = 1 };

struct Occupation {
    int n_up = 0;
    int n_down = 0;
    bool restricted = false;

    static Occupation rhf(int doubly_occupied) { return {doubly_occupied, doubly_occupied, true}; }
    static Occupation uhf(int up, int down) { return {up, down, false}; }

    [[nodiscard]] int electrons() const { return n_up + n_down; }
    [[nodiscard]] int count(Spin s) const { return s == Spin::Up ? n_up : n_down; }
    /// @throws InvalidOccupation
    void validate(int n_pw) const;
};

/// Momentum-structured storage of the two-electron integrals: only the
/// transfer-dependent factor v~(q) is kept, indexed by integer transfer.
class CoulombTensor {
  public:
    explicit CoulombTensor(const PlaneWaveBasis &basis);

    [[nodiscard]] const PlaneWaveBasis &basis() const { return basis_; }
    /// v~(2 pi q / L) for integer transfer q in [-(N_pw-1), N_pw-1].
    [[nodiscard]] double transfer(int q) const { return vq_[static_cast<std::size_t>(q + offset_)]; }
    /// Same contract as coulomb_tensor_element.
    [[nodiscard]] double element(int j, int j2, int l, int l2) const;

  private:
    PlaneWaveBasis basis_;
    int offset_;
    std::vector<double> vq_;
};

/// @throws DimensionMismatch when the matrices do not match the tensor basis.
[[nodiscard]] CMatrix build_fock(const CMatrix &h0, const CMatrix &density_up,
                                 const CMatrix &density_down, const CoulombTensor &tensor,
                                 Spin spin);

struct ScfOptions {
    double mixing = 0.3;
    double density_tol = 1e-10;
    double energy_tol = 1e-12;
    int max_iter = 500;
    bool use_diis = false;
    int diis_size = 8;
    /// Eigenvalues closer than this are treated as one degenerate block.
    double degeneracy_tol = 1e-9;
};

struct ScfResult {
    Occupation occupation;
    std::array<CMatrix, 2> coefficients;      // all eigenvectors per spin, columns ascending
    std::array<Eigen::VectorXd, 2> energies;  // per-spin eigenvalues
    std::array<CMatrix, 2> density;           // self-consistent D^sigma
    std::array<CMatrix, 2> fock;
    double total_energy = 0.0;
    double nuclear_repulsion = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> energy_history;

    [[nodiscard]] CVector orbital(Spin s, int mu) const {
        return coefficients[static_cast<std::size_t>(s)].col(mu);
    }
};

/// E = 1/2 sum_sigma Tr[D^sigma (h0 + F^sigma)] + E_nn.
[[nodiscard]] double hartree_fock_energy(const CMatrix &h0, const std::array<CMatrix, 2> &density,
                                         const std::array<CMatrix, 2> &fock, double e_nn);

/// Hermitian eigendecomposition with deterministic basis choice inside
/// degenerate eigenvalue blocks (largest |C_{j=+1}| first, then j = 0, -1,
/// +2, -2, ...; each vector then has a fixed gauge).
struct HermitianEigen {
    Eigen::VectorXd values;
    CMatrix vectors;
};
[[nodiscard]] HermitianEigen deterministic_eigh(const CMatrix &m, double degeneracy_tol = 1e-9);

/// @throws NonConvergence after options.max_iter iterations.
/// @throws InvalidOccupation
[[nodiscard]] ScfResult run_scf(const PlaneWaveBasis &basis, const Geometry &geom,
                                const Occupation &occupation, const ScfOptions &options = {});

/// Result of anchoring a single orbital's global phase.
struct PhaseAnchor {
    int anchor_j = 1;
    bool fallback = false;
};

/// Multiplies `coeffs` by the global phase that makes the j = +1 coefficient
/// real and positive. When |C_{+1}| < 1e-12 the largest-magnitude
/// coefficient with j > 0 is used instead and the fallback is reported.
/// The vector is in ascending momentum order (odd length).
PhaseAnchor fix_phase(CVector &coeffs);

struct PhaseFixReport {
    struct Entry {
        Spin spin;
        int orbital;
        int anchor_j;
    };
    std::vector<Entry> fallbacks;
};

/// Applies fix_phase to every orbital column of both spins.
[[nodiscard]] ScfResult fix_orbital_phase(const ScfResult &result,
                                          PhaseFixReport *report = nullptr);

} // namespace wfsr
