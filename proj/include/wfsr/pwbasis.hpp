#pragma once
/**
 * @file
 * One-dimensional periodic plane-wave basis, exponential Coulomb-mimicking
 * potentials and the one- and two-body matrix elements built from them.
 *
 * Coefficient vectors are stored in ascending momentum order: position
 * `p = j + (N_pw - 1) / 2` holds the coefficient of exp(i k_j x) / sqrt(L).
 */

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace wfsr {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Parameters of v_exp(x) = A exp(-kappa |x|).
struct PotentialParams {
    static constexpr double amplitude = 1.071295;
    static constexpr double kappa = 1.0 / 2.385345;
};

/// Real-space exponential interaction on the infinite line.
[[nodiscard]] double v_exp(double x);

/// Periodic image sum of v_exp with period L, truncated once the relative
/// increment of a pair of images drops below 1e-12.
[[nodiscard]] double v_exp_periodic(double x, double length);

/// Fourier component 2 A kappa / (L (kappa^2 + k^2)).
[[nodiscard]] double v_exp_fourier(double length, double k);

class PlaneWaveBasis {
  public:
    /// @throws std::invalid_argument unless length > 0 and n_pw is odd and >= 3.
    PlaneWaveBasis(double length, int n_pw);

    [[nodiscard]] double length() const { return length_; }
    [[nodiscard]] int size() const { return n_pw_; }
    /// Largest |j| in the basis, (N_pw - 1) / 2.
    [[nodiscard]] int max_index() const { return (n_pw_ - 1) / 2; }

    [[nodiscard]] int momentum_at(int position) const { return position - max_index(); }
    [[nodiscard]] int position_of(int j) const { return j + max_index(); }
    [[nodiscard]] bool contains(int j) const { return j >= -max_index() && j <= max_index(); }

    /// k_j = 2 pi j / L. Momentum bookkeeping is kept on the integer j grid.
    [[nodiscard]] double wavevector(int j) const { return 2.0 * kPi * j / length_; }
    [[nodiscard]] cplx basis_function(int j, double x) const;

    /// psi(x) = sum_j C_j chi_j(x) for ascending-order coefficients.
    [[nodiscard]] cplx evaluate(const CVector &coeffs, double x) const;

    friend bool operator==(const PlaneWaveBasis &, const PlaneWaveBasis &) = default;

  private:
    double length_;
    int n_pw_;
};

struct Atom {
    int charge = 1;
    double position = 0.0;
};

class Geometry {
  public:
    Geometry() = default;
    explicit Geometry(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

    /// n equally spaced atoms of charge Z with spacing R, centred on x = 0.
    static Geometry chain(int n_atoms, double spacing, int charge = 1);
    /// Two dimers of bond length `bond`, inner atoms separated by `gap`,
    /// centred on x = 0.
    static Geometry dimer_pair(double gap, double bond);

    [[nodiscard]] const std::vector<Atom> &atoms() const { return atoms_; }
    [[nodiscard]] std::size_t size() const { return atoms_.size(); }
    [[nodiscard]] bool empty() const { return atoms_.empty(); }
    [[nodiscard]] int total_charge() const;

    /// Charge-weighted mean position; 0 for an empty geometry.
    [[nodiscard]] double center_of_mass() const;
    [[nodiscard]] Geometry shifted(double delta) const;
    /// True when the atom set maps onto itself under x -> -x.
    [[nodiscard]] bool is_reflection_symmetric(double tol = 1e-12) const;

  private:
    std::vector<Atom> atoms_;
};

/// h0_{jj'} = <chi_j| -d^2/2 + v_en |chi_j'>
///        = delta_{jj'} k_j^2 / 2 - sum_I Z_I exp(-i (k_j - k_j') d_I) v~(k_j - k_j').
[[nodiscard]] CMatrix core_hamiltonian(const PlaneWaveBasis &basis, const Geometry &geom);

/// <j j2| v |l l2> = int int chi*_j(x) chi*_j2(y) v(x - y) chi_l(x) chi_l2(y).
/// Zero unless j + j2 == l + l2 on the integer grid; otherwise v~(k_j - k_l).
/// @throws std::out_of_range when an index is outside the basis.
[[nodiscard]] double coulomb_tensor_element(const PlaneWaveBasis &basis, int j, int j2, int l,
                                            int l2);

/// E_nn = sum_{I<J} Z_I Z_J v_exp(d_I - d_J) on the open line.
[[nodiscard]] double nuclear_repulsion(const Geometry &geom);

/// Periodised electron-nucleus potential v_en at x_m = m L / 2^n.
[[nodiscard]] std::vector<double> potential_on_grid(double length, const Geometry &geom,
                                                    int n_qubits);

/// Text format: a "L=<float>" header followed by one "Z d" line per atom.
/// Blank lines and lines starting with '#' are ignored.
struct GeometryFile {
    double length = 0.0;
    Geometry geometry;
};
[[nodiscard]] GeometryFile read_geometry_text(std::istream &in);
void write_geometry_text(std::ostream &out, double length, const Geometry &geom);

} // namespace wfsr
