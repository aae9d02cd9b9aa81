#include "wfsr/pwbasis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wfsr {

double v_exp(double x) {
    return PotentialParams::amplitude * std::exp(-PotentialParams::kappa * std::abs(x));
}

double v_exp_periodic(double x, double length) {
    // Reduce into [-L/2, L/2) so the image sum converges from the nearest image.
    double r = std::remainder(x, length);
    double total = v_exp(r);
    for (int m = 1;; ++m) {
        const double inc = v_exp(r - m * length) + v_exp(r + m * length);
        total += inc;
        if (inc <= 1e-12 * std::abs(total))
            break;
    }
    return total;
}

double v_exp_fourier(double length, double k) {
    constexpr double a = PotentialParams::amplitude;
    constexpr double kappa = PotentialParams::kappa;
    return 2.0 * a * kappa / (length * (kappa * kappa + k * k));
}

PlaneWaveBasis::PlaneWaveBasis(double length, int n_pw) : length_(length), n_pw_(n_pw) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("plane-wave basis: cell length must be positive");
    if (n_pw < 3 || n_pw % 2 == 0)
        throw std::invalid_argument("plane-wave basis: N_pw must be odd and >= 3, got " +
                                    std::to_string(n_pw));
}

cplx PlaneWaveBasis::basis_function(int j, double x) const {
    return std::polar(1.0 / std::sqrt(length_), wavevector(j) * x);
}

cplx PlaneWaveBasis::evaluate(const CVector &coeffs, double x) const {
    if (coeffs.size() != n_pw_)
        throw std::invalid_argument("plane-wave basis: coefficient length mismatch");
    cplx acc = 0.0;
    for (int p = 0; p < n_pw_; ++p)
        acc += coeffs[p] * basis_function(momentum_at(p), x);
    return acc;
}

Geometry Geometry::chain(int n_atoms, double spacing, int charge) {
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(n_atoms));
    for (int i = 0; i < n_atoms; ++i)
        atoms.push_back({charge, (i - 0.5 * (n_atoms - 1)) * spacing});
    return Geometry(std::move(atoms));
}

Geometry Geometry::dimer_pair(double gap, double bond) {
    const double inner = 0.5 * gap;
    return Geometry({{1, -inner - bond}, {1, -inner}, {1, inner}, {1, inner + bond}});
}

int Geometry::total_charge() const {
    int z = 0;
    for (const auto &a : atoms_)
        z += a.charge;
    return z;
}

double Geometry::center_of_mass() const {
    double num = 0.0, den = 0.0;
    for (const auto &a : atoms_) {
        num += a.charge * a.position;
        den += a.charge;
    }
    return den == 0.0 ? 0.0 : num / den;
}

Geometry Geometry::shifted(double delta) const {
    auto atoms = atoms_;
    for (auto &a : atoms)
        a.position += delta;
    return Geometry(std::move(atoms));
}

bool Geometry::is_reflection_symmetric(double tol) const {
    for (const auto &a : atoms_) {
        const bool mirrored = std::any_of(atoms_.begin(), atoms_.end(), [&](const Atom &b) {
            return b.charge == a.charge && std::abs(b.position + a.position) <= tol;
        });
        if (!mirrored)
            return false;
    }
    return true;
}

CMatrix core_hamiltonian(const PlaneWaveBasis &basis, const Geometry &geom) {
    const int n = basis.size();
    CMatrix h = CMatrix::Zero(n, n);
    for (int p = 0; p < n; ++p) {
        const int j = basis.momentum_at(p);
        for (int pp = 0; pp < n; ++pp) {
            const int dj = j - basis.momentum_at(pp);
            const double dk = basis.wavevector(dj);
            const double vt = v_exp_fourier(basis.length(), dk);
            cplx acc = 0.0;
            for (const auto &atom : geom.atoms())
                acc -= static_cast<double>(atom.charge) * std::polar(vt, -dk * atom.position);
            h(p, pp) = acc;
        }
        const double k = basis.wavevector(j);
        h(p, p) += 0.5 * k * k;
    }
    return h;
}

double coulomb_tensor_element(const PlaneWaveBasis &basis, int j, int j2, int l, int l2) {
    for (int idx : {j, j2, l, l2})
        if (!basis.contains(idx))
            throw std::out_of_range("coulomb tensor: momentum index " + std::to_string(idx) +
                                    " outside basis");
    if (j + j2 != l + l2)
        return 0.0;
    return v_exp_fourier(basis.length(), basis.wavevector(j - l));
}

double nuclear_repulsion(const Geometry &geom) {
    const auto &atoms = geom.atoms();
    double e = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        for (std::size_t k = 0; k < i; ++k)
            e += atoms[i].charge * atoms[k].charge * v_exp(atoms[i].position - atoms[k].position);
    return e;
}

std::vector<double> potential_on_grid(double length, const Geometry &geom, int n_qubits) {
    if (n_qubits < 1)
        throw std::invalid_argument("potential grid: need at least one qubit");
    const std::size_t n_points = std::size_t{1} << n_qubits;
    std::vector<double> v(n_points, 0.0);
    for (std::size_t m = 0; m < n_points; ++m) {
        const double x = length * static_cast<double>(m) / static_cast<double>(n_points);
        double acc = 0.0;
        for (const auto &atom : geom.atoms())
            acc -= atom.charge * v_exp_periodic(x - atom.position, length);
        v[m] = acc;
    }
    return v;
}

GeometryFile read_geometry_text(std::istream &in) {
    GeometryFile out;
    bool have_length = false;
    std::vector<Atom> atoms;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::string body = line.substr(first);
        if (body.rfind("L=", 0) == 0) {
            try {
                out.length = std::stod(body.substr(2));
            } catch (const std::exception &) {
                throw std::invalid_argument("geometry text: bad header on line " +
                                            std::to_string(line_no));
            }
            have_length = true;
            continue;
        }
        std::istringstream ss(body);
        Atom a;
        if (!(ss >> a.charge >> a.position))
            throw std::invalid_argument("geometry text: expected 'Z d' on line " +
                                        std::to_string(line_no));
        atoms.push_back(a);
    }
    if (!have_length || !(out.length > 0.0))
        throw std::invalid_argument("geometry text: missing or invalid 'L=' header");
    for (const auto &a : atoms)
        if (std::abs(a.position) >= 0.5 * out.length)
            throw std::invalid_argument("geometry text: atom outside [-L/2, L/2)");
    out.geometry = Geometry(std::move(atoms));
    return out;
}

void write_geometry_text(std::ostream &out, double length, const Geometry &geom) {
    out << std::setprecision(12) << "L=" << length << '\n';
    for (const auto &a : geom.atoms())
        out << a.charge << ' ' << a.position << '\n';
}

} // namespace wfsr
