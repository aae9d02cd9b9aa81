#include "wfsr/scf.hpp"

#include "wfsr/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>

namespace wfsr {

void Occupation::validate(int n_pw) const {
    if (n_up < 0 || n_down < 0)
        throw InvalidOccupation("occupation counts must be non-negative");
    if (n_up < n_down)
        throw InvalidOccupation("occupation requires n_up >= n_down");
    if (electrons() < 1)
        throw InvalidOccupation("occupation needs at least one electron");
    if (restricted && n_up != n_down)
        throw InvalidOccupation("restricted occupation requires n_up == n_down");
    if (n_up > n_pw)
        throw InvalidOccupation("more occupied orbitals than plane waves");
}

CoulombTensor::CoulombTensor(const PlaneWaveBasis &basis)
    : basis_(basis), offset_(basis.size() - 1) {
    vq_.resize(static_cast<std::size_t>(2 * offset_ + 1));
    for (int q = -offset_; q <= offset_; ++q)
        vq_[static_cast<std::size_t>(q + offset_)] =
            v_exp_fourier(basis.length(), basis.wavevector(q));
}

double CoulombTensor::element(int j, int j2, int l, int l2) const {
    for (int idx : {j, j2, l, l2})
        if (!basis_.contains(idx))
            throw std::out_of_range("coulomb tensor: index outside basis");
    return j + j2 == l + l2 ? transfer(j - l) : 0.0;
}

CMatrix build_fock(const CMatrix &h0, const CMatrix &density_up, const CMatrix &density_down,
                   const CoulombTensor &tensor, Spin spin) {
    const int n = tensor.basis().size();
    for (const CMatrix *m : {&h0, &density_up, &density_down})
        if (m->rows() != n || m->cols() != n)
            throw DimensionMismatch("build_fock: matrix dimension does not match basis");

    const CMatrix &same = spin == Spin::Up ? density_up : density_down;
    const CMatrix total = density_up + density_down;

    // Hartree: the density enters only through rho(q) = sum_l D_{l+q, l}.
    std::vector<cplx> rho(static_cast<std::size_t>(2 * n - 1), 0.0);
    for (int q = -(n - 1); q <= n - 1; ++q) {
        cplx acc = 0.0;
        for (int p = std::max(0, -q); p < std::min(n, n - q); ++p)
            acc += total(p + q, p);
        rho[static_cast<std::size_t>(q + n - 1)] = acc;
    }

    CMatrix f = h0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int q = a - b;
            cplx hartree = tensor.transfer(q) * rho[static_cast<std::size_t>(q + n - 1)];
            // Exchange: <j l|v|l' j'> with l = l' + (j' - j), transfer j - l'.
            cplx exchange = 0.0;
            for (int lp = 0; lp < n; ++lp) {
                const int l = lp + b - a;
                if (l < 0 || l >= n)
                    continue;
                exchange += same(lp, l) * tensor.transfer(a - lp);
            }
            f(a, b) += hartree - exchange;
        }
    }
    return f;
}

double hartree_fock_energy(const CMatrix &h0, const std::array<CMatrix, 2> &density,
                           const std::array<CMatrix, 2> &fock, double e_nn) {
    double e = 0.0;
    for (std::size_t s = 0; s < 2; ++s)
        e += 0.5 * (density[s].transpose().cwiseProduct(h0 + fock[s])).sum().real();
    return e + e_nn;
}

namespace {

/// Basis positions in the order j = +1, 0, -1, +2, -2, ...
std::vector<int> anchor_order(int n) {
    const int h = (n - 1) / 2;
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    order.push_back(h + 1);
    order.push_back(h);
    order.push_back(h - 1);
    for (int j = 2; j <= h; ++j) {
        order.push_back(h + j);
        order.push_back(h - j);
    }
    return order;
}

CMatrix occupied_density(const CMatrix &c, int n_occ) {
    const auto occ = c.leftCols(n_occ);
    return occ * occ.adjoint();
}

} // namespace

HermitianEigen deterministic_eigh(const CMatrix &m, double degeneracy_tol) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw NumericalError("hermitian eigensolver failed");
    HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
    const int n = static_cast<int>(m.rows());
    const auto order = anchor_order(n);

    for (int start = 0; start < n;) {
        int stop = start + 1;
        while (stop < n && out.values[stop] - out.values[stop - 1] < degeneracy_tol)
            ++stop;
        const int g = stop - start;
        if (g > 1) {
            const CMatrix sub = out.vectors.middleCols(start, g);
            CMatrix chosen(n, g);
            int found = 0;
            for (int p : order) {
                if (found == g)
                    break;
                CVector w = sub * sub.row(p).adjoint();
                for (int c = 0; c < found; ++c)
                    w -= chosen.col(c) * chosen.col(c).dot(w);
                const double nrm = w.norm();
                if (nrm > 1e-8)
                    chosen.col(found++) = w / nrm;
            }
            out.vectors.middleCols(start, g) = chosen;
        }
        start = stop;
    }
    for (int c = 0; c < n; ++c) {
        CVector v = out.vectors.col(c);
        fix_phase(v);
        out.vectors.col(c) = v;
    }
    return out;
}

ScfResult run_scf(const PlaneWaveBasis &basis, const Geometry &geom, const Occupation &occupation,
                  const ScfOptions &options) {
    occupation.validate(basis.size());
    const int n = basis.size();
    const CMatrix h0 = core_hamiltonian(basis, geom);
    const CoulombTensor tensor(basis);
    const double e_nn = nuclear_repulsion(geom);
    const std::array<int, 2> n_occ{occupation.n_up, occupation.n_down};

    ScfResult res;
    res.occupation = occupation;
    res.nuclear_repulsion = e_nn;

    // Core guess; UHF starts with the majority spin only to break symmetry.
    const auto core = deterministic_eigh(h0, options.degeneracy_tol);
    std::array<CMatrix, 2> density{occupied_density(core.vectors, n_occ[0]),
                                   CMatrix::Zero(n, n)};
    if (occupation.restricted)
        density[1] = density[0];

    std::deque<std::array<CMatrix, 2>> diis_focks;
    std::deque<CMatrix> diis_errors;

    auto fock_pair = [&](const std::array<CMatrix, 2> &d) {
        std::array<CMatrix, 2> f;
        f[0] = build_fock(h0, d[0], d[1], tensor, Spin::Up);
        f[1] = occupation.restricted ? f[0] : build_fock(h0, d[0], d[1], tensor, Spin::Down);
        return f;
    };

    double e_old = 0.0;
    for (int it = 1; it <= options.max_iter; ++it) {
        std::array<CMatrix, 2> fock = fock_pair(density);
        const double energy = hartree_fock_energy(h0, density, fock, e_nn);
        res.energy_history.push_back(energy);

        if (options.use_diis) {
            CMatrix err(n, 2 * n);
            for (std::size_t s = 0; s < 2; ++s)
                err.middleCols(static_cast<Eigen::Index>(s) * n, n) =
                    fock[s] * density[s] - density[s] * fock[s];
            diis_focks.push_back(fock);
            diis_errors.push_back(err);
            if (static_cast<int>(diis_focks.size()) > options.diis_size) {
                diis_focks.pop_front();
                diis_errors.pop_front();
            }
            const int m = static_cast<int>(diis_focks.size());
            if (m >= 2) {
                Eigen::MatrixXd b = Eigen::MatrixXd::Constant(m + 1, m + 1, -1.0);
                b(m, m) = 0.0;
                for (int i = 0; i < m; ++i)
                    for (int k = 0; k < m; ++k)
                        b(i, k) = (diis_errors[i].adjoint() * diis_errors[k]).trace().real();
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
                rhs[m] = -1.0;
                const Eigen::VectorXd w = b.colPivHouseholderQr().solve(rhs);
                if (w.allFinite()) {
                    for (std::size_t s = 0; s < 2; ++s) {
                        fock[s].setZero();
                        for (int i = 0; i < m; ++i)
                            fock[s] += w[i] * diis_focks[static_cast<std::size_t>(i)][s];
                    }
                }
            }
        }

        std::array<CMatrix, 2> next;
        for (std::size_t s = 0; s < 2; ++s) {
            if (occupation.restricted && s == 1) {
                next[1] = next[0];
                continue;
            }
            const auto eig = deterministic_eigh(fock[s], options.degeneracy_tol);
            next[s] = n_occ[s] > 0 ? occupied_density(eig.vectors, n_occ[s]) : CMatrix::Zero(n, n);
        }

        double d_change = 0.0;
        for (std::size_t s = 0; s < 2; ++s)
            d_change = std::max(d_change, (next[s] - density[s]).cwiseAbs().maxCoeff());
        if (!std::isfinite(d_change) || !std::isfinite(energy))
            throw NonFiniteError("SCF produced a non-finite density or energy");

        const bool done = it > 1 && d_change < options.density_tol &&
                          std::abs(energy - e_old) < options.energy_tol;
        e_old = energy;
        if (done) {
            res.converged = true;
            res.iterations = it;
            density = next;
            break;
        }
        if (options.use_diis) {
            density = next;
        } else {
            for (std::size_t s = 0; s < 2; ++s)
                density[s] = (1.0 - options.mixing) * density[s] + options.mixing * next[s];
        }
    }
    if (!res.converged)
        throw NonConvergence("SCF did not converge in " + std::to_string(options.max_iter) +
                                 " iterations",
                             options.max_iter);

    // Final consistent set: Fock of the converged density and its eigenvectors.
    res.fock = fock_pair(density);
    for (std::size_t s = 0; s < 2; ++s) {
        const auto eig = deterministic_eigh(res.fock[s], options.degeneracy_tol);
        res.coefficients[s] = eig.vectors;
        res.energies[s] = eig.values;
    }
    for (std::size_t s = 0; s < 2; ++s)
        res.density[s] = n_occ[s] > 0 ? occupied_density(res.coefficients[s], n_occ[s])
                                      : CMatrix::Zero(n, n);
    res.fock = fock_pair(res.density);
    res.total_energy = hartree_fock_energy(h0, res.density, res.fock, e_nn);
    return res;
}

PhaseAnchor fix_phase(CVector &coeffs) {
    const int n = static_cast<int>(coeffs.size());
    const int h = (n - 1) / 2;
    PhaseAnchor anchor;
    int pos = h + 1;
    if (std::abs(coeffs[pos]) < 1e-12) {
        anchor.fallback = true;
        int best = pos;
        for (int p = h + 1; p < n; ++p)
            if (std::abs(coeffs[p]) > std::abs(coeffs[best]))
                best = p;
        pos = best;
        anchor.anchor_j = pos - h;
        if (std::abs(coeffs[pos]) == 0.0)
            return anchor;
    }
    const cplx a = coeffs[pos];
    coeffs *= std::conj(a) / std::abs(a);
    coeffs[pos] = std::abs(a);
    return anchor;
}

ScfResult fix_orbital_phase(const ScfResult &result, PhaseFixReport *report) {
    ScfResult out = result;
    for (std::size_t s = 0; s < 2; ++s) {
        auto &c = out.coefficients[s];
        for (int mu = 0; mu < c.cols(); ++mu) {
            CVector v = c.col(mu);
            const auto anchor = fix_phase(v);
            c.col(mu) = v;
            if (anchor.fallback && report)
                report->fallbacks.push_back({static_cast<Spin>(s), mu, anchor.anchor_j});
        }
    }
    return out;
}

} // namespace wfsr
