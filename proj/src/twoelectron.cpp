#include "wfsr/twoelectron.hpp"

#include "wfsr/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace wfsr {

std::string to_string(ExchangeSymmetry s) {
    return s == ExchangeSymmetry::Singlet ? "singlet" : "triplet";
}

TwoElectronHamiltonian::TwoElectronHamiltonian(double length, int n_qubits, const Geometry &geom,
                                               bool interacting)
    : length_(length), n_(n_qubits), interacting_(interacting), e_nn_(wfsr::nuclear_repulsion(geom)) {
    const MomentumIndexMap map{n_qubits};
    const auto d = static_cast<Eigen::Index>(map.dim());
    momenta_.resize(map.dim());
    for (std::size_t i = 0; i < map.dim(); ++i)
        momenta_[i] = map.momentum(i);

    const auto wavevector = [&](int j) { return 2.0 * kPi * j / length; };
    h1_ = CMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
            const double dk = wavevector(momenta_[static_cast<std::size_t>(a)] -
                                         momenta_[static_cast<std::size_t>(b)]);
            const double vt = v_exp_fourier(length, dk);
            cplx acc = 0.0;
            for (const auto &atom : geom.atoms())
                acc -= static_cast<double>(atom.charge) * std::polar(vt, -dk * atom.position);
            h1_(a, b) = acc;
        }
        const double k = wavevector(momenta_[static_cast<std::size_t>(a)]);
        h1_(a, a) += 0.5 * k * k;
    }
    const int qmax = static_cast<int>(d) - 1;
    vq_.resize(static_cast<std::size_t>(2 * qmax + 1));
    for (int q = -qmax; q <= qmax; ++q)
        vq_[static_cast<std::size_t>(q + qmax)] = v_exp_fourier(length, wavevector(q));
}

void TwoElectronHamiltonian::apply_rows(std::span<const cplx> in, std::span<cplx> out,
                                        std::size_t a) const {
    const std::size_t d = register_dim();
    const int half = static_cast<int>(d / 2);
    const int qmax = static_cast<int>(d) - 1;
    const MomentumIndexMap map{n_};
    const int ja = momenta_[a];
    for (std::size_t b = 0; b < d; ++b) {
        cplx acc = e_nn_ * in[a * d + b];
        for (std::size_t c = 0; c < d; ++c) {
            acc += h1_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) * in[c * d + b];
            acc += h1_(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(c)) * in[a * d + c];
        }
        if (interacting_) {
            // out(ja, jb) gathers v~(q) in(ja + q, jb - q), no wrap-around.
            const int jb = momenta_[b];
            for (int q = -qmax; q <= qmax; ++q) {
                const int src_a = ja + q, src_b = jb - q;
                if (src_a < -half || src_a >= half || src_b < -half || src_b >= half)
                    continue;
                acc += vq_[static_cast<std::size_t>(q + qmax)] *
                       in[map.index(src_a) * d + map.index(src_b)];
            }
        }
        out[a * d + b] = acc;
    }
}

void TwoElectronHamiltonian::apply(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t d = register_dim();
    if (in.size() != d * d || out.size() != d * d)
        throw DimensionMismatch("two-electron hamiltonian: vector length mismatch");
    const auto n = static_cast<long>(d);
#pragma omp parallel for schedule(static)
    for (long a = 0; a < n; ++a)
        apply_rows(in, out, static_cast<std::size_t>(a));
}

void TwoElectronHamiltonian::apply_serial(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t d = register_dim();
    if (in.size() != d * d || out.size() != d * d)
        throw DimensionMismatch("two-electron hamiltonian: vector length mismatch");
    for (std::size_t a = 0; a < d; ++a)
        apply_rows(in, out, a);
}

CMatrix TwoElectronHamiltonian::product_basis_matrix(const PlaneWaveBasis &basis) const {
    const int npw = basis.size();
    const MomentumIndexMap map{n_};
    if (basis.max_index() >= static_cast<int>(register_dim() / 2))
        throw IndexOverflow("two-electron hamiltonian: basis exceeds register");
    const int qmax = static_cast<int>(register_dim()) - 1;
    const Eigen::Index dim = static_cast<Eigen::Index>(npw) * npw;
    CMatrix h = CMatrix::Zero(dim, dim);
    std::vector<Eigen::Index> reg(static_cast<std::size_t>(npw));
    for (int p = 0; p < npw; ++p)
        reg[static_cast<std::size_t>(p)] = static_cast<Eigen::Index>(map.index(basis.momentum_at(p)));

    for (int p = 0; p < npw; ++p) {
        for (int r = 0; r < npw; ++r) {
            const Eigen::Index row = p * npw + r;
            h(row, row) += e_nn_;
            for (int c = 0; c < npw; ++c) {
                h(row, c * npw + r) += h1_(reg[p], reg[c]);
                h(row, p * npw + c) += h1_(reg[r], reg[c]);
            }
            if (!interacting_)
                continue;
            const int jp = basis.momentum_at(p), jr = basis.momentum_at(r);
            for (int q = -qmax; q <= qmax; ++q) {
                const int sp = jp + q, sr = jr - q;
                if (!basis.contains(sp) || !basis.contains(sr))
                    continue;
                h(row, basis.position_of(sp) * npw + basis.position_of(sr)) +=
                    vq_[static_cast<std::size_t>(q + qmax)];
            }
        }
    }
    return h;
}

TwoElectronState solve_two_electron(const PlaneWaveBasis &basis, const Geometry &geom,
                                    ExchangeSymmetry symmetry, bool interacting) {
    const int npw = basis.size();
    if (npw * npw > 961)
        throw std::invalid_argument("solve_two_electron: N_pw^2 exceeds 961");
    int n_qubits = 1;
    while ((1 << (n_qubits - 1)) <= basis.max_index())
        ++n_qubits;
    const TwoElectronHamiltonian ham(basis.length(), n_qubits, geom, interacting);
    const CMatrix h = ham.product_basis_matrix(basis);

    // Orthonormal (anti)symmetrised product basis.
    const bool singlet = symmetry == ExchangeSymmetry::Singlet;
    const int sector = singlet ? npw * (npw + 1) / 2 : npw * (npw - 1) / 2;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(npw * npw, sector);
    int col = 0;
    const double w = 1.0 / std::sqrt(2.0);
    for (int p = 0; p < npw; ++p) {
        for (int r = p; r < npw; ++r) {
            if (p == r) {
                if (singlet)
                    b(p * npw + p, col++) = 1.0;
                continue;
            }
            b(p * npw + r, col) = w;
            b(r * npw + p, col) = singlet ? w : -w;
            ++col;
        }
    }
    const CMatrix hs = b.transpose().cast<cplx>() * h * b.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hs);
    if (solver.info() != Eigen::Success)
        throw NumericalError("two-electron eigensolver failed");

    CVector flat = b.cast<cplx>() * solver.eigenvectors().col(0);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < flat.size(); ++i)
        if (std::abs(flat[i]) > std::abs(flat[best]) + 1e-12)
            best = i;
    flat *= std::conj(flat[best]) / std::abs(flat[best]);

    TwoElectronState out{basis, CMatrix(npw, npw), symmetry, solver.eigenvalues()[0]};
    for (int p = 0; p < npw; ++p)
        for (int r = 0; r < npw; ++r)
            out.coefficients(p, r) = flat[p * npw + r];
    return out;
}

Statevector embed_two_electron(const TwoElectronState &state, int n_qubits) {
    const MomentumIndexMap map{n_qubits};
    const PlaneWaveBasis &basis = state.basis;
    if (basis.max_index() >= static_cast<int>(map.dim() / 2))
        throw IndexOverflow("embed: basis does not fit the register");
    const std::size_t d = map.dim();
    std::vector<cplx> amps(d * d, cplx{0.0});
    for (int p = 0; p < basis.size(); ++p)
        for (int r = 0; r < basis.size(); ++r)
            amps[map.index(basis.momentum_at(p)) * d + map.index(basis.momentum_at(r))] =
                state.coefficients(p, r);
    Statevector s(2 * n_qubits, std::move(amps));
    s.normalize();
    return s;
}

void u_swap(Statevector &state, int n_register) {
    // Layout on entry: [k0 (n), k1 (n), a0, a1].
    const int a0 = 2 * n_register;
    for (int q = a0; q > 0; --q)
        apply_swap(state, q - 1, q);
    // Now [a0, k0, k1, a1]; bring a1 to position n + 1.
    for (int q = 2 * n_register + 1; q > n_register + 1; --q)
        apply_swap(state, q - 1, q);
}

Statevector enhance_two_electron(const TwoElectronState &state_lr, const Model &model,
                                 const SampleData &sample, const CaseConfig &config) {
    if (model.case_label != config.label)
        throw std::invalid_argument("enhance: model trained for a different case");
    if (state_lr.basis.size() != config.n_pw_lr)
        throw std::invalid_argument("enhance: LR state does not match the case basis");
    const int n_lr = config.n_lr, n_hr = config.n_hr;

    const Statevector lr = embed_two_electron(state_lr, n_lr);
    std::vector<cplx> amps(lr.dim() * 4, cplx{0.0});
    for (std::size_t i = 0; i < lr.dim(); ++i)
        amps[i * 4] = lr[i];
    Statevector state(2 * n_lr + 2, std::move(amps));
    u_swap(state, n_lr);

    const Circuit circuit = build_ansatz_circuit(model.ansatz, &sample);
    for (int reg = 0; reg < 2; ++reg) {
        const int offset = reg * n_hr;
        u_init_inplace(state, offset, n_hr);
        u_shift(state, sample.center_of_mass, config.length, offset, n_hr);
        circuit.apply(state, model.theta, offset);
    }
    return state;
}

double two_electron_fidelity(const Statevector &pred, const TwoElectronState &truth) {
    if (pred.n_qubits() % 2 != 0)
        throw DimensionMismatch("two-electron fidelity: odd qubit count");
    return fidelity(pred, embed_two_electron(truth, pred.n_qubits() / 2));
}

double energy_expectation(const Statevector &state, const TwoElectronHamiltonian &hamiltonian) {
    if (state.n_qubits() != 2 * hamiltonian.n_qubits())
        throw DimensionMismatch("energy: state does not match the hamiltonian registers");
    std::vector<cplx> h_psi(state.dim());
    hamiltonian.apply(state.amplitudes(), h_psi);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i)
        acc += std::conj(state[i]) * h_psi[i];
    return acc.real();
}

double product_fidelity_estimate(std::span<const double> orbital_fidelities) {
    double f = 1.0;
    for (double x : orbital_fidelities) {
        if (x < 0.0 || x > 1.0 + 1e-12)
            throw std::invalid_argument("product estimate: fidelity outside [0, 1]");
        f *= x;
    }
    return f;
}

std::vector<TwoElectronRow> two_electron_study(const CaseConfig &config,
                                               std::span<const double> bond_lengths,
                                               const Model *ansatz1, const Model *ansatz2) {
    const Model none = Model::none(config);
    const std::size_t n_r = bond_lengths.size();
    std::vector<TwoElectronRow> rows(2 * n_r);
    const auto n_jobs = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n_jobs; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double r = bond_lengths[k / 2];
        const auto sym = k % 2 == 0 ? ExchangeSymmetry::Singlet : ExchangeSymmetry::Triplet;
        const Geometry geom = Geometry::chain(2, r);
        const SampleData sample = SampleData::from_geometry(geom, config.length, config.n_hr);
        const auto lr = solve_two_electron(config.basis_lr(), geom, sym);
        const auto hr = solve_two_electron(config.basis_hr(), geom, sym);
        const TwoElectronHamiltonian ham(config.length, config.n_hr, geom);

        TwoElectronRow &row = rows[k];
        row.bond_length = r;
        row.symmetry = sym;
        row.e_lr = lr.energy;
        row.e_hr = hr.energy;
        const auto run = [&](const Model &m, double &f, double &e) {
            const Statevector pred = enhance_two_electron(lr, m, sample, config);
            f = two_electron_fidelity(pred, hr);
            e = energy_expectation(pred, ham);
        };
        run(none, row.f_noansatz, row.e_noansatz);
        if (ansatz1)
            run(*ansatz1, row.f_ansatz1, row.e_ansatz1);
        if (ansatz2)
            run(*ansatz2, row.f_ansatz2, row.e_ansatz2);
    }
    return rows;
}

} // namespace wfsr
