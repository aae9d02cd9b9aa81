#include "wfsr/twoelectron.hpp"

#include "wfsr/errors.hpp"
#include "wfsr/scf.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wfsr;
using wfsr::testing::max_abs;

namespace {

/// Full 2n-qubit Hamiltonian from matrix elements, independent of the
/// gather kernel.
CMatrix dense_oracle(double length, int n, const Geometry &geom, bool interacting) {
    const MomentumIndexMap map{n};
    const auto d = static_cast<Eigen::Index>(map.dim());
    const double dk = 2.0 * kPi / length;
    CMatrix h1 = CMatrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
        const int ja = map.momentum(static_cast<std::size_t>(a));
        h1(a, a) += 0.5 * (dk * ja) * (dk * ja);
        for (Eigen::Index b = 0; b < d; ++b) {
            const int jb = map.momentum(static_cast<std::size_t>(b));
            const double q = dk * (ja - jb);
            for (const auto &atom : geom.atoms())
                h1(a, b) -= static_cast<double>(atom.charge) * v_exp_fourier(length, q) *
                            std::polar(1.0, -q * atom.position);
        }
    }
    const CMatrix id = CMatrix::Identity(d, d);
    CMatrix h = testing::kron(h1, id) + testing::kron(id, h1);
    if (interacting)
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = 0; b < d; ++b)
                for (Eigen::Index c = 0; c < d; ++c)
                    for (Eigen::Index e = 0; e < d; ++e) {
                        const int ja = map.momentum(a), jb = map.momentum(b);
                        const int jc = map.momentum(c), je = map.momentum(e);
                        if (ja + jb == jc + je)
                            h(a * d + b, c * d + e) += v_exp_fourier(length, dk * (ja - jc));
                    }
    h += nuclear_repulsion(geom) * CMatrix::Identity(d * d, d * d);
    return h;
}

CMatrix matrix_of(const TwoElectronHamiltonian &ham) {
    const std::size_t d = ham.register_dim() * ham.register_dim();
    CMatrix m(d, d);
    std::vector<cplx> in(d), out(d);
    for (std::size_t c = 0; c < d; ++c) {
        std::fill(in.begin(), in.end(), cplx{0.0});
        in[c] = 1.0;
        ham.apply(in, out);
        for (std::size_t r = 0; r < d; ++r)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = out[r];
    }
    return m;
}

CMatrix exchange_operator(int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    CMatrix p = CMatrix::Zero(d * d, d * d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b)
            p(b * d + a, a * d + b) = 1.0;
    return p;
}

CVector exchanged(const Statevector &s, int n) {
    const std::size_t d = std::size_t{1} << n;
    CVector out(static_cast<Eigen::Index>(d * d));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            out[static_cast<Eigen::Index>(b * d + a)] = s[a * d + b];
    return out;
}

Geometry asymmetric() { return Geometry({{1, -1.3}, {2, 0.4}, {1, 2.9}}); }

} // namespace

TEST_CASE("hamiltonian matches the dense matrix-element oracle") {
    for (int n : {2, 3}) {
        CAPTURE(n);
        for (bool interacting : {false, true}) {
            const TwoElectronHamiltonian ham(20.0, n, asymmetric(), interacting);
            const CMatrix h = matrix_of(ham);
            CHECK(max_abs(h - dense_oracle(20.0, n, asymmetric(), interacting)) < 1e-12);
            CHECK(max_abs(h - h.adjoint()) < 1e-12);
            const CMatrix p = exchange_operator(n);
            CHECK(max_abs(h * p - p * h) < 1e-12);
        }
    }
}

TEST_CASE("product-basis matrix is the matching block of the full operator") {
    const PlaneWaveBasis basis(20.0, 5);
    const TwoElectronHamiltonian ham(20.0, 3, asymmetric());
    const CMatrix full = matrix_of(ham);
    const CMatrix block = ham.product_basis_matrix(basis);
    const MomentumIndexMap map{3};
    double diff = 0.0;
    for (int p = 0; p < 5; ++p)
        for (int r = 0; r < 5; ++r)
            for (int p2 = 0; p2 < 5; ++p2)
                for (int r2 = 0; r2 < 5; ++r2) {
                    const auto row = static_cast<Eigen::Index>(map.index(basis.momentum_at(p)) * 8 +
                                                               map.index(basis.momentum_at(r)));
                    const auto col = static_cast<Eigen::Index>(map.index(basis.momentum_at(p2)) * 8 +
                                                               map.index(basis.momentum_at(r2)));
                    diff = std::max(diff, std::abs(block(p * 5 + r, p2 * 5 + r2) - full(row, col)));
                }
    CHECK(diff < 1e-14);
    // The one-body block agrees with the single-particle core hamiltonian.
    const CMatrix h0 = core_hamiltonian(basis, asymmetric());
    double d1 = 0.0;
    for (int p = 0; p < 5; ++p)
        for (int q = 0; q < 5; ++q)
            d1 = std::max(d1, std::abs(ham.one_body()(map.index(basis.momentum_at(p)),
                                                      map.index(basis.momentum_at(q))) -
                                       h0(p, q)));
    CHECK(d1 < 1e-14);
}

TEST_CASE("parallel apply equals the serial reference bitwise") {
    const TwoElectronHamiltonian ham(30.0, 4, Geometry::chain(2, 1.4));
    std::mt19937_64 rng(9);
    const auto psi = testing::random_state(8, rng);
    std::vector<cplx> a(psi.dim()), b(psi.dim());
    ham.apply_serial(psi.amplitudes(), a);
    for (int threads : {1, 3}) {
        const testing::ThreadCount tc(threads);
        ham.apply(psi.amplitudes(), b);
        CHECK(a == b);
    }
    std::vector<cplx> small(4);
    CHECK_THROWS_AS(ham.apply(small, b), DimensionMismatch);
}

TEST_CASE("non-interacting electrons fill the lowest orbitals") {
    const PlaneWaveBasis basis(30.0, 7);
    const Geometry geom = Geometry::chain(2, 2.0);
    const Eigen::VectorXd eps = deterministic_eigh(core_hamiltonian(basis, geom)).values;
    const double e_nn = nuclear_repulsion(geom);
    const auto s = solve_two_electron(basis, geom, ExchangeSymmetry::Singlet, false);
    const auto t = solve_two_electron(basis, geom, ExchangeSymmetry::Triplet, false);
    CHECK(s.energy == doctest::Approx(2.0 * eps[0] + e_nn).epsilon(1e-12));
    CHECK(t.energy == doctest::Approx(eps[0] + eps[1] + e_nn).epsilon(1e-12));
}

TEST_CASE("exact states carry the exchange symmetry of their sector") {
    const PlaneWaveBasis basis(30.0, 7);
    const Geometry geom = Geometry::chain(2, 1.5);
    const auto s = solve_two_electron(basis, geom, ExchangeSymmetry::Singlet);
    const auto t = solve_two_electron(basis, geom, ExchangeSymmetry::Triplet);
    CHECK(max_abs(s.coefficients - s.coefficients.transpose()) < 1e-12);
    CHECK(max_abs(t.coefficients + t.coefficients.transpose()) < 1e-12);
    for (int p = 0; p < 7; ++p)
        CHECK(t.coefficients(p, p) == cplx{0.0});
    CHECK(s.coefficients.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.coefficients.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.energy < t.energy);

    const auto hr_s = solve_two_electron(PlaneWaveBasis(30.0, 15), geom, ExchangeSymmetry::Singlet);
    const auto hr_t = solve_two_electron(PlaneWaveBasis(30.0, 15), geom, ExchangeSymmetry::Triplet);
    CHECK(two_electron_fidelity(embed_two_electron(hr_s, 4), hr_t) < 1e-20);

    CHECK_THROWS_AS((void)solve_two_electron(PlaneWaveBasis(30.0, 33), geom,
                                             ExchangeSymmetry::Singlet),
                    std::invalid_argument);
}

TEST_CASE("exact singlet lies below restricted Hartree-Fock") {
    const PlaneWaveBasis basis(30.0, 15);
    for (double r : {1.0, 1.5, 2.0, 4.0}) {
        CAPTURE(r);
        const Geometry geom = Geometry::chain(2, r);
        const auto hf = run_scf(basis, geom, Occupation::rhf(1));
        const auto fci = solve_two_electron(basis, geom, ExchangeSymmetry::Singlet);
        CHECK(fci.energy <= hf.total_energy + 1e-10);
        // Correlation stays small near equilibrium; stretched bonds leave the band.
        if (r <= 2.0)
            CHECK(fci.energy >= hf.total_energy - 0.1);
    }
}

TEST_CASE("energy expectation reproduces the eigenvalue and bounds trial states") {
    const PlaneWaveBasis basis(30.0, 15);
    const Geometry geom = Geometry::chain(2, 1.5);
    const TwoElectronHamiltonian ham(30.0, 4, geom);
    for (auto sym : {ExchangeSymmetry::Singlet, ExchangeSymmetry::Triplet}) {
        const auto st = solve_two_electron(basis, geom, sym);
        CHECK(std::abs(energy_expectation(embed_two_electron(st, 4), ham) - st.energy) < 1e-10);
    }
    const auto ground = solve_two_electron(basis, geom, ExchangeSymmetry::Singlet);
    for (int trial = 0; trial < 5; ++trial) {
        // Random singlet-sector state on the same plane-wave block.
        TwoElectronState s = ground;
        const CMatrix m = CMatrix::Random(15, 15);
        s.coefficients = m + m.transpose();
        s.coefficients /= s.coefficients.norm();
        const Statevector psi = embed_two_electron(s, 4);
        std::vector<cplx> hpsi(psi.dim());
        ham.apply(psi.amplitudes(), hpsi);
        cplx e{0.0};
        for (std::size_t i = 0; i < psi.dim(); ++i)
            e += std::conj(psi[i]) * hpsi[i];
        CHECK(std::abs(e.imag()) < 1e-12);
        CHECK(e.real() >= ground.energy - 1e-12);
    }
    CHECK_THROWS_AS((void)energy_expectation(Statevector(6), ham), DimensionMismatch);
}

TEST_CASE("u_swap interleaves ancillas with the electron registers") {
    const int n = 2;
    for (std::size_t k0 = 0; k0 < 4; ++k0)
        for (std::size_t k1 = 0; k1 < 4; ++k1) {
            Statevector s(2 * n + 2);
            s.amplitudes()[0] = 0.0;
            s.amplitudes()[((k0 << n) | k1) << 2] = 1.0;
            u_swap(s, n);
            // Expected order [a0, k0, a1, k1] with both ancillas zero.
            const std::size_t expect = (k0 << (n + 1)) | k1;
            CHECK(std::abs(s[expect] - cplx{1.0}) < 1e-15);
        }
}

TEST_CASE("NoAnsatz enhancement is the zero-padded LR state") {
    const CaseConfig cfg = CaseConfig::case_i();
    const Geometry geom = Geometry::chain(2, 2.0);
    const SampleData sample = SampleData::from_geometry(geom, cfg.length, cfg.n_hr);
    for (auto sym : {ExchangeSymmetry::Singlet, ExchangeSymmetry::Triplet}) {
        const auto lr = solve_two_electron(cfg.basis_lr(), geom, sym);
        const Statevector pred = enhance_two_electron(lr, Model::none(cfg), sample, cfg);
        TwoElectronState padded{cfg.basis_hr(), CMatrix::Zero(cfg.n_pw_hr, cfg.n_pw_hr), sym, 0.0};
        const int off = (cfg.n_pw_hr - cfg.n_pw_lr) / 2;
        padded.coefficients.block(off, off, cfg.n_pw_lr, cfg.n_pw_lr) = lr.coefficients;
        CHECK(testing::max_abs_diff(pred, testing::to_vector(embed_two_electron(padded, cfg.n_hr))) <
              1e-14);
    }
}

TEST_CASE("enhancement with a trained-shape model preserves the exchange sector") {
    const CaseConfig cfg = CaseConfig::case_i();
    const Geometry geom = Geometry::chain(2, 3.0);
    const SampleData sample = SampleData::from_geometry(geom, cfg.length, cfg.n_hr);
    for (auto family : {AnsatzFamily::Ansatz1, AnsatzFamily::Ansatz2}) {
        Model m;
        m.case_label = cfg.label;
        m.ansatz = AnsatzConfig::defaults(family, cfg.n_hr);
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        m.theta.resize(m.ansatz.parameter_count());
        for (auto &t : m.theta)
            t = u(rng);
        for (auto sym : {ExchangeSymmetry::Singlet, ExchangeSymmetry::Triplet}) {
            const auto lr = solve_two_electron(cfg.basis_lr(), geom, sym);
            const Statevector pred = enhance_two_electron(lr, m, sample, cfg);
            const double sign = sym == ExchangeSymmetry::Singlet ? 1.0 : -1.0;
            CHECK((exchanged(pred, cfg.n_hr) - sign * testing::to_vector(pred)).norm() < 1e-10);
            CHECK(testing::to_vector(pred).norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    Model wrong = Model::none(CaseConfig::case_ii());
    const auto lr = solve_two_electron(cfg.basis_lr(), geom, ExchangeSymmetry::Singlet);
    CHECK_THROWS_AS((void)enhance_two_electron(lr, wrong, sample, cfg), std::invalid_argument);
    const auto hr = solve_two_electron(cfg.basis_hr(), geom, ExchangeSymmetry::Singlet);
    CHECK_THROWS_AS((void)enhance_two_electron(hr, Model::none(cfg), sample, cfg),
                    std::invalid_argument);
}

TEST_CASE("product fidelity estimate") {
    const std::vector<double> f{0.9, 0.8};
    CHECK(product_fidelity_estimate(f) == doctest::Approx(0.72).epsilon(1e-15));
    CHECK(product_fidelity_estimate({}) == 1.0);
    const std::vector<double> bad{1.2};
    CHECK_THROWS_AS((void)product_fidelity_estimate(bad), std::invalid_argument);
}

TEST_CASE("study rows follow bond length then sector") {
    const CaseConfig cfg = CaseConfig::case_i();
    const std::vector<double> r{1.0, 3.0};
    const auto rows = two_electron_study(cfg, r, nullptr, nullptr);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].symmetry == ExchangeSymmetry::Singlet);
    CHECK(rows[1].symmetry == ExchangeSymmetry::Triplet);
    CHECK(rows[2].bond_length == 3.0);
    for (const auto &row : rows) {
        CHECK(std::isnan(row.f_ansatz1));
        CHECK(row.f_noansatz > 0.5);
        CHECK(row.f_noansatz <= 1.0);
        CHECK(row.e_hr <= row.e_lr + 1e-12);
        CHECK(row.e_noansatz == doctest::Approx(row.e_lr).epsilon(1e-9));
    }
}
