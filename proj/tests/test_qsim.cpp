#include "wfsr/qsim.hpp"

#include "wfsr/errors.hpp"
#include "wfsr/pwbasis.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace wfsr;
using namespace wfsr::testing;

namespace {

CMatrix dense(const Matrix2 &m) {
    CMatrix d(2, 2);
    d << m[0], m[1], m[2], m[3];
    return d;
}

CMatrix dense_ry(double t) {
    CMatrix m(2, 2);
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
}

CMatrix dense_rx(double t) {
    CMatrix m(2, 2);
    m << std::cos(t / 2), cplx(0, -std::sin(t / 2)), cplx(0, -std::sin(t / 2)), std::cos(t / 2);
    return m;
}

CMatrix dense_rz(double t) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = std::polar(1.0, -t / 2);
    m(1, 1) = std::polar(1.0, t / 2);
    return m;
}

CMatrix dft(int n, bool inverse) {
    const Eigen::Index d = Eigen::Index{1} << n;
    CMatrix f(d, d);
    const double sign = inverse ? -1.0 : 1.0;
    for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index j = 0; j < d; ++j)
            f(m, j) = std::polar(1.0 / std::sqrt(double(d)),
                                 sign * 2.0 * kPi * double(j * m) / double(d));
    return f;
}

/// Unitary with U|0> = |a>: a phase times the Householder reflection that
/// maps e_0 onto the phase-rotated target.
CMatrix preparation_unitary(const CVector &a) {
    const Eigen::Index d = a.size();
    const double phi = std::arg(a[0]);
    const CVector w = std::polar(1.0, -phi) * a;
    CVector v = -w;
    v[0] += 1.0;
    CMatrix r = CMatrix::Identity(d, d);
    if (v.norm() > 1e-14)
        r -= 2.0 * v * v.adjoint() / v.squaredNorm();
    return std::polar(1.0, phi) * r;
}

} // namespace

TEST_CASE("statevector basics") {
    Statevector s(3);
    CHECK(s.dim() == 8);
    CHECK(s[0] == cplx(1.0));
    CHECK(s.norm() == 1.0);
    CHECK_THROWS_AS(Statevector(2, std::vector<cplx>(3)), std::invalid_argument);
    Statevector z(1, {0.0, 0.0});
    CHECK_THROWS_AS(z.normalize(), NormalizationError);
}

TEST_CASE("momentum index map") {
    const MomentumIndexMap map{3};
    CHECK(map.index(0) == 0);
    CHECK(map.index(3) == 3);
    CHECK(map.index(-1) == 7);
    CHECK(map.index(-4) == 4);
    CHECK(map.momentum(4) == -4);
    for (int j = -4; j < 4; ++j)
        CHECK(map.momentum(map.index(j)) == j);
    CHECK_THROWS_AS((void)map.index(4), IndexOverflow);
    CHECK_THROWS_AS((void)map.index(-5), IndexOverflow);
}

TEST_CASE("amplitude encoding") {
    const cplx a(0.6, 0.0), b(0.0, 0.48), c(0.64, 0.0);
    // Ascending order j = -1, 0, +1.
    const std::vector<cplx> coeffs{c, a, b};
    const Statevector s = encode_amplitudes(coeffs, 2);
    CHECK(s[0] == a);
    CHECK(s[1] == b);
    CHECK(s[2] == cplx(0.0));
    CHECK(s[3] == c);
    CHECK(decode_amplitudes(s, 3) == coeffs);

    const std::vector<cplx> delta{0.0, 1.0, 0.0};
    const Statevector d = encode_amplitudes(delta, 3);
    CHECK(d[0] == cplx(1.0));
    CHECK(d.norm() == 1.0);

    std::mt19937_64 rng(5);
    const CVector r = random_coeffs(15, rng);
    const std::vector<cplx> rv(r.data(), r.data() + r.size());
    CHECK(decode_amplitudes(encode_amplitudes(rv, 4), 15) == rv);
    CHECK(encode_amplitudes(rv, 4)[8] == cplx(0.0)); // Nyquist

    const std::vector<cplx> off{0.0, 1.0 + 5e-7, 0.0};
    CHECK(encode_amplitudes(off, 2).norm() == doctest::Approx(1.0).epsilon(1e-15));
    const std::vector<cplx> bad{0.0, 1.1, 0.0};
    CHECK_THROWS_AS((void)encode_amplitudes(bad, 2), NormalizationError);
    CHECK_THROWS_AS((void)encode_amplitudes(rv, 3), IndexOverflow);
}

TEST_CASE("single-qubit gates match dense matrices") {
    std::mt19937_64 rng(17);
    for (int n = 1; n <= 4; ++n)
        for (int q = 0; q < n; ++q)
            for (double t : {0.0, 0.37, -1.9, 3.1}) {
                const Statevector s0 = random_state(n, rng);
                const CVector v0 = to_vector(s0);
                Statevector a = s0, b = s0, c = s0;
                apply_rx(a, q, t);
                apply_ry(b, q, t);
                apply_rz(c, q, t);
                CHECK(max_abs_diff(a, embed_1q(dense_rx(t), q, n) * v0) < 1e-12);
                CHECK(max_abs_diff(b, embed_1q(dense_ry(t), q, n) * v0) < 1e-12);
                CHECK(max_abs_diff(c, embed_1q(dense_rz(t), q, n) * v0) < 1e-12);
                CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
            }
    CHECK(max_abs(dense(ry_matrix(0.7)) - dense_ry(0.7)) < 1e-15);
    CHECK(max_abs(dense(rx_matrix(0.7)) - dense_rx(0.7)) < 1e-15);
    CHECK(max_abs(dense(rz_matrix(0.7)) - dense_rz(0.7)) < 1e-15);
}

TEST_CASE("two-qubit gates match dense matrices exhaustively") {
    for (int n = 2; n <= 4; ++n)
        for (int c = 0; c < n; ++c)
            for (int t = 0; t < n; ++t) {
                if (c == t)
                    continue;
                const CMatrix cx = unitary_of(n, [&](Statevector &s) { apply_cnot(s, c, t); });
                CHECK(max_abs(cx - dense_cnot(c, t, n)) == 0.0);
                const CMatrix sw = unitary_of(n, [&](Statevector &s) { apply_swap(s, c, t); });
                const CMatrix swap_dense = dense_cnot(c, t, n) * dense_cnot(t, c, n) * dense_cnot(c, t, n);
                CHECK(max_abs(sw - swap_dense) == 0.0);
            }
    Statevector s(2);
    CHECK_THROWS_AS(apply_cnot(s, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(apply_swap(s, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(apply_rx(s, 2, 0.1), std::invalid_argument);
}

TEST_CASE("qubit 0 is the most significant bit") {
    Statevector s(3);
    apply_rx(s, 0, kPi);
    CHECK(std::abs(s[4]) == doctest::Approx(1.0));
    Statevector t(3);
    apply_rx(t, 2, kPi);
    CHECK(std::abs(t[1]) == doctest::Approx(1.0));
}

TEST_CASE("random 3-qubit circuit agrees with a dense matrix chain") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    const int n = 3;
    Statevector s = random_state(n, rng);
    CVector v = to_vector(s);
    for (int step = 0; step < 40; ++step) {
        const int kind = step % 5, q = step % n, r = (step + 1) % n;
        const double t = ang(rng);
        switch (kind) {
        case 0:
            apply_rx(s, q, t);
            v = embed_1q(dense_rx(t), q, n) * v;
            break;
        case 1:
            apply_ry(s, q, t);
            v = embed_1q(dense_ry(t), q, n) * v;
            break;
        case 2:
            apply_rz(s, q, t);
            v = embed_1q(dense_rz(t), q, n) * v;
            break;
        case 3:
            apply_cnot(s, q, r);
            v = dense_cnot(q, r, n) * v;
            break;
        default:
            apply_gate(s, Gate{GateKind::SWAP, {q, r}, 0.0, {}});
            v = dense_cnot(q, r, n) * dense_cnot(r, q, n) * dense_cnot(q, r, n) * v;
        }
    }
    CHECK(max_abs_diff(s, v) < 1e-12);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gate identities and dispatcher") {
    std::mt19937_64 rng(29);
    const Statevector s0 = random_state(3, rng);
    Statevector s = s0;
    apply_ry(s, 1, 0.0);
    CHECK(max_abs_diff(s, to_vector(s0)) == 0.0);
    apply_cnot(s, 0, 2);
    apply_cnot(s, 0, 2);
    CHECK(max_abs_diff(s, to_vector(s0)) == 0.0);

    Statevector g = s0, d = s0;
    apply_gate(g, Gate{GateKind::RY, {2}, 0.4, {}});
    apply_ry(d, 2, 0.4);
    CHECK(max_abs_diff(g, to_vector(d)) == 0.0);
    CHECK_THROWS_AS(apply_gate(g, Gate{GateKind::CNOT, {1}, 0.0, {}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(g, Gate{GateKind::CNOT, {1, 1}, 0.0, {}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(g, Gate{GateKind::RX, {5}, 0.0, {}}), std::invalid_argument);
}

TEST_CASE("diagonal phases act on the addressed register and commute") {
    std::mt19937_64 rng(31);
    const Statevector s0 = random_state(4, rng);
    const std::vector<double> v{0.3, -1.2, 2.0, 0.7}, w{1.0, 0.1, -0.4, 0.9};
    Statevector a = s0, b = s0;
    apply_diagonal_phase(a, 1, 2, v, 0.8);
    apply_diagonal_phase(a, 1, 2, w, -0.3);
    apply_diagonal_phase(b, 1, 2, w, -0.3);
    apply_diagonal_phase(b, 1, 2, v, 0.8);
    CHECK(max_abs_diff(a, to_vector(b)) < 1e-15);

    Statevector c = s0;
    apply_diagonal_phase(c, 1, 2, v, 0.8);
    for (std::size_t i = 0; i < 16; ++i) {
        const std::size_t local = (i >> 1) & 3; // qubits 1, 2 of 4
        CHECK(std::abs(c[i] - s0[i] * std::polar(1.0, -0.8 * v[local])) < 1e-15);
    }
    std::vector<cplx> phases{1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    Statevector e = s0;
    apply_diagonal(e, 2, 2, phases);
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(std::abs(e[i] - s0[i] * phases[i & 3]) < 1e-15);
    CHECK_THROWS_AS(apply_diagonal(e, 2, 2, std::span<const cplx>(phases).first(3)),
                    DimensionMismatch);
}

TEST_CASE("QFT matches the DFT matrix and round-trips") {
    std::mt19937_64 rng(37);
    for (int n = 1; n <= 4; ++n) {
        const CMatrix f = unitary_of(n, [&](Statevector &s) { qft(s, 0, n); });
        CHECK(max_abs(f - dft(n, false)) < 1e-12);
        const CMatrix fi = unitary_of(n, [&](Statevector &s) { qft(s, 0, n, true); });
        CHECK(max_abs(fi - dft(n, true)) < 1e-12);
    }
    Statevector zero(3);
    qft(zero, 0, 3);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(std::abs(zero[i] - cplx(1.0 / std::sqrt(8.0))) < 1e-15);

    const Statevector s0 = random_state(6, rng);
    Statevector s = s0;
    qft(s, 1, 4);
    qft(s, 1, 4, true);
    CHECK(max_abs_diff(s, to_vector(s0)) < 1e-12);

    // Sub-register QFT equals I (x) F (x) I.
    const CMatrix sub = unitary_of(4, [&](Statevector &x) { qft(x, 1, 2); });
    CHECK(max_abs(sub - kron(kron(identity(2), dft(2, false)), identity(2))) < 1e-12);
}

TEST_CASE("QFT of encoded momentum amplitudes samples psi(x_m)") {
    std::mt19937_64 rng(41);
    for (auto [length, n_pw, n] : {std::tuple{30.0, 7, 3}, std::tuple{40.0, 15, 4}, std::tuple{30.0, 15, 5}}) {
        const PlaneWaveBasis basis(length, n_pw);
        const CVector c = random_coeffs(n_pw, rng);
        Statevector s = encode_amplitudes(std::vector<cplx>(c.data(), c.data() + c.size()), n);
        qft(s, 0, n);
        const double scale = std::sqrt(double(1 << n) / length);
        double worst = 0.0;
        for (int m = 0; m < (1 << n); ++m) {
            const double x = m * length / (1 << n);
            worst = std::max(worst, std::abs(s[static_cast<std::size_t>(m)] * scale - basis.evaluate(c, x)));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("fidelity") {
    std::mt19937_64 rng(43);
    const Statevector a = random_state(3, rng), b = random_state(3, rng);
    Statevector ap = a;
    for (auto &x : ap.amplitudes())
        x *= std::polar(1.0, 0.77);
    CHECK(fidelity(a, ap) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-14));
    Statevector e0(2), e1(2);
    apply_rx(e1, 1, kPi);
    CHECK(fidelity(e0, e1) < 1e-30);
    CHECK_THROWS_AS((void)fidelity(a, Statevector(2)), DimensionMismatch);

    SUBCASE("equals the all-zero probability of the overlap circuit") {
        for (int trial = 0; trial < 10; ++trial) {
            const Statevector x = random_state(4, rng), y = random_state(4, rng);
            const CMatrix v_x = preparation_unitary(to_vector(x));
            REQUIRE(max_abs(v_x * v_x.adjoint() - identity(16)) < 1e-12);
            REQUIRE((v_x.col(0) - to_vector(x)).norm() < 1e-12);
            const CVector out = v_x.adjoint() * to_vector(y);
            CHECK(std::abs(std::norm(out[0]) - fidelity(x, y)) < 1e-12);
        }
    }
}
