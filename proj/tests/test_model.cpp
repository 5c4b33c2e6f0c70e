#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "rydgate/model.hpp"

using namespace rydgate;
using testutil::max_entry_diff;

namespace {
constexpr double kPi = std::numbers::pi_v<double>;
}

TEST_CASE("pulse endpoints and range") {
    const PhysicalParams p = testutil::base_params();
    const double omega = p.omega_rad();

    const PulseSample s0 = pulse(p, 0.0);
    CHECK(s0.omega1 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s0.omega2 == doctest::Approx(omega).epsilon(1e-15));
    CHECK(s0.theta == doctest::Approx(0.0).epsilon(1e-15));

    const PulseSample s1 = pulse(p, p.tau_us);
    CHECK(s1.omega1 == doctest::Approx(omega).epsilon(1e-15));
    CHECK(s1.omega2 == doctest::Approx(0.0).scale(omega));
    CHECK(s1.theta == doctest::Approx(0.5 * kPi).epsilon(1e-12));

    const PulseSample s2 = pulse(p, 2.0 * p.tau_us);
    CHECK(s2.omega1 == doctest::Approx(0.0).scale(omega));
    CHECK(s2.omega2 == doctest::Approx(omega).epsilon(1e-12));
    CHECK(s2.theta == doctest::Approx(0.0).scale(1.0));

    CHECK_THROWS_AS(pulse(p, -0.01), TimeOutOfRange);
    CHECK_THROWS_AS(pulse(p, 2.0 * p.tau_us + 0.01), TimeOutOfRange);
    // floating-point slack at the endpoints is tolerated
    CHECK_NOTHROW(pulse(p, 2.0 * p.tau_us + 1e-12));
}

TEST_CASE("pulse amplitude identity omega1^2 + omega2^2 = omega^2") {
    const PhysicalParams p = testutil::base_params();
    std::uniform_real_distribution<double> u(0.0, 2.0 * p.tau_us);
    for (int rep = 0; rep < 200; ++rep) {
        const PulseSample s = pulse(p, u(testutil::rng()));
        const double lhs = s.omega1 * s.omega1 + s.omega2 * s.omega2;
        const double rhs = p.omega_rad() * p.omega_rad();
        CHECK(std::abs(lhs - rhs) < 1e-12 * rhs);
        CHECK(s.omega1 >= 0.0);
        CHECK(s.omega2 >= 0.0);
        CHECK(s.theta >= 0.0);
        CHECK(s.theta <= 0.5 * kPi);
    }
}

TEST_CASE("single-atom Hamiltonian structure") {
    PhysicalParams p = testutil::base_params();
    p.delta_mhz = 13.0;

    SUBCASE("t = 0, Delta = 0: only |p><r| coupling at strength omega") {
        p.delta_mhz = 0.0;
        const OperatorMatrix h = single_atom_hamiltonian(p, 0.0);
        for (int i = 0; i < kAtomDim; ++i)
            for (int j = 0; j < kAtomDim; ++j) {
                const bool pr = (i == 2 && j == 3) || (i == 3 && j == 2);
                if (pr)
                    CHECK(h(i, j).real() == doctest::Approx(p.omega_rad()).epsilon(1e-15));
                else
                    CHECK(std::abs(h(i, j)) < 1e-12);
            }
    }

    SUBCASE("|0> row and column vanish at every t") {
        std::uniform_real_distribution<double> u(0.0, 2.0 * p.tau_us);
        for (int rep = 0; rep < 50; ++rep) {
            const OperatorMatrix h = single_atom_hamiltonian(p, u(testutil::rng()));
            for (int k = 0; k < kAtomDim; ++k) {
                CHECK(h(0, k) == Complex(0.0));
                CHECK(h(k, 0) == Complex(0.0));
            }
            CHECK(h.hermiticity_error() == 0.0);
        }
    }

    SUBCASE("coupled 3-level block has eigenvalues {-omega, 0, omega} at Delta = 0") {
        p.delta_mhz = 0.0;
        for (const double t : {0.03, 0.1, 0.125, 0.2, 0.31, 0.49}) {
            const OperatorMatrix h = single_atom_hamiltonian(p, t);
            OperatorMatrix block(3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) block(i, j) = h(i + 1, j + 1);
            const EigenDecomposition eig = eigh(block);
            const double omega = p.omega_rad();
            CHECK(std::abs(eig.values[0] + omega) < 1e-9 * omega);
            CHECK(std::abs(eig.values[1]) < 1e-9 * omega);
            CHECK(std::abs(eig.values[2] - omega) < 1e-9 * omega);
        }
    }
}

TEST_CASE("two-atom Hamiltonian") {
    PhysicalParams p = testutil::base_params(17.0, 25.0);
    std::uniform_real_distribution<double> u(0.0, 2.0 * p.tau_us);

    SUBCASE("V_R = 0 reduces to the tensor sum, entrywise") {
        p.v_r_mhz = 0.0;
        const double t = u(testutil::rng());
        const OperatorMatrix h1 = single_atom_hamiltonian(p, t);
        const OperatorMatrix eye = OperatorMatrix::identity(kAtomDim);
        const OperatorMatrix expect =
            tensor_product(h1, eye) + tensor_product(eye, h1);
        CHECK(max_entry_diff(two_atom_hamiltonian(p, t), expect) == 0.0);
    }

    SUBCASE("<rr|H|rr> = V_R at every t") {
        for (int rep = 0; rep < 25; ++rep) {
            const OperatorMatrix h = two_atom_hamiltonian(p, u(testutil::rng()));
            CHECK(h(kIdxRR, kIdxRR).real() == doctest::Approx(p.v_r_rad()).epsilon(1e-15));
        }
    }

    SUBCASE("Hermitian and exchange symmetric at every t") {
        const OperatorMatrix s = atom_swap();
        for (int rep = 0; rep < 25; ++rep) {
            const OperatorMatrix h = two_atom_hamiltonian(p, u(testutil::rng()));
            CHECK(h.hermiticity_error() == 0.0);
            CHECK(max_entry_diff(matmul(s, matmul(h, s)), h) == 0.0);
        }
    }

    SUBCASE("spectrum at Delta = V_R = 0 is the sum multiset of single-atom values") {
        p.delta_mhz = 0.0;
        p.v_r_mhz = 0.0;
        const double t = 0.17;
        // oracle: brute-force sums of the 4-level single-atom eigenvalues
        const EigenDecomposition single = eigh(single_atom_hamiltonian(p, t));
        std::vector<double> sums;
        for (const double a : single.values)
            for (const double b : single.values) sums.push_back(a + b);
        std::sort(sums.begin(), sums.end());

        const EigenDecomposition pair = eigh(two_atom_hamiltonian(p, t));
        for (int k = 0; k < kPairDim; ++k)
            CHECK(std::abs(pair.values[k] - sums[k]) < 1e-9 * p.omega_rad());
    }
}

TEST_CASE("collapse operators") {
    PhysicalParams p = testutil::base_params();

    SUBCASE("all rates zero -> empty list") {
        CHECK(collapse_operators(p).empty());
    }

    SUBCASE("8 channels when all rates are positive, in a fixed order") {
        p.gamma0_mhz = 3.0;
        p.gamma1_mhz = 3.0;
        p.gamma_r_mhz = 0.001;
        p.gamma_rd_mhz = 0.01;
        const auto ops = collapse_operators(p);
        REQUIRE(ops.size() == 8);

        // C0 of atom 1 maps |p1> to sqrt(gamma0)|01>
        const StateVector in = StateVector::basis(kPairDim, pair_index(Level::P, Level::G1));
        const StateVector out = matvec(ops[0], in);
        for (int i = 0; i < kPairDim; ++i) {
            const Complex expect =
                (i == kIdx01) ? Complex(std::sqrt(p.gamma0_rad()), 0.0) : Complex(0.0);
            CHECK(std::abs(out[i] - expect) < 1e-14);
        }

        // Crd^dag Crd = gamma_rd * I for both atoms (indices 3 and 7)
        for (const int idx : {3, 7}) {
            const OperatorMatrix k = matmul(ops[idx].adjoint(), ops[idx]);
            CHECK(max_entry_diff(k, Complex(p.gamma_rd_rad()) *
                                        OperatorMatrix::identity(kPairDim)) < 1e-12);
        }
    }

    SUBCASE("zero-rate channels are omitted individually") {
        p.gamma_rd_mhz = 0.01;
        const auto ops = collapse_operators(p);
        CHECK(ops.size() == 2);  // Crd for each atom only
    }

    SUBCASE("negative rate rejected") {
        p.gamma0_mhz = -1.0;
        CHECK_THROWS_AS(collapse_operators(p), ConfigError);
    }
}

TEST_CASE("parameter validation") {
    PhysicalParams p = testutil::base_params();
    p.omega_mhz = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = testutil::base_params();
    p.tau_us = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = testutil::base_params();
    p.set_gamma_p_mhz(6.0);
    CHECK(p.gamma0_mhz == doctest::Approx(3.0));
    CHECK(p.gamma1_mhz == doctest::Approx(3.0));
    CHECK(p.gamma_p_mhz() == doctest::Approx(6.0));
}

TEST_CASE("analytic dH/dt matches finite differences away from the kink") {
    const PhysicalParams p = testutil::base_params(10.0, 20.0);
    const double eps = 1e-7;
    for (const double t : {0.05, 0.2, 0.3, 0.45}) {
        const OperatorMatrix dh = two_atom_hamiltonian_dt(p, t);
        const OperatorMatrix fd = Complex(1.0 / (2.0 * eps)) *
                                  (two_atom_hamiltonian(p, t + eps) -
                                   two_atom_hamiltonian(p, t - eps));
        CHECK(max_entry_diff(dh, fd) < 1e-5 * std::max(1.0, dh.max_abs()));
    }
}
