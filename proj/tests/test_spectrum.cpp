#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rydgate/spectrum.hpp"

using namespace rydgate;

namespace {
constexpr double kPi = std::numbers::pi_v<double>;
}

TEST_CASE("single-atom dark state") {
    const StateVector d0 = dark_state(0.0);
    CHECK(std::abs(d0[static_cast<int>(Level::G1)] - Complex(1.0)) < 1e-15);
    const StateVector d1 = dark_state(0.5 * kPi);
    CHECK(std::abs(d1[static_cast<int>(Level::R)] - Complex(-1.0)) < 1e-15);

    CHECK(std::abs(inner(dark_state(0.25 * kPi), StateVector::basis(kAtomDim, 1)) -
                   Complex(1.0 / std::sqrt(2.0))) < 1e-12);

    // zero eigenvector of H(t) for any detuning when theta follows the pulse
    for (const double delta : {0.0, 50.0, -17.0, 125.0}) {
        PhysicalParams p = testutil::base_params(delta, 25.0);
        for (int k = 0; k <= 100; ++k) {
            const double t = 2.0 * p.tau_us * k / 100.0;
            const OperatorMatrix h = single_atom_hamiltonian(p, t);
            const StateVector d = dark_state(pulse(p, t).theta);
            CHECK(matvec(h, d).norm() < 1e-10 * std::max(1.0, h.frobenius_norm()));
        }
    }
}

TEST_CASE("interacting two-atom dark state") {
    const StateVector v0 = two_atom_dark_state(0.0);
    CHECK(std::abs(v0[kIdx11] - Complex(1.0)) < 1e-15);

    const StateVector v1 = two_atom_dark_state(0.5 * kPi);
    CHECK(std::abs(v1[kIdx11] - Complex(-1.0 / std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(v1[kIdxPP] - Complex(1.0 / std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(v1[kIdxRR]) == 0.0);  // no double Rydberg occupation at t = tau

    for (int k = 0; k <= 100; ++k) {
        const double theta = 0.5 * kPi * k / 100.0;
        CHECK(two_atom_dark_state(theta).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("zero eigenvector at Delta = 0 for nonzero V_R") {
        for (const double vr : {25.0, 10.0, 80.0}) {
            PhysicalParams p = testutil::base_params(0.0, vr);
            for (int k = 0; k <= 100; ++k) {
                const double t = 2.0 * p.tau_us * k / 100.0;
                const OperatorMatrix h = two_atom_hamiltonian(p, t);
                const StateVector v = two_atom_dark_state(pulse(p, t).theta);
                CHECK(matvec(h, v).norm() < 1e-9 * h.frobenius_norm());
            }
        }
    }

    SUBCASE("not an eigenvector once Delta is finite") {
        PhysicalParams p = testutil::base_params(50.0, 25.0);
        const double t = 0.5 * p.tau_us;  // theta = pi/4
        const OperatorMatrix h = two_atom_hamiltonian(p, t);
        const StateVector v = two_atom_dark_state(pulse(p, t).theta);
        CHECK(matvec(h, v).norm() > 0.01 * h.frobenius_norm());
    }
}

TEST_CASE("instantaneous spectrum") {
    SUBCASE("t = 0, Delta = V_R = 0: sums of single-atom values") {
        PhysicalParams p = testutil::base_params(0.0, 0.0);
        const EigenDecomposition single = eigh(single_atom_hamiltonian(p, 0.0));
        std::vector<double> sums;
        for (const double a : single.values)
            for (const double b : single.values) sums.push_back(a + b);
        std::sort(sums.begin(), sums.end());
        const EigenDecomposition pair = instantaneous_spectrum(p, 0.0);
        for (int k = 0; k < kPairDim; ++k)
            CHECK(std::abs(pair.values[k] - sums[k]) < 1e-9 * p.omega_rad());
        // multiset {-2, -1 x4, 0 x6, +1 x4, +2} in units of omega
        const double w = p.omega_rad();
        CHECK(pair.values.front() == doctest::Approx(-2.0 * w).epsilon(1e-10));
        CHECK(pair.values.back() == doctest::Approx(2.0 * w).epsilon(1e-10));
        int zeros = 0;
        for (const double v : pair.values)
            if (std::abs(v) < 1e-6 * w) ++zeros;
        CHECK(zeros == 6);
    }

    SUBCASE("|rr> decouples at t = tau with eigenvalue V_R") {
        const PhysicalParams p = testutil::base_params(50.0, 25.0);
        const EigenDecomposition eig = instantaneous_spectrum(p, p.tau_us);
        bool found = false;
        for (int k = 0; k < kPairDim; ++k) {
            if (std::norm(eig.vectors[k][kIdxRR]) > 0.999) {
                found = true;
                CHECK(eig.values[k] == doctest::Approx(p.v_r_rad()).epsilon(1e-10));
            }
        }
        CHECK(found);
    }
}

TEST_CASE("branch tracking and adiabatic connectivity") {
    SUBCASE("Delta = 0: |11> is not connected to |rr>") {
        const PhysicalParams p = testutil::base_params(0.0, 25.0);
        const SpectrumBranches sb = track_branches(p, 400);
        bool found = false;
        for (const Branch& br : sb.branches) {
            if (br.label_t0 != kIdx11) continue;
            found = true;
            CHECK(std::norm(br.vectors[sb.tau_sample][kIdxRR]) < 0.1);
            CHECK(std::norm(br.vectors.back()[kIdx11]) > 0.999);
        }
        CHECK(found);
    }

    SUBCASE("Delta = Omega = 2 V_R: |11> is connected to |rr>") {
        const PhysicalParams p = testutil::base_params(50.0, 25.0);
        const SpectrumBranches sb = track_branches(p, 400);
        for (const Branch& br : sb.branches) {
            if (br.label_t0 != kIdx11) continue;
            CHECK(std::norm(br.vectors[sb.tau_sample][kIdxRR]) > 0.9);
            CHECK(std::norm(br.vectors.back()[kIdx11]) > 0.999);
        }
        REQUIRE(sb.connectivity.count(kIdx11) == 1);
        CHECK(sb.connectivity.at(kIdx11) == kIdxRR);
    }

    SUBCASE("V_R = 0: the |11> branch stays on the zero-energy dark curve") {
        const PhysicalParams p = testutil::base_params(0.0, 0.0);
        const SpectrumBranches sb = track_branches(p, 400);
        for (const Branch& br : sb.branches) {
            if (br.label_t0 != kIdx11) continue;
            for (const double e : br.energies) CHECK(std::abs(e) < 1e-6 * p.omega_rad());
        }
    }

    SUBCASE("branch energies move no faster than the Hamiltonian") {
        const PhysicalParams p = testutil::base_params(50.0, 25.0);
        const SpectrumBranches sb = track_branches(p, 400);
        double dh_max = 0.0;
        for (const double t : sb.times)
            dh_max = std::max(dh_max, two_atom_hamiltonian_dt(p, t).frobenius_norm());
        const double dt = sb.times[1] - sb.times[0];
        for (const Branch& br : sb.branches)
            for (std::size_t k = 1; k < br.energies.size(); ++k)
                CHECK(std::abs(br.energies[k] - br.energies[k - 1]) < 1.5 * dh_max * dt + 1e-9);
    }

    SUBCASE("gauge and continuity contract") {
        const PhysicalParams p = testutil::base_params(50.0, 25.0);
        const SpectrumBranches sb = track_branches(p, 200);
        for (const Branch& br : sb.branches)
            for (std::size_t k = 1; k < br.vectors.size(); ++k) {
                const Complex o = inner(br.vectors[k - 1], br.vectors[k]);
                CHECK(o.real() > 0.5);
                CHECK(std::abs(o.imag()) < 1e-9);
            }
    }

    CHECK_THROWS_AS(track_branches(testutil::base_params(), 50), ConfigError);
}

TEST_CASE("perturbative phase quadrature") {
    const PhysicalParams p = testutil::base_params(0.0, 25.0);
    CHECK(perturbative_phase(p, 0.0) == 0.0);

    // closed form: integral of sin^4 over the full cycle is 3 tau / 4
    const double full = perturbative_phase(p, 2.0 * p.tau_us);
    const double expect = 0.75 * p.v_r_rad() * p.tau_us;
    CHECK(std::abs(full - expect) < 1e-6 * expect);

    // scales linearly with V_R
    PhysicalParams q = p;
    q.v_r_mhz *= 2.0;
    CHECK(perturbative_phase(q, 2.0 * q.tau_us) == doctest::Approx(2.0 * full).epsilon(1e-12));
}

TEST_CASE("adiabaticity metric") {
    PhysicalParams p = testutil::base_params(0.0, 25.0);
    const double at_preset = adiabaticity_metric(p, 200);
    CHECK(at_preset < 1.0);

    PhysicalParams slow = p;
    slow.tau_us *= 2.0;
    CHECK(adiabaticity_metric(slow, 200) < at_preset);

    PhysicalParams fast = p;
    fast.tau_us = 0.1 / p.omega_rad();  // Omega tau = 0.1
    CHECK(adiabaticity_metric(fast, 200) > 10.0);

    CHECK_THROWS_AS(adiabaticity_metric(p, 10), ConfigError);
}
