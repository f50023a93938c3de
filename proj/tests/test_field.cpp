#include <doctest.h>

#include <cmath>

#include "zbw/field.hpp"

using namespace zbw;

namespace {

const ProfileGrid& canonical_grid() {
    static ProfileGrid grid =
        integrate_profile(ProfileParams::make(0.839), 0.05, 4001);
    return grid;
}

PhysicalParams slow() { return PhysicalParams(1e-8); }
PhysicalParams gamma_two() { return PhysicalParams(std::sqrt(3.0) / 2.0); }

} // namespace

TEST_CASE("quantum potential values") {
    const ProfileParams p = ProfileParams::make(0.839);
    const PhysicalParams phys = slow();
    CHECK(quantum_potential(p.R_M, p, phys) ==
          doctest::Approx(0.839).epsilon(1e-12));
    const double R_m = minimum_amplitude_ratio(p.f) * p.R_M;
    CHECK(quantum_potential(R_m, p, phys) ==
          doctest::Approx(1.339).epsilon(1e-12));

    const PhysicalParams fast = gamma_two();
    const double ratio = quantum_potential(0.9, p, fast) /
                         quantum_potential(0.9, p, phys);
    CHECK(ratio == doctest::Approx(fast.gamma_o() / phys.gamma_o()).epsilon(1e-14));
    CHECK(fast.gamma_o() == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(quantum_potential(0.0, p, phys), std::domain_error);
    CHECK_THROWS_AS(quantum_potential(1.01, p, phys), std::domain_error);
}

TEST_CASE("hamiltonian both routes") {
    const ProfileParams p = ProfileParams::make(0.839);
    const PhysicalParams phys = slow();
    CHECK(hamiltonian(p.R_M, p, phys) == doctest::Approx(1.839).epsilon(1e-12));
    const double R_m = minimum_amplitude_ratio(p.f) * p.R_M;
    CHECK(hamiltonian(R_m, p, phys) == doctest::Approx(2.339).epsilon(1e-12));
    CHECK(hamiltonian(R_m, p, phys) - hamiltonian(p.R_M, p, phys) ==
          doctest::Approx(0.5 * phys.energy_scale()).epsilon(1e-12));

    const ProfileGrid& g = canonical_grid();
    for (std::size_t i = 0; i < g.R().size(); i += 53) {
        const double R = g.R()[i];
        const double h1 = hamiltonian(R, p, phys);
        const double h2 = hamiltonian_from_curvature(R, Side::Plus, p, phys);
        CHECK(std::abs(h1 - h2) / h1 < 1e-9);
    }
}

TEST_CASE("harmonic potential approximation") {
    const ProfileParams p = ProfileParams::make(0.839);
    const PhysicalParams phys = slow();
    CHECK(harmonic_potential(0.0, p, phys) ==
          doctest::Approx(0.839).epsilon(1e-12));
    CHECK(harmonic_potential(0.1, p, phys) ==
          doctest::Approx(0.839 * (1.0 + 0.839 * 2.839 * 0.01)).epsilon(1e-14));
    CHECK(harmonic_potential(0.1, p, phys) ==
          doctest::Approx(0.85898).epsilon(1e-4));

    const ProfileGrid& g = canonical_grid();
    const double exact = quantum_potential(g.R_at(0.1), p, phys);
    CHECK(std::abs(harmonic_potential(0.1, p, phys) - exact) <
          1e-2 * phys.energy_scale());

    // value and curvature agree at the origin (curvature via central FD)
    const double h = 5e-3;
    auto vq = [&](double x) { return quantum_potential(g.R_at(x), p, phys); };
    const double fd2 = (vq(h) - 2.0 * vq(0.0) + vq(-h)) / (h * h);
    const double analytic =
        2.0 * phys.energy_scale() * p.f * p.f * (p.f + 2.0) /
        (p.lambda_r * p.lambda_r);
    CHECK(std::abs(fd2 - analytic) / analytic < 1e-4);
}

TEST_CASE("energy budget") {
    const ProfileParams p = ProfileParams::make(0.839);
    const PhysicalParams phys = slow();
    const EnergyBudget b = energy_budget(p, phys, 1.0);
    CHECK(b.V_Qm == doctest::Approx(0.839).epsilon(1e-12));
    CHECK(b.V_QM == doctest::Approx(1.339).epsilon(1e-12));
    CHECK(b.E_Q == b.V_QM);
    CHECK(b.E_NQ == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.E_full == doctest::Approx(0.839 + 1.5).epsilon(1e-12));
    CHECK(b.H_max - b.H_min == doctest::Approx(0.5).epsilon(1e-12));

    const EnergyBudget fast = energy_budget(p, gamma_two(), 1.0);
    const double g2 = gamma_two().gamma_o();
    CHECK(fast.E_full == doctest::Approx(b.E_full * g2).epsilon(1e-12));
    CHECK(fast.V_QM == doctest::Approx(b.V_QM * g2).epsilon(1e-12));

    const EnergyBudget half = energy_budget(p, phys, 0.5);
    CHECK(half.E_Q == doctest::Approx(0.839 + 1.0 / 8.0).epsilon(1e-12));

    CHECK_THROWS_AS(energy_budget(p, phys, 0.0), std::domain_error);
    CHECK_THROWS_AS(energy_budget(p, phys, 1.5), std::domain_error);
}

TEST_CASE("field samples satisfy the first integral") {
    const ProfileGrid& g = canonical_grid();
    const PhysicalParams phys(0.6);
    for (double x : {0.0, 0.1, 0.3, 0.5}) {
        const FieldSample s = field_sample(x * g.ell_max(), g, phys);
        CHECK(s.beta >= 1.0);
        CHECK(s.V_Q > 0.0);
        CHECK(s.H == doctest::Approx(phys.energy_scale() + s.V_Q).epsilon(1e-14));
        const double q = 1.0 + g.params().c1 / (s.R * s.R);
        CHECK(std::sqrt(s.beta) == doctest::Approx(q).epsilon(1e-14));
        CHECK(s.dS_dx == doctest::Approx(phys.p_o()).epsilon(1e-14));
        CHECK(s.minus_dS_dt == s.H);
    }
}

TEST_CASE("kg split certification") {
    const PhysicalParams phys(0.6);
    const KgSplitReport rep = kg_split_residual(canonical_grid(), phys);
    CHECK(rep.certified);
    CHECK(rep.max_residual_a < 1e-6);
    CHECK(rep.max_residual_b < 1e-6);
    CHECK(rep.n_evaluated > 3000);
    CHECK(rep.max_guidance_residual == 0.0);

    const std::string j = to_json(rep);
    CHECK(j.find("\"certified\": true") != std::string::npos);
    CHECK(j.find("max_residual_a") != std::string::npos);
    CHECK(j.find("n_samples") != std::string::npos);
}

TEST_CASE("kg split flags corrupted and foreign data") {
    const PhysicalParams phys(0.6);
    const ProfileGrid& g = canonical_grid();

    SUBCASE("amplitude scaled by 1.1 with c1 unchanged") {
        std::vector<double> R = g.R();
        for (double& v : R) v *= 1.1;
        const KgSplitReport rep =
            kg_split_residual(g.ell(), R, g.params(), phys);
        CHECK_FALSE(rep.certified);
        CHECK(rep.max_residual_a > 1e-2);
    }

    SUBCASE("non-relativistic cosine shape with relativistic constants") {
        std::vector<double> ell, R;
        for (int i = 0; i < 800; ++i) {
            const double x = 1.4 * i / 799.0;
            ell.push_back(x);
            R.push_back(std::cos(x));
        }
        const KgSplitReport rep =
            kg_split_residual(ell, R, g.params(), phys);
        CHECK_FALSE(rep.certified);
        CHECK(rep.max_residual_a > 1e-2);
    }
}
