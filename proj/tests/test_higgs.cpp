#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>
#include <random>

#include "sp4/higgs.hpp"

using namespace sp4;
using namespace sp4::higgs;

namespace {

cplx rnd(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    return {g(rng), g(rng)};
}

Field random_grid(std::mt19937_64& rng, int n)
{
    std::vector<cplx> v(std::size_t(n) * n);
    for (auto& z : v) z = rnd(rng);
    return Field::grid(n, v);
}

Mat4 omega()
{
    Mat4 O = Mat4::Zero();
    O(0, 2) = O(1, 3) = 1.0;
    O(2, 0) = O(3, 1) = -1.0;
    return O;
}

}  // namespace

TEST_CASE("sl4 matrix layout")
{
    const Mat4 p = sl4_matrix(2.0, 3.0, 5.0);
    CHECK(p(0, 2) == cplx(3.0));
    CHECK(p(0, 3) == cplx(5.0));
    CHECK(p(1, 2) == cplx(5.0));
    CHECK(p(1, 3) == cplx(2.0));
    CHECK(p(2, 1) == cplx(1.0));
    CHECK(p(3, 0) == cplx(1.0));
    CHECK(p.cwiseAbs().sum() == doctest::Approx(17.0));
    // phi^T Omega + Omega phi = 0
    CHECK((p.transpose() * omega() + omega() * p).norm() == 0.0);
}

TEST_CASE("graded element view matches the sl4 matrix")
{
    std::mt19937_64 rng(1);
    HiggsData h;
    h.mu = random_grid(rng, 4);
    h.nu = random_grid(rng, 4);
    h.q2 = random_grid(rng, 4);
    const Sl4Higgs s = build_sl4(h);
    CHECK(s.n == 4);
    for (std::size_t k = 0; k < h.nodes(); ++k) CHECK((to_graded_element(h, k).element().matrix() - s.phi[k]).norm() == 0.0);
}

TEST_CASE("Tr phi^2 = 4 q2 exactly")
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        const cplx mu = rnd(rng), nu = rnd(rng), q2 = rnd(rng);
        const auto inv = hitchin_invariants(build_sl4(make_constant(mu, nu, q2)));
        CHECK(inv.p1.at(0) == 4.0 * q2);
        CHECK(inv.odd_trace_sup < 1e-14 * (1.0 + std::norm(mu) + std::norm(nu) + std::norm(q2)));
    }
}

TEST_CASE("Tr phi^4 against the symbolic fixture and the characteristic polynomial")
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const cplx mu = rnd(rng), nu = rnd(rng), q2 = rnd(rng);
        const Mat4 p = sl4_matrix(mu, nu, q2);
        const cplx want = kQuarticFixture.c_mu_nu * mu * nu + kQuarticFixture.c_q2q2 * q2 * q2;
        const auto inv = hitchin_invariants(build_sl4(make_constant(mu, nu, q2)));
        CHECK(std::abs(inv.p2.at(0) - want) < 1e-12 * (1.0 + std::abs(want)));
        // det(l - phi) = l^4 - 2 q2 l^2 + q2^2 - mu nu
        const cplx l = rnd(rng);
        const cplx det = (l * Mat4::Identity() - p).determinant();
        const cplx poly = std::pow(l, 4) - 2.0 * q2 * l * l + q2 * q2 - mu * nu;
        CHECK(std::abs(det - poly) < 1e-10 * (1.0 + std::abs(poly)));
    }
}

TEST_CASE("zeta4 fixed points")
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) CHECK(zeta4_fixed_point_check(make_constant(rnd(rng), rnd(rng))));
    HiggsData h;
    h.mu = random_grid(rng, 4);
    h.nu = random_grid(rng, 4);
    CHECK(zeta4_fixed_point_check(h));
    CHECK_THROWS_AS(zeta4_fixed_point_check(make_constant(1.0, 1.0, 0.5)), std::invalid_argument);
}

TEST_CASE("gauge action")
{
    const HiggsData h = make_constant(cplx(0.7, -0.2), cplx(1.3, 0.4), cplx(0.1, 0.9));
    SUBCASE("group law exact for dyadic and unit parameters")
    {
        const std::vector<cplx> lams{2.0, 0.5, -1.0, cplx(0.0, 1.0), cplx(0.0, -4.0), 0.25};
        for (cplx a : lams)
            for (cplx b : lams) {
                const HiggsData l = gauge_action(a, gauge_action(b, h)), r = gauge_action(a * b, h);
                CHECK(l.mu.at(0) == r.mu.at(0));
                CHECK(l.nu.at(0) == r.nu.at(0));
                CHECK(l.q2.at(0) == r.q2.at(0));
            }
    }
    SUBCASE("group law to rounding for generic parameters")
    {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 100; ++t) {
            const cplx a = rnd(rng), b = rnd(rng);
            const HiggsData l = gauge_action(a, gauge_action(b, h)), r = gauge_action(a * b, h);
            CHECK(std::abs(l.mu.at(0) - r.mu.at(0)) < 1e-14 * std::abs(r.mu.at(0)));
            CHECK(std::abs(l.nu.at(0) - r.nu.at(0)) < 1e-14 * std::abs(r.nu.at(0)));
            CHECK(l.q2.at(0) == r.q2.at(0));
        }
    }
    SUBCASE("identity and invariants")
    {
        const HiggsData g = gauge_action(1.0, h);
        CHECK(g.mu.at(0) == h.mu.at(0));
        CHECK(g.nu.at(0) == h.nu.at(0));
        const HiggsData k = gauge_action(cplx(0.3, 1.7), h);
        const auto a = hitchin_invariants(build_sl4(h)), b = hitchin_invariants(build_sl4(k));
        CHECK(a.p1.at(0) == b.p1.at(0));
        CHECK(std::abs(a.p2.at(0) - b.p2.at(0)) < 1e-14);
    }
    CHECK_THROWS_AS(gauge_action(0.0, h), std::invalid_argument);
}

TEST_CASE("stability flag")
{
    CHECK(stability_flag(make_constant(1.0, 0.0, 0.0, 2, 2)).flag == Stability::stable);
    CHECK(stability_flag(make_constant(1.0, 0.5, 0.0, 3, 4)).flag == Stability::stable);
    CHECK(stability_flag(make_constant(0.0, 1.0, 0.0, 2, 2)).flag == Stability::strictly_semistable_or_unstable);
    CHECK(stability_flag(make_constant(1.0, 1.0, 0.0, 2, 1)).flag == Stability::strictly_semistable_or_unstable);
    CHECK(stability_flag(make_constant(1.0, 1.0, 0.0, 2, 0)).flag == Stability::strictly_semistable_or_unstable);
    CHECK(stability_flag(make_constant(1.0, 1.0, 0.0, 2, 4)).flag == Stability::strictly_semistable_or_unstable);
    CHECK_FALSE(stability_flag(make_constant(1.0, 1.0, 0.0, 2, 1)).note.empty());
}

TEST_CASE("normal form")
{
    std::mt19937_64 rng(6);
    HiggsData h;
    h.mu = random_grid(rng, 4);
    h.nu = random_grid(rng, 4);
    h.q2 = random_grid(rng, 4);
    const HiggsData nf = normal_form(h);
    CHECK(nf.mu.sup() == doctest::Approx(1.0).epsilon(1e-14));
    std::size_t best = 0;
    for (std::size_t k = 0; k < nf.mu.v.size(); ++k)
        if (std::abs(nf.mu.v[k]) > std::abs(nf.mu.v[best])) best = k;
    CHECK(nf.mu.v[best].imag() == 0.0);
    CHECK(nf.mu.v[best].real() > 0.0);

    const HiggsData g = normal_form(gauge_action(cplx(0.4, -1.1), h));
    for (std::size_t k = 0; k < h.nodes(); ++k) {
        CHECK(std::abs(g.mu.v[k] - nf.mu.v[k]) < 1e-13);
        CHECK(std::abs(g.nu.v[k] - nf.nu.v[k]) < 1e-12 * (1.0 + std::abs(nf.nu.v[k])));
    }
    // mu nu is gauge invariant
    for (std::size_t k = 0; k < h.nodes(); ++k)
        CHECK(std::abs(nf.mu.v[k] * nf.nu.v[k] - h.mu.v[k] * h.nu.v[k]) < 1e-12 * (1.0 + std::abs(h.mu.v[k] * h.nu.v[k])));
}

TEST_CASE("Cayley partner")
{
    const cplx mu(0.3, 0.2), nu(-1.0, 0.5), q2(0.7, 0.0);
    const CayleyData c = cayley_partner(make_constant(mu, nu, q2));
    REQUIRE(c.psi.size() == 1);
    const Mat2& psi = c.psi[0];
    CHECK(psi(0, 0) == q2);
    CHECK(psi(0, 1) == mu);
    CHECK(psi(1, 0) == nu);
    CHECK(psi(1, 1) == q2);
    // psi is self-adjoint for the quadratic form Q_W
    const Mat2 qp = c.Q_W * psi;
    CHECK((qp - qp.transpose()).norm() == 0.0);
    CHECK(std::abs(psi.trace() - 2.0 * q2) == 0.0);
    CHECK(std::abs(psi.determinant() - (q2 * q2 - mu * nu)) < 1e-15);
}

TEST_CASE("frame and forms")
{
    const HiggsData h = make_constant(cplx(0.5, 0.1), cplx(-0.2, 0.3));
    const cyclic::CyclicFrame f = to_frame(h);
    CHECK(f.phi.at(-cyclic::alpha1()) == cplx(1.0));
    CHECK(f.phi.at(-cyclic::alpha2()) == cplx(-0.2, 0.3));
    CHECK(f.phi.at(cyclic::highest_root()) == cplx(0.5, 0.1));
    CHECK(cyclic::check_cyclic(to_forms(h)).all_pass());
    CHECK_THROWS_AS(to_frame(make_constant(1.0, 1.0, 0.1)), std::invalid_argument);
}

TEST_CASE("grid size mismatch is rejected")
{
    HiggsData h;
    h.mu = Field::grid(4, std::vector<cplx>(16, 1.0));
    h.nu = Field::grid(8, std::vector<cplx>(64, 1.0));
    CHECK_THROWS(build_sl4(h));
}
