#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sp4/cyclic.hpp"

using namespace sp4;
using namespace sp4::cyclic;
using liealg::hat_index;

namespace {

cplx rnd(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cplx z;
    do z = cplx(u(rng), u(rng));
    while (std::abs(z) < 0.1);
    return z;
}

CyclicFrame random_frame(std::mt19937_64& rng) { return CyclicFrame::make(rnd(rng), rnd(rng), rnd(rng)); }

const Condition& cond(const CyclicReport& r, const std::string& name)
{
    for (const auto& c : r.conditions)
        if (c.name == name) return c;
    throw std::runtime_error("missing condition " + name);
}

}  // namespace

TEST_CASE("frame support")
{
    CHECK(alpha1() == liealg::Root{1, 1});
    CHECK(alpha2() == liealg::Root{-2, 0});
    CHECK(highest_root() == liealg::Root{0, 2});

    std::mt19937_64 rng(1);
    const CyclicFrame f = random_frame(rng);
    const LieElem p = f.phi_elem(), s = f.phi_star();
    CHECK(p[0] == cplx(0.0));
    CHECK(p[1] == cplx(0.0));
    for (const auto& r : liealg::all_roots()) {
        if (p.coeff(r) != cplx(0.0)) CHECK(hat_index(r) == 3);
        if (s.coeff(r) != cplx(0.0)) CHECK(hat_index(r) == 1);
    }
    // -Theta is the conjugate transpose
    CHECK((s.matrix() - p.matrix().adjoint()).norm() < 1e-15);
}

TEST_CASE("frames from the graded data satisfy every condition")
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const CyclicReport r = check_cyclic(random_frame(rng).forms());
        CHECK(r.all_pass());
        CHECK(r.failures() == 0);
    }
}

TEST_CASE("violations are detected by the matching condition")
{
    std::mt19937_64 rng(3);
    const CyclicFrame f = random_frame(rng);

    FormPair bad = f.forms();
    bad.dz += LieElem::cartan(0.3, 0.0);
    CHECK_FALSE(cond(check_cyclic(bad), "graded_vanishing").pass);

    bad = f.forms();
    bad.dzbar = cplx(2.0) * bad.dzbar;
    CHECK_FALSE(cond(check_cyclic(bad), "lambda").pass);

    bad = f.forms();
    bad.dzbar += f.phi_elem();
    const CyclicReport r = check_cyclic(bad);
    CHECK_FALSE(cond(r, "type_reality").pass);
    CHECK(cond(r, "graded_vanishing").pass);
}

TEST_CASE("sign of -B(x, Theta x)")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        LieElem x;
        for (int k = 0; k < liealg::kDim; ++k) x[k] = cplx(g(rng), g(rng));
        CHECK(sign_check(x));
        // -B(x, Theta x) = 6 Tr(x x^*)
        const double want = 6.0 * (x.matrix() * x.matrix().adjoint()).trace().real();
        CHECK(sign_value(x) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK_FALSE(sign_check(LieElem()));
}

TEST_CASE("rigidity kernel is trivial for generic frames")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const CyclicFrame f = random_frame(rng);
        CHECK(rigidity_nullspace(f, alpha1()).dimension == 0);
        CHECK(rigidity_nullspace(f, alpha2()).dimension == 0);
    }
}

TEST_CASE("rigidity kernel grows when a simple-root component vanishes")
{
    const CyclicFrame f = CyclicFrame::make(1.0, 0.0, 0.7);
    CHECK_THROWS_AS(rigidity_nullspace(f, alpha2()), std::invalid_argument);
    const RigidityResult r = rigidity_nullspace(f, alpha2(), true);
    CHECK_FALSE(r.hypothesis_met);
    CHECK(r.dimension > 0);
    CHECK(r.basis.size() == std::size_t(r.dimension));

    // each kernel vector is Lambda-fixed
    const auto inv = liealg::build_involutions(liealg::build_ptds());
    for (const auto& g : r.basis) {
        const LieElem z = g.element();
        CHECK((liealg::apply_involution(inv.lambda, z) - z).norm() < 1e-10);
        CHECK(z.coeff(-alpha2()) == cplx(0.0));
    }
}

TEST_CASE("rigidity rejects a non-simple zeroed root")
{
    const CyclicFrame f = CyclicFrame::make(1.0, 1.0, 1.0);
    CHECK_THROWS_AS(rigidity_nullspace(f, highest_root()), std::invalid_argument);
}

TEST_CASE("graded form round trip")
{
    std::mt19937_64 rng(6);
    const LieElem p = random_frame(rng).phi_elem();
    const GradedForm g = GradedForm::from_elem(p, FormType::t10);
    CHECK((g.element() - p).norm() == 0.0);
    const auto hc = g.hat_components();
    for (const auto& [j, e] : hc)
        if (j != 3) CHECK(e.norm() == 0.0);
}

TEST_CASE("Cartan projection of the frame bracket")
{
    std::mt19937_64 rng(7);
    const CyclicFrame f = random_frame(rng);
    const LieElem c = cartan_bracket_projection(f);
    for (const auto& r : liealg::all_roots()) CHECK(c.coeff(r) == cplx(0.0));
    // diagonal of the matrix commutator [Phi^*, Phi]
    const Mat4 m = liealg::commutator(f.phi_star().matrix(), f.phi_elem().matrix());
    const LieElem d = LieElem::cartan(m(0, 0), m(1, 1));
    CHECK((c - d).norm() < 1e-13);
}
