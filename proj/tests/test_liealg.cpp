#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sp4/liealg.hpp"

using namespace sp4;
using namespace sp4::liealg;

namespace {

Mat4 omega()
{
    Mat4 O = Mat4::Zero();
    O(0, 2) = O(1, 3) = 1.0;
    O(2, 0) = O(3, 1) = -1.0;
    return O;
}

// Coordinates of an sp4 matrix in the basis, by least squares on the 16 entries.
Eigen::Matrix<cplx, kDim, 1> coords(const Mat4& m)
{
    Eigen::Matrix<cplx, 16, kDim> B;
    for (int k = 0; k < kDim; ++k) B.col(k) = basis_matrix(k).reshaped();
    Eigen::Matrix<cplx, 16, 1> rhs = m.reshaped();
    return B.colPivHouseholderQr().solve(rhs);
}

// ad built from matrix commutators only.
AdMatrix ad_from_matrices(const Mat4& x)
{
    AdMatrix ad;
    for (int k = 0; k < kDim; ++k) ad.col(k) = coords(x * basis_matrix(k) - basis_matrix(k) * x);
    return ad;
}

LieElem random_elem(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    LieElem e;
    for (int k = 0; k < kDim; ++k) e[k] = cplx(g(rng), g(rng));
    return e;
}

}  // namespace

TEST_CASE("basis matrices lie in sp4 and are independent")
{
    const Mat4 O = omega();
    Eigen::Matrix<cplx, 16, kDim> B;
    for (int k = 0; k < kDim; ++k) {
        const Mat4 m = basis_matrix(k);
        CHECK((m.transpose() * O + O * m).norm() == 0.0);
        B.col(k) = m.reshaped();
    }
    Eigen::FullPivLU<decltype(B)> lu(B);
    CHECK(lu.rank() == kDim);
}

TEST_CASE("root vectors are eigenvectors of the Cartan with the listed weights")
{
    for (const auto& r : all_roots()) {
        const Mat4 x = basis_matrix(basis_index(r));
        for (int h = 0; h < 2; ++h) {
            const Mat4 H = basis_matrix(h);
            const cplx w = h == 0 ? r.a : r.b;
            CHECK((H * x - x * H - w * x).norm() == doctest::Approx(0.0));
        }
        CHECK((basis_matrix(basis_index(-r)) - x.transpose()).norm() == 0.0);
    }
}

TEST_CASE("bracket agrees with matrix commutator on random elements")
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const LieElem a = random_elem(rng), b = random_elem(rng);
        CHECK((bracket(a, b).matrix() - commutator(a.matrix(), b.matrix())).norm() < 1e-12);
    }
}

TEST_CASE("Jacobi on random elements")
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        const LieElem a = random_elem(rng), b = random_elem(rng), c = random_elem(rng);
        const LieElem j = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
        CHECK(j.norm() < 1e-11);
    }
}

TEST_CASE("structure constants satisfy |N_ab| = p + 1")
{
    for (const auto& a : all_roots())
        for (const auto& b : all_roots()) {
            if (a == -b || !(a + b).valid()) {
                CHECK(structure_constant(a, b) == 0);
                continue;
            }
            int p = 0;
            while ((b - Root{a.a * (p + 1), a.b * (p + 1)}).valid()) ++p;
            CHECK(std::abs(structure_constant(a, b)) == p + 1);
            CHECK(structure_constant(a, b) == -structure_constant(b, a));
        }
}

TEST_CASE("root datum")
{
    const RootDatum d = build_root_datum();
    CHECK(d.roots.size() == 8);
    CHECK(d.positive.size() == 4);
    CHECK(d.simple.first == Root{1, 1});
    CHECK(d.simple.second == Root{-2, 0});
    CHECK(d.highest == Root{0, 2});
    CHECK(d.height(d.highest) == 3);
    CHECK(d.height(d.simple.first) == 1);
    CHECK(d.height(d.simple.second) == 1);
    for (const auto& r : d.roots) {
        const LieElem h = coroot(r);
        // alpha(h_alpha) = 2
        CHECK(r.eval(h[0], h[1]) == cplx(2.0));
        CHECK((bracket(LieElem::root(r), LieElem::root(-r)) - h).norm() < 1e-14);
    }
}

TEST_CASE("Killing form constant from an independent ad")
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
        const LieElem a = random_elem(rng), b = random_elem(rng);
        const AdMatrix A = ad_from_matrices(a.matrix()), B = ad_from_matrices(b.matrix());
        const cplx kil = (A * B).trace();
        const cplx tr = (a.matrix() * b.matrix()).trace();
        CHECK(std::abs(kil - 6.0 * tr) < 1e-10 * std::abs(kil));
        CHECK(std::abs(killing(a, b) - kil) < 1e-10 * std::abs(kil));
        CHECK((ad_matrix(a) - A).norm() < 1e-12 * A.norm());
    }
    CHECK(killing_trace_constant() == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("height grading is the ad x eigenvalue")
{
    const PtdsData p = build_ptds();
    const Mat4 x = p.x.matrix();
    for (const auto& r : all_roots()) {
        const Mat4 e = basis_matrix(basis_index(r));
        CHECK((x * e - e * x - double(height(r)) * e).norm() < 1e-14);
        CHECK(hat_index(r) == ((height(r) % 4) + 4) % 4);
        CHECK(hat_signed(hat_index(r)) >= -1);
        CHECK(hat_signed(hat_index(r)) <= 2);
    }
}

TEST_CASE("PTDS decomposition via matrix ad")
{
    const PtdsData p = build_ptds();
    const AdMatrix ax = ad_from_matrices(p.x.matrix());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, kDim, kDim>> es(ax.real());
    // ad x eigenvalues -3..3 with multiplicities 1,1,2,2,2,1,1 for V_3 + V_7
    std::vector<int> ev;
    for (int i = 0; i < kDim; ++i) ev.push_back(int(std::lround(es.eigenvalues()(i))));
    CHECK(ev == std::vector<int>{-3, -2, -1, -1, 0, 0, 1, 1, 2, 3});
    CHECK(p.isotypic_dims == std::vector<int>{3, 7});
    CHECK(p.exponents == std::vector<int>{1, 3});
}

TEST_CASE("involutions")
{
    const Involutions inv = build_involutions(build_ptds());
    CHECK(real_fixed_dimension(inv.theta) == 10);
    CHECK(real_fixed_dimension(inv.lambda) == 10);
    CHECK(real_fixed_dimension(inv.sigma) == 8);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const LieElem a = random_elem(rng);
        // theta is minus the conjugate transpose on this basis
        CHECK((apply_involution(inv.theta, a).matrix() + a.matrix().adjoint()).norm() < 1e-13);
        CHECK(-killing(a, apply_involution(inv.theta, a)).real() > 0.0);
        const LieElem l = apply_involution(inv.lambda, a);
        CHECK((apply_involution(inv.lambda, l) - a).norm() < 1e-13);
    }
}

TEST_CASE("hermitian adjoint matches the matrix formula")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
        const LieElem a = random_elem(rng);
        const double u1 = g(rng), u2 = g(rng);
        Mat4 H = Mat4::Zero();
        H(0, 0) = std::exp(u1);
        H(1, 1) = std::exp(u2);
        H(2, 2) = std::exp(-u1);
        H(3, 3) = std::exp(-u2);
        const Mat4 want = H.inverse() * a.matrix().adjoint() * H;
        CHECK((hermitian_adjoint(a, u1, u2).matrix() - want).norm() < 1e-12 * want.norm());
    }
}

TEST_CASE("from_matrix round trip")
{
    std::mt19937_64 rng(13);
    const LieElem a = random_elem(rng);
    CHECK((LieElem::from_matrix(a.matrix()) - a).norm() < 1e-14);
}

TEST_CASE("invariant suite passes")
{
    for (const auto& c : invariant_suite()) {
        INFO(c.name);
        CHECK(c.pass);
    }
}

TEST_CASE("dump table lists the basis")
{
    const std::string s = dump_table();
    for (int k = 0; k < kDim; ++k) CHECK(s.find(basis_name(k)) != std::string::npos);
}
