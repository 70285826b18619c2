#include "sp4/higgs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sp4::higgs {

int HiggsData::grid_n() const
{
    int n = 0;
    for (const Field* f : {&mu, &nu, &q2}) {
        if (f->is_constant()) continue;
        if (n != 0 && f->n != n) throw std::invalid_argument("Higgs fields on different grids");
        n = f->n;
    }
    return n;
}

std::size_t HiggsData::nodes() const
{
    int n = grid_n();
    return n == 0 ? 1 : std::size_t(n) * std::size_t(n);
}

HiggsData make_constant(cplx mu, cplx nu, cplx q2, int genus, int d)
{
    HiggsData h;
    h.genus = genus;
    h.d = d;
    h.mu = Field::constant(mu);
    h.nu = Field::constant(nu);
    h.q2 = Field::constant(q2);
    return h;
}

Mat4 sl4_matrix(cplx mu, cplx nu, cplx q2)
{
    Mat4 m = Mat4::Zero();
    m(0, 2) = nu;
    m(0, 3) = q2;
    m(1, 2) = q2;
    m(1, 3) = mu;
    m(2, 1) = 1.0;
    m(3, 0) = 1.0;
    return m;
}

Sl4Higgs build_sl4(const HiggsData& h)
{
    Sl4Higgs s;
    s.n = h.grid_n();
    const std::size_t N = h.nodes();
    s.phi.resize(N);
    for (std::size_t k = 0; k < N; ++k) s.phi[k] = sl4_matrix(h.mu.at(k), h.nu.at(k), h.q2.at(k));
    return s;
}

cplx pairwise_trace(const Mat4& m) { return (m(0, 0) + m(1, 1)) + (m(2, 2) + m(3, 3)); }

Invariants hitchin_invariants(const Sl4Higgs& s)
{
    Invariants inv;
    std::vector<cplx> p1(s.phi.size()), p2(s.phi.size());
    for (std::size_t k = 0; k < s.phi.size(); ++k) {
        const Mat4& p = s.phi[k];
        Mat4 p2m = p * p;
        p1[k] = pairwise_trace(p2m);
        p2[k] = pairwise_trace(p2m * p2m);
        inv.odd_trace_sup = std::max({inv.odd_trace_sup, std::abs(pairwise_trace(p)), std::abs(pairwise_trace(p2m * p))});
    }
    if (s.n == 0) {
        inv.p1 = Field::constant(p1[0]);
        inv.p2 = Field::constant(p2[0]);
    } else {
        inv.p1 = Field::grid(s.n, std::move(p1));
        inv.p2 = Field::grid(s.n, std::move(p2));
    }
    return inv;
}

CayleyData cayley_partner(const HiggsData& h)
{
    CayleyData c;
    c.Q_W << 0.0, 1.0, 1.0, 0.0;
    Mat2 gamma;
    gamma << 0.0, 1.0, 1.0, 0.0;
    for (std::size_t k = 0; k < h.nodes(); ++k) {
        Mat2 beta;
        beta << h.nu.at(k), h.q2.at(k), h.q2.at(k), h.mu.at(k);
        c.psi.push_back(gamma * beta);
    }
    return c;
}

HiggsData gauge_action(cplx lam, const HiggsData& h)
{
    if (lam == cplx(0.0)) throw std::invalid_argument("gauge parameter must be nonzero");
    HiggsData g = h;
    g.mu = h.mu.scaled(lam * lam);
    g.nu = h.nu.scaled(1.0 / (lam * lam));
    return g;
}

bool zeta4_fixed_point_check(const HiggsData& h, double tol)
{
    if (h.q2.sup() != 0.0) throw std::invalid_argument("zeta4 check requires q2 = 0");
    const cplx l = std::exp(cplx(0.0, 2.0 * std::numbers::pi / 8.0));
    const std::array<cplx, 4> g = {std::pow(l, -3), l, std::pow(l, 3), 1.0 / l};
    const cplx i4 = std::exp(cplx(0.0, 2.0 * std::numbers::pi / 4.0));
    Sl4Higgs s = build_sl4(h);
    for (const Mat4& p : s.phi) {
        Mat4 c;
        for (int r = 0; r < 4; ++r)
            for (int col = 0; col < 4; ++col) c(r, col) = g[r] * p(r, col) / g[col];
        if ((c - i4 * p).norm() > tol * std::max(1.0, p.norm())) return false;
    }
    return true;
}

StabilityResult stability_flag(const HiggsData& h)
{
    StabilityResult r;
    const int g = h.genus, d = h.d;
    const bool mu_zero = h.mu.sup() <= 1e-14;
    if (d < g - 1 || d > 3 * g - 3) {
        r.flag = Stability::strictly_semistable_or_unstable;
        r.note = "degree outside [g-1, 3g-3]";
    } else if (d == g - 1) {
        r.flag = Stability::strictly_semistable_or_unstable;
        r.note = mu_zero ? "boundary degree d = g-1, mu = 0: not stable" : "boundary degree d = g-1: stable iff mu != 0";
    } else if (mu_zero) {
        r.flag = Stability::strictly_semistable_or_unstable;
        r.note = "mu vanishes identically: unstable";
    } else {
        r.flag = Stability::stable;
        r.note = "stable";
    }
    return r;
}

HiggsData normal_form(const HiggsData& h)
{
    if (h.mu.sup() <= 1e-14) return h;
    std::size_t best = 0;
    for (std::size_t k = 0; k < h.mu.v.size(); ++k)
        if (std::abs(h.mu.v[k]) > std::abs(h.mu.v[best])) best = k;
    const cplx m = h.mu.v[best];
    const cplx lam = std::exp(cplx(0.0, -std::arg(m) / 2.0)) / std::sqrt(std::abs(m));
    HiggsData g = gauge_action(lam, h);
    // Remove rounding residue in the pinned value.
    g.mu.v[best] = std::abs(g.mu.v[best]);
    return g;
}

cyclic::GradedForm to_graded_element(const HiggsData& h, std::size_t node)
{
    using liealg::LieElem;
    LieElem e = LieElem::root({-1, -1}, 1.0) + LieElem::root({2, 0}, h.nu.at(node)) +
                LieElem::root({0, 2}, h.mu.at(node)) + LieElem::root({1, 1}, h.q2.at(node));
    return cyclic::GradedForm::from_elem(e, cyclic::FormType::t10);
}

cyclic::CyclicFrame to_frame(const HiggsData& h, std::size_t node)
{
    if (h.q2.at(node) != cplx(0.0)) throw std::invalid_argument("frame requires q2 = 0");
    liealg::LieElem e = to_graded_element(h, node).element();
    return cyclic::CyclicFrame::make(e.coeff(-cyclic::alpha1()), e.coeff(-cyclic::alpha2()), e.coeff(cyclic::highest_root()));
}

cyclic::FormPair to_forms(const HiggsData& h, std::size_t node)
{
    static const liealg::Involutions inv = liealg::build_involutions(liealg::build_ptds());
    liealg::LieElem phi = to_graded_element(h, node).element();
    return {phi, -liealg::apply_involution(inv.theta, phi)};
}

}  // namespace sp4::higgs
