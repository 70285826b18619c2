#include "sp4/harmonic.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace sp4::harmonic {

namespace {

std::size_t wrap(int i, int j, int n)
{
    i = ((i % n) + n) % n;
    j = ((j % n) + n) % n;
    return std::size_t(i) + std::size_t(n) * std::size_t(j);
}

Mat4 lift(const Mat2& c)
{
    Mat4 r = Mat4::Zero();
    r.topLeftCorner<2, 2>() = c;
    r.bottomRightCorner<2, 2>() = -c.transpose();
    return r;
}

Mat2 log_ratio(const MetricField& m, std::size_t k, std::size_t kk)
{
    if (m.mode == solver::Mode::diagonal) {
        Mat2 l = Mat2::Zero();
        l(0, 0) = m.u1[kk] - m.u1[k];
        l(1, 1) = m.u2[kk] - m.u2[k];
        return l;
    }
    return solver::log_posdef_similar(m.H[k].inverse() * m.H[kk]);
}

Mat4 edge(const Mat4& a, const Mat4& b, double h) { return (-0.5 * h * (a + b)).exp(); }

const Mat4& phi_at(const higgs::Sl4Higgs& s, std::size_t k) { return s.n == 0 ? s.phi[0] : s.phi[k]; }

void check_grids(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom)
{
    dom.validate();
    if (m.n != dom.n) throw std::invalid_argument("metric grid does not match domain grid");
    if (s.n != 0 && s.n != dom.n) throw std::invalid_argument("Higgs grid does not match domain grid");
    if (s.phi.size() != (s.n == 0 ? 1 : dom.nodes())) throw std::invalid_argument("Higgs field has wrong size");
}

}  // namespace

Field hopf(const higgs::HiggsData& h, const MetricField&)
{
    return higgs::hitchin_invariants(higgs::build_sl4(h)).p1;
}

double energy(const higgs::HiggsData& h, const MetricField& m, const TorusDomain& dom)
{
    return energy(higgs::build_sl4(h), m, dom);
}

double energy(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom)
{
    check_grids(s, m, dom);
    const double c = liealg::killing_trace_constant();
    double sum = 0.0;
    for (std::size_t k = 0; k < dom.nodes(); ++k) {
        const Mat4& p = phi_at(s, k);
        const Mat4 H4 = m.rank4(k);
        const Mat4 pstar = H4.inverse() * p.adjoint() * H4;
        sum += higgs::pairwise_trace(p * pstar).real();
    }
    return c * sum * dom.area / double(dom.nodes());
}

bool immersion_check(const higgs::Sl4Higgs& s)
{
    for (const auto& p : s.phi)
        if (p.isZero(0.0)) return false;
    return true;
}

bool immersion_check(const higgs::HiggsData& h) { return immersion_check(higgs::build_sl4(h)); }

FlatConnectionData flat_connection(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom)
{
    check_grids(s, m, dom);
    const int n = dom.n;
    const double a = dom.scale(), re = dom.tau.real(), im = dom.tau.imag();
    const cplx tau = dom.tau;
    FlatConnectionData c;
    c.n = n;
    c.As.resize(dom.nodes());
    c.At.resize(dom.nodes());
    c.metric.resize(dom.nodes());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t k = wrap(i, j, n);
            const Mat2 Cs = (0.5 * n) * (log_ratio(m, k, wrap(i + 1, j, n)) - log_ratio(m, k, wrap(i - 1, j, n)));
            const Mat2 Ct = (0.5 * n) * (log_ratio(m, k, wrap(i, j + 1, n)) - log_ratio(m, k, wrap(i, j - 1, n)));
            const Mat4 Z = lift(0.5 * (Cs / a - cplx(0.0, 1.0) * (Ct - re * Cs) / (a * im)));
            const Mat4& p = phi_at(s, k);
            const Mat4 H4 = m.rank4(k);
            const Mat4 pstar = H4.inverse() * p.adjoint() * H4;
            c.As[k] = a * (Z + p + pstar);
            c.At[k] = (a * tau) * (Z + p) + (a * std::conj(tau)) * pstar;
            c.metric[k] = H4;
        }
    return c;
}

double plaquette_defect(const FlatConnectionData& c)
{
    const int n = c.n;
    const double h = 1.0 / n;
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t k = wrap(i, j, n), ks = wrap(i + 1, j, n), kt = wrap(i, j + 1, n),
                              kst = wrap(i + 1, j + 1, n);
            const Mat4 Us = edge(c.As[k], c.As[ks], h);
            const Mat4 Ut_s = edge(c.At[ks], c.At[kst], h);
            const Mat4 Us_t = edge(c.As[kt], c.As[kst], h);
            const Mat4 Ut = edge(c.At[k], c.At[kt], h);
            worst = std::max(worst, (Ut_s * Us - Us_t * Ut).norm());
        }
    return worst;
}

Mat4 symplectic_form()
{
    Mat4 O = Mat4::Zero();
    O(0, 2) = 1.0;
    O(1, 3) = 1.0;
    O(2, 0) = -1.0;
    O(3, 1) = -1.0;
    return O;
}

HolonomyResult holonomy(const higgs::HiggsData& h, const MetricField& m, const TorusDomain& dom, double max_residual)
{
    const double res = solver::residual(h, m, dom, solver::BackgroundKind::flat).sup();
    if (!(res <= max_residual)) throw std::invalid_argument("metric does not solve the flat equations");
    return holonomy(higgs::build_sl4(h), m, dom);
}

HolonomyResult holonomy(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom)
{
    const FlatConnectionData c = flat_connection(s, m, dom);
    const int n = dom.n;
    const double step = 1.0 / n;

    HolonomyResult r;
    r.Ma = Mat4::Identity();
    r.Mb = Mat4::Identity();
    for (int i = 0; i < n; ++i) r.Ma = edge(c.As[wrap(i, 0, n)], c.As[wrap(i + 1, 0, n)], step) * r.Ma;
    for (int j = 0; j < n; ++j) r.Mb = edge(c.At[wrap(0, j, n)], c.At[wrap(0, j + 1, n)], step) * r.Mb;

    const Mat4 O = symplectic_form();
    r.commutator_defect = (r.Ma * r.Mb - r.Mb * r.Ma).norm();
    r.symplectic_defect =
        std::max((r.Ma.transpose() * O * r.Ma - O).norm(), (r.Mb.transpose() * O * r.Mb - O).norm());
    r.det_defect = std::max(std::abs(r.Ma.determinant() - 1.0), std::abs(r.Mb.determinant() - 1.0));

    Mat4 Jm = Mat4::Identity();
    Jm(2, 2) = Jm(3, 3) = -1.0;
    std::vector<Mat4> T(dom.nodes());
    for (std::size_t k = 0; k < dom.nodes(); ++k) T[k] = c.metric[k].inverse() * O * Jm;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t k = wrap(i, j, n);
            const Mat4 dTs = (0.5 * n) * (T[wrap(i + 1, j, n)] - T[wrap(i - 1, j, n)]);
            const Mat4 dTt = (0.5 * n) * (T[wrap(i, j + 1, n)] - T[wrap(i, j - 1, n)]);
            const double ds = (dTs + c.As[k] * T[k] - T[k] * c.As[k].conjugate()).norm();
            const double dt = (dTt + c.At[k] * T[k] - T[k] * c.At[k].conjugate()).norm();
            r.reality_defect = std::max({r.reality_defect, ds, dt});
        }
    r.plaquette = plaquette_defect(c);
    return r;
}

}  // namespace sp4::harmonic
