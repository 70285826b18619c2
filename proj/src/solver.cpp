#include "sp4/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace sp4::solver {

namespace {

constexpr double kPi = std::numbers::pi;

struct Offset {
    int di, dj;
};

// +s, -s, +t, -t, ++, --, +-, -+
constexpr std::array<Offset, 8> kDirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};

struct Geometry {
    double kappa = 0.0;
    double tau2 = 0.0;
    double re = 0.0;
    double im = 0.0;
    double n = 0.0;
    bool nine = false;

    explicit Geometry(const TorusDomain& d)
    {
        const double a = d.scale();
        re = d.tau.real();
        im = d.tau.imag();
        tau2 = std::norm(d.tau);
        kappa = 1.0 / (4.0 * a * a * im * im);
        n = d.n;
        nine = d.nine_point();
    }
};

Mat2 curvature(const std::array<Mat2, 8>& ell, const Geometry& g)
{
    const double n2 = g.n * g.n;
    Mat2 Dss = n2 * (ell[0] + ell[1]);
    Mat2 Dtt = n2 * (ell[2] + ell[3]);
    Mat2 As = (0.5 * g.n) * (ell[0] - ell[1]);
    Mat2 At = (0.5 * g.n) * (ell[2] - ell[3]);
    Mat2 F = g.tau2 * Dss + Dtt - cplx(0.0, g.im) * (At * As - As * At);
    if (g.nine) F -= (2.0 * g.re * n2 / 4.0) * (ell[4] + ell[5] - ell[6] - ell[7]);
    return g.kappa * F;
}

class Problem {
public:
    Problem(const higgs::HiggsData& h, const TorusDomain& dom, std::array<double, 2> source)
        : Problem(higgs::build_sl4(h), dom, source)
    {
    }

    Problem(const higgs::Sl4Higgs& s, const TorusDomain& dom, std::array<double, 2> source)
        : geo_(dom), n_(dom.n)
    {
        if (s.n != 0 && s.n != n_) throw std::invalid_argument("Higgs grid does not match domain grid");
        const std::size_t N = dom.nodes();
        if (s.phi.size() != (s.n == 0 ? 1 : N)) throw std::invalid_argument("Higgs field has wrong size");
        phi_.resize(N);
        for (std::size_t k = 0; k < N; ++k) phi_[k] = s.n == 0 ? s.phi[0] : s.phi[k];
        S_ = Mat4::Zero();
        S_(0, 0) = source[0];
        S_(1, 1) = source[1];
        S_(2, 2) = -source[0];
        S_(3, 3) = -source[1];
    }

    int n() const { return n_; }
    std::size_t nodes() const { return phi_.size(); }
    const Geometry& geo() const { return geo_; }
    const Mat4& phi(std::size_t k) const { return phi_[k]; }

    std::size_t idx(int i, int j) const
    {
        i %= n_;
        j %= n_;
        if (i < 0) i += n_;
        if (j < 0) j += n_;
        return std::size_t(i) + std::size_t(n_) * std::size_t(j);
    }

    Mat4 node_residual(const MetricField& m, int i, int j) const
    {
        const std::size_t k = idx(i, j);
        const int nd = geo_.nine ? 8 : 4;
        std::array<Mat2, 8> ell;
        for (auto& e : ell) e.setZero();
        Mat2 Hk, Hinv;
        if (m.mode == Mode::diagonal) {
            for (int d = 0; d < nd; ++d) {
                const std::size_t kk = idx(i + kDirs[d].di, j + kDirs[d].dj);
                ell[d](0, 0) = m.u1[kk] - m.u1[k];
                ell[d](1, 1) = m.u2[kk] - m.u2[k];
            }
            Hk = Mat2::Zero();
            Hk(0, 0) = std::exp(m.u1[k]);
            Hk(1, 1) = std::exp(m.u2[k]);
            Hinv = Mat2::Zero();
            Hinv(0, 0) = std::exp(-m.u1[k]);
            Hinv(1, 1) = std::exp(-m.u2[k]);
        } else {
            Hk = m.H[k];
            if (!(Hk(0, 0).real() > 0.0) || !(Hk.determinant().real() > 0.0))
                throw std::domain_error("metric not positive definite at node " + std::to_string(k));
            Hinv = Hk.inverse();
            for (int d = 0; d < nd; ++d) {
                const std::size_t kk = idx(i + kDirs[d].di, j + kDirs[d].dj);
                ell[d] = log_posdef_similar(Hinv * m.H[kk]);
            }
        }
        const Mat2 F = curvature(ell, geo_);

        Mat4 H4 = Mat4::Zero(), H4inv = Mat4::Zero();
        H4.topLeftCorner<2, 2>() = Hk;
        H4.bottomRightCorner<2, 2>() = Hinv.conjugate();
        H4inv.topLeftCorner<2, 2>() = Hinv;
        H4inv.bottomRightCorner<2, 2>() = Hk.conjugate();

        const Mat4& p = phi_[k];
        const Mat4 pstar = H4inv * p.adjoint() * H4;
        Mat4 R = liealg::commutator(p, pstar);
        R.topLeftCorner<2, 2>() -= F;
        R.bottomRightCorner<2, 2>() += F.transpose();
        R += 0.5 * (S_ + H4inv * S_ * H4);
        return R;
    }

    ResidualField field(const MetricField& m) const
    {
        ResidualField r;
        r.n = n_;
        r.R.resize(nodes());
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i) r.R[idx(i, j)] = node_residual(m, i, j);
        return r;
    }

private:
    Geometry geo_;
    int n_;
    std::vector<Mat4> phi_;
    Mat4 S_;
};

void check_metric(const MetricField& m, const TorusDomain& dom)
{
    if (m.n != dom.n) throw std::invalid_argument("metric grid does not match domain grid");
    const std::size_t N = m.nodes();
    if (m.mode == Mode::diagonal && (m.u1.size() != N || m.u2.size() != N))
        throw std::invalid_argument("diagonal metric has wrong size");
    if (m.mode == Mode::full && m.H.size() != N) throw std::invalid_argument("full metric has wrong size");
}

Mat2 hermitian_part(const Mat2& X)
{
    Mat2 Y = 0.5 * (X + X.adjoint());
    Y(0, 0) = Y(0, 0).real();
    Y(1, 1) = Y(1, 1).real();
    return Y;
}

const std::array<Mat2, 4>& full_directions()
{
    static const std::array<Mat2, 4> E = [] {
        std::array<Mat2, 4> e;
        for (auto& x : e) x.setZero();
        e[0](0, 0) = 1.0;
        e[1](1, 1) = 1.0;
        e[2](0, 1) = 1.0;
        e[2](1, 0) = 1.0;
        e[3](0, 1) = cplx(0.0, 1.0);
        e[3](1, 0) = cplx(0.0, -1.0);
        return e;
    }();
    return E;
}

// Equation values per node: (R00, R11) in diagonal mode, the Hermitian entries of H R_W in full mode.
void node_equations(const MetricField& m, std::size_t k, const Mat4& R, double* out)
{
    if (m.mode == Mode::diagonal) {
        out[0] = R(0, 0).real();
        out[1] = R(1, 1).real();
        return;
    }
    const Mat2 G = m.H[k] * R.topLeftCorner<2, 2>();
    out[0] = G(0, 0).real();
    out[1] = G(1, 1).real();
    out[2] = 0.5 * (G(0, 1) + std::conj(G(1, 0))).real();
    out[3] = 0.5 * (G(0, 1) + std::conj(G(1, 0))).imag();
}

int unknowns_per_node(Mode m) { return m == Mode::diagonal ? 2 : 4; }

Eigen::VectorXd equations(const Problem& P, const MetricField& m, const ResidualField& r)
{
    const int q = unknowns_per_node(m.mode);
    Eigen::VectorXd F(q * Eigen::Index(P.nodes()));
    for (std::size_t k = 0; k < P.nodes(); ++k) node_equations(m, k, r.R[k], F.data() + q * k);
    return F;
}

std::vector<Offset> stencil(const Geometry& g)
{
    std::vector<Offset> s{{0, 0}};
    const int nd = g.nine ? 8 : 4;
    for (int d = 0; d < nd; ++d) s.push_back(kDirs[d]);
    return s;
}

Eigen::SparseMatrix<double> diagonal_jacobian(const Problem& P, const MetricField& m)
{
    const Geometry& g = P.geo();
    const int n = P.n();
    const double n2 = g.n * g.n;
    const double cs = -g.kappa * g.tau2 * n2;
    const double ct = -g.kappa * n2;
    const double cc = 2.0 * g.kappa * n2 * (g.tau2 + 1.0);
    const double cx = g.kappa * g.re * n2 / 2.0;
    std::vector<Eigen::Triplet<double>> T;
    T.reserve(P.nodes() * 24);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t k = P.idx(i, j);
            const std::array<double, 4> w{m.u1[k], m.u2[k], -m.u1[k], -m.u2[k]};
            const Mat4& p = P.phi(k);
            for (int c = 0; c < 2; ++c) {
                const int row = int(2 * k) + c;
                auto col = [&](int di, int dj) { return int(2 * P.idx(i + di, j + dj)) + c; };
                T.emplace_back(row, row, cc);
                T.emplace_back(row, col(1, 0), cs);
                T.emplace_back(row, col(-1, 0), cs);
                T.emplace_back(row, col(0, 1), ct);
                T.emplace_back(row, col(0, -1), ct);
                if (g.nine) {
                    T.emplace_back(row, col(1, 1), cx);
                    T.emplace_back(row, col(-1, -1), cx);
                    T.emplace_back(row, col(1, -1), -cx);
                    T.emplace_back(row, col(-1, 1), -cx);
                }
                for (int b = 0; b < 4; ++b) {
                    if (b == c) continue;
                    const double coef = std::norm(p(c, b)) * std::exp(w[c] - w[b]) +
                                        std::norm(p(b, c)) * std::exp(w[b] - w[c]);
                    if (coef == 0.0) continue;
                    T.emplace_back(row, row, coef);
                    T.emplace_back(row, int(2 * k) + (b % 2), -coef * (b < 2 ? 1.0 : -1.0));
                }
            }
        }
    Eigen::SparseMatrix<double> J(2 * Eigen::Index(P.nodes()), 2 * Eigen::Index(P.nodes()));
    J.setFromTriplets(T.begin(), T.end());
    return J;
}

double fd_step(const Mat2& H) { return 1e-6 * 0.5 * (std::abs(H(0, 0)) + std::abs(H(1, 1))); }

Eigen::SparseMatrix<double> full_jacobian(const Problem& P, MetricField& m)
{
    const int n = P.n();
    const auto st = stencil(P.geo());
    const auto& E = full_directions();
    std::vector<Eigen::Triplet<double>> T;
    T.reserve(P.nodes() * 16 * st.size());
    double gp[4], gm[4];
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t mk = P.idx(i, j);
            const Mat2 H0 = m.H[mk];
            const double eps = fd_step(H0);
            for (int p = 0; p < 4; ++p) {
                const int col = int(4 * mk) + p;
                for (const auto& o : st) {
                    const int ki = i - o.di, kj = j - o.dj;
                    const std::size_t k = P.idx(ki, kj);
                    m.H[mk] = H0 + eps * E[p];
                    node_equations(m, k, P.node_residual(m, ki, kj), gp);
                    m.H[mk] = H0 - eps * E[p];
                    node_equations(m, k, P.node_residual(m, ki, kj), gm);
                    for (int q = 0; q < 4; ++q) {
                        const double v = (gp[q] - gm[q]) / (2.0 * eps);
                        if (v != 0.0) T.emplace_back(int(4 * k) + q, col, v);
                    }
                }
                m.H[mk] = H0;
            }
        }
    Eigen::SparseMatrix<double> J(4 * Eigen::Index(P.nodes()), 4 * Eigen::Index(P.nodes()));
    J.setFromTriplets(T.begin(), T.end());
    return J;
}

MetricField apply_step(const MetricField& m, const Eigen::VectorXd& dx, double t)
{
    MetricField r = m;
    if (m.mode == Mode::diagonal) {
        for (std::size_t k = 0; k < m.nodes(); ++k) {
            r.u1[k] += t * dx(2 * k);
            r.u2[k] += t * dx(2 * k + 1);
        }
        return r;
    }
    const auto& E = full_directions();
    for (std::size_t k = 0; k < m.nodes(); ++k) {
        Mat2 dH = Mat2::Zero();
        for (int p = 0; p < 4; ++p) dH += dx(4 * k + p) * E[p];
        r.H[k] = hermitian_part(m.H[k] * exp_real_spectrum(t * m.H[k].inverse() * dH));
    }
    return r;
}

// One lagged-coefficient sweep: node-local Newton with neighbours frozen.
void relaxation_sweep(const Problem& P, MetricField& m)
{
    const int n = P.n();
    const Geometry& g = P.geo();
    const double cc = 2.0 * g.kappa * g.n * g.n * (g.tau2 + 1.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t k = P.idx(i, j);
            for (int inner = 0; inner < 2; ++inner) {
                if (m.mode == Mode::diagonal) {
                    double f[2];
                    node_equations(m, k, P.node_residual(m, i, j), f);
                    const std::array<double, 4> w{m.u1[k], m.u2[k], -m.u1[k], -m.u2[k]};
                    Eigen::Matrix2d J = Eigen::Matrix2d::Identity() * cc;
                    const Mat4& p = P.phi(k);
                    for (int c = 0; c < 2; ++c)
                        for (int b = 0; b < 4; ++b) {
                            if (b == c) continue;
                            const double coef = std::norm(p(c, b)) * std::exp(w[c] - w[b]) +
                                                std::norm(p(b, c)) * std::exp(w[b] - w[c]);
                            J(c, c) += coef;
                            J(c, b % 2) -= coef * (b < 2 ? 1.0 : -1.0);
                        }
                    Eigen::Vector2d d = -J.partialPivLu().solve(Eigen::Vector2d(f[0], f[1]));
                    const double s = std::min(1.0, 1.0 / std::max(1e-300, d.cwiseAbs().maxCoeff()));
                    m.u1[k] += s * d(0);
                    m.u2[k] += s * d(1);
                } else {
                    double f[4], gp[4], gm[4];
                    node_equations(m, k, P.node_residual(m, i, j), f);
                    const Mat2 H0 = m.H[k];
                    const double eps = fd_step(H0);
                    Eigen::Matrix4d J;
                    for (int p = 0; p < 4; ++p) {
                        m.H[k] = H0 + eps * full_directions()[p];
                        node_equations(m, k, P.node_residual(m, i, j), gp);
                        m.H[k] = H0 - eps * full_directions()[p];
                        node_equations(m, k, P.node_residual(m, i, j), gm);
                        for (int q = 0; q < 4; ++q) J(q, p) = (gp[q] - gm[q]) / (2.0 * eps);
                    }
                    Eigen::Vector4d d = -J.fullPivLu().solve(Eigen::Vector4d(f[0], f[1], f[2], f[3]));
                    Mat2 dH = Mat2::Zero();
                    for (int p = 0; p < 4; ++p) dH += d(p) * full_directions()[p];
                    Mat2 X = H0.inverse() * dH;
                    const double s = std::min(1.0, 1.0 / std::max(1e-300, X.norm()));
                    m.H[k] = hermitian_part(H0 * exp_real_spectrum(s * X));
                }
            }
        }
}

double max_abs(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

std::vector<double> smooth_random(int n, std::mt19937_64& rng, double amp)
{
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<std::array<double, 4>> modes;
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q) modes.push_back({double(p), double(q), U(rng), U(rng)});
    std::vector<double> f(std::size_t(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double s = double(i) / n, t = double(j) / n;
            double v = 0.0;
            for (const auto& md : modes) {
                const double ph = 2.0 * kPi * (md[0] * s + md[1] * t);
                v += md[2] * std::cos(ph) + md[3] * std::sin(ph);
            }
            f[i + std::size_t(n) * j] = amp * v / double(modes.size());
        }
    return f;
}

std::vector<cplx> trig_interp_1d(const std::vector<cplx>& f, int m)
{
    const int n = int(f.size());
    std::vector<cplx> c(n);
    for (int k = 0; k < n; ++k) {
        cplx s = 0.0;
        for (int j = 0; j < n; ++j) s += f[j] * std::polar(1.0, -2.0 * kPi * double((long(k) * j) % n) / n);
        c[k] = s / double(n);
    }
    std::vector<cplx> g(m);
    for (int l = 0; l < m; ++l) {
        const double x = double(l) / m;
        cplx s = c[0];
        for (int k = 1; k < (n + 1) / 2; ++k)
            s += c[k] * std::polar(1.0, 2.0 * kPi * k * x) + c[n - k] * std::polar(1.0, -2.0 * kPi * k * x);
        if (n % 2 == 0) s += c[n / 2] * std::cos(kPi * n * x);
        g[l] = s;
    }
    return g;
}

std::vector<cplx> trig_interp_2d(const std::vector<cplx>& f, int n, int m)
{
    std::vector<cplx> rows(std::size_t(m) * n);
    for (int j = 0; j < n; ++j) {
        std::vector<cplx> line(f.begin() + std::size_t(n) * j, f.begin() + std::size_t(n) * (j + 1));
        auto g = trig_interp_1d(line, m);
        for (int i = 0; i < m; ++i) rows[i + std::size_t(m) * j] = g[i];
    }
    std::vector<cplx> out(std::size_t(m) * m);
    for (int i = 0; i < m; ++i) {
        std::vector<cplx> col(n);
        for (int j = 0; j < n; ++j) col[j] = rows[i + std::size_t(m) * j];
        auto g = trig_interp_1d(col, m);
        for (int j = 0; j < m; ++j) out[i + std::size_t(m) * j] = g[j];
    }
    return out;
}

Field interpolate_field(const Field& f, int m)
{
    if (f.is_constant()) return f;
    return Field::grid(m, trig_interp_2d(f.v, f.n, m));
}

}  // namespace

void TorusDomain::validate() const
{
    if (!(tau.imag() > 0.0)) throw std::invalid_argument("Im(tau) must be positive");
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("grid size must be even and at least 8");
    if (!(area > 0.0)) throw std::invalid_argument("area must be positive");
}

double TorusDomain::scale() const { return std::sqrt(area / tau.imag()); }

MetricField MetricField::identity(Mode mode, int n)
{
    MetricField m;
    m.mode = mode;
    m.n = n;
    const std::size_t N = std::size_t(n) * n;
    if (mode == Mode::diagonal) {
        m.u1.assign(N, 0.0);
        m.u2.assign(N, 0.0);
    } else {
        m.H.assign(N, Mat2::Identity());
    }
    return m;
}

Mat2 MetricField::block(std::size_t k) const
{
    if (mode == Mode::full) return H[k];
    Mat2 b = Mat2::Zero();
    b(0, 0) = std::exp(u1[k]);
    b(1, 1) = std::exp(u2[k]);
    return b;
}

Mat4 MetricField::rank4(std::size_t k) const
{
    const Mat2 b = block(k);
    Mat4 r = Mat4::Zero();
    r.topLeftCorner<2, 2>() = b;
    r.bottomRightCorner<2, 2>() = b.conjugate().inverse();
    return r;
}

MetricField MetricField::as_full() const
{
    if (mode == Mode::full) return *this;
    MetricField f;
    f.mode = Mode::full;
    f.n = n;
    f.H.resize(nodes());
    for (std::size_t k = 0; k < nodes(); ++k) f.H[k] = block(k);
    return f;
}

double ResidualField::sup() const
{
    double s = 0.0;
    for (const auto& r : R) s = std::max(s, r.cwiseAbs().maxCoeff());
    return s;
}

double ResidualField::l2() const
{
    if (R.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : R) s += r.squaredNorm();
    return std::sqrt(s / double(R.size()));
}

std::array<double, 2> background_source(const higgs::HiggsData& h, const TorusDomain& dom, BackgroundKind bg)
{
    if (bg == BackgroundKind::flat) return {0.0, 0.0};
    return {kPi * h.d / dom.area, kPi * (2.0 * h.genus - 2.0 - h.d) / dom.area};
}

ResidualField residual(const higgs::HiggsData& h, const MetricField& m, const TorusDomain& dom,
                       std::array<double, 2> source)
{
    dom.validate();
    check_metric(m, dom);
    return Problem(h, dom, source).field(m);
}

ResidualField residual(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom,
                       std::array<double, 2> source)
{
    dom.validate();
    check_metric(m, dom);
    return Problem(s, dom, source).field(m);
}

ResidualField residual(const higgs::HiggsData& h, const MetricField& m, const TorusDomain& dom, BackgroundKind bg)
{
    return residual(h, m, dom, background_source(h, dom, bg));
}

OracleResult constant_oracle(cplx mu, cplx nu, const TorusDomain& dom, BackgroundKind bg, int genus, int d)
{
    if (mu == cplx(0.0)) throw std::invalid_argument("constant oracle requires mu != 0");
    const higgs::HiggsData h = higgs::make_constant(mu, nu, 0.0, genus, d);
    const auto src = background_source(h, dom, bg);
    const liealg::LieElem phi = higgs::to_graded_element(h).element();
    auto f = [&](double u1, double u2) {
        const liealg::LieElem b = liealg::bracket(phi, liealg::hermitian_adjoint(phi, u1, u2));
        return Eigen::Vector2d(b[0].real() + src[0], b[1].real() + src[1]);
    };

    OracleResult res;
    Eigen::Vector2d u(0.0, 0.0);
    Eigen::Vector2d F = f(u(0), u(1));
    for (int it = 0; it < 200 && F.cwiseAbs().maxCoeff() > 1e-14; ++it) {
        Eigen::Matrix2d J;
        const double h_fd = 1e-6;
        for (int c = 0; c < 2; ++c) {
            Eigen::Vector2d e = Eigen::Vector2d::Zero();
            e(c) = h_fd;
            J.col(c) = (f(u(0) + e(0), u(1) + e(1)) - f(u(0) - e(0), u(1) - e(1))) / (2.0 * h_fd);
        }
        Eigen::Vector2d du = -J.partialPivLu().solve(F);
        if (!du.allFinite()) break;
        double t = 1.0;
        Eigen::Vector2d trial = u + du, Ft = f(trial(0), trial(1));
        while (t > 1e-8 && !(Ft.norm() < F.norm())) {
            t *= 0.5;
            trial = u + t * du;
            Ft = f(trial(0), trial(1));
        }
        if (t <= 1e-8) break;
        u = trial;
        F = Ft;
        res.iterations = it + 1;
    }
    res.converged = F.cwiseAbs().maxCoeff() <= 1e-12;

    if (!res.converged) {
        res.bisection = true;
        auto root = [](auto g) {
            double lo = -1.0, hi = 1.0;
            for (int k = 0; k < 60 && g(lo) > 0.0; ++k) lo *= 2.0;
            for (int k = 0; k < 60 && g(hi) < 0.0; ++k) hi *= 2.0;
            for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++k) {
                const double mid = 0.5 * (lo + hi);
                (g(mid) > 0.0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        };
        auto u2_of = [&](double u1) { return root([&](double u2) { return f(u1, u2)(1); }); };
        const double u1 = root([&](double x) { return f(x, u2_of(x))(0); });
        u = Eigen::Vector2d(u1, u2_of(u1));
        F = f(u(0), u(1));
        res.converged = F.cwiseAbs().maxCoeff() <= 1e-10;
    }
    res.u1 = u(0);
    res.u2 = u(1);
    res.defect = F.cwiseAbs().maxCoeff();
    return res;
}

MetricField initial_metric(const TorusDomain& dom, Mode mode, InitKind init, std::uint64_t seed)
{
    dom.validate();
    const int n = dom.n;
    MetricField m = MetricField::identity(mode, n);
    if (init == InitKind::zero) return m;
    if (mode == Mode::diagonal && init == InitKind::nondiagonal)
        throw std::invalid_argument("non-diagonal initial data needs full mode");
    std::mt19937_64 rng(seed);
    if (mode == Mode::diagonal) {
        m.u1 = smooth_random(n, rng, 1.0);
        m.u2 = smooth_random(n, rng, 1.0);
        return m;
    }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double s = double(i) / n, t = double(j) / n;
            const std::size_t k = i + std::size_t(n) * j;
            double a, b;
            cplx c;
            if (init == InitKind::nondiagonal) {
                a = 0.3 * std::sin(2.0 * kPi * s);
                b = -0.2 * std::cos(2.0 * kPi * t);
                c = cplx(0.4, 0.3 * std::sin(2.0 * kPi * (s + t)));
            } else {
                a = b = 0.0;
                c = 0.0;
            }
            m.H[k] << std::exp(a), c * std::exp(0.5 * (a + b)), std::conj(c) * std::exp(0.5 * (a + b)), std::exp(b);
        }
    if (init == InitKind::random) {
        auto a = smooth_random(n, rng, 1.0), b = smooth_random(n, rng, 1.0);
        auto cr = smooth_random(n, rng, 1.0), ci = smooth_random(n, rng, 1.0);
        const double cmax = std::max(max_abs(cr), max_abs(ci));
        for (std::size_t k = 0; k < m.nodes(); ++k) {
            const cplx c = cplx(cr[k], ci[k]) * (0.6 / std::max(cmax, 1e-300));
            const double g = std::exp(0.5 * (a[k] + b[k]));
            m.H[k] << std::exp(a[k]), c * g, std::conj(c) * g, std::exp(b[k]);
        }
    }
    return m;
}

SolveResult solve(const higgs::HiggsData& h, const TorusDomain& dom, const SolveOptions& opts)
{
    return solve_from(h, dom, initial_metric(dom, opts.mode, opts.init, opts.seed), opts);
}

SolveResult solve_from(const higgs::HiggsData& h, const TorusDomain& dom, MetricField start, const SolveOptions& opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    dom.validate();
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (higgs::stability_flag(h).flag != higgs::Stability::stable)
        throw std::invalid_argument("Higgs data not stable: " + higgs::stability_flag(h).note);
    if (opts.mode == Mode::diagonal && h.q2.sup() != 0.0)
        throw std::invalid_argument("diagonal mode requires q2 = 0");
    if (opts.background == BackgroundKind::flat && (h.mu.sup() == 0.0 || h.nu.sup() == 0.0))
        throw std::invalid_argument("flat background needs mu and nu both nonzero");
    if (start.mode != opts.mode) start = opts.mode == Mode::full ? start.as_full() : start;
    if (start.mode != opts.mode) throw std::invalid_argument("initial metric mode mismatch");
    check_metric(start, dom);

    const Problem P(h, dom, background_source(h, dom, opts.background));
    SolveResult out;
    MetricField& m = out.metric;
    m = std::move(start);
    SolveReport& rep = out.report;

    ResidualField r = P.field(m);
    Eigen::VectorXd F = equations(P, m, r);
    double merit = F.squaredNorm();

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool analyzed = false;

    auto relax = [&](int sweeps) {
        for (int s = 0; s < sweeps; ++s) relaxation_sweep(P, m);
        rep.relaxation_sweeps += sweeps;
        r = P.field(m);
        F = equations(P, m, r);
        merit = F.squaredNorm();
    };

    while (rep.iterations < opts.max_iter && !(r.sup() < opts.tol)) {
        ++rep.iterations;
        Eigen::VectorXd dx;
        bool ok = true;
        if (m.mode == Mode::diagonal) {
            auto J = diagonal_jacobian(P, m);
            if (!analyzed) {
                ldlt.analyzePattern(J);
                analyzed = true;
            }
            ldlt.factorize(J);
            ok = ldlt.info() == Eigen::Success;
            if (ok) dx = ldlt.solve(-F);
        } else {
            auto J = full_jacobian(P, m);
            J.makeCompressed();
            if (!analyzed) {
                lu.analyzePattern(J);
                analyzed = true;
            }
            lu.factorize(J);
            ok = lu.info() == Eigen::Success;
            if (ok) dx = lu.solve(-F);
        }
        ok = ok && dx.allFinite();

        bool accepted = false;
        if (ok) {
            for (double t = 1.0; t >= 1.0 / 1024.0; t *= 0.5) {
                MetricField trial;
                ResidualField rt;
                try {
                    trial = apply_step(m, dx, t);
                    rt = P.field(trial);
                } catch (const std::domain_error&) {
                    continue;
                }
                Eigen::VectorXd Ft = equations(P, trial, rt);
                const double mt = Ft.squaredNorm();
                if (std::isfinite(mt) && (mt <= (1.0 - 1e-4 * t) * merit || rt.sup() < opts.tol)) {
                    m = std::move(trial);
                    r = std::move(rt);
                    F = std::move(Ft);
                    merit = mt;
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) {
            const double before = merit;
            relax(10);
            if (!(merit < before)) {
                rep.message = "stagnated";
                break;
            }
        }
    }

    rep.residual_sup = r.sup();
    rep.residual_l2 = r.l2();
    rep.converged = rep.residual_sup < opts.tol;
    if (m.mode == Mode::full) rep.offdiag_sup = offdiag_sup(m);
    if (rep.converged)
        rep.message = "converged";
    else if (rep.message.empty())
        rep.message = "iteration limit reached";
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

double offdiag_sup(const MetricField& m)
{
    if (m.mode == Mode::diagonal) return 0.0;
    double s = 0.0;
    for (const auto& H : m.H) s = std::max(s, std::abs(H(0, 1)) / std::sqrt(H(0, 0).real() * H(1, 1).real()));
    return s;
}

double sup_distance(const MetricField& a, const MetricField& b)
{
    if (a.n != b.n) throw std::invalid_argument("metrics on different grids");
    double s = 0.0;
    for (std::size_t k = 0; k < a.nodes(); ++k) s = std::max(s, (a.block(k) - b.block(k)).cwiseAbs().maxCoeff());
    return s;
}

MetricField interpolate(const MetricField& f, int m)
{
    MetricField g = MetricField::identity(f.mode, m);
    auto lift = [&](auto get) {
        std::vector<cplx> v(f.nodes());
        for (std::size_t k = 0; k < f.nodes(); ++k) v[k] = get(k);
        return trig_interp_2d(v, f.n, m);
    };
    if (f.mode == Mode::diagonal) {
        auto a = lift([&](std::size_t k) { return cplx(f.u1[k]); });
        auto b = lift([&](std::size_t k) { return cplx(f.u2[k]); });
        for (std::size_t k = 0; k < g.nodes(); ++k) {
            g.u1[k] = a[k].real();
            g.u2[k] = b[k].real();
        }
        return g;
    }
    auto h00 = lift([&](std::size_t k) { return f.H[k](0, 0); });
    auto h11 = lift([&](std::size_t k) { return f.H[k](1, 1); });
    auto h01 = lift([&](std::size_t k) { return f.H[k](0, 1); });
    for (std::size_t k = 0; k < g.nodes(); ++k)
        g.H[k] << h00[k].real(), h01[k], std::conj(h01[k]), h11[k].real();
    return g;
}

higgs::HiggsData interpolate(const higgs::HiggsData& h, int m)
{
    higgs::HiggsData g = h;
    g.mu = interpolate_field(h.mu, m);
    g.nu = interpolate_field(h.nu, m);
    g.q2 = interpolate_field(h.q2, m);
    return g;
}

Mat2 log_posdef_similar(const Mat2& P)
{
    const double m = 0.5 * (P(0, 0) + P(1, 1)).real();
    const double det = P.determinant().real();
    if (!(m > 0.0) || !(det > 0.0)) throw std::domain_error("log of a matrix without positive spectrum");
    const double delta = std::sqrt(std::max(0.0, m * m - det));
    const double x = delta / m;
    const double c = x < 1e-4 ? (1.0 + x * x / 3.0 + x * x * x * x / 5.0) / m : std::atanh(x) / delta;
    Mat2 L = c * (P - m * Mat2::Identity());
    const double l0 = 0.5 * std::log(det);
    L(0, 0) += l0;
    L(1, 1) += l0;
    return L;
}

Mat2 exp_real_spectrum(const Mat2& M)
{
    const double m = 0.5 * (M(0, 0) + M(1, 1)).real();
    const double d2 = m * m - M.determinant().real();
    double c0, c1;
    if (d2 >= 0.0) {
        const double d = std::sqrt(d2);
        c0 = std::cosh(d);
        c1 = d < 1e-4 ? 1.0 + d2 / 6.0 + d2 * d2 / 120.0 : std::sinh(d) / d;
    } else {
        const double d = std::sqrt(-d2);
        c0 = std::cos(d);
        c1 = d < 1e-4 ? 1.0 + d2 / 6.0 + d2 * d2 / 120.0 : std::sin(d) / d;
    }
    Mat2 E = c1 * (M - m * Mat2::Identity());
    E(0, 0) += c0;
    E(1, 1) += c0;
    return std::exp(m) * E;
}

}  // namespace sp4::solver
