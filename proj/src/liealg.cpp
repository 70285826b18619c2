#include "sp4/liealg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sp4::liealg {

namespace {

constexpr std::array<Root, 8> kRoots = {{
    {1, -1}, {-1, 1}, {2, 0}, {-2, 0}, {0, 2}, {0, -2}, {1, 1}, {-1, -1},
}};

struct Slot {
    int i, j;
    double v;
};

// Matrix entries of each basis element; the first slot carries the coefficient.
const std::array<std::vector<Slot>, kDim>& slots()
{
    static const std::array<std::vector<Slot>, kDim> s = {{
        {{0, 0, 1.0}, {2, 2, -1.0}},
        {{1, 1, 1.0}, {3, 3, -1.0}},
        {{0, 1, 1.0}, {3, 2, -1.0}},
        {{1, 0, 1.0}, {2, 3, -1.0}},
        {{0, 2, 1.0}},
        {{2, 0, 1.0}},
        {{1, 3, 1.0}},
        {{3, 1, 1.0}},
        {{0, 3, 1.0}, {1, 2, 1.0}},
        {{3, 0, 1.0}, {2, 1, 1.0}},
    }};
    return s;
}

using BracketTable = std::array<std::array<LieElem, kDim>, kDim>;

const std::array<std::array<int, 8>, 8>& n_table()
{
    static const auto t = [] {
        std::array<std::array<int, 8>, 8> n{};
        for (int p = 0; p < 8; ++p) {
            for (int q = 0; q < 8; ++q) {
                Root s = kRoots[p] + kRoots[q];
                if (!s.valid()) continue;
                Mat4 c = commutator(basis_matrix(p + 2), basis_matrix(q + 2));
                LieElem e = LieElem::from_matrix(c);
                double v = e[basis_index(s)].real();
                int iv = static_cast<int>(std::lround(v));
                if ((e.matrix() - c).norm() > 1e-14 || std::abs(v - iv) > 1e-14)
                    throw std::logic_error("structure constant is not an integer multiple of a basis vector");
                n[p][q] = iv;
            }
        }
        return n;
    }();
    return t;
}

const BracketTable& bracket_table()
{
    static const BracketTable t = [] {
        BracketTable b;
        for (int i = 0; i < kDim; ++i) {
            for (int j = 0; j < kDim; ++j) {
                LieElem r;
                if (i < 2 && j < 2) {
                } else if (i < 2) {
                    Root beta = basis_root(j);
                    r[j] = double(i == 0 ? beta.a : beta.b);
                } else if (j < 2) {
                    Root alpha = basis_root(i);
                    r[i] = -double(j == 0 ? alpha.a : alpha.b);
                } else {
                    Root alpha = basis_root(i), beta = basis_root(j);
                    Root s = alpha + beta;
                    if (s.a == 0 && s.b == 0)
                        r = coroot(alpha);
                    else if (s.valid())
                        r[basis_index(s)] = double(structure_constant(alpha, beta));
                }
                b[i][j] = r;
            }
        }
        return b;
    }();
    return t;
}

std::string fmt_c(cplx z)
{
    char buf[96];
    if (z.imag() == 0.0)
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
    else
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

std::string describe(const LieElem& e)
{
    std::string out;
    for (int k = 0; k < kDim; ++k) {
        if (e[k] == cplx(0.0)) continue;
        if (!out.empty()) out += " + ";
        out += "(" + fmt_c(e[k]) + ")" + basis_name(k);
    }
    return out.empty() ? "0" : out;
}

}  // namespace

bool Root::valid() const
{
    for (const auto& r : kRoots)
        if (r.a == a && r.b == b) return true;
    return false;
}

std::string Root::name() const
{
    auto term = [](int c, const char* l) {
        if (c == 0) return std::string();
        std::string s = c > 0 ? "+" : "-";
        int m = std::abs(c);
        if (m != 1) s += std::to_string(m);
        return s + l;
    };
    std::string s = term(a, "L1") + term(b, "L2");
    if (s.empty()) return "0";
    if (s[0] == '+') s.erase(0, 1);
    return s;
}

const std::array<Root, 8>& all_roots() { return kRoots; }

int basis_index(const Root& r)
{
    for (int k = 0; k < 8; ++k)
        if (kRoots[k] == r) return k + 2;
    throw std::invalid_argument("not a root: " + r.name());
}

Root basis_root(int k)
{
    if (k < 2 || k >= kDim) throw std::out_of_range("basis index is not a root vector");
    return kRoots[k - 2];
}

std::string basis_name(int k)
{
    if (k == 0) return "H1";
    if (k == 1) return "H2";
    return "X[" + basis_root(k).name() + "]";
}

Mat4 basis_matrix(int k)
{
    Mat4 m = Mat4::Zero();
    for (const auto& s : slots()[k]) m(s.i, s.j) = s.v;
    return m;
}

LieElem LieElem::basis(int k, cplx s)
{
    LieElem e;
    e[k] = s;
    return e;
}

LieElem LieElem::root(const Root& r, cplx s) { return basis(basis_index(r), s); }

LieElem LieElem::cartan(cplx h1, cplx h2)
{
    LieElem e;
    e[0] = h1;
    e[1] = h2;
    return e;
}

LieElem LieElem::from_matrix(const Mat4& m)
{
    LieElem e;
    for (int k = 0; k < kDim; ++k) {
        const Slot& s = slots()[k].front();
        e[k] = m(s.i, s.j) / s.v;
    }
    return e;
}

Mat4 LieElem::matrix() const
{
    Mat4 m = Mat4::Zero();
    for (int k = 0; k < kDim; ++k)
        if (c_[k] != cplx(0.0))
            for (const auto& s : slots()[k]) m(s.i, s.j) += s.v * c_[k];
    return m;
}

double LieElem::norm() const
{
    double s = 0.0;
    for (const auto& z : c_) s += std::norm(z);
    return std::sqrt(s);
}

LieElem& LieElem::operator+=(const LieElem& o)
{
    for (int k = 0; k < kDim; ++k) c_[k] += o.c_[k];
    return *this;
}

LieElem& LieElem::operator-=(const LieElem& o)
{
    for (int k = 0; k < kDim; ++k) c_[k] -= o.c_[k];
    return *this;
}

LieElem& LieElem::operator*=(cplx s)
{
    for (auto& z : c_) z *= s;
    return *this;
}

int height(const Root& r)
{
    // alpha(x) with x = -H1/2 + 3H2/2
    return (-r.a + 3 * r.b) / 2;
}

int hat_index(const Root& r) { return ((height(r) % 4) + 4) % 4; }

int hat_signed(int j)
{
    int m = ((j % 4) + 4) % 4;
    return m == 3 ? -1 : m;
}

LieElem coroot(const Root& r)
{
    if (!r.valid()) throw std::invalid_argument("coroot of a non-root");
    int n2 = r.a * r.a + r.b * r.b;
    return LieElem::cartan(2.0 * r.a / n2, 2.0 * r.b / n2);
}

RootDatum build_root_datum()
{
    RootDatum d;
    d.roots.assign(kRoots.begin(), kRoots.end());
    d.simple = {Root{1, 1}, Root{-2, 0}};
    for (const auto& r : kRoots) {
        d.heights[r] = height(r);
        d.coroots[r] = coroot(r);
        if (height(r) > 0) d.positive.push_back(r);
    }
    Root hi = d.positive.front();
    for (const auto& r : d.positive)
        if (height(r) > height(hi)) hi = r;
    d.highest = hi;
    return d;
}

int structure_constant(const Root& a, const Root& b)
{
    Root s = a + b;
    if (!s.valid()) return 0;
    return n_table()[basis_index(a) - 2][basis_index(b) - 2];
}

LieElem bracket(const LieElem& a, const LieElem& b)
{
    const auto& t = bracket_table();
    LieElem r;
    for (int i = 0; i < kDim; ++i) {
        if (a[i] == cplx(0.0)) continue;
        for (int j = 0; j < kDim; ++j) {
            if (b[j] == cplx(0.0)) continue;
            cplx w = a[i] * b[j];
            const LieElem& e = t[i][j];
            for (int k = 0; k < kDim; ++k)
                if (e[k] != cplx(0.0)) r[k] += w * e[k];
        }
    }
    return r;
}

Mat4 commutator(const Mat4& a, const Mat4& b) { return a * b - b * a; }

AdMatrix ad_matrix(const LieElem& a)
{
    AdMatrix m;
    for (int k = 0; k < kDim; ++k) {
        LieElem col = bracket(a, LieElem::basis(k));
        for (int i = 0; i < kDim; ++i) m(i, k) = col[i];
    }
    return m;
}

cplx killing(const LieElem& a, const LieElem& b) { return (ad_matrix(a) * ad_matrix(b)).trace(); }

double killing_trace_constant()
{
    double c = 0.0;
    bool have = false;
    for (int i = 0; i < kDim; ++i) {
        for (int j = 0; j < kDim; ++j) {
            cplx tr = (basis_matrix(i) * basis_matrix(j)).trace();
            cplx bk = killing(LieElem::basis(i), LieElem::basis(j));
            if (std::abs(tr) < 1e-14) {
                if (std::abs(bk) > 1e-12) throw std::logic_error("Killing form is not a trace form multiple");
                continue;
            }
            double r = (bk / tr).real();
            if (have && std::abs(r - c) > 1e-12) throw std::logic_error("Killing form ratio is not constant");
            c = r;
            have = true;
        }
    }
    return c;
}

LieElem apply_involution(const Involution& inv, const LieElem& a)
{
    LieElem r;
    bool conj = inv.linearity == Linearity::conjugate_linear;
    for (int k = 0; k < kDim; ++k) {
        if (a[k] == cplx(0.0)) continue;
        r += (conj ? std::conj(a[k]) : a[k]) * inv.table[k];
    }
    return r;
}

Involution compose(const Involution& outer, const Involution& inner, InvolutionKind kind)
{
    Involution c;
    c.kind = kind;
    for (int k = 0; k < kDim; ++k) c.table[k] = apply_involution(outer, inner.table[k]);
    bool conj = (outer.linearity == Linearity::conjugate_linear) != (inner.linearity == Linearity::conjugate_linear);
    c.linearity = conj ? Linearity::conjugate_linear : Linearity::complex_linear;
    return c;
}

int real_fixed_dimension(const Involution& inv, double tol)
{
    Eigen::Matrix<double, 2 * kDim, 2 * kDim> m;
    for (int k = 0; k < kDim; ++k) {
        for (int part = 0; part < 2; ++part) {
            LieElem in = LieElem::basis(k, part == 0 ? cplx(1.0) : cplx(0.0, 1.0));
            LieElem out = apply_involution(inv, in) - in;
            for (int i = 0; i < kDim; ++i) {
                m(2 * i, 2 * k + part) = out[i].real();
                m(2 * i + 1, 2 * k + part) = out[i].imag();
            }
        }
    }
    Eigen::JacobiSVD<decltype(m)> svd(m);
    const auto& s = svd.singularValues();
    double smax = s.maxCoeff();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > tol * std::max(smax, 1.0)) ++rank;
    return 2 * kDim - rank;
}

PtdsData build_ptds()
{
    PtdsData p;
    const double r32 = std::sqrt(1.5), r2 = std::sqrt(2.0);
    p.x = LieElem::cartan(-0.5, 1.5);
    p.e1 = LieElem::root({1, 1}, r32) + LieElem::root({-2, 0}, r2);
    p.e1_tilde = LieElem::root({2, 0}, r2) + LieElem::root({-1, -1}, r32);
    p.e2 = LieElem::root({0, 2});

    for (const LieElem& hw : {p.e1, p.e2}) {
        int dim = 0;
        LieElem v = hw;
        while (!v.is_zero(1e-12) && dim <= kDim) {
            ++dim;
            v = bracket(p.e1_tilde, v);
        }
        p.isotypic_dims.push_back(dim);
        p.exponents.push_back((dim - 1) / 2);
    }

    Mat4 xm = p.x.matrix();
    p.g_plus = Mat4::Zero();
    for (int i = 0; i < 4; ++i)
        p.g_plus(i, i) = std::exp(cplx(0.0, 2.0 * std::numbers::pi * xm(i, i).real() / 4.0));
    return p;
}

Involutions build_involutions(const PtdsData& ptds)
{
    Involutions out;

    Involution th;
    th.kind = InvolutionKind::theta;
    th.linearity = Linearity::conjugate_linear;
    th.table[0] = LieElem::basis(0, -1.0);
    th.table[1] = LieElem::basis(1, -1.0);
    for (const auto& r : kRoots) th.table[basis_index(r)] = LieElem::root(-r, -1.0);
    out.theta = th;

    // sigma: identity on the Cartan, sign eps on each root space, pinned by
    // sigma(e1) = -e1 and sigma(e1~) = -e1~ and propagated through brackets.
    std::map<Root, int> eps;
    for (const LieElem* v : {&ptds.e1, &ptds.e1_tilde})
        for (const auto& r : kRoots)
            if (std::abs(v->coeff(r)) > 0.0) eps[r] = -1;
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto [a, ea] : std::map<Root, int>(eps)) {
            for (auto [b, eb] : std::map<Root, int>(eps)) {
                Root s = a + b;
                if (!s.valid() || structure_constant(a, b) == 0) continue;
                int v = ea * eb;
                auto it = eps.find(s);
                if (it == eps.end()) {
                    eps[s] = v;
                    grew = true;
                } else if (it->second != v) {
                    throw std::logic_error("sigma does not extend consistently: " + s.name());
                }
            }
        }
    }
    for (const auto& r : kRoots) {
        if (!eps.count(r)) throw std::logic_error("sigma undetermined on " + r.name());
        if (eps.at(r) != eps.at(-r)) throw std::logic_error("sigma sign differs on opposite roots: " + r.name());
    }

    Involution sg;
    sg.kind = InvolutionKind::sigma;
    sg.linearity = Linearity::complex_linear;
    sg.table[0] = LieElem::basis(0);
    sg.table[1] = LieElem::basis(1);
    for (const auto& r : kRoots) sg.table[basis_index(r)] = LieElem::root(r, double(eps.at(r)));
    out.sigma = sg;

    out.lambda = compose(sg, th, InvolutionKind::lambda);
    return out;
}

std::map<int, LieElem> grading(const LieElem& elem, GradingScheme scheme)
{
    std::map<int, LieElem> parts;
    parts[0] += LieElem::cartan(elem[0], elem[1]);
    for (const auto& r : kRoots) {
        int k = basis_index(r);
        int idx = scheme == GradingScheme::height ? height(r) : hat_index(r);
        parts[idx] += LieElem::basis(k, elem[k]);
    }
    return parts;
}

LieElem hermitian_adjoint(const LieElem& a, double u1, double u2)
{
    LieElem r = LieElem::cartan(std::conj(a[0]), std::conj(a[1]));
    for (const auto& rt : kRoots) {
        cplx c = a[basis_index(rt)];
        if (c == cplx(0.0)) continue;
        r[basis_index(-rt)] += std::conj(c) * std::exp(rt.eval(u1, u2));
    }
    return r;
}

std::string dump_table()
{
    std::ostringstream os;
    RootDatum d = build_root_datum();
    PtdsData p = build_ptds();
    Involutions inv = build_involutions(p);

    os << "# basis (coefficient slot first)\n";
    for (int k = 0; k < kDim; ++k) {
        os << basis_name(k) << ":";
        for (const auto& s : slots()[k]) os << " (" << s.i + 1 << "," << s.j + 1 << ")=" << s.v;
        if (k >= 2) {
            Root r = basis_root(k);
            os << " height=" << height(r) << " hat=" << hat_signed(hat_index(r));
        } else {
            os << " height=0 hat=0";
        }
        os << "\n";
    }

    os << "\n# simple roots\n" << d.simple.first.name() << ", " << d.simple.second.name() << "\n";
    os << "highest: " << d.highest.name() << "\n";

    os << "\n# coroots H_a = [X_a, X_-a]\n";
    for (const auto& r : kRoots) os << r.name() << ": " << describe(coroot(r)) << "\n";

    os << "\n# structure constants [X_a, X_b] = N X_(a+b)\n";
    for (const auto& a : kRoots)
        for (const auto& b : kRoots)
            if ((a + b).valid())
                os << "N(" << a.name() << ", " << b.name() << ") = " << structure_constant(a, b) << "\n";

    os << "\n# killing form\nB(X,Y) = " << killing_trace_constant() << " Tr(XY)\n";

    os << "\n# ptds\n";
    os << "x = " << describe(p.x) << "\n";
    os << "e1 = " << describe(p.e1) << "\n";
    os << "e1~ = " << describe(p.e1_tilde) << "\n";
    os << "e2 = " << describe(p.e2) << " (unit coefficient)\n";
    os << "isotypic dims:";
    for (int v : p.isotypic_dims) os << " " << v;
    os << "\nexponents:";
    for (int v : p.exponents) os << " " << v;
    os << "\n";

    auto show = [&](const char* name, const Involution& iv) {
        os << "\n# " << name << (iv.linearity == Linearity::conjugate_linear ? " (conjugate-linear)" : " (complex-linear)") << "\n";
        for (int k = 0; k < kDim; ++k) os << basis_name(k) << " -> " << describe(iv.table[k]) << "\n";
    };
    show("theta", inv.theta);
    show("sigma", inv.sigma);
    show("lambda", inv.lambda);
    return os.str();
}

std::vector<CheckResult> invariant_suite(double tol)
{
    std::vector<CheckResult> out;
    auto add = [&](std::string name, double defect) { out.push_back({std::move(name), defect, defect <= tol}); };
    const PtdsData p = build_ptds();
    const Involutions inv = build_involutions(p);

    std::vector<LieElem> probes;
    for (int k = 0; k < kDim; ++k) {
        probes.push_back(LieElem::basis(k));
        probes.push_back(LieElem::basis(k, cplx(0.0, 1.0)));
    }

    double jac = 0.0, mat = 0.0;
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) {
            const LieElem A = LieElem::basis(a), B = LieElem::basis(b);
            mat = std::max(mat, (bracket(A, B).matrix() - commutator(A.matrix(), B.matrix())).norm());
            for (int c = 0; c < kDim; ++c) {
                const LieElem C = LieElem::basis(c);
                jac = std::max(jac, (bracket(A, bracket(B, C)) + bracket(B, bracket(C, A)) + bracket(C, bracket(A, B))).norm());
            }
        }
    add("jacobi", jac);
    add("bracket_matches_matrix", mat);

    double comm = 0.0, sq = 0.0, hom = 0.0;
    for (const auto& x : probes) {
        comm = std::max(comm, (apply_involution(inv.theta, apply_involution(inv.sigma, x)) -
                               apply_involution(inv.sigma, apply_involution(inv.theta, x))).norm());
        for (const Involution* iv : {&inv.theta, &inv.sigma, &inv.lambda})
            sq = std::max(sq, (apply_involution(*iv, apply_involution(*iv, x)) - x).norm());
    }
    for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) {
            const LieElem A = LieElem::basis(a), B = LieElem::basis(b);
            for (const Involution* iv : {&inv.theta, &inv.sigma, &inv.lambda})
                hom = std::max(hom, (apply_involution(*iv, bracket(A, B)) -
                                     bracket(apply_involution(*iv, A), apply_involution(*iv, B))).norm());
        }
    add("theta_sigma_commute", comm);
    add("involutions_square_to_identity", sq);
    add("involutions_are_automorphisms", hom);
    add("lambda_fixed_real_dimension", std::abs(real_fixed_dimension(inv.lambda) - 10));

    double pos = 0.0;
    for (const auto& x : probes) {
        const double v = -killing(x, apply_involution(inv.theta, x)).real();
        if (!(v > 0.0)) pos = std::max(pos, 1.0 - v);
    }
    add("theta_form_positive", pos);

    add("ptds_x_e1", (bracket(p.x, p.e1) - p.e1).norm());
    add("ptds_x_e1_tilde", (bracket(p.x, p.e1_tilde) + p.e1_tilde).norm());
    add("ptds_e1_e1_tilde", (bracket(p.e1, p.e1_tilde) - p.x).norm());
    add("ptds_e2_highest_weight", bracket(p.e1, p.e2).norm());
    add("isotypic_dims_3_7", p.isotypic_dims == std::vector<int>{3, 7} ? 0.0 : 1.0);
    add("exponents_1_3", p.exponents == std::vector<int>{1, 3} ? 0.0 : 1.0);
    add("killing_trace_constant_6", std::abs(killing_trace_constant() - 6.0));

    double closure = 0.0, adg = 0.0;
    const Mat4 g = p.g_plus, gi = g.inverse();
    auto hat_of = [](int k) { return k < 2 ? 0 : hat_index(basis_root(k)); };
    for (int a = 0; a < kDim; ++a) {
        const LieElem A = LieElem::basis(a);
        const cplx ev = std::pow(cplx(0.0, 1.0), hat_of(a));
        adg = std::max(adg, (g * A.matrix() * gi - ev * A.matrix()).norm());
        for (int b = 0; b < kDim; ++b) {
            const auto parts = grading(bracket(A, LieElem::basis(b)), GradingScheme::hat);
            const int want = (hat_of(a) + hat_of(b)) % 4;
            for (const auto& [j, e] : parts)
                if (j != want) closure = std::max(closure, e.norm());
        }
    }
    add("hat_grading_closed", closure);
    add("ad_g_plus_eigenvalues", adg);

    const RootDatum d = build_root_datum();
    std::vector<Root> minus_one;
    for (const auto& r : kRoots)
        if (hat_index(r) == 3) minus_one.push_back(r);
    std::vector<Root> expected{-d.simple.first, -d.simple.second, d.highest};
    std::sort(minus_one.begin(), minus_one.end());
    std::sort(expected.begin(), expected.end());
    add("g_hat_minus_one_span", minus_one == expected ? 0.0 : 1.0);
    return out;
}

}  // namespace sp4::liealg
