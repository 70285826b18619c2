#include "sp4/cyclic.hpp"

#include <cmath>
#include <stdexcept>

namespace sp4::cyclic {

namespace {

const liealg::Involutions& invs()
{
    static const liealg::Involutions v = liealg::build_involutions(liealg::build_ptds());
    return v;
}

LieElem part(const LieElem& e, int hat)
{
    auto g = liealg::grading(e, liealg::GradingScheme::hat);
    auto it = g.find(hat);
    return it == g.end() ? LieElem() : it->second;
}

LieElem height_part(const LieElem& e, int h)
{
    auto g = liealg::grading(e, liealg::GradingScheme::height);
    auto it = g.find(h);
    return it == g.end() ? LieElem() : it->second;
}

}  // namespace

Root alpha1() { return liealg::build_root_datum().simple.first; }
Root alpha2() { return liealg::build_root_datum().simple.second; }
Root highest_root() { return liealg::build_root_datum().highest; }

GradedForm GradedForm::from_elem(const LieElem& e, FormType t)
{
    GradedForm g;
    g.cartan = {e[0], e[1]};
    g.cartan_type = t;
    for (const auto& r : liealg::all_roots()) {
        cplx c = e.coeff(r);
        if (c == cplx(0.0)) continue;
        g.comp[r] = c;
        g.type[r] = t;
    }
    return g;
}

LieElem GradedForm::element() const
{
    LieElem e = LieElem::cartan(cartan[0], cartan[1]);
    for (const auto& [r, c] : comp) e += LieElem::root(r, c);
    return e;
}

std::map<int, LieElem> GradedForm::hat_components() const
{
    return liealg::grading(element(), liealg::GradingScheme::hat);
}

CyclicFrame CyclicFrame::make(cplx minus_alpha1, cplx minus_alpha2, cplx highest)
{
    CyclicFrame f;
    f.phi[-alpha1()] = minus_alpha1;
    f.phi[-alpha2()] = minus_alpha2;
    f.phi[highest_root()] = highest;
    return f;
}

LieElem CyclicFrame::phi_elem() const
{
    LieElem e;
    for (const auto& [r, c] : phi) {
        if (liealg::hat_index(r) != 3) throw std::invalid_argument("frame component outside g^_{-1}: " + r.name());
        e += LieElem::root(r, c);
    }
    return e;
}

LieElem CyclicFrame::phi_star() const { return -liealg::apply_involution(invs().theta, phi_elem()); }

bool CyclicReport::all_pass() const { return failures() == 0; }

int CyclicReport::failures() const
{
    int n = 0;
    for (const auto& c : conditions)
        if (!c.pass) ++n;
    return n;
}

CyclicReport check_cyclic(const FormPair& omega, double tol)
{
    const auto& th = invs().theta;
    const auto& la = invs().lambda;
    CyclicReport rep;
    auto add = [&](const char* name, double defect) { rep.conditions.push_back({name, defect <= tol, defect}); };

    add("graded_vanishing", part(omega.dz, 0).norm() + part(omega.dz, 2).norm() + part(omega.dzbar, 0).norm() +
                                part(omega.dzbar, 2).norm());

    LieElem a_m = part(omega.dz, 3), b_m = part(omega.dzbar, 3);
    LieElem a_p = part(omega.dz, 1), b_p = part(omega.dzbar, 1);
    add("type_reality", b_m.norm() + (a_p + liealg::apply_involution(th, b_m)).norm() +
                            (b_p + liealg::apply_involution(th, a_m)).norm());

    add("bracket", (2.0 * liealg::bracket(a_m, b_m)).norm());

    add("lambda", (liealg::apply_involution(la, omega.dz) - omega.dzbar).norm() +
                      (liealg::apply_involution(la, omega.dzbar) - omega.dz).norm());
    return rep;
}

double sign_value(const LieElem& x)
{
    return -liealg::killing(x, liealg::apply_involution(invs().theta, x)).real();
}

bool sign_check(const LieElem& x) { return sign_value(x) > 0.0; }

RigidityResult rigidity_nullspace(const CyclicFrame& frame, const Root& zeroed, bool allow_degenerate, double rel_tol)
{
    const Root a1 = alpha1(), a2 = alpha2(), mu = highest_root();
    if (zeroed != a1 && zeroed != a2) throw std::invalid_argument("zeroed root must be a positive simple root");

    auto comp = [&](const Root& r) {
        auto it = frame.phi.find(r);
        return it == frame.phi.end() ? cplx(0.0) : it->second;
    };
    RigidityResult res;
    res.hypothesis_met = std::abs(comp(-a1)) > 0.0 && std::abs(comp(-a2)) > 0.0;
    if (!res.hypothesis_met && !allow_degenerate)
        throw std::invalid_argument("frame has a vanishing simple-root component");

    const LieElem Phi = frame.phi_elem();
    const LieElem PhiStar = frame.phi_star();
    const LieElem Phi_m1 = height_part(Phi, -1);
    const LieElem PhiStar_p1 = height_part(PhiStar, 1);
    const auto& la = invs().lambda;

    std::vector<Root> unknowns;
    for (const Root& r : {-a1, -a2, mu})
        if (r != -zeroed) unknowns.push_back(r);
    const int ncols = 2 * int(unknowns.size());

    auto zeta_of = [&](const Eigen::VectorXd& x) {
        LieElem zm;
        for (std::size_t k = 0; k < unknowns.size(); ++k)
            zm += LieElem::root(unknowns[k], cplx(x(2 * k), x(2 * k + 1)));
        return zm + liealg::apply_involution(la, zm);
    };

    auto constraints = [&](const LieElem& zeta) {
        std::vector<LieElem> rows;
        rows.push_back(height_part(liealg::bracket(height_part(zeta, -1), Phi_m1), -2));
        rows.push_back(height_part(liealg::bracket(height_part(zeta, 1), PhiStar_p1), 2));
        LieElem z_mu = LieElem::root(mu, zeta.coeff(mu));
        LieElem z_mmu = LieElem::root(-mu, zeta.coeff(-mu));
        for (const Root& ai : {a1, a2}) {
            if (!(mu - ai).valid()) continue;
            rows.push_back(liealg::bracket(z_mu, LieElem::root(-ai, Phi.coeff(-ai))));
            rows.push_back(liealg::bracket(z_mmu, LieElem::root(ai, PhiStar.coeff(ai))));
        }
        return rows;
    };

    const int nrows_c = int(constraints(LieElem()).size()) * 2 * liealg::kDim;
    Eigen::MatrixXd M(nrows_c, ncols);
    for (int c = 0; c < ncols; ++c) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(ncols);
        x(c) = 1.0;
        auto rows = constraints(zeta_of(x));
        int r = 0;
        for (const auto& e : rows)
            for (int k = 0; k < liealg::kDim; ++k) {
                M(r++, c) = e[k].real();
                M(r++, c) = e[k].imag();
            }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    res.singular_values.assign(s.data(), s.data() + s.size());
    const double smax = s.size() ? s.maxCoeff() : 0.0;
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
        if (smax > 0.0 && s(i) > rel_tol * smax) ++rank;
    res.dimension = ncols - rank;
    const Eigen::MatrixXd V = svd.matrixV();
    for (int c = rank; c < ncols; ++c) res.basis.push_back(GradedForm::from_elem(zeta_of(V.col(c)), FormType::mixed));
    return res;
}

LieElem cartan_bracket_projection(const CyclicFrame& frame)
{
    LieElem b = liealg::bracket(frame.phi_star(), frame.phi_elem());
    return LieElem::cartan(b[0], b[1]);
}

}  // namespace sp4::cyclic
