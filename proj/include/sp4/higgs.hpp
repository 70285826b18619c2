#pragma once

#include <array>
#include <string>
#include <vector>

#include "sp4/cyclic.hpp"
#include "sp4/field.hpp"
#include "sp4/liealg.hpp"

namespace sp4::higgs {

// (d, mu, nu, q2) of the normal form beta = [[nu, q2], [q2, mu]], gamma = [[0, 1], [1, 0]].
struct HiggsData {
    int genus = 2;
    int d = 2;
    Field mu = Field::constant(1.0);
    Field nu = Field::constant(0.0);
    Field q2 = Field::constant(0.0);

    // Grid size shared by the fields, 0 when all are constant.
    int grid_n() const;
    std::size_t nodes() const;
};

HiggsData make_constant(cplx mu, cplx nu, cplx q2 = 0.0, int genus = 2, int d = 2);

struct Sl4Higgs {
    int n = 0;
    std::vector<Mat4> phi;
    std::array<std::string, 4> weight_labels{"N", "N^-1 K", "N^-1", "N K^-1"};
};

Mat4 sl4_matrix(cplx mu, cplx nu, cplx q2);
Sl4Higgs build_sl4(const HiggsData& h);

struct Invariants {
    Field p1;
    Field p2;
    // max |Tr(phi)| and |Tr(phi^3)| over nodes
    double odd_trace_sup = 0.0;
};

// Trace summed pairwise: (m00 + m11) + (m22 + m33).
cplx pairwise_trace(const Mat4& m);
Invariants hitchin_invariants(const Sl4Higgs& s);

// Coefficients of Tr(phi^4) = c_mu_nu * mu*nu + c_q2q2 * q2^2, from symbolic expansion.
struct QuarticFixture {
    double c_mu_nu = 4.0;
    double c_q2q2 = 4.0;
};
inline constexpr QuarticFixture kQuarticFixture{};

struct CayleyData {
    Mat2 Q_W;
    std::vector<Mat2> psi;
};

CayleyData cayley_partner(const HiggsData& h);

HiggsData gauge_action(cplx lam, const HiggsData& h);

// Conjugation by diag(l^-3, l, l^3, l^-1), l = exp(2 pi i / 8), multiplies phi by i.
bool zeta4_fixed_point_check(const HiggsData& h, double tol = 1e-13);

enum class Stability { stable, strictly_semistable_or_unstable };

struct StabilityResult {
    Stability flag = Stability::stable;
    std::string note;
};

StabilityResult stability_flag(const HiggsData& h);

// C* representative: largest |mu| made positive real, sup |mu| = 1.
HiggsData normal_form(const HiggsData& h);

// Graded element at one node; matrix view equals build_sl4(h).phi[node].
cyclic::GradedForm to_graded_element(const HiggsData& h, std::size_t node = 0);

// Phi on the g^_{-1} roots at one node (requires q2 = 0 there).
cyclic::CyclicFrame to_frame(const HiggsData& h, std::size_t node = 0);

// (phi, -Theta(phi)) at one node.
cyclic::FormPair to_forms(const HiggsData& h, std::size_t node = 0);

}  // namespace sp4::higgs
