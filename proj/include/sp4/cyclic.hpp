#pragma once

#include <map>
#include <string>
#include <vector>

#include "sp4/liealg.hpp"

namespace sp4::cyclic {

using liealg::LieElem;
using liealg::Root;

enum class FormType { t10, t01, mixed };

// Lie-algebra valued form split by root space, each piece tagged with its type.
struct GradedForm {
    std::map<Root, cplx> comp;
    std::array<cplx, 2> cartan{};
    std::map<Root, FormType> type;
    FormType cartan_type = FormType::t10;

    static GradedForm from_elem(const LieElem& e, FormType t);
    LieElem element() const;
    // Components keyed by hat index in {0,1,2,3}.
    std::map<int, LieElem> hat_components() const;
};

// Value of a 1-form at a point: omega = dz_part dz + dzbar_part dzbar.
struct FormPair {
    LieElem dz;
    LieElem dzbar;
};

// Components of Phi on g^_{-1}, keyed by -alpha1, -alpha2 and the highest root.
struct CyclicFrame {
    std::map<Root, cplx> phi;

    static CyclicFrame make(cplx minus_alpha1, cplx minus_alpha2, cplx highest);
    LieElem phi_elem() const;
    // -Theta(Phi), supported on g^_1.
    LieElem phi_star() const;
    FormPair forms() const { return {phi_elem(), phi_star()}; }
};

Root alpha1();
Root alpha2();
Root highest_root();

struct Condition {
    std::string name;
    bool pass = false;
    double defect = 0.0;
};

struct CyclicReport {
    std::vector<Condition> conditions;
    bool all_pass() const;
    int failures() const;
};

CyclicReport check_cyclic(const FormPair& omega, double tol = 1e-12);

// -B(x, Theta x); positive for x != 0.
double sign_value(const LieElem& x);
bool sign_check(const LieElem& x);

struct RigidityResult {
    int dimension = 0;
    std::vector<GradedForm> basis;
    std::vector<double> singular_values;
    bool hypothesis_met = true;
};

// Pointwise constraint system on zeta in g^_{-1} + g^_1 with Lambda(zeta) = zeta and
// zeta_{-zeroed} = 0. zeroed must be a positive simple root. Frames with a vanishing
// simple-root component are rejected unless allow_degenerate is set.
RigidityResult rigidity_nullspace(const CyclicFrame& frame, const Root& zeroed, bool allow_degenerate = false,
                                  double rel_tol = 1e-10);

// Cartan projection of [omega^_1, omega^_{-1}] for a frame, exposed for inspection only.
LieElem cartan_bracket_projection(const CyclicFrame& frame);

}  // namespace sp4::cyclic
