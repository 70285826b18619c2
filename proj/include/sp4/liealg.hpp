#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sp4 {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using Mat2 = Eigen::Matrix2cd;

namespace liealg {

// aL1 + bL2 in the dual basis of (H1, H2).
struct Root {
    int a = 0;
    int b = 0;

    auto operator<=>(const Root&) const = default;
    Root operator-() const { return {-a, -b}; }
    Root operator+(const Root& o) const { return {a + o.a, b + o.b}; }
    Root operator-(const Root& o) const { return {a - o.a, b - o.b}; }
    bool valid() const;
    std::string name() const;
    // Value on the Cartan element u1*H1 + u2*H2.
    template <class T>
    T eval(T u1, T u2) const { return T(a) * u1 + T(b) * u2; }
};

inline constexpr int kDim = 10;
inline constexpr int kRank = 2;

// Basis order: H1, H2, then the eight roots as listed by all_roots().
const std::array<Root, 8>& all_roots();
int basis_index(const Root& r);
Root basis_root(int k);
std::string basis_name(int k);
Mat4 basis_matrix(int k);

class LieElem {
public:
    LieElem() { c_.fill(cplx(0.0, 0.0)); }

    static LieElem basis(int k, cplx s = 1.0);
    static LieElem root(const Root& r, cplx s = 1.0);
    static LieElem cartan(cplx h1, cplx h2);
    static LieElem from_matrix(const Mat4& m);

    cplx& operator[](int k) { return c_[k]; }
    const cplx& operator[](int k) const { return c_[k]; }
    cplx coeff(const Root& r) const { return c_[basis_index(r)]; }
    const std::array<cplx, kDim>& coeffs() const { return c_; }

    Mat4 matrix() const;
    double norm() const;
    bool is_zero(double tol = 0.0) const { return norm() <= tol; }

    LieElem& operator+=(const LieElem& o);
    LieElem& operator-=(const LieElem& o);
    LieElem& operator*=(cplx s);
    friend LieElem operator+(LieElem a, const LieElem& b) { return a += b; }
    friend LieElem operator-(LieElem a, const LieElem& b) { return a -= b; }
    friend LieElem operator*(cplx s, LieElem a) { return a *= s; }
    friend LieElem operator*(LieElem a, cplx s) { return a *= s; }
    LieElem operator-() const { return cplx(-1.0) * *this; }
    bool operator==(const LieElem& o) const { return c_ == o.c_; }

private:
    std::array<cplx, kDim> c_;
};

struct RootDatum {
    std::vector<Root> roots;
    std::pair<Root, Root> simple;
    std::vector<Root> positive;
    std::map<Root, int> heights;
    std::map<Root, LieElem> coroots;
    Root highest;
    int rank = kRank;
    int dim = kDim;

    int height(const Root& r) const { return heights.at(r); }
};

RootDatum build_root_datum();

// N with [X_a, X_b] = N X_{a+b}; zero when a+b is not a root.
int structure_constant(const Root& a, const Root& b);
LieElem coroot(const Root& r);

LieElem bracket(const LieElem& a, const LieElem& b);
Mat4 commutator(const Mat4& a, const Mat4& b);

using AdMatrix = Eigen::Matrix<cplx, kDim, kDim>;
AdMatrix ad_matrix(const LieElem& a);
cplx killing(const LieElem& a, const LieElem& b);
// c with B(X,Y) = c Tr(XY), fitted over all basis pairs.
double killing_trace_constant();

enum class InvolutionKind { theta, sigma, lambda };
enum class Linearity { complex_linear, conjugate_linear };

struct Involution {
    InvolutionKind kind = InvolutionKind::theta;
    std::array<LieElem, kDim> table;
    Linearity linearity = Linearity::complex_linear;
};

LieElem apply_involution(const Involution& inv, const LieElem& a);
Involution compose(const Involution& outer, const Involution& inner, InvolutionKind kind);
// Real dimension of the fixed set, computed from the real 20x20 form.
int real_fixed_dimension(const Involution& inv, double tol = 1e-10);

struct PtdsData {
    LieElem x;
    LieElem e1;
    LieElem e1_tilde;
    LieElem e2;
    std::vector<int> exponents;
    std::vector<int> isotypic_dims;
    Mat4 g_plus;
};

PtdsData build_ptds();

struct Involutions {
    Involution theta;
    Involution sigma;
    Involution lambda;
};

Involutions build_involutions(const PtdsData& ptds);

enum class GradingScheme { height, hat };

int height(const Root& r);
// Z/4 index in {0,1,2,3}.
int hat_index(const Root& r);
// Representative of a Z/4 index in {-1,0,1,2}.
int hat_signed(int j);
std::map<int, LieElem> grading(const LieElem& elem, GradingScheme scheme);

// X^{*H} = H^{-1} conj(X)^T H for H = exp(u1 H1 + u2 H2).
LieElem hermitian_adjoint(const LieElem& a, double u1, double u2);

struct CheckResult {
    std::string name;
    double defect = 0.0;
    bool pass = false;
};

// Jacobi, involution, PTDS and grading identities with their defects.
std::vector<CheckResult> invariant_suite(double tol = 1e-12);

// Plain-text table of the basis, brackets, coroots, gradings and involutions.
std::string dump_table();

}  // namespace liealg
}  // namespace sp4
