#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sp4/higgs.hpp"

namespace sp4::solver {

// Flat torus C / (a Z + a tau Z), a = sqrt(area / Im tau). Grid coordinates (s, t) in [0,1)^2,
// z = a (s + tau t).
struct TorusDomain {
    cplx tau{0.0, 1.0};
    int n = 64;
    double area = 4.0 * 3.14159265358979323846;

    void validate() const;
    double scale() const;
    std::size_t nodes() const { return std::size_t(n) * std::size_t(n); }
    bool nine_point() const { return tau.real() != 0.0; }
};

enum class Mode { diagonal, full };
enum class BackgroundKind { flat, degree };
enum class InitKind { zero, random, nondiagonal };

// diagonal: H = diag(e^u1, e^u2) on N + N^-1 K. full: Hermitian 2x2 H per node.
// Rank 4 metric is diag(H, conj(H)^-1).
struct MetricField {
    Mode mode = Mode::diagonal;
    int n = 0;
    std::vector<double> u1, u2;
    std::vector<Mat2> H;

    static MetricField identity(Mode mode, int n);
    std::size_t nodes() const { return std::size_t(n) * std::size_t(n); }
    Mat2 block(std::size_t k) const;
    Mat4 rank4(std::size_t k) const;
    MetricField as_full() const;
};

struct SolveReport {
    int iterations = 0;
    int relaxation_sweeps = 0;
    double residual_sup = 0.0;
    double residual_l2 = 0.0;
    bool converged = false;
    double offdiag_sup = 0.0;
    double seconds = 0.0;
    std::string message;
};

struct SolveOptions {
    Mode mode = Mode::diagonal;
    InitKind init = InitKind::zero;
    std::uint64_t seed = 20240917;
    double tol = 1e-10;
    int max_iter = 80;
    BackgroundKind background = BackgroundKind::degree;
};

// (s1, s2) of the constant source diag(s1, s2, -s1, -s2).
// degree: s1 = pi d / area, s2 = pi (2g - 2 - d) / area. flat: zero.
std::array<double, 2> background_source(const higgs::HiggsData& h, const TorusDomain& dom, BackgroundKind bg);

struct ResidualField {
    int n = 0;
    std::vector<Mat4> R;
    double sup() const;
    double l2() const;
};

// R = -dbar(H^-1 dH) + [phi, phi^*H] + Sigma, with Sigma = (S + H^-1 S H) / 2.
ResidualField residual(const higgs::HiggsData& h, const MetricField& m, const TorusDomain& dom,
                       std::array<double, 2> source);
ResidualField residual(const higgs::HiggsData& h, const MetricField& m, const TorusDomain& dom,
                       BackgroundKind bg = BackgroundKind::degree);
ResidualField residual(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom,
                       std::array<double, 2> source);

struct OracleResult {
    double u1 = 0.0;
    double u2 = 0.0;
    int iterations = 0;
    bool converged = false;
    bool bisection = false;
    double defect = 0.0;
};

// Constant solution for constant data with q2 = 0, from the Cartan part of [phi, phi^*H].
OracleResult constant_oracle(cplx mu, cplx nu, const TorusDomain& dom, BackgroundKind bg = BackgroundKind::degree,
                             int genus = 2, int d = 2);

struct SolveResult {
    MetricField metric;
    SolveReport report;
};

MetricField initial_metric(const TorusDomain& dom, Mode mode, InitKind init, std::uint64_t seed);
SolveResult solve(const higgs::HiggsData& h, const TorusDomain& dom, const SolveOptions& opts = {});
SolveResult solve_from(const higgs::HiggsData& h, const TorusDomain& dom, MetricField start, const SolveOptions& opts);

// max |H12| / sqrt(H11 H22)
double offdiag_sup(const MetricField& m);
// max over nodes of the largest entry of H_a - H_b
double sup_distance(const MetricField& a, const MetricField& b);
// Trigonometric interpolation to an m x m grid.
MetricField interpolate(const MetricField& f, int m);
higgs::HiggsData interpolate(const higgs::HiggsData& h, int m);

// log and exp of 2x2 matrices with real positive (log) or real (exp) spectrum.
Mat2 log_posdef_similar(const Mat2& P);
Mat2 exp_real_spectrum(const Mat2& M);

}  // namespace sp4::solver
