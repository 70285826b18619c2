#pragma once

#include <vector>

#include "sp4/higgs.hpp"
#include "sp4/solver.hpp"

namespace sp4::harmonic {

using solver::MetricField;
using solver::TorusDomain;

// Tr(phi^2) per node; the metric does not enter.
Field hopf(const higgs::HiggsData& h, const MetricField& m);

// c * sum_k Tr(phi phi^*H) dA with c the Killing-to-trace constant, i.e. the integral of -B(phi, Theta_H phi).
double energy(const higgs::HiggsData& h, const MetricField& m, const TorusDomain& dom);
double energy(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom);

bool immersion_check(const higgs::HiggsData& h);
bool immersion_check(const higgs::Sl4Higgs& s);

// Values of A_H + phi dz + phi^*H dzbar on the grid directions d/ds and d/dt.
struct FlatConnectionData {
    int n = 0;
    std::vector<Mat4> As;
    std::vector<Mat4> At;
    std::vector<Mat4> metric;
};

FlatConnectionData flat_connection(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom);

// Largest deviation from the identity of the transport around a single grid plaquette.
double plaquette_defect(const FlatConnectionData& c);

Mat4 symplectic_form();

struct HolonomyResult {
    Mat4 Ma;
    Mat4 Mb;
    double commutator_defect = 0.0;
    double symplectic_defect = 0.0;
    double det_defect = 0.0;
    double reality_defect = 0.0;
    double plaquette = 0.0;
};

// Path-ordered products along s (t = 0) and t (s = 0), midpoint rule per edge. Metrics whose
// flat-background residual exceeds max_residual are rejected.
HolonomyResult holonomy(const higgs::HiggsData& h, const MetricField& m, const TorusDomain& dom,
                        double max_residual = 1e-8);
// Same products for an arbitrary sl4 field; no residual check.
HolonomyResult holonomy(const higgs::Sl4Higgs& s, const MetricField& m, const TorusDomain& dom);

}  // namespace sp4::harmonic
