#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace sp4::moduli {

// a = h^0(N^-2 K^3), b = h^0(N^2 K) for deg N = d on a genus g curve.
struct RRDims {
    std::optional<int> a;
    int b = 0;
    bool n_dependent = false;
    // Value of a on the locus N^-2 K^3 = O, only at d = 3g - 3.
    std::optional<int> a_trivial_locus;
};

RRDims rr_dims(int g, int d);

struct ComponentCensus {
    int genus = 0;
    std::pair<int, int> toledo_range;
    std::int64_t maximal_count = 0;
    std::int64_t smooth_count = 0;
    std::int64_t w1_nonzero_count = 0;
    std::int64_t hitchin_count = 0;
    // g - 1 < d <= 3g - 3
    std::pair<int, int> gothen_degrees;
    bool identity_holds = false;
};

// Counts fit in int64 for g <= 30.
ComponentCensus component_census(int g);

enum class FiberKind { projective_bundle, affine };

struct FiberModel {
    int a = 0;
    int b = 0;
    FiberKind kind = FiberKind::affine;
    std::string description;
    int dimension = 0;
};

FiberModel fiber_model(int a, int b);

struct DimensionBreakdown {
    bool in_range = false;
    int pic = 0;
    int fiber = 0;
    int quadratic = 0;
    int total = 0;
    int target = 0;
};

// Checked for g - 1 < d <= 2g - 2; at d = 2g - 2 the generic value a = g - 1 is used.
DimensionBreakdown dimension_breakdown(int g, int d);
bool dimension_check(int g, int d);

}  // namespace sp4::moduli
