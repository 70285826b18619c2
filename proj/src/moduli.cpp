#include "sp4/moduli.hpp"

#include <stdexcept>

namespace sp4::moduli {

namespace {

std::int64_t pow4(int g)
{
    std::int64_t p = 1;
    for (int i = 0; i < g; ++i) p *= 4;
    return p;
}

void require_genus(int g)
{
    if (g < 2) throw std::invalid_argument("genus must be at least 2");
}

}  // namespace

RRDims rr_dims(int g, int d)
{
    require_genus(g);
    if (d < g - 1 || d > 3 * g - 3) throw std::out_of_range("degree outside [g-1, 3g-3]");
    RRDims r;
    r.b = 2 * d + g - 1;
    if (d < 2 * g - 2) {
        r.a = -2 * d + 5 * g - 5;
    } else {
        r.n_dependent = true;
        if (d == 3 * g - 3) r.a_trivial_locus = 1;
    }
    return r;
}

ComponentCensus component_census(int g)
{
    require_genus(g);
    if (g > 30) throw std::out_of_range("component counts exceed 64-bit range for g > 30");
    ComponentCensus c;
    c.genus = g;
    const std::int64_t p = pow4(g);
    c.toledo_range = {-(2 * g - 2), 2 * g - 2};
    c.maximal_count = 3 * p + 2 * g - 4;
    c.smooth_count = p + 2 * g - 3;
    c.w1_nonzero_count = 2 * p - 2;
    c.hitchin_count = p;
    c.gothen_degrees = {g - 1, 3 * g - 3};
    std::int64_t middle = 0;
    for (int d = g - 1; d < 3 * g - 3; ++d) ++middle;
    c.identity_holds = c.w1_nonzero_count + middle + c.hitchin_count == c.maximal_count;
    return c;
}

FiberModel fiber_model(int a, int b)
{
    if (a <= 0) throw std::invalid_argument("fiber model needs a >= 1");
    if (b < 0) throw std::invalid_argument("fiber model needs b >= 0");
    FiberModel f;
    f.a = a;
    f.b = b;
    if (a == 1) {
        f.kind = FiberKind::affine;
        f.dimension = b;
        f.description = b == 0 ? "point" : "C^" + std::to_string(b);
    } else {
        f.kind = FiberKind::projective_bundle;
        f.dimension = a + b - 1;
        f.description = "O_{P^" + std::to_string(a - 1) + "}(1)^{+" + std::to_string(b) + "}";
    }
    return f;
}

DimensionBreakdown dimension_breakdown(int g, int d)
{
    require_genus(g);
    DimensionBreakdown r;
    r.target = 10 * g - 10;
    if (d <= g - 1 || d > 2 * g - 2) return r;
    r.in_range = true;
    const RRDims rr = rr_dims(g, d);
    const int a = rr.a ? *rr.a : -2 * d + 5 * g - 5;
    r.pic = g;
    r.fiber = fiber_model(a, rr.b).dimension;
    r.quadratic = 3 * g - 3;
    r.total = r.pic + r.fiber + r.quadratic;
    return r;
}

bool dimension_check(int g, int d)
{
    const DimensionBreakdown r = dimension_breakdown(g, d);
    if (!r.in_range) throw std::out_of_range("degree outside the checked range (g-1, 2g-2]");
    return r.total == r.target;
}

}  // namespace sp4::moduli
