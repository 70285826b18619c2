#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sp4 {

using cplx = std::complex<double>;

// Scalar field on an n x n periodic grid, or a single constant when n == 0.
// Node (i, j) is stored at i + n*j.
struct Field {
    int n = 0;
    std::vector<cplx> v{cplx(0.0)};

    static Field constant(cplx c) { return Field{0, {c}}; }
    static Field grid(int n, std::vector<cplx> values)
    {
        if (n <= 0 || values.size() != std::size_t(n) * std::size_t(n))
            throw std::invalid_argument("grid field size mismatch");
        return Field{n, std::move(values)};
    }
    // f(s, t) sampled at s = i/n, t = j/n.
    static Field sample(int n, const std::function<cplx(double, double)>& f)
    {
        std::vector<cplx> vals(std::size_t(n) * n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) vals[i + std::size_t(n) * j] = f(double(i) / n, double(j) / n);
        return grid(n, std::move(vals));
    }

    bool is_constant() const { return n == 0; }
    cplx at(std::size_t k) const { return n == 0 ? v[0] : v[k]; }
    double sup() const
    {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    Field scaled(cplx s) const
    {
        Field f = *this;
        for (auto& z : f.v) z *= s;
        return f;
    }
};

}  // namespace sp4
