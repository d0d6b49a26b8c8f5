#include "triadic/model.hpp"

#include "triadic/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace triadic {

ModelParams ModelParams::make(int n, double c1, double c2, double c3) {
    ModelParams params{n, c1, c2, c3};
    params.validate();
    return params;
}

void ModelParams::validate() const {
    std::ostringstream problems;
    if (n < 3) problems << " n >= 3 required (got " << n << ");";
    if (!(c1 > 0.0) || !std::isfinite(c1)) problems << " c1 > 0 required;";
    if (!(c2 > 0.0) || !std::isfinite(c2)) problems << " c2 > 0 required;";
    if (!(c3 >= 0.0) || !std::isfinite(c3)) problems << " c3 >= 0 required;";
    const std::string text = problems.str();
    if (!text.empty()) throw Error(ErrorCode::InvalidArgument, "invalid model parameters:" + text);
}

ModelParams bistable_params(int n) { return ModelParams::make(n, 0.025, 0.25, 0.91); }
ModelParams monostable_params(int n) { return ModelParams::make(n, 0.25, 0.25, 0.91); }

double drift(double p, const ModelParams& params) {
    return (1.0 - p) * (params.c1 + params.c3 * p * p) - params.c2 * p;
}

double drift_derivative(double p, const ModelParams& params) {
    return -3.0 * params.c3 * p * p + 2.0 * params.c3 * p - (params.c1 + params.c2);
}

double f_ratio(double p, const ModelParams& params) {
    return (1.0 - p) * (params.c1 + params.c3 * p * p) / params.c2;
}

const char* to_string(Regime regime) {
    return regime == Regime::Bistable ? "bistable" : "monostable";
}

namespace {

// Newton on drift with step halving whenever the residual does not drop.
double polish_root(double x, const ModelParams& params) {
    for (int iter = 0; iter < 50; ++iter) {
        const double f = drift(x, params);
        const double df = drift_derivative(x, params);
        if (f == 0.0 || df == 0.0) break;
        double step = f / df;
        double next = x - step;
        int halvings = 0;
        while (std::abs(drift(next, params)) > std::abs(f) && halvings < 30) {
            step *= 0.5;
            next = x - step;
            ++halvings;
        }
        if (halvings == 30 || next == x) break;
        x = next;
    }
    return x;
}

}  // namespace

CubicRoots solve_cubic(const ModelParams& params, DegeneratePolicy policy) {
    params.validate();
    CubicRoots out;

    if (params.c3 == 0.0) {
        out.roots = {params.c1 / (params.c1 + params.c2)};
        out.regime = Regime::Monostable;
        return out;
    }

    // Monic form p^3 + a p^2 + b p + c of -drift(p)/c3, solved in extended
    // precision so near-repeated roots can be told apart at ~1e-10.
    using Real = long double;
    const Real a = -1.0L;
    const Real b = (static_cast<Real>(params.c1) + params.c2) / params.c3;
    const Real c = -static_cast<Real>(params.c1) / params.c3;
    const Real shift = -a / 3.0L;
    const Real q = (3.0L * b - a * a) / 9.0L;
    const Real r = (9.0L * a * b - 27.0L * c - 2.0L * a * a * a) / 54.0L;
    const Real disc = q * q * q + r * r;

    std::array<std::complex<Real>, 3> z{};
    if (disc < 0.0L) {
        const Real rho = std::sqrt(-q * q * q);
        const Real theta = std::acos(std::clamp(r / rho, -1.0L, 1.0L));
        const Real amp = 2.0L * std::sqrt(-q);
        const Real third = 2.0L * std::numbers::pi_v<Real> / 3.0L;
        for (int k = 0; k < 3; ++k) z[static_cast<std::size_t>(k)] = amp * std::cos(theta / 3.0L + third * k) + shift;
    } else {
        const Real sq = std::sqrt(disc);
        const Real s = std::cbrt(r + sq);
        const Real t = std::cbrt(r - sq);
        z[0] = s + t + shift;
        const Real re = -(s + t) / 2.0L + shift;
        const Real im = std::sqrt(3.0L) / 2.0L * (s - t);
        z[1] = {re, im};
        z[2] = {re, -im};
    }

    // Closest pair decides degeneracy; the remaining root is the simple one.
    std::size_t pa = 0, pb = 1;
    Real gap = std::abs(z[0] - z[1]);
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 2}, {1, 2}}) {
        const Real g = std::abs(z[i] - z[j]);
        if (g < gap) { gap = g; pa = i; pb = j; }
    }
    const bool degenerate = gap < static_cast<Real>(kRepeatedRootTolerance);

    if (degenerate) {
        if (policy == DegeneratePolicy::Reject) {
            std::ostringstream msg;
            msg << "drift cubic has a repeated root near " << static_cast<double>(z[pa].real())
                << " (c1=" << params.c1 << ", c2=" << params.c2 << ", c3=" << params.c3
                << "): parameters sit on the monostable/bistable boundary";
            throw Error(ErrorCode::DegenerateRegime, msg.str());
        }
        const std::size_t simple = 3 - pa - pb;
        out.roots = {polish_root(static_cast<double>(z[simple].real()), params)};
        out.regime = Regime::Monostable;
        return out;
    }

    if (disc < 0.0L) {
        for (const auto& root : z) out.roots.push_back(polish_root(static_cast<double>(root.real()), params));
        std::sort(out.roots.begin(), out.roots.end());
        out.regime = Regime::Bistable;
    } else {
        out.roots = {polish_root(static_cast<double>(z[0].real()), params)};
        out.regime = Regime::Monostable;
    }
    return out;
}

}  // namespace triadic
