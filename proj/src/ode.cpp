#include "triadic/ode.hpp"

#include "triadic/error.hpp"

#include <cmath>

namespace triadic {

namespace {

double rk4_step(const ModelParams& params, double y, double h) {
    const double k1 = drift(y, params);
    const double k2 = drift(y + 0.5 * h * k1, params);
    const double k3 = drift(y + 0.5 * h * k2, params);
    const double k4 = drift(y + h * k3, params);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Fixed-step RK4 to t_end; the last step is shortened to land on t_end.
double rk4_run(const ModelParams& params, double y0, double t_end, double h, std::size_t record_every,
               PathRecord* trace) {
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / h * (1.0 - 1e-12)));
    double y = y0;
    double t = 0.0;
    if (trace) trace->push(0.0, y0);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_next = k == steps ? t_end : static_cast<double>(k) * h;
        y = rk4_step(params, y, t_next - t);
        t = t_next;
        if (trace && (k % record_every == 0 || k == steps)) trace->push(t, y);
    }
    return y;
}

}  // namespace

OdeRun integrate(const ModelParams& params, double y0, double t_end, double step, std::size_t record_every) {
    params.validate();
    if (!(y0 >= 0.0 && y0 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "y0 must lie in [0, 1]");
    if (!(t_end > 0.0 && std::isfinite(t_end))) throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");
    if (!(step > 0.0 && std::isfinite(step))) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
    if (record_every == 0) throw Error(ErrorCode::InvalidArgument, "record_every must be >= 1");

    OdeRun run;
    run.y0 = y0;
    run.t_end = t_end;
    double h = std::min(step, t_end);
    for (int attempt = 0;; ++attempt) {
        const double coarse = rk4_run(params, y0, t_end, h, record_every, nullptr);
        const double fine = rk4_run(params, y0, t_end, 0.5 * h, record_every, nullptr);
        run.halving_gap = std::fabs(coarse - fine);
        if (run.halving_gap <= kOdeHalvingTolerance) break;
        if (attempt == 40) throw Error(ErrorCode::SingularSystem, "RK4 step halving did not converge");
        h *= 0.5;
    }
    run.step = h;
    run.trace.observable = Observable::Density;
    rk4_run(params, y0, t_end, h, record_every, &run.trace);
    return run;
}

MeanFieldRun mean_field_euler(const ModelParams& params, double y0, std::size_t n_steps) {
    params.validate();
    if (!(y0 >= 0.0 && y0 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "y0 must lie in [0, 1]");
    MeanFieldRun run;
    run.values.reserve(n_steps + 1);
    run.values.push_back(y0);
    double y = y0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        y += drift(y, params);
        run.values.push_back(y);
        if (!run.first_exit && (y < 0.0 || y > 1.0)) run.first_exit = k;
    }
    return run;
}

}  // namespace triadic
