#include "triadic/langevin.hpp"

#include "passage.hpp"
#include "triadic/error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace triadic {

double SdeSpec::diffusion_sq(double y) const {
    if (!noise) return 0.0;
    const double rates = params.c1 * (1.0 - y) + params.c2 * y + params.c3 * (1.0 - y) * y * y;
    return rates / static_cast<double>(params.pair_count());
}

double SdeSpec::max_stable_step() const { return 1.0 / (params.c1 + params.c2 + params.c3); }

double fold_into_unit(double y) {
    if (y >= 0.0 && y <= 1.0) return y;
    double r = std::fmod(std::fabs(y), 2.0);
    return r > 1.0 ? 2.0 - r : r;
}

double em_increment(const SdeSpec& spec, double y, double dt, Rng& rng) {
    const double var = std::max(spec.diffusion_sq(y), 0.0) * dt;
    double inc = spec.drift(y) * dt;
    if (var > 0.0) inc += std::sqrt(var) * rng.normal();
    return inc;
}

double em_step(const SdeSpec& spec, double y, double dt, Rng& rng, std::size_t& reflections) {
    const double next = y + em_increment(spec, y, dt, rng);
    if (next < 0.0 || next > 1.0) {
        ++reflections;
        return fold_into_unit(next);
    }
    return next;
}

namespace {

void check_em(const SdeSpec& spec, double y0, double t_end, const EmOptions& options) {
    spec.params.validate();
    if (!(y0 >= 0.0 && y0 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "y0 must lie in [0, 1]");
    if (!(t_end > 0.0 && std::isfinite(t_end))) throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");
    if (!(options.dt > 0.0 && std::isfinite(options.dt))) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
    if (options.record_every == 0) throw Error(ErrorCode::InvalidArgument, "record_every must be >= 1");
    if (!options.force_step && options.dt >= spec.max_stable_step()) {
        throw Error(ErrorCode::InvalidArgument, "dt must be below 1/(c1+c2+c3) unless forced");
    }
}

std::size_t step_count(double t_end, double dt) {
    return static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12)));
}

double step_time(std::size_t k, std::size_t steps, double dt, double t_end) {
    return k == steps ? t_end : static_cast<double>(k) * dt;
}

bool recorded(std::size_t k, std::size_t steps, std::size_t every) { return k % every == 0 || k == steps; }

}  // namespace

EmPath em_path(const SdeSpec& spec, double y0, double t_end, const EmOptions& options, std::uint64_t seed) {
    check_em(spec, y0, t_end, options);
    const std::size_t steps = step_count(t_end, options.dt);
    Rng rng(seed);
    EmPath out;
    out.trace.observable = Observable::Density;
    out.trace.push(0.0, y0);
    double y = y0;
    double t = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_next = step_time(k, steps, options.dt, t_end);
        y = em_step(spec, y, t_next - t, rng, out.reflections);
        t = t_next;
        if (recorded(k, steps, options.record_every)) out.trace.push(t, y);
    }
    return out;
}

EmEnsemble em_ensemble_mean(const SdeSpec& spec, double y0, double t_end, const EmOptions& options,
                            std::size_t n_paths, std::uint64_t seed, unsigned threads) {
    check_em(spec, y0, t_end, options);
    if (n_paths == 0) throw Error(ErrorCode::InvalidArgument, "n_paths must be >= 1");
    const std::size_t steps = step_count(t_end, options.dt);

    std::vector<double> times{0.0};
    for (std::size_t k = 1; k <= steps; ++k) {
        if (recorded(k, steps, options.record_every)) times.push_back(step_time(k, steps, options.dt, t_end));
    }

    // Paths are summed in fixed blocks and the blocks combined in order, so
    // the result does not depend on the thread count.
    constexpr std::size_t kBlock = 16;
    const std::size_t blocks = (n_paths + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> block_sums(blocks);
    std::vector<std::size_t> block_reflections(blocks, 0);

    auto run_block = [&](std::size_t b) {
        std::vector<double> sum(times.size(), 0.0);
        std::size_t refl = 0;
        for (std::size_t p = b * kBlock; p < std::min(n_paths, (b + 1) * kBlock); ++p) {
            const auto path = em_path(spec, y0, t_end, options, stream_seed(seed, p));
            for (std::size_t r = 0; r < sum.size(); ++r) sum[r] += path.trace.values[r];
            refl += path.reflections;
        }
        block_sums[b] = std::move(sum);
        block_reflections[b] = refl;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
    if (workers == 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t b = w; b < blocks; b += workers) run_block(b);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    EmEnsemble out;
    out.mean.observable = Observable::Density;
    std::vector<double> total(times.size(), 0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t r = 0; r < total.size(); ++r) total[r] += block_sums[b][r];
        out.reflections += block_reflections[b];
    }
    for (std::size_t r = 0; r < times.size(); ++r) out.mean.push(times[r], total[r] / static_cast<double>(n_paths));
    return out;
}

void MfptProblem::validate() const {
    if (!(a >= 0.0 && a < b && b <= 1.0)) throw Error(ErrorCode::InvalidArgument, "MFPT interval needs 0 <= a < b <= 1");
    if (grid_points < 3) throw Error(ErrorCode::InvalidArgument, "MFPT grid needs at least 3 points");
}

double MfptSolution::at(double y) const {
    if (x.empty()) throw Error(ErrorCode::InvalidArgument, "empty MFPT solution");
    const double lo = x.front();
    const double hi = x.back();
    const double slack = 1e-12 * (hi - lo);
    if (!(y >= lo - slack && y <= hi + slack)) throw Error(ErrorCode::InvalidArgument, "query point outside the MFPT grid");
    y = std::clamp(y, lo, hi);
    const double h = (hi - lo) / static_cast<double>(x.size() - 1);
    auto k = static_cast<std::size_t>((y - lo) / h);
    k = std::min(k, x.size() - 2);
    const double w = (y - x[k]) / (x[k + 1] - x[k]);
    return (1.0 - w) * T[k] + w * T[k + 1];
}

MfptSolution solve_mfpt(const Coefficient& drift, const Coefficient& diffusion_sq, const MfptProblem& problem) {
    problem.validate();
    const std::size_t m = problem.grid_points;
    const double h = (problem.b - problem.a) / static_cast<double>(m - 1);
    MfptSolution sol;
    sol.x.resize(m);
    std::vector<double> up(m, 0.0);
    std::vector<double> down(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        sol.x[k] = k + 1 == m ? problem.b : problem.a + static_cast<double>(k) * h;
        const double mu = drift(sol.x[k]);
        const double s = 0.5 * diffusion_sq(sol.x[k]);
        if (!(s > 0.0)) throw Error(ErrorCode::SingularSystem, "diffusion vanishes on the MFPT grid");
        const double diffusive = s / (h * h);
        if (std::fabs(mu) * h / s > 2.0) {
            up[k] = diffusive + std::max(mu, 0.0) / h;
            down[k] = diffusive + std::max(-mu, 0.0) / h;
            if (k > 0 && k + 1 < m) ++sol.upwinded_nodes;
        } else {
            up[k] = diffusive + mu / (2.0 * h);
            down[k] = diffusive - mu / (2.0 * h);
        }
    }

    // The one-sided Neumann stencil -3T0 + 4T1 - T2 = 0 reads 3 D0 = D1 in
    // terms of differences; combined with the first interior row it fixes D0.
    if (problem.kind == BoundaryKind::ReflectLeftAbsorbRight) {
        const double pivot = 3.0 * up[1] - down[1];
        if (!(pivot > 0.0)) throw Error(ErrorCode::SingularSystem, "reflecting-end discretization is singular");
        sol.T = detail::passage_times_to_right(up, down, 1.0 / pivot);
    } else {
        const double pivot = 3.0 * down[m - 2] - up[m - 2];
        if (!(pivot > 0.0)) throw Error(ErrorCode::SingularSystem, "reflecting-end discretization is singular");
        sol.T = detail::passage_times_to_left(up, down, 1.0 / pivot);
    }
    return sol;
}

MfptSolution solve_mfpt(const SdeSpec& spec, const MfptProblem& problem) {
    spec.params.validate();
    return solve_mfpt([&](double y) { return spec.drift(y); }, [&](double y) { return spec.diffusion_sq(y); },
                      problem);
}

SdeTransitionRow sde_transition_times(const ModelParams& params, const CubicRoots& roots, std::size_t grid_points) {
    if (roots.regime != Regime::Bistable || roots.roots.size() != 3) {
        throw Error(ErrorCode::InvalidArgument, "transition times need the bistable regime (three roots)");
    }
    const SdeSpec spec{params, true};
    SdeTransitionRow row;
    row.n = params.n;
    row.tau_low_to_mid = solve_mfpt(spec, MfptProblem::reach_upper(roots.mid(), grid_points)).at(roots.low());
    row.tau_high_to_mid = solve_mfpt(spec, MfptProblem::reach_lower(roots.mid(), grid_points)).at(roots.high());
    row.ratio = row.tau_low_to_mid / row.tau_high_to_mid;
    return row;
}

}  // namespace triadic
