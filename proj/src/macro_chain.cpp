#include "triadic/macro_chain.hpp"

#include "passage.hpp"
#include "triadic/error.hpp"

#include <algorithm>
#include <cmath>

namespace triadic {

BDChain::BDChain(const ModelParams& params) : params_(params), max_state_(params.pair_count()) {
    params_.validate();
    const auto states = static_cast<std::size_t>(max_state_) + 1;
    const auto big_n = static_cast<double>(max_state_);
    birth_.assign(states, 0.0);
    death_.assign(states, 0.0);
    for (std::int64_t i = 0; i <= max_state_; ++i) {
        const double x = static_cast<double>(i) / big_n;
        const double x_prev = static_cast<double>(i - 1) / big_n;
        // 1 - i/N from the integer gap, so states near N keep full precision.
        const double gap = static_cast<double>(max_state_ - i) / big_n;
        if (i < max_state_) {
            birth_[static_cast<std::size_t>(i)] = big_n * (params.c1 * gap + params.c3 * gap * x * x_prev);
        }
        death_[static_cast<std::size_t>(i)] = params.c2 * static_cast<double>(i);
    }
}

Distribution stationary_distribution(const BDChain& chain) {
    const std::int64_t big_n = chain.max_state();
    const auto states = static_cast<std::size_t>(big_n) + 1;
    std::vector<double> log_weight(states, 0.0);
    for (std::size_t j = 1; j < states; ++j) {
        const double up = chain.birth(static_cast<std::int64_t>(j) - 1);
        const double down = chain.death(static_cast<std::int64_t>(j));
        if (!(up > 0.0) || !(down > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "chain is reducible: a birth or death rate is zero");
        }
        log_weight[j] = log_weight[j - 1] + std::log(up) - std::log(down);
    }
    const double peak = *std::max_element(log_weight.begin(), log_weight.end());
    Distribution dist;
    dist.probs.resize(states);
    double total = 0.0;
    for (std::size_t j = 0; j < states; ++j) {
        dist.probs[j] = std::exp(log_weight[j] - peak);
        total += dist.probs[j];
    }
    const double log_total = std::log(total);
    dist.log_probs.resize(states);
    for (std::size_t j = 0; j < states; ++j) {
        dist.probs[j] /= total;
        dist.log_probs[j] = log_weight[j] - peak - log_total;
    }
    return dist;
}

const char* to_string(Modality modality) {
    switch (modality) {
        case Modality::Unimodal: return "unimodal";
        case Modality::Bimodal: return "bimodal";
        case Modality::Other: return "other";
    }
    return "other";
}

ModalityReport modality(const Distribution& dist) {
    const auto& v = dist.log_probs.size() == dist.probs.size() ? dist.log_probs : dist.probs;
    ModalityReport report;
    if (v.empty()) return report;

    // Collapse runs of equal neighbours onto their lowest index.
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (idx.empty() || v[k] != v[idx.back()]) idx.push_back(k);
    }
    const std::size_t m = idx.size();
    auto val = [&](std::size_t k) { return v[idx[k]]; };
    for (std::size_t k = 0; k < m; ++k) {
        const bool above_left = k == 0 || val(k) > val(k - 1);
        const bool above_right = k + 1 == m || val(k) > val(k + 1);
        if (above_left && above_right) report.local_maxima.push_back(static_cast<std::int64_t>(idx[k]));
        if (k > 0 && k + 1 < m && val(k) < val(k - 1) && val(k) < val(k + 1)) {
            report.local_minima.push_back(static_cast<std::int64_t>(idx[k]));
        }
    }
    if (report.local_maxima.size() == 1) {
        report.classification = Modality::Unimodal;
    } else if (report.local_maxima.size() == 2 && report.local_minima.size() == 1 &&
               report.local_maxima[0] < report.local_minima[0] && report.local_minima[0] < report.local_maxima[1]) {
        report.classification = Modality::Bimodal;
    } else {
        report.classification = Modality::Other;
    }
    return report;
}

double mass_up_to(const Distribution& dist, std::int64_t last) {
    double mass = 0.0;
    const auto end = std::min<std::size_t>(dist.probs.size(), static_cast<std::size_t>(std::max<std::int64_t>(last + 1, 0)));
    for (std::size_t j = 0; j < end; ++j) mass += dist.probs[j];
    return mass;
}

namespace {

void check_state(const BDChain& chain, std::int64_t state, const char* what) {
    if (state < 0 || state > chain.max_state()) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " must lie in [0, N]");
    }
}

// Chain analogue of the micro SSA driver: `hold(t0, t1, last)` sees state i
// constant on [t0, t1), `after_event(t)` runs after each jump.
template <class Hold, class AfterEvent>
void run_chain(const BDChain& chain, std::int64_t& state, double t_end, Rng& rng, Hold&& hold, AfterEvent&& after_event) {
    double t = 0.0;
    for (;;) {
        const double up = chain.birth(state);
        const double down = chain.death(state);
        const double total = up + down;
        if (!(total > 0.0)) throw Error(ErrorCode::StuckState, "chain state has zero exit rate");
        const double t_next = t + rng.exponential(total);
        if (t_next >= t_end) {
            hold(t, t_end, true);
            return;
        }
        hold(t, t_next, false);
        state += rng.uniform() * total < up ? 1 : -1;
        t = t_next;
        after_event(t);
    }
}

}  // namespace

PathRecord simulate_macro_path(const BDChain& chain, std::int64_t initial_state, double t_end, RecordStride stride,
                               std::uint64_t seed) {
    check_state(chain, initial_state, "initial state");
    if (!(t_end > 0.0 && std::isfinite(t_end))) throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");
    stride.validate();
    const auto big_n = static_cast<double>(chain.max_state());
    std::int64_t state = initial_state;
    PathRecord path;
    path.observable = Observable::Density;
    path.push(0.0, static_cast<double>(state) / big_n);
    std::size_t grid_index = 1;
    std::size_t events = 0;
    Rng rng(seed);

    auto hold = [&](double, double t1, bool last) {
        if (stride.kind == RecordStride::Kind::Time) {
            for (double g = static_cast<double>(grid_index) * stride.every_time; g < t1 || (last && g <= t1);
                 g = static_cast<double>(++grid_index) * stride.every_time) {
                path.push(g, static_cast<double>(state) / big_n);
            }
        } else if (last && path.times.back() < t1) {
            path.push(t1, static_cast<double>(state) / big_n);
        }
    };
    auto after_event = [&](double t) {
        ++events;
        if (stride.kind == RecordStride::Kind::Events && events % stride.every_events == 0) {
            path.push(t, static_cast<double>(state) / big_n);
        }
    };
    run_chain(chain, state, t_end, rng, hold, after_event);
    return path;
}

std::vector<double> macro_occupancy(const BDChain& chain, std::int64_t initial_state, double t_end, double burn_in,
                                    std::uint64_t seed) {
    check_state(chain, initial_state, "initial state");
    if (!(t_end > 0.0 && std::isfinite(t_end))) throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");
    if (!(burn_in >= 0.0 && burn_in < t_end)) throw Error(ErrorCode::InvalidArgument, "burn-in must lie in [0, t_end)");
    std::vector<double> occupancy(static_cast<std::size_t>(chain.max_state()) + 1, 0.0);
    std::int64_t state = initial_state;
    Rng rng(seed);
    auto hold = [&](double t0, double t1, bool) {
        const double lo = std::max(t0, burn_in);
        if (t1 > lo) occupancy[static_cast<std::size_t>(state)] += t1 - lo;
    };
    run_chain(chain, state, t_end, rng, hold, [](double) {});
    for (double& v : occupancy) v /= t_end - burn_in;
    return occupancy;
}

double macro_first_passage(const BDChain& chain, std::int64_t from, std::int64_t to, Rng& rng) {
    check_state(chain, from, "start state");
    check_state(chain, to, "target state");
    double t = 0.0;
    std::int64_t state = from;
    while (state != to) {
        const double up = chain.birth(state);
        const double total = up + chain.death(state);
        t += rng.exponential(total);
        state += rng.uniform() * total < up ? 1 : -1;
    }
    return t;
}

std::vector<double> mean_exit_times(const BDChain& chain, std::int64_t target) {
    check_state(chain, target, "target state");
    const std::int64_t big_n = chain.max_state();
    const auto births = chain.births();
    const auto deaths = chain.deaths();
    const auto t = static_cast<std::size_t>(target);
    std::vector<double> tau(static_cast<std::size_t>(big_n) + 1, 0.0);

    if (target > 0) {
        if (!(births[0] > 0.0)) throw Error(ErrorCode::SingularSystem, "birth rate at state 0 is zero");
        const auto lower = detail::passage_times_to_right(births.subspan(0, t + 1), deaths.subspan(0, t + 1),
                                                          1.0 / births[0]);
        std::copy(lower.begin(), lower.end(), tau.begin());
    }
    if (target < big_n) {
        const auto last = static_cast<std::size_t>(big_n);
        if (!(deaths[last] > 0.0)) throw Error(ErrorCode::SingularSystem, "death rate at state N is zero");
        const auto upper = detail::passage_times_to_left(births.subspan(t), deaths.subspan(t), 1.0 / deaths[last]);
        std::copy(upper.begin() + 1, upper.end(), tau.begin() + static_cast<std::ptrdiff_t>(t) + 1);
    }
    tau[t] = 0.0;
    return tau;
}

std::vector<TransitionRow> transition_time_curve(const ModelParams& rates, std::span<const int> node_counts,
                                                 const CubicRoots& roots) {
    if (roots.regime != Regime::Bistable || roots.roots.size() != 3) {
        throw Error(ErrorCode::InvalidArgument, "transition times need the bistable regime (three roots)");
    }
    std::vector<TransitionRow> rows;
    rows.reserve(node_counts.size());
    for (int n : node_counts) {
        const BDChain chain(ModelParams::make(n, rates.c1, rates.c2, rates.c3));
        const auto big_n = static_cast<double>(chain.max_state());
        TransitionRow row;
        row.n = n;
        row.low_state = static_cast<std::int64_t>(std::floor(roots.low() * big_n));
        row.mid_state = static_cast<std::int64_t>(std::floor(roots.mid() * big_n));
        row.high_state = static_cast<std::int64_t>(std::floor(roots.high() * big_n));
        const auto tau = mean_exit_times(chain, row.mid_state);
        row.tau_low_to_mid = tau[static_cast<std::size_t>(row.low_state)];
        row.tau_high_to_mid = tau[static_cast<std::size_t>(row.high_state)];
        row.ratio = row.tau_low_to_mid / row.tau_high_to_mid;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace triadic
