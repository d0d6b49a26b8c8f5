#include "triadic/error.hpp"
#include "triadic/experiment.hpp"
#include "triadic/langevin.hpp"
#include "triadic/macro_chain.hpp"
#include "triadic/ode.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace triadic {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Sub-stream indices so each model component draws independent numbers.
enum Stream : std::uint64_t { kInitStream = 0, kMicroStream = 1, kMacroStream = 2, kSdeStream = 3, kEnsembleStream = 4 };

class Writer {
public:
    explicit Writer(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir + "': " + ec.message());
    }

    template <class Fn>
    void file(const std::string& name, Fn&& body) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
        body(out);
        out.flush();
        if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
        files_.push_back(name);
    }

    void path_csv(const std::string& name, const PathRecord& path) {
        file(name, [&](std::ostream& out) { write_path_csv(path, out); });
    }

    [[nodiscard]] const std::vector<std::string>& files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

std::size_t sde_record_every(const ExperimentConfig& c) {
    if (c.record.kind == RecordStride::Kind::Events) return c.record.every_events;
    return static_cast<std::size_t>(std::max(1.0, std::round(c.record.every_time / c.sde_dt)));
}

Json roots_json(const CubicRoots& roots) {
    Json arr = Json::array();
    for (double r : roots.roots) arr.push_back(r);
    return arr;
}

Json micro_path(const ExperimentConfig& c, Writer& w, bool spy) {
    const auto params = c.params();
    const auto initial = c.init.realize(c.n, stream_seed(c.seed, kInitStream));
    std::vector<double> snaps;
    if (spy) snaps = c.snapshot_times;
    auto run = simulate_path_with_snapshots(initial, params, c.t_end, c.record, snaps, stream_seed(c.seed, kMicroStream));
    w.path_csv("path.csv", run.path);
    Json r;
    r["initial_edges"] = initial.edge_count();
    r["final_density"] = run.path.values.back();
    r["records"] = run.path.size();
    if (spy) {
        Json counts = Json::array();
        for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
            w.file("edges_t" + format_double(run.snapshot_times[k]) + ".txt",
                   [&](std::ostream& out) { write_edge_list(run.snapshots[k], out); });
            counts.push_back({{"t", run.snapshot_times[k]}, {"edges", run.snapshots[k].size()}});
        }
        w.file("edges_final.txt", [&](std::ostream& out) { write_edge_list(run.final_state, out); });
        r["snapshots"] = counts;
    }
    return r;
}

Json micro_pij(const ExperimentConfig& c, Writer& w) {
    std::vector<double> grid;
    const auto points = static_cast<std::size_t>(std::floor(c.t_end / c.pij_dt * (1.0 + 1e-12)));
    for (std::size_t k = 0; k <= points; ++k) grid.push_back(static_cast<double>(k) * c.pij_dt);
    const auto est = estimate_edge_probabilities(c.params(), c.init, grid, c.n_paths, c.seed, c.threads);
    const GraphState layout(c.n);
    w.file("pij.csv", [&](std::ostream& out) {
        out << "t,i,j,p_hat\n";
        for (std::size_t k = 0; k < est.times.size(); ++k) {
            const std::string t = format_double(est.times[k]);
            for (std::size_t id = 0; id < est.probs[k].size(); ++id) {
                const auto [i, j] = layout.pair_nodes(static_cast<std::int64_t>(id));
                out << t << ',' << i + 1 << ',' << j + 1 << ',' << format_double(est.probs[k][id]) << '\n';
            }
        }
    });
    w.file("pij_mean.csv", [&](std::ostream& out) {
        out << "t,mean\n";
        for (std::size_t k = 0; k < est.times.size(); ++k) {
            out << format_double(est.times[k]) << ',' << format_double(est.mean[k]) << '\n';
        }
    });
    Json r;
    r["grid_points"] = est.times.size();
    r["final_mean"] = est.mean.back();
    return r;
}

Json macro_path(const ExperimentConfig& c, Writer& w) {
    const BDChain chain(c.params());
    const auto initial = c.init.realize(c.n, stream_seed(c.seed, kInitStream)).edge_count();
    const auto path = simulate_macro_path(chain, initial, c.t_end, c.record, stream_seed(c.seed, kMacroStream));
    w.path_csv("path.csv", path);
    Json r;
    r["initial_edges"] = initial;
    r["final_density"] = path.values.back();
    r["records"] = path.size();
    return r;
}

Json macro_steady(const ExperimentConfig& c, const CubicRoots& roots, Writer& w) {
    const BDChain chain(c.params());
    const auto dist = stationary_distribution(chain);
    const auto big_n = static_cast<double>(chain.max_state());
    w.file("steady.csv", [&](std::ostream& out) {
        out << "state,density,prob,prob_density\n";
        for (std::size_t j = 0; j < dist.probs.size(); ++j) {
            out << j << ',' << format_double(static_cast<double>(j) / big_n) << ',' << format_double(dist.probs[j])
                << ',' << format_double(dist.probs[j] * big_n) << '\n';
        }
    });
    const auto report = modality(dist);
    Json r;
    r["modality"] = to_string(report.classification);
    Json maxima = Json::array();
    for (auto m : report.local_maxima) maxima.push_back({{"state", m}, {"density", static_cast<double>(m) / big_n}});
    Json minima = Json::array();
    for (auto m : report.local_minima) minima.push_back({{"state", m}, {"density", static_cast<double>(m) / big_n}});
    r["local_maxima"] = maxima;
    r["local_minima"] = minima;
    if (roots.regime == Regime::Bistable) {
        const auto split = static_cast<std::int64_t>(std::floor(roots.mid() * big_n));
        r["mass_below_trough"] = mass_up_to(dist, split);
    }
    return r;
}

void write_exit_table(Writer& w, const std::string& name, const Json& rows) {
    w.file(name, [&](std::ostream& out) {
        out << "n,tau_low_to_mid,tau_high_to_mid,ratio\n";
        for (const auto& row : rows) {
            out << row["n"].get<int>() << ',' << format_double(row["tau_low_to_mid"].get<double>()) << ','
                << format_double(row["tau_high_to_mid"].get<double>()) << ',' << format_double(row["ratio"].get<double>())
                << '\n';
        }
    });
}

Json macro_exit(const ExperimentConfig& c, const CubicRoots& roots, Writer& w) {
    const auto counts = c.node_counts();
    const auto table = transition_time_curve(c.params(), counts, roots);
    Json rows = Json::array();
    for (const auto& t : table) {
        rows.push_back({{"n", t.n},
                        {"low_state", t.low_state},
                        {"mid_state", t.mid_state},
                        {"high_state", t.high_state},
                        {"tau_low_to_mid", t.tau_low_to_mid},
                        {"tau_high_to_mid", t.tau_high_to_mid},
                        {"ratio", t.ratio}});
    }
    write_exit_table(w, "exit_times.csv", rows);
    return {{"rows", rows}};
}

Json sde_path(const ExperimentConfig& c, Writer& w) {
    const SdeSpec spec{c.params(), true};
    EmOptions options;
    options.dt = c.sde_dt;
    options.record_every = sde_record_every(c);
    const auto single = em_path(spec, c.y0, c.t_end, options, stream_seed(c.seed, kSdeStream));
    const auto ensemble = em_ensemble_mean(spec, c.y0, c.t_end, options, c.n_paths, stream_seed(c.seed, kEnsembleStream), c.threads);
    w.path_csv("path.csv", single.trace);
    w.path_csv("mean.csv", ensemble.mean);
    Json r;
    r["final_value"] = single.trace.values.back();
    r["final_mean"] = ensemble.mean.values.back();
    r["reflections"] = single.reflections + ensemble.reflections;
    return r;
}

void write_mfpt_csv(Writer& w, const std::string& name, const MfptSolution& sol) {
    w.file(name, [&](std::ostream& out) {
        out << "x,T\n";
        for (std::size_t k = 0; k < sol.x.size(); ++k) out << format_double(sol.x[k]) << ',' << format_double(sol.T[k]) << '\n';
    });
}

Json sde_mfpt(const ExperimentConfig& c, const CubicRoots& roots, Writer& w) {
    if (roots.regime != Regime::Bistable) {
        throw Error(ErrorCode::InvalidArgument, "sde-mfpt needs bistable parameters (three roots)");
    }
    Json rows = Json::array();
    for (int n : c.node_counts()) {
        const SdeSpec spec{ModelParams::make(n, c.c1, c.c2, c.c3), true};
        const auto upper = solve_mfpt(spec, MfptProblem::reach_upper(roots.mid(), c.grid_points));
        const auto lower = solve_mfpt(spec, MfptProblem::reach_lower(roots.mid(), c.grid_points));
        write_mfpt_csv(w, "mfpt_up_n" + std::to_string(n) + ".csv", upper);
        write_mfpt_csv(w, "mfpt_down_n" + std::to_string(n) + ".csv", lower);
        const double lo = upper.at(roots.low());
        const double hi = lower.at(roots.high());
        rows.push_back({{"n", n},
                        {"tau_low_to_mid", lo},
                        {"tau_high_to_mid", hi},
                        {"ratio", lo / hi},
                        {"upwinded_nodes", upper.upwinded_nodes + lower.upwinded_nodes}});
    }
    write_exit_table(w, "sde_exit_times.csv", rows);
    return {{"rows", rows}};
}

Json ode_trace(const ExperimentConfig& c, Writer& w) {
    const std::size_t every = c.record.kind == RecordStride::Kind::Events
                                  ? c.record.every_events
                                  : static_cast<std::size_t>(std::max(1.0, std::round(c.record.every_time / c.ode_step)));
    const auto run = integrate(c.params(), c.y0, c.t_end, c.ode_step, every);
    w.path_csv("trace.csv", run.trace);
    Json r;
    r["final_value"] = run.trace.values.back();
    r["step"] = run.step;
    r["halving_gap"] = run.halving_gap;
    return r;
}

PathRecord mean_field_record(const MeanFieldRun& run) {
    PathRecord rec;
    for (std::size_t k = 0; k < run.values.size(); ++k) rec.push(static_cast<double>(k), run.values[k]);
    return rec;
}

Json mean_field(const ExperimentConfig& c, Writer& w) {
    const auto run = mean_field_euler(c.params(), c.y0, c.euler_steps);
    w.path_csv("mean_field.csv", mean_field_record(run));
    Json r;
    r["final_value"] = run.values.back();
    r["first_exit"] = run.first_exit ? Json(*run.first_exit) : Json(nullptr);
    return r;
}

Json compare_models(const ExperimentConfig& c, Writer& w) {
    const auto params = c.params();
    const auto initial = c.init.realize(c.n, stream_seed(c.seed, kInitStream));
    const double y0 = initial.density();

    const auto micro = simulate_path(initial, params, c.t_end, c.record, stream_seed(c.seed, kMicroStream));
    const BDChain chain(params);
    const auto macro = simulate_macro_path(chain, initial.edge_count(), c.t_end, c.record, stream_seed(c.seed, kMacroStream));
    const SdeSpec spec{params, true};
    EmOptions options;
    options.dt = c.sde_dt;
    options.record_every = sde_record_every(c);
    const auto sde = em_ensemble_mean(spec, y0, c.t_end, options, c.n_paths, stream_seed(c.seed, kEnsembleStream), c.threads);
    const std::size_t ode_every = c.record.kind == RecordStride::Kind::Events
                                      ? c.record.every_events
                                      : static_cast<std::size_t>(std::max(1.0, std::round(c.record.every_time / c.ode_step)));
    const auto ode = integrate(params, y0, c.t_end, c.ode_step, ode_every);
    const auto mf = mean_field_euler(params, y0, static_cast<std::size_t>(std::ceil(c.t_end)));

    w.path_csv("micro.csv", micro);
    w.path_csv("macro.csv", macro);
    w.path_csv("sde_mean.csv", sde.mean);
    w.path_csv("ode.csv", ode.trace);
    w.path_csv("mean_field.csv", mean_field_record(mf));

    Json r;
    r["initial_density"] = y0;
    r["final"] = {{"micro", micro.values.back()},
                  {"macro", macro.values.back()},
                  {"sde_mean", sde.mean.values.back()},
                  {"ode", ode.trace.values.back()},
                  {"mean_field", mf.values.back()}};
    r["mean_field_first_exit"] = mf.first_exit ? Json(*mf.first_exit) : Json(nullptr);
    r["sde_reflections"] = sde.reflections;
    return r;
}

}  // namespace

std::string run(const ExperimentConfig& config) {
    if (const auto violations = validate(config); !violations.empty()) {
        std::string message = "invalid config:";
        for (const auto& v : violations) message += "\n  " + v;
        throw Error(ErrorCode::InvalidArgument, message);
    }
    const auto params = config.params();
    const auto roots = solve_cubic(params);

    Writer w(config.output);
    w.file("config.txt", [&](std::ostream& out) { out << serialize_config(config); });

    Json results;
    switch (config.experiment) {
        case Experiment::MicroPath: results = micro_path(config, w, false); break;
        case Experiment::MicroSpy: results = micro_path(config, w, true); break;
        case Experiment::MicroPij: results = micro_pij(config, w); break;
        case Experiment::MacroPath: results = macro_path(config, w); break;
        case Experiment::MacroSteady: results = macro_steady(config, roots, w); break;
        case Experiment::MacroExit: results = macro_exit(config, roots, w); break;
        case Experiment::SdePath: results = sde_path(config, w); break;
        case Experiment::SdeMfpt: results = sde_mfpt(config, roots, w); break;
        case Experiment::OdeTrace: results = ode_trace(config, w); break;
        case Experiment::MeanField: results = mean_field(config, w); break;
        case Experiment::CompareModels: results = compare_models(config, w); break;
    }

    Json summary;
    summary["experiment"] = to_string(config.experiment);
    summary["seed"] = config.seed;
    summary["params"] = {{"n", params.n}, {"c1", params.c1}, {"c2", params.c2}, {"c3", params.c3}};
    summary["regime"] = to_string(roots.regime);
    summary["roots"] = roots_json(roots);
    summary["results"] = results;
    Json files = Json::array();
    for (const auto& f : w.files()) files.push_back(f);
    files.push_back("summary.json");
    summary["files"] = files;

    const std::string text = summary.dump(2) + "\n";
    w.file("summary.json", [&](std::ostream& out) { out << text; });
    return text;
}

}  // namespace triadic
