#include "triadic/error.hpp"
#include "triadic/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace triadic {

namespace {

struct NameEntry {
    Experiment experiment;
    const char* name;
};

constexpr NameEntry kNames[] = {
    {Experiment::MicroPath, "micro-path"},   {Experiment::MicroSpy, "micro-spy"},
    {Experiment::MicroPij, "micro-pij"},     {Experiment::MacroPath, "macro-path"},
    {Experiment::MacroSteady, "macro-steady"}, {Experiment::MacroExit, "macro-exit"},
    {Experiment::SdePath, "sde-path"},       {Experiment::SdeMfpt, "sde-mfpt"},
    {Experiment::OdeTrace, "ode-trace"},     {Experiment::MeanField, "mean-field"},
    {Experiment::CompareModels, "compare-models"},
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw Error(ErrorCode::InvalidArgument, "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value);
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    const double v = parse_number<double>(key, value);
    if (!std::isfinite(v)) bad_value(key, value);
    return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    if (trim(value).empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = value.find(',', start);
        out.push_back(parse_double(key, trim(value.substr(start, comma - start))));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

const char* init_name(InitialSpec::Kind kind) {
    switch (kind) {
        case InitialSpec::Kind::ErdosRenyi: return "erdos-renyi";
        case InitialSpec::Kind::EdgeCount: return "edge-count";
        case InitialSpec::Kind::HalfEdges: return "half-edges";
    }
    return "erdos-renyi";
}

}  // namespace

const char* to_string(Experiment experiment) {
    for (const auto& e : kNames) {
        if (e.experiment == experiment) return e.name;
    }
    return "unknown";
}

std::optional<Experiment> experiment_from_string(std::string_view name) {
    for (const auto& e : kNames) {
        if (name == e.name) return e.experiment;
    }
    return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
    static const std::vector<Experiment> all = [] {
        std::vector<Experiment> v;
        for (const auto& e : kNames) v.push_back(e.experiment);
        return v;
    }();
    return all;
}

std::vector<int> ExperimentConfig::node_counts() const {
    if (n_min <= 0) return {n};
    std::vector<int> out;
    if (n_step <= 0) return out;
    for (int v = n_min; v <= n_max; v += n_step) out.push_back(v);
    return out;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view raw) {
    const std::string_view value = trim(raw);
    if (key == "experiment") {
        const auto e = experiment_from_string(value);
        if (!e) bad_value(key, value);
        c.experiment = *e;
    } else if (key == "n") {
        c.n = parse_number<int>(key, value);
    } else if (key == "n_min") {
        c.n_min = parse_number<int>(key, value);
    } else if (key == "n_max") {
        c.n_max = parse_number<int>(key, value);
    } else if (key == "n_step") {
        c.n_step = parse_number<int>(key, value);
    } else if (key == "c1") {
        c.c1 = parse_double(key, value);
    } else if (key == "c2") {
        c.c2 = parse_double(key, value);
    } else if (key == "c3") {
        c.c3 = parse_double(key, value);
    } else if (key == "init") {
        if (value == "erdos-renyi") c.init.kind = InitialSpec::Kind::ErdosRenyi;
        else if (value == "edge-count") c.init.kind = InitialSpec::Kind::EdgeCount;
        else if (value == "half-edges") c.init.kind = InitialSpec::Kind::HalfEdges;
        else bad_value(key, value);
    } else if (key == "init_p") {
        c.init.p = parse_double(key, value);
    } else if (key == "init_m") {
        c.init.m = parse_number<std::int64_t>(key, value);
    } else if (key == "y0") {
        c.y0 = parse_double(key, value);
    } else if (key == "t_end") {
        c.t_end = parse_double(key, value);
    } else if (key == "burn_in") {
        c.burn_in = parse_double(key, value);
    } else if (key == "record") {
        if (value == "time") c.record.kind = RecordStride::Kind::Time;
        else if (value == "events") c.record.kind = RecordStride::Kind::Events;
        else bad_value(key, value);
    } else if (key == "record_every_time") {
        c.record.every_time = parse_double(key, value);
    } else if (key == "record_every_events") {
        c.record.every_events = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "n_paths") {
        c.n_paths = parse_number<std::size_t>(key, value);
    } else if (key == "threads") {
        c.threads = parse_number<unsigned>(key, value);
    } else if (key == "sde_dt") {
        c.sde_dt = parse_double(key, value);
    } else if (key == "grid_points") {
        c.grid_points = parse_number<std::size_t>(key, value);
    } else if (key == "ode_step") {
        c.ode_step = parse_double(key, value);
    } else if (key == "euler_steps") {
        c.euler_steps = parse_number<std::size_t>(key, value);
    } else if (key == "pij_dt") {
        c.pij_dt = parse_double(key, value);
    } else if (key == "snapshot_times") {
        c.snapshot_times = parse_list(key, value);
    } else if (key == "output") {
        c.output = std::string(value);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown config key '" + std::string(key) + "'");
    }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": expected key = value");
        }
        apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    kv("experiment", to_string(c.experiment));
    kv("n", std::to_string(c.n));
    kv("n_min", std::to_string(c.n_min));
    kv("n_max", std::to_string(c.n_max));
    kv("n_step", std::to_string(c.n_step));
    kv("c1", format_double(c.c1));
    kv("c2", format_double(c.c2));
    kv("c3", format_double(c.c3));
    kv("init", init_name(c.init.kind));
    kv("init_p", format_double(c.init.p));
    kv("init_m", std::to_string(c.init.m));
    kv("y0", format_double(c.y0));
    kv("t_end", format_double(c.t_end));
    kv("burn_in", format_double(c.burn_in));
    kv("record", c.record.kind == RecordStride::Kind::Time ? "time" : "events");
    kv("record_every_time", format_double(c.record.every_time));
    kv("record_every_events", std::to_string(c.record.every_events));
    kv("seed", std::to_string(c.seed));
    kv("n_paths", std::to_string(c.n_paths));
    kv("threads", std::to_string(c.threads));
    kv("sde_dt", format_double(c.sde_dt));
    kv("grid_points", std::to_string(c.grid_points));
    kv("ode_step", format_double(c.ode_step));
    kv("euler_steps", std::to_string(c.euler_steps));
    kv("pij_dt", format_double(c.pij_dt));
    std::string times;
    for (std::size_t k = 0; k < c.snapshot_times.size(); ++k) {
        if (k) times += ",";
        times += format_double(c.snapshot_times[k]);
    }
    kv("snapshot_times", times);
    kv("output", c.output);
    return out.str();
}

std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> v;
    auto need = [&](bool ok, const char* message) {
        if (!ok) v.emplace_back(message);
    };
    need(c.n >= 3, "n >= 3 required");
    if (c.n_min != 0) {
        need(c.n_min >= 3, "n_min >= 3 required");
        need(c.n_max >= c.n_min, "n_max >= n_min required");
        need(c.n_step >= 1, "n_step >= 1 required");
    }
    need(c.c1 > 0.0, "c1 > 0 required");
    need(c.c2 > 0.0, "c2 > 0 required (irreducibility lost)");
    need(c.c3 >= 0.0, "c3 >= 0 required");
    if (c.init.kind == InitialSpec::Kind::ErdosRenyi) {
        need(c.init.p >= 0.0 && c.init.p <= 1.0, "init_p must lie in [0, 1]");
    }
    if (c.init.kind == InitialSpec::Kind::EdgeCount && c.n >= 3) {
        const std::int64_t pairs = static_cast<std::int64_t>(c.n) * (c.n - 1) / 2;
        need(c.init.m >= 0 && c.init.m <= pairs, "init_m must lie in [0, n(n-1)/2]");
    }
    need(c.y0 >= 0.0 && c.y0 <= 1.0, "y0 must lie in [0, 1]");
    need(c.t_end > 0.0, "t_end > 0 required");
    need(c.burn_in >= 0.0 && c.burn_in < c.t_end, "burn_in must lie in [0, t_end)");
    if (c.record.kind == RecordStride::Kind::Time) {
        need(c.record.every_time > 0.0, "record_every_time > 0 required");
    } else {
        need(c.record.every_events >= 1, "record_every_events >= 1 required");
    }
    need(c.n_paths >= 1, "n_paths >= 1 required");
    need(c.threads >= 1, "threads >= 1 required");
    need(c.sde_dt > 0.0, "sde_dt > 0 required");
    if (c.sde_dt > 0.0 && c.c1 > 0.0 && c.c2 > 0.0 && c.c3 >= 0.0) {
        need(c.sde_dt < 1.0 / (c.c1 + c.c2 + c.c3), "sde_dt must be below 1/(c1+c2+c3)");
    }
    need(c.grid_points >= 3, "grid_points >= 3 required");
    need(c.ode_step > 0.0, "ode_step > 0 required");
    need(c.euler_steps >= 1, "euler_steps >= 1 required");
    need(c.pij_dt > 0.0, "pij_dt > 0 required");
    for (double t : c.snapshot_times) {
        if (!(t >= 0.0 && t <= c.t_end)) {
            v.emplace_back("snapshot_times must lie in [0, t_end]");
            break;
        }
    }
    need(!c.output.empty(), "output directory must be set");
    return v;
}

}  // namespace triadic
