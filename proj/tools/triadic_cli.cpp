// Command-line experiment runner on top of the C API.

#include "triadic/triadic.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

const char* const kExperiments[] = {
    "micro-path", "micro-spy", "micro-pij", "macro-path", "macro-steady", "macro-exit",
    "sde-path",   "sde-mfpt",  "ode-trace", "mean-field", "compare-models",
};

int report(triadic_status status) {
    std::cerr << "error: " << triadic_status_string(status);
    const std::string detail = triadic_last_error();
    if (!detail.empty()) std::cerr << ": " << detail;
    std::cerr << '\n';
    return 1;
}

std::string fetch_text(triadic_status (*fn)(const triadic_config*, char*, size_t, size_t*), const triadic_config* cfg,
                       triadic_status& status) {
    size_t needed = 0;
    status = fn(cfg, nullptr, 0, &needed);
    if (status != TRIADIC_OK) return {};
    std::string text(needed, '\0');
    status = fn(cfg, text.data(), text.size(), &needed);
    text.resize(needed ? needed - 1 : 0);
    return text;
}

struct ConfigHandle {
    triadic_config* ptr = nullptr;
    ~ConfigHandle() { triadic_config_destroy(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triadic closure network model: experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> settings;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (key = value lines)");
        cmd->add_option("--set", settings, "override one setting, KEY=VALUE (repeatable)");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--threads", threads, "worker threads");
    };

    std::string experiment;
    for (const char* name : kExperiments) {
        auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        add_common(cmd);
        cmd->callback([&experiment, name] { experiment = name; });
    }
    auto* validate_cmd = app.add_subcommand("validate", "check a config and list every violation");
    add_common(validate_cmd);
    auto* print_cmd = app.add_subcommand("print-config", "print the effective config");
    add_common(print_cmd);

    CLI11_PARSE(app, argc, argv);

    ConfigHandle cfg;
    if (auto st = triadic_config_create(&cfg.ptr); st != TRIADIC_OK) return report(st);
    if (!config_path.empty()) {
        if (auto st = triadic_config_load(cfg.ptr, config_path.c_str()); st != TRIADIC_OK) return report(st);
    }
    if (!experiment.empty()) {
        if (auto st = triadic_config_set(cfg.ptr, "experiment", experiment.c_str()); st != TRIADIC_OK) return report(st);
    }
    for (const auto& s : settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --set expects KEY=VALUE, got '" << s << "'\n";
            return 2;
        }
        const std::string key = s.substr(0, eq);
        const std::string value = s.substr(eq + 1);
        if (auto st = triadic_config_set(cfg.ptr, key.c_str(), value.c_str()); st != TRIADIC_OK) return report(st);
    }
    if (!out_dir.empty()) {
        if (auto st = triadic_config_set(cfg.ptr, "output", out_dir.c_str()); st != TRIADIC_OK) return report(st);
    }
    if (seed) {
        if (auto st = triadic_config_set(cfg.ptr, "seed", std::to_string(*seed).c_str()); st != TRIADIC_OK) return report(st);
    }
    if (threads) {
        if (auto st = triadic_config_set(cfg.ptr, "threads", std::to_string(*threads).c_str()); st != TRIADIC_OK) {
            return report(st);
        }
    }

    triadic_status st = TRIADIC_OK;
    if (print_cmd->parsed()) {
        const auto text = fetch_text(triadic_config_serialize, cfg.ptr, st);
        if (st != TRIADIC_OK) return report(st);
        std::cout << text;
        return 0;
    }

    size_t needed = 0;
    size_t count = 0;
    st = triadic_config_validate(cfg.ptr, nullptr, 0, &needed, &count);
    if (st != TRIADIC_OK) return report(st);
    if (count > 0) {
        std::string text(needed, '\0');
        triadic_config_validate(cfg.ptr, text.data(), text.size(), &needed, &count);
        text.resize(needed - 1);
        std::cerr << "config has " << count << " violation(s):\n" << text << '\n';
        return 2;
    }
    if (validate_cmd->parsed()) {
        std::cout << "ok\n";
        return 0;
    }

    const auto summary = fetch_text(triadic_run, cfg.ptr, st);
    if (st != TRIADIC_OK) return report(st);
    std::cout << summary;
    return 0;
}
