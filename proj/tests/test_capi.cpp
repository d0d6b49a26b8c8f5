#include "triadic/triadic.h"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using Catch::Approx;

TEST_CASE("status strings and version") {
    CHECK(std::string(triadic_version()) == "1.0.0");
    CHECK(std::string(triadic_status_string(TRIADIC_ERR_DEGENERATE_REGIME)) == "degenerate regime");
}

TEST_CASE("params and cubic through the C API") {
    triadic_params p{30, 0.025, 0.25, 0.91};
    CHECK(triadic_params_validate(&p) == TRIADIC_OK);
    double roots[3];
    size_t count = 0;
    triadic_regime regime{};
    REQUIRE(triadic_solve_cubic(&p, 0, roots, &count, &regime) == TRIADIC_OK);
    CHECK(count == 3);
    CHECK(regime == TRIADIC_BISTABLE);
    double d = 1;
    CHECK(triadic_drift(&p, roots[1], &d) == TRIADIC_OK);
    CHECK(std::fabs(d) < 1e-14);

    triadic_params bad{2, 0.0, 0.25, 0.91};
    CHECK(triadic_params_validate(&bad) == TRIADIC_ERR_INVALID_ARGUMENT);
    const std::string message = triadic_last_error();
    CHECK(message.find("n") != std::string::npos);
    CHECK(message.find("c1") != std::string::npos);

    triadic_params degenerate{10, 0.03125, 0.28125, 1.0};
    CHECK(triadic_solve_cubic(&degenerate, 0, roots, &count, &regime) == TRIADIC_ERR_DEGENERATE_REGIME);
    CHECK(triadic_solve_cubic(&degenerate, 1, roots, &count, &regime) == TRIADIC_OK);
    CHECK(count == 1);
    CHECK(regime == TRIADIC_MONOSTABLE);
    CHECK(triadic_drift(nullptr, 0.1, &d) == TRIADIC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("chain handle") {
    triadic_params p{10, 0.025, 0.25, 0.91};
    triadic_chain* chain = nullptr;
    REQUIRE(triadic_chain_create(&p, &chain) == TRIADIC_OK);
    const size_t states = triadic_chain_states(chain);
    REQUIRE(states == 46);
    std::vector<double> birth(states), death(states), probs(states), tau(states);
    CHECK(triadic_chain_rates(chain, birth.data(), death.data(), states) == TRIADIC_OK);
    CHECK(birth[0] == Approx(0.025 * 45));
    CHECK(death[45] == Approx(0.25 * 45));
    CHECK(triadic_chain_stationary(chain, probs.data(), states) == TRIADIC_OK);
    double sum = 0;
    for (double x : probs) sum += x;
    CHECK(sum == Approx(1.0).margin(1e-12));
    CHECK(triadic_chain_exit_times(chain, 13, tau.data(), states) == TRIADIC_OK);
    CHECK(tau[13] == 0.0);
    CHECK(tau[0] > tau[12]);
    CHECK(triadic_chain_exit_times(chain, 46, tau.data(), states) == TRIADIC_ERR_INVALID_ARGUMENT);
    CHECK(triadic_chain_stationary(chain, probs.data(), 3) == TRIADIC_ERR_INVALID_ARGUMENT);
    triadic_chain_destroy(chain);
    triadic_chain_destroy(nullptr);
}

TEST_CASE("graph handle") {
    triadic_graph* g = nullptr;
    REQUIRE(triadic_graph_create(12, TRIADIC_INIT_EDGE_COUNT, 20, 5, &g) == TRIADIC_OK);
    int64_t edges = 0, wedges = -1;
    CHECK(triadic_graph_edge_count(g, &edges) == TRIADIC_OK);
    CHECK(edges == 20);
    CHECK(triadic_graph_open_wedges(g, &wedges) == TRIADIC_OK);
    CHECK(wedges >= 0);
    triadic_params p{12, 0.025, 0.25, 0.91};
    uint64_t events = 0;
    CHECK(triadic_graph_advance(g, &p, 10.0, 3, &events) == TRIADIC_OK);
    CHECK(events > 0);
    triadic_params wrong{13, 0.025, 0.25, 0.91};
    CHECK(triadic_graph_advance(g, &wrong, 10.0, 3, &events) == TRIADIC_ERR_INVALID_ARGUMENT);

    const auto path = std::filesystem::temp_directory_path() / "triadic_capi_edges.txt";
    CHECK(triadic_graph_write_edges(g, path.c_str()) == TRIADIC_OK);
    CHECK(std::filesystem::exists(path));
    std::filesystem::remove(path);
    CHECK(triadic_graph_write_edges(g, "/nonexistent/dir/edges.txt") == TRIADIC_ERR_IO);
    triadic_graph_destroy(g);

    triadic_graph* bad = nullptr;
    CHECK(triadic_graph_create(12, TRIADIC_INIT_ERDOS_RENYI, 1.5, 1, &bad) == TRIADIC_ERR_INVALID_ARGUMENT);
    CHECK(bad == nullptr);
}

TEST_CASE("mfpt and ode through the C API") {
    triadic_params p{30, 0.025, 0.25, 0.91};
    std::vector<double> x(513), t(513);
    REQUIRE(triadic_mfpt(&p, TRIADIC_REFLECT_LEFT_ABSORB_RIGHT, 0.0, 0.3, 513, x.data(), t.data()) == TRIADIC_OK);
    CHECK(x.back() == 0.3);
    CHECK(t.back() == 0.0);
    CHECK(t.front() > 0.0);
    CHECK(triadic_mfpt(&p, TRIADIC_REFLECT_LEFT_ABSORB_RIGHT, 0.0, 0.3, 2, x.data(), t.data()) ==
          TRIADIC_ERR_INVALID_ARGUMENT);
    double y = 0;
    triadic_params mono{30, 0.25, 0.25, 0.91};
    CHECK(triadic_ode_terminal(&mono, 0.2, 200.0, 0.01, &y) == TRIADIC_OK);
    CHECK(y == Approx(0.7544).margin(1e-3));
    CHECK(triadic_ode_terminal(&mono, 0.2, 200.0, 0.0, &y) == TRIADIC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config handle and runner") {
    triadic_config* cfg = nullptr;
    REQUIRE(triadic_config_create(&cfg) == TRIADIC_OK);
    CHECK(triadic_config_set(cfg, "bogus", "1") == TRIADIC_ERR_INVALID_ARGUMENT);
    CHECK(triadic_config_set(cfg, "n", "2") == TRIADIC_OK);
    CHECK(triadic_config_set(cfg, "c2", "0") == TRIADIC_OK);

    size_t needed = 0, count = 0;
    CHECK(triadic_config_validate(cfg, nullptr, 0, &needed, &count) == TRIADIC_OK);
    CHECK(count == 2);
    std::string small(4, '\0');
    CHECK(triadic_config_validate(cfg, small.data(), small.size(), &needed, &count) == TRIADIC_ERR_BUFFER_TOO_SMALL);
    std::string text(needed, '\0');
    CHECK(triadic_config_validate(cfg, text.data(), text.size(), &needed, &count) == TRIADIC_OK);
    CHECK(std::string(text.c_str()) == "n >= 3 required\nc2 > 0 required (irreducibility lost)");
    CHECK(triadic_run(cfg, nullptr, 0, &needed) == TRIADIC_ERR_INVALID_ARGUMENT);

    const auto dir = std::filesystem::temp_directory_path() / "triadic_capi_run";
    std::filesystem::remove_all(dir);
    CHECK(triadic_config_set(cfg, "n", "10") == TRIADIC_OK);
    CHECK(triadic_config_set(cfg, "c2", "0.25") == TRIADIC_OK);
    CHECK(triadic_config_set(cfg, "experiment", "macro-steady") == TRIADIC_OK);
    CHECK(triadic_config_set(cfg, "output", dir.c_str()) == TRIADIC_OK);
    CHECK(triadic_config_serialize(cfg, nullptr, 0, &needed) == TRIADIC_OK);
    std::string serialized(needed, '\0');
    CHECK(triadic_config_serialize(cfg, serialized.data(), serialized.size(), &needed) == TRIADIC_OK);
    CHECK(serialized.find("experiment = macro-steady") != std::string::npos);

    CHECK(triadic_run(cfg, nullptr, 0, &needed) == TRIADIC_OK);
    CHECK(std::filesystem::exists(dir / "steady.csv"));
    std::string summary(needed, '\0');
    CHECK(triadic_run(cfg, summary.data(), summary.size(), &needed) == TRIADIC_OK);
    CHECK(summary.find("\"experiment\": \"macro-steady\"") != std::string::npos);
    std::filesystem::remove_all(dir);

    CHECK(triadic_config_load(cfg, "/nonexistent.cfg") == TRIADIC_ERR_IO);
    triadic_config_destroy(cfg);
}
