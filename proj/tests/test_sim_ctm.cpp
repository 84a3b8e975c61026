#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dig/rng.hpp"
#include "dig/sim_ctm.hpp"

using namespace dig;

namespace {

// Fixed-speed variant so flow values can be computed by hand.
CtmNetwork fixed_speed_network(int cells = 100) {
    CtmNetwork net;
    net.links = {CtmLink{.cells = cells}};
    net.v_min = net.v_max = 25.0;
    net.w_min = net.w_max = 6.0;
    net.sensors = {{0, cells / 2}};
    return net;
}

double total_vehicles(const CtmNetwork& net, const CtmState& state) {
    double total = 0.0;
    for (std::size_t l = 0; l < net.links.size(); ++l)
        for (double rho : state.densities[l]) total += rho * net.links[l].cell_length;
    return total;
}

}  // namespace

TEST_SUITE("sim_ctm") {

TEST_CASE("an empty road with no demand stays empty") {
    auto net = default_network(CtmScenario::single_road);
    Rng rng = Rng::derive(1, "ctm.test.empty");
    auto state = initial_state(net);
    std::vector<double> demand{0.0};
    for (int t = 0; t < 10; ++t) state = ctm_step(net, state, demand, rng);
    for (double rho : state.densities[0]) CHECK(rho == 0.0);
}

TEST_CASE("a density pulse moves strictly downstream and keeps its mass") {
    auto net = fixed_speed_network();
    Rng rng = Rng::derive(2, "ctm.test.pulse");
    auto state = initial_state(net);
    for (int i = 10; i < 13; ++i) state.densities[0][i] = 0.01;
    double mass = total_vehicles(net, state);
    std::vector<double> demand{0.0};

    for (int t = 0; t < 50; ++t) {
        state = ctm_step(net, state, demand, rng);
        // Nothing can flow upstream and nothing reaches the exit in 50
        // steps, so the support floor never drops and mass is conserved.
        for (int i = 0; i < 10; ++i) CHECK(state.densities[0][i] == 0.0);
        CHECK(total_vehicles(net, state) == doctest::Approx(mass).epsilon(1e-12));
    }
    double beyond = 0.0;
    for (std::size_t i = 20; i < state.densities[0].size(); ++i) beyond += state.densities[0][i];
    CHECK(beyond > 0.0);
}

TEST_CASE("vehicles are conserved through the merge network") {
    auto net = default_network(CtmScenario::merge_road);
    Rng speeds = Rng::derive(3, "ctm.test.conserve");
    Rng demands = Rng::derive(4, "ctm.test.demands");
    auto state = initial_state(net);
    CtmFlows flows;
    for (int t = 0; t < 200; ++t) {
        std::vector<double> demand{demands.uniform(0.0, 0.6), demands.uniform(0.0, 0.6)};
        auto next = ctm_step(net, state, demand, speeds, &flows);

        // Change in vehicles = time_step * (boundary inflows - terminal
        // outflows); the merging link's last cell discharges internally,
        // so only link 0's tail is a true exit.
        double gained = total_vehicles(net, next) - total_vehicles(net, state);
        double boundary = flows.inflow[0][0] + flows.inflow[1][0];
        double leaving = flows.outflow[0].back();
        CHECK(gained ==
              doctest::Approx(net.time_step * (boundary - leaving)).epsilon(1e-9).scale(1.0));

        for (std::size_t l = 0; l < 2; ++l)
            for (double rho : next.densities[l]) {
                CHECK(rho >= 0.0);
                CHECK(rho <= net.links[l].jam_density);
            }
        state = next;
    }
}

TEST_CASE("constant sub-capacity demand settles into a uniform steady state") {
    auto net = fixed_speed_network();
    Rng rng = Rng::derive(5, "ctm.test.steady");
    auto state = initial_state(net);
    std::vector<double> demand{0.3};
    CtmFlows flows;
    CtmState prev = state;
    for (int t = 0; t < 600; ++t) {
        prev = state;
        state = ctm_step(net, state, demand, rng, &flows);
    }
    double expected_rho = 0.3 / 25.0;  // free-flow density carrying 0.3 veh/s
    for (std::size_t i = 0; i < state.densities[0].size(); ++i) {
        CHECK(std::abs(state.densities[0][i] - prev.densities[0][i]) <= 1e-6);
        CHECK(state.densities[0][i] == doctest::Approx(expected_rho).epsilon(1e-6));
        CHECK(flows.outflow[0][i] == doctest::Approx(0.3).epsilon(1e-6));
    }
}

TEST_CASE("merge flows follow the density-proportional split by hand") {
    CtmNetwork net;
    net.links = {CtmLink{.cells = 3}, CtmLink{.cells = 1}};
    net.v_min = net.v_max = 25.0;
    net.w_min = net.w_max = 6.0;
    net.merge = CtmMerge{.from_link = 1, .into_link = 0, .into_cell = 1};
    net.sensors = {{0, 2}};
    validate(net);

    auto state = initial_state(net);
    state.densities[0] = {0.10, 0.14, 0.0};
    state.densities[1] = {0.05};
    Rng rng = Rng::derive(6, "ctm.test.merge");
    CtmFlows flows;
    std::vector<double> demand{0.0, 0.0};
    ctm_step(net, state, demand, rng, &flows);

    // Receiving cell supply 6*(0.15-0.14) = 0.06 splits 2:1 between the
    // approaches at densities 0.10 and 0.05; both approaches demand more
    // (min(25*rho, 0.6) = 0.6 resp. 0.6), so each is supply-limited.
    CHECK(flows.outflow[0][0] == doctest::Approx(0.06 * (2.0 / 3.0)).epsilon(1e-12));
    CHECK(flows.outflow[1][0] == doctest::Approx(0.06 * (1.0 / 3.0)).epsilon(1e-12));
    CHECK(flows.inflow[0][1] ==
          doctest::Approx(flows.outflow[0][0] + flows.outflow[1][0]).epsilon(1e-12));
}

TEST_CASE("an empty merge junction splits evenly and produces no flow") {
    CtmNetwork net;
    net.links = {CtmLink{.cells = 3}, CtmLink{.cells = 1}};
    net.merge = CtmMerge{.from_link = 1, .into_link = 0, .into_cell = 1};
    net.sensors = {{0, 2}};
    auto state = initial_state(net);
    Rng rng = Rng::derive(7, "ctm.test.zero-merge");
    CtmFlows flows;
    std::vector<double> demand{0.0, 0.0};
    auto next = ctm_step(net, state, demand, rng, &flows);
    CHECK(flows.outflow[0][0] == 0.0);
    CHECK(flows.outflow[1][0] == 0.0);
    for (const auto& link : next.densities)
        for (double rho : link) {
            CHECK(std::isfinite(rho));
            CHECK(rho == 0.0);
        }
}

TEST_CASE("the last cell discharges freely and the first is supply-capped") {
    auto net = fixed_speed_network(5);
    auto state = initial_state(net);
    state.densities[0] = {0.14, 0.01, 0.01, 0.01, 0.02};
    Rng rng = Rng::derive(8, "ctm.test.boundary");
    CtmFlows flows;
    std::vector<double> demand{0.5};
    ctm_step(net, state, demand, rng, &flows);
    // First-cell supply 6*(0.15-0.14) caps the requested 0.5 veh/s.
    CHECK(flows.inflow[0][0] == doctest::Approx(0.06).epsilon(1e-12));
    // Free outflow at the tail: min(25*0.02, 0.6) with no supply term.
    CHECK(flows.outflow[0][4] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scenario runs are deterministic and shaped by the window") {
    CtmScenarioConfig config;
    config.n = 40;
    auto a = run_scenario(CtmScenario::merge_road, config);
    auto b = run_scenario(CtmScenario::merge_road, config);
    REQUIRE(a.size() == 3);
    for (std::size_t s = 0; s < 3; ++s) {
        CHECK(a[s].node_id == "s" + std::to_string(s + 1));
        CHECK(a[s].samples == b[s].samples);
        CHECK(a[s].samples.size() == 40);
        CHECK(a[s].period_seconds == 3);
        for (auto v : a[s].samples) CHECK(v >= 0);
    }

    // Seed changes surface quickest on the single road, whose taps sit
    // right behind the noisy boundary demand; the merge taps are 100 cells
    // in, further than 120 raw steps can carry a difference.
    CtmScenarioConfig head = config;
    auto base = run_scenario(CtmScenario::single_road, head);
    head.seed = 2;
    auto moved = run_scenario(CtmScenario::single_road, head);
    REQUIRE(base.size() == moved.size());
    bool differs = false;
    for (std::size_t s = 0; s < base.size(); ++s)
        if (base[s].samples != moved[s].samples) differs = true;
    CHECK(differs);

    config.steps_per_window = 4;
    auto windowed = run_scenario(CtmScenario::single_road, config);
    REQUIRE(windowed.size() == 4);
    for (const auto& s : windowed) {
        CHECK(s.samples.size() == 40);
        CHECK(s.period_seconds == 12);  // 4 steps of 3 seconds each
    }
}

TEST_CASE("network validation rejects broken topologies") {
    CtmNetwork net = default_network(CtmScenario::single_road);
    net.time_step = 6.0;  // 30 m/s * 6 s > 100 m cell
    CHECK_THROWS_WITH_AS(validate(net), doctest::Contains("exceeds cell length"),
                         std::invalid_argument);
    net = default_network(CtmScenario::single_road);
    net.w_max = 40.0;
    CHECK_THROWS_AS(validate(net), std::invalid_argument);
    net = default_network(CtmScenario::single_road);
    net.links.clear();
    CHECK_THROWS_AS(validate(net), std::invalid_argument);
    net = default_network(CtmScenario::single_road);
    net.sensors = {{0, 100}};
    CHECK_THROWS_AS(validate(net), std::invalid_argument);
    net = default_network(CtmScenario::merge_road);
    net.merge->into_cell = 0;  // needs an upstream neighbour
    CHECK_THROWS_AS(validate(net), std::invalid_argument);
    net = default_network(CtmScenario::merge_road);
    net.merge->from_link = 0;
    net.merge->into_link = 0;
    CHECK_THROWS_AS(validate(net), std::invalid_argument);
    net = default_network(CtmScenario::single_road);
    net.v_min = 0.0;
    CHECK_THROWS_AS(validate(net), std::invalid_argument);
    net = default_network(CtmScenario::single_road);
    net.links[0].jam_density = 0.0;
    CHECK_THROWS_AS(validate(net), std::invalid_argument);
}

TEST_CASE("step and scenario inputs are validated") {
    auto net = default_network(CtmScenario::single_road);
    auto state = initial_state(net);
    Rng rng = Rng::derive(9, "ctm.test.args");
    std::vector<double> negative{-0.1};
    CHECK_THROWS_AS(ctm_step(net, state, negative, rng), std::invalid_argument);
    std::vector<double> wrong_size{0.1, 0.1};
    CHECK_THROWS_AS(ctm_step(net, state, wrong_size, rng), std::invalid_argument);
    state.densities[0][0] = 1.0;  // beyond jam density
    std::vector<double> demand{0.1};
    CHECK_THROWS_AS(ctm_step(net, state, demand, rng), std::invalid_argument);

    CtmScenarioConfig config;
    config.n = 0;
    CHECK_THROWS_AS(run_scenario(CtmScenario::single_road, config), std::invalid_argument);
    config = CtmScenarioConfig{};
    config.steps_per_window = 0;
    CHECK_THROWS_AS(run_scenario(CtmScenario::single_road, config), std::invalid_argument);
    config = CtmScenarioConfig{};
    config.demand_period = 0;
    CHECK_THROWS_AS(run_scenario(CtmScenario::single_road, config), std::invalid_argument);
    config = CtmScenarioConfig{};
    config.demand_noise_frac = -0.1;
    CHECK_THROWS_AS(run_scenario(CtmScenario::single_road, config), std::invalid_argument);
    config = CtmScenarioConfig{};
    CtmNetwork no_sensors = default_network(CtmScenario::single_road);
    no_sensors.sensors.clear();
    config.network_override = no_sensors;
    CHECK_THROWS_AS(run_scenario(CtmScenario::single_road, config), std::invalid_argument);
}

}  // TEST_SUITE
