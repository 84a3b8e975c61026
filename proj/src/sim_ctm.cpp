#include "dig/sim_ctm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dig {

void validate(const CtmNetwork& network) {
    if (network.links.empty()) throw std::invalid_argument("network needs at least one link");
    for (const auto& link : network.links) {
        if (link.cells < 1) throw std::invalid_argument("link needs at least one cell");
        if (link.cell_length <= 0.0) throw std::invalid_argument("cell length must be positive");
        if (link.q_max <= 0.0) throw std::invalid_argument("capacity must be positive");
        if (link.jam_density <= 0.0) throw std::invalid_argument("jam density must be positive");
    }
    if (network.time_step <= 0.0) throw std::invalid_argument("time step must be positive");
    if (!(network.v_min > 0.0 && network.v_min <= network.v_max))
        throw std::invalid_argument("need 0 < v_min <= v_max");
    if (!(network.w_min > 0.0 && network.w_min <= network.w_max))
        throw std::invalid_argument("need 0 < w_min <= w_max");
    for (const auto& link : network.links) {
        // Courant condition: a vehicle (or wave) must not cross more than
        // one cell per step, otherwise the update can breach [0, P].
        if (network.v_max * network.time_step > link.cell_length + 1e-12 ||
            network.w_max * network.time_step > link.cell_length + 1e-12)
            throw std::invalid_argument("speed * time_step exceeds cell length");
    }
    if (network.merge) {
        const auto& mg = *network.merge;
        int k = static_cast<int>(network.links.size());
        if (mg.from_link < 0 || mg.from_link >= k || mg.into_link < 0 || mg.into_link >= k ||
            mg.from_link == mg.into_link)
            throw std::invalid_argument("merge links out of range");
        if (mg.into_cell < 1 || mg.into_cell >= network.links[static_cast<std::size_t>(mg.into_link)].cells)
            throw std::invalid_argument("merge cell out of range (needs an upstream neighbour)");
    }
    for (const auto& sensor : network.sensors) {
        if (sensor.link < 0 || sensor.link >= static_cast<int>(network.links.size()))
            throw std::invalid_argument("sensor link out of range");
        if (sensor.cell < 0 || sensor.cell >= network.links[static_cast<std::size_t>(sensor.link)].cells)
            throw std::invalid_argument("sensor cell out of range");
    }
}

CtmState initial_state(const CtmNetwork& network) {
    validate(network);
    CtmState state;
    state.densities.resize(network.links.size());
    for (std::size_t l = 0; l < network.links.size(); ++l)
        state.densities[l].assign(static_cast<std::size_t>(network.links[l].cells), 0.0);
    return state;
}

CtmState ctm_step(const CtmNetwork& network, const CtmState& state,
                  std::span<const double> boundary_demand, Rng& rng, CtmFlows* flows) {
    std::size_t num_links = network.links.size();
    if (state.densities.size() != num_links)
        throw std::invalid_argument("state does not match the network");
    if (boundary_demand.size() != num_links)
        throw std::invalid_argument("need one boundary demand per link");
    for (double d : boundary_demand)
        if (d < 0.0) throw std::invalid_argument("boundary demand must be non-negative");

    // Demand and supply per cell with fresh speed draws (veh/s).
    std::vector<std::vector<double>> demand(num_links), supply(num_links);
    for (std::size_t l = 0; l < num_links; ++l) {
        const auto& link = network.links[l];
        std::size_t cells = static_cast<std::size_t>(link.cells);
        if (state.densities[l].size() != cells)
            throw std::invalid_argument("state does not match the network");
        demand[l].resize(cells);
        supply[l].resize(cells);
        for (std::size_t i = 0; i < cells; ++i) {
            double rho = state.densities[l][i];
            if (rho < 0.0 || rho > link.jam_density + 1e-9)
                throw std::invalid_argument("state density outside [0, jam density]");
            double v = rng.uniform(network.v_min, network.v_max);
            double w = rng.uniform(network.w_min, network.w_max);
            demand[l][i] = std::min(v * rho, link.q_max);
            supply[l][i] = std::min(w * (link.jam_density - rho), link.q_max);
        }
    }

    CtmFlows local;
    CtmFlows& f = flows ? *flows : local;
    f.inflow.assign(num_links, {});
    f.outflow.assign(num_links, {});
    for (std::size_t l = 0; l < num_links; ++l) {
        f.inflow[l].assign(demand[l].size(), 0.0);
        f.outflow[l].assign(demand[l].size(), 0.0);
    }

    for (std::size_t l = 0; l < num_links; ++l) {
        std::size_t cells = demand[l].size();
        f.inflow[l][0] = std::min(boundary_demand[l], supply[l][0]);
        for (std::size_t i = 0; i + 1 < cells; ++i) {
            f.outflow[l][i] = std::min(demand[l][i], supply[l][i + 1]);
            f.inflow[l][i + 1] = f.outflow[l][i];
        }
        f.outflow[l][cells - 1] = demand[l][cells - 1];  // free downstream boundary
    }

    if (network.merge) {
        const auto& mg = *network.merge;
        std::size_t into = static_cast<std::size_t>(mg.into_link);
        std::size_t from = static_cast<std::size_t>(mg.from_link);
        std::size_t cell = static_cast<std::size_t>(mg.into_cell);
        std::size_t last = demand[from].size() - 1;

        double rho_main = state.densities[into][cell - 1];
        double rho_side = state.densities[from][last];
        double total = rho_main + rho_side;
        double share_main = (total > 0.0) ? rho_main / total : 0.5;
        double share_side = (total > 0.0) ? rho_side / total : 0.5;

        double s = supply[into][cell];
        f.outflow[into][cell - 1] = std::min(demand[into][cell - 1], s * share_main);
        f.outflow[from][last] = std::min(demand[from][last], s * share_side);
        f.inflow[into][cell] = f.outflow[into][cell - 1] + f.outflow[from][last];
    }

    CtmState next;
    next.t = state.t + 1;
    next.densities.resize(num_links);
    for (std::size_t l = 0; l < num_links; ++l) {
        const auto& link = network.links[l];
        double scale = network.time_step / link.cell_length;
        std::size_t cells = demand[l].size();
        next.densities[l].resize(cells);
        for (std::size_t i = 0; i < cells; ++i) {
            double rho = state.densities[l][i] + scale * (f.inflow[l][i] - f.outflow[l][i]);
            if (rho < -1e-9 || rho > link.jam_density + 1e-9)
                throw std::logic_error("density left [0, jam density]; stability condition broken");
            next.densities[l][i] = std::clamp(rho, 0.0, link.jam_density);
        }
    }
    return next;
}

CtmNetwork default_network(CtmScenario kind) {
    CtmNetwork net;
    if (kind == CtmScenario::single_road) {
        net.links = {CtmLink{.cells = 100}};
        net.sensors = {{0, 4}, {0, 9}, {0, 14}, {0, 19}};
    } else {
        net.links = {CtmLink{.cells = 200}, CtmLink{.cells = 100}};
        net.merge = CtmMerge{.from_link = 1, .into_link = 0, .into_cell = 99};
        net.sensors = {{0, 94}, {1, 94}, {0, 104}};
    }
    validate(net);
    return net;
}

std::vector<FlowSeries> run_scenario(CtmScenario kind, const CtmScenarioConfig& config) {
    if (config.n == 0) throw std::invalid_argument("need at least one step");
    if (config.demand_period < 1) throw std::invalid_argument("demand period must be positive");
    if (config.demand_high_frac < 0.0 || config.demand_low_frac < 0.0 ||
        config.demand_noise_frac < 0.0)
        throw std::invalid_argument("demand fractions must be non-negative");

    if (config.steps_per_window < 1)
        throw std::invalid_argument("steps_per_window must be positive");

    CtmNetwork net = config.network_override ? *config.network_override : default_network(kind);
    validate(net);
    if (net.sensors.empty()) throw std::invalid_argument("network has no sensors");

    Rng speed_rng = Rng::derive(config.seed, "ctm.speeds");
    std::vector<Rng> demand_rng;
    for (std::size_t l = 0; l < net.links.size(); ++l)
        demand_rng.push_back(Rng::derive(config.seed, "ctm.demand." + std::to_string(l + 1)));

    std::vector<FlowSeries> out(net.sensors.size());
    for (std::size_t s = 0; s < net.sensors.size(); ++s) {
        out[s].node_id = "s" + std::to_string(s + 1);
        out[s].samples.reserve(config.n);
        out[s].period_seconds = std::max(
            1, static_cast<int>(std::lround(net.time_step * config.steps_per_window)));
    }

    CtmState state = initial_state(net);
    std::vector<double> demand(net.links.size());
    std::vector<double> window(net.sensors.size(), 0.0);
    CtmFlows flows;
    std::size_t half = static_cast<std::size_t>(config.demand_period) / 2;
    std::size_t steps = config.n * static_cast<std::size_t>(config.steps_per_window);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t l = 0; l < net.links.size(); ++l) {
            // Side links run the same square wave half a period out of
            // phase so the two approaches stay distinguishable.
            std::size_t shifted = t + (l > 0 ? half : 0);
            bool high = (shifted / static_cast<std::size_t>(config.demand_period)) % 2 == 0;
            double frac = high ? config.demand_high_frac : config.demand_low_frac;
            frac += demand_rng[l].uniform(-config.demand_noise_frac, config.demand_noise_frac);
            demand[l] = std::max(0.0, frac * net.links[l].q_max);
        }
        state = ctm_step(net, state, demand, speed_rng, &flows);
        for (std::size_t s = 0; s < net.sensors.size(); ++s) {
            const auto& tap = net.sensors[s];
            window[s] += flows.outflow[static_cast<std::size_t>(tap.link)]
                                      [static_cast<std::size_t>(tap.cell)] *
                         net.time_step;
        }
        if ((t + 1) % static_cast<std::size_t>(config.steps_per_window) == 0) {
            for (std::size_t s = 0; s < net.sensors.size(); ++s) {
                out[s].samples.push_back(static_cast<std::int64_t>(std::floor(window[s])));
                window[s] = 0.0;
            }
        }
    }
    return out;
}

}  // namespace dig
