#ifndef DIG_SIM_CTM_HPP
#define DIG_SIM_CTM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dig/rng.hpp"
#include "dig/series.hpp"

namespace dig {

struct CtmLink {
    int cells = 100;
    double cell_length = 100.0;  // meters
    double q_max = 0.6;          // veh/s capacity per cell
    double jam_density = 0.15;   // veh/m
};

/// Last cell of from_link feeds into_cell of into_link; the two upstream
/// cells share the receiving cell's supply in proportion to their
/// densities.
struct CtmMerge {
    int from_link = 1;
    int into_link = 0;
    int into_cell = 99;  // 0-based on into_link
};

struct CtmSensor {
    int link = 0;
    int cell = 0;  // 0-based
};

struct CtmNetwork {
    std::vector<CtmLink> links;
    double time_step = 3.0;  // seconds
    double v_min = 20.0, v_max = 30.0;  // free-flow speed range, m/s
    double w_min = 5.0, w_max = 8.0;    // congestion wave speed range, m/s
    std::optional<CtmMerge> merge;
    std::vector<CtmSensor> sensors;
};

/// Throws on invalid topology or when v_max*T or w_max*T exceeds the cell
/// length (the density bounds are only guaranteed under that condition).
void validate(const CtmNetwork& network);

struct CtmState {
    std::vector<std::vector<double>> densities;  // veh/m per (link, cell)
    long long t = 0;
};

CtmState initial_state(const CtmNetwork& network);

/// Per-cell flows of one step, veh/s.
struct CtmFlows {
    std::vector<std::vector<double>> inflow;
    std::vector<std::vector<double>> outflow;
};

/// One synchronous update: fresh uniform speed draws per cell, demand and
/// supply caps, min-flow coupling between neighbours, proportional merge
/// split, free outflow at each non-merging link end.  boundary_demand is
/// the externally requested inflow per link (veh/s), capped by the first
/// cell's supply.
CtmState ctm_step(const CtmNetwork& network, const CtmState& state,
                  std::span<const double> boundary_demand, Rng& rng, CtmFlows* flows = nullptr);

enum class CtmScenario { single_road, merge_road };

struct CtmScenarioConfig {
    std::size_t n = 10000;  // samples per sensor (windows, not steps)
    std::uint64_t seed = 1;
    double demand_high_frac = 0.8;  // of q_max
    double demand_low_frac = 0.2;
    int demand_period = 200;  // steps per demand phase
    double demand_noise_frac = 0.05;
    /// Simulation steps aggregated into one sensor sample; the sample is
    /// the window's total tapped outflow in whole vehicles.
    int steps_per_window = 1;
    /// Replaces the built-in topology, speed ranges, and sensor taps.
    std::optional<CtmNetwork> network_override;
};

/// Built-in topologies: single_road is one 100-cell link with sensors at
/// cells 5/10/15/20; merge_road is a 200-cell link joined by a 100-cell
/// link at cell 100, sensors at cells 95 of both approaches and 105
/// downstream.  (1-based cell numbering in this comment.)
CtmNetwork default_network(CtmScenario kind);

/// Drives the network with an alternating high/low demand profile plus
/// uniform noise and returns one FlowSeries per sensor: the tapped cell's
/// outflow per step converted to whole vehicles.
std::vector<FlowSeries> run_scenario(CtmScenario kind, const CtmScenarioConfig& config);

}  // namespace dig

#endif  // DIG_SIM_CTM_HPP
