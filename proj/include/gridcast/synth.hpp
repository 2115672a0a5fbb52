#pragma once

#include <cstdint>
#include <string>

#include "gridcast/data_io.hpp"
#include "gridcast/sarma.hpp"
#include "gridcast/series.hpp"
#include "gridcast/timebase.hpp"

namespace gridcast {

/// Deterministic desk-scale test data: an hourly load series and a
/// TSO-style forecast whose error carries a weekly bias pattern plus
/// correlated noise, which is exactly the structure the correction
/// pipeline is built to remove.
struct SynthLoadConfig {
    std::uint64_t seed = 42;
    Day first_day = 0;
    int days = 730;
    double base_mw = 50000;
    double daily_swing = 6000;   // sinusoidal day shape amplitude
    double weekend_drop = 4000;  // flat weekend reduction
    double load_noise_sd = 300;  // white noise on the actual load
    /// Amplitude of the hour-of-week bias in the forecast error; 0
    /// makes the TSO forecast unbiased by construction.
    double bias_amplitude = 1000;
    /// Correlated part of the forecast error.
    SarmaParams noise{0.0, 0.8, 0.5, -0.3, 0.2, 40000.0};
};

struct SynthLoad {
    TimeSeries actual;
    TimeSeries tso;
};

[[nodiscard]] SynthLoad synth_load(const SynthLoadConfig& cfg);

/// Toy dispatch system sized from a demand series: a three-step
/// thermal merit order (10/30/60 eur/MWh) dimensioned by demand
/// quantiles, optionally renewables with a varying availability
/// profile and a pump-storage pair split between the mid-term and
/// long-term formulations.
struct SynthDispatchConfig {
    Day first_day = 0;
    int days = 10;
    std::string zone = "Z1";
    /// Capacity of the cheapest cluster as a demand quantile; 0.5 puts
    /// the first merit-order step at the median, where forecast errors
    /// flip the marginal cluster most often.
    double base_cap_quantile = 0.35;
    bool with_res = false;
    bool with_storage = false;
    /// Share of pump-storage capacity given to the long-term
    /// (water-value) formulation; the rest cycles in the mid-term one.
    double psp_longterm_share = 0.3;
};

[[nodiscard]] DispatchDataset synth_dispatch(const SynthDispatchConfig& cfg,
                                             const TimeSeries& demand);

/// Writes `timestamp,actual,tso_forecast`.
void write_load(const std::string& path, const TimeSeries& actual, const TimeSeries& tso);

/// Serializes a dataset into the directory layout the reader expects.
void write_dispatch_dataset(const std::string& dir, const DispatchDataset& data);

}  // namespace gridcast
