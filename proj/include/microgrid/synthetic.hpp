#pragma once

#include "microgrid/core.hpp"

#include <cstdint>

namespace microgrid {

/// Bundled offline dataset: one solar station and two wind stations with
/// opposite diurnal phase (one night-peaking, one day-peaking), so the
/// mixed-investment comparisons run without any external data.
struct SyntheticDataset {
  MeteoSeries solar;       // "KPS" radiation, W/m^2
  MeteoSeries wind_night;  // "TCN" night-peaking wind, m/s
  MeteoSeries wind_day;    // "SKD" day-peaking wind, m/s
};

SyntheticDataset generate_dataset(int days = 60, std::uint64_t seed = 20120901);

/// Desk-scale microgrid with a synthetic residential preferred-load
/// curve (evening-peaked), sized so renewables in the hundreds of kW and
/// budgets in the millions of HKD are the interesting regime.
MicrogridSpec default_spec(int users = 2);

}  // namespace microgrid
