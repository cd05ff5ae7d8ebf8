#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace microgrid {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Number of hourly slots in one day of meteorological data.
inline constexpr int kHoursPerDay = 24;

enum class MeteoKind { SolarRadiation, WindSpeed };

/// Raw hourly measurement series for one station. Values are solar
/// radiation in W/m^2 or wind speed in m/s depending on `kind`.
/// Construct via make_meteo_series so the ingest invariants (finite,
/// non-negative, contiguous hourly, whole days) are enforced once.
struct MeteoSeries {
  std::string station;
  MeteoKind kind = MeteoKind::SolarRadiation;
  std::vector<std::int64_t> timestamps;  // unix seconds, strictly +3600 steps
  Vec values;

  int days() const { return static_cast<int>(values.size()) / kHoursPerDay; }
};

MeteoSeries make_meteo_series(std::string station, MeteoKind kind,
                              std::vector<std::int64_t> timestamps, Vec values);

/// Hourly per-unit-capacity output for one day, dimensionless kW per kW
/// of installed capacity. Entries always lie in [0, 1].
struct RenewableProfile {
  Vec hours;  // length kHoursPerDay
};

/// Piecewise power curve for a wind turbine, speeds in m/s.
/// Output is zero below cut_in and above cut_out, cubic between cut_in
/// and rated, and 1.0 between rated and cut_out.
struct TurbineCurve {
  double cut_in = 3.0;
  double rated = 12.0;
  double cut_out = 25.0;
};

void validate(const TurbineCurve& curve);

/// Per-unit solar output for one day of a radiation series: radiation
/// normalized to 1000 W/m^2 standard test conditions and clamped to [0, 1].
RenewableProfile solar_profile(const MeteoSeries& series, int day_index);

/// Per-unit wind output for one day of a wind-speed series under `curve`.
RenewableProfile wind_profile(const MeteoSeries& series, int day_index,
                              const TurbineCurve& curve = {});

/// Per-unit output of a single wind-speed sample.
double wind_power(double speed, const TurbineCurve& curve);

/// Sample (Pearson) correlation coefficient between two equally long
/// series. Throws if either series has zero variance.
double correlation(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y);

}  // namespace microgrid
