#include "microgrid/renewables.hpp"

#include "microgrid/core.hpp"

#include <cmath>
#include <utility>

namespace microgrid {

MeteoSeries make_meteo_series(std::string station, MeteoKind kind,
                              std::vector<std::int64_t> timestamps, Vec values) {
  if (values.size() == 0 || values.size() % kHoursPerDay != 0) {
    throw Error("meteo series length must be a positive multiple of 24, got " +
                std::to_string(values.size()));
  }
  if (static_cast<Eigen::Index>(timestamps.size()) != values.size()) {
    throw Error("meteo series has " + std::to_string(timestamps.size()) +
                " timestamps for " + std::to_string(values.size()) + " values");
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] - timestamps[i - 1] != 3600) {
      throw Error("meteo series has a gap or irregular step before row " +
                  std::to_string(i) + "; hourly data required");
    }
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw Error("meteo value at row " + std::to_string(i) +
                  " is negative or not finite");
    }
  }
  return MeteoSeries{std::move(station), kind, std::move(timestamps), std::move(values)};
}

void validate(const TurbineCurve& curve) {
  if (!(curve.cut_in > 0.0) || !(curve.cut_in < curve.rated) ||
      !(curve.rated < curve.cut_out)) {
    throw Error("turbine curve requires 0 < cut_in < rated < cut_out");
  }
}

namespace {

Vec day_slice(const MeteoSeries& series, int day_index) {
  if (day_index < 0 || day_index >= series.days()) {
    throw Error("day index " + std::to_string(day_index) + " outside series with " +
                std::to_string(series.days()) + " days");
  }
  return series.values.segment(static_cast<Eigen::Index>(day_index) * kHoursPerDay,
                               kHoursPerDay);
}

}  // namespace

RenewableProfile solar_profile(const MeteoSeries& series, int day_index) {
  if (series.kind != MeteoKind::SolarRadiation) {
    throw Error("solar_profile needs a radiation series, station '" + series.station +
                "' holds wind speed");
  }
  // 1000 W/m^2 is the standard-test-conditions irradiance the unit
  // capacity is rated at.
  Vec eta = (day_slice(series, day_index) / 1000.0).cwiseMin(1.0).cwiseMax(0.0);
  return RenewableProfile{std::move(eta)};
}

double wind_power(double speed, const TurbineCurve& curve) {
  if (speed < curve.cut_in || speed > curve.cut_out) return 0.0;
  if (speed >= curve.rated) return 1.0;
  const double ci3 = curve.cut_in * curve.cut_in * curve.cut_in;
  const double r3 = curve.rated * curve.rated * curve.rated;
  return (speed * speed * speed - ci3) / (r3 - ci3);
}

RenewableProfile wind_profile(const MeteoSeries& series, int day_index,
                              const TurbineCurve& curve) {
  if (series.kind != MeteoKind::WindSpeed) {
    throw Error("wind_profile needs a wind-speed series, station '" + series.station +
                "' holds solar radiation");
  }
  validate(curve);
  Vec speeds = day_slice(series, day_index);
  Vec eta(kHoursPerDay);
  for (int t = 0; t < kHoursPerDay; ++t) eta[t] = wind_power(speeds[t], curve);
  return RenewableProfile{std::move(eta)};
}

double correlation(const Eigen::Ref<const Vec>& x, const Eigen::Ref<const Vec>& y) {
  if (x.size() != y.size()) {
    throw Error("correlation needs equally long series, got " +
                std::to_string(x.size()) + " and " + std::to_string(y.size()));
  }
  if (x.size() < 2) throw Error("correlation needs at least two samples");
  const Vec dx = x.array() - x.mean();
  const Vec dy = y.array() - y.mean();
  const double sx = dx.squaredNorm();
  const double sy = dy.squaredNorm();
  if (sx == 0.0 || sy == 0.0) {
    throw Error("correlation undefined for a constant series (zero variance)");
  }
  return dx.dot(dy) / std::sqrt(sx * sy);
}

}  // namespace microgrid
