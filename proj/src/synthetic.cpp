#include "microgrid/synthetic.hpp"

#include <cmath>
#include <random>

namespace microgrid {

namespace {

constexpr std::int64_t kStartEpoch = 1346457600;  // 2012-09-01T00:00:00Z

std::vector<std::int64_t> hourly_timestamps(int days) {
  std::vector<std::int64_t> ts(static_cast<std::size_t>(days) * kHoursPerDay);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ts[i] = kStartEpoch + static_cast<std::int64_t>(i) * 3600;
  }
  return ts;
}

double bell(double t, double center, double width) {
  const double z = (t - center) / width;
  return std::exp(-z * z);
}

}  // namespace

SyntheticDataset generate_dataset(int days, std::uint64_t seed) {
  if (days < 1) throw Error("dataset needs at least one day");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int n = days * kHoursPerDay;
  Vec solar(n), wind_night(n), wind_day(n);

  for (int d = 0; d < days; ++d) {
    // Daily weather state: cloudiness and wind strength move slowly and
    // independently per station.
    const double cloud = 0.35 + 0.65 * 0.5 * (uni(rng) + uni(rng));
    const double wn_base = 6.0 + 4.0 * uni(rng);
    const double wn_amp = 2.5 + 2.0 * uni(rng);
    const double wd_base = 4.0 + 3.5 * uni(rng);
    const double wd_amp = 2.0 + 2.0 * uni(rng);

    for (int t = 0; t < kHoursPerDay; ++t) {
      const int i = d * kHoursPerDay + t;
      // Clear-sky irradiance: daylight 06-18, peak 950 W/m^2 at 12.
      double sun = 0.0;
      if (t > 6 && t < 18) {
        sun = 950.0 * std::pow(std::sin(M_PI * (t - 6) / 12.0), 1.4);
      }
      solar[i] = std::max(0.0, sun * cloud * (1.0 + 0.08 * gauss(rng)));

      // Night-peaking station (max around 02:00) and day-peaking station
      // (max around 13:00).
      const double phase_n = std::cos(2.0 * M_PI * (t - 2.0) / 24.0);
      const double phase_d = std::cos(2.0 * M_PI * (t - 13.0) / 24.0);
      wind_night[i] = std::max(0.0, wn_base + wn_amp * phase_n + 0.7 * gauss(rng));
      wind_day[i] = std::max(0.0, wd_base + wd_amp * phase_d + 0.7 * gauss(rng));
    }
  }

  SyntheticDataset data;
  data.solar = make_meteo_series("KPS", MeteoKind::SolarRadiation, hourly_timestamps(days),
                                 std::move(solar));
  data.wind_night = make_meteo_series("TCN", MeteoKind::WindSpeed, hourly_timestamps(days),
                                      std::move(wind_night));
  data.wind_day = make_meteo_series("SKD", MeteoKind::WindSpeed, hourly_timestamps(days),
                                    std::move(wind_day));
  return data;
}

MicrogridSpec default_spec(int users) {
  if (users < 1) throw Error("need at least one user");
  MicrogridSpec spec;
  spec.horizon = kHoursPerDay;
  spec.days = 3650;
  spec.operator_coeff = 0.005;

  // Residential double-peak preferred curve, evening-dominant, in kW.
  Vec shape(kHoursPerDay);
  for (int t = 0; t < kHoursPerDay; ++t) {
    shape[t] = 5.0 + 3.0 * bell(t, 8.0, 2.2) + 9.0 * bell(t, 19.5, 2.8);
  }

  for (int i = 0; i < users; ++i) {
    UserSpec u;
    const double scale = 5.0 + 2.0 * i;  // users differ in size
    u.preferred = scale * shape;
    u.total_demand = u.preferred.sum();
    u.load_min = 0.25 * u.preferred;
    u.load_max = 2.0 * u.preferred + Vec::Constant(kHoursPerDay, 10.0);
    u.discomfort_coeff = 0.5;
    spec.users.push_back(std::move(u));
  }

  spec.inelastic_load.resize(kHoursPerDay);
  for (int t = 0; t < kHoursPerDay; ++t) {
    spec.inelastic_load[t] = 40.0 + 15.0 * bell(t, 20.0, 3.5) + 8.0 * bell(t, 13.0, 3.0);
  }

  spec.storage = StorageSpec{};
  validate(spec);
  return spec;
}

}  // namespace microgrid
