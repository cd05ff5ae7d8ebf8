#include "microgrid/io.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace microgrid {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a, const char* what) {
  if (!a.is_array()) throw Error(std::string(what) + " must be an array");
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  return v;
}

// days since 1970-01-01 for a proleptic Gregorian civil date
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const int yoe = y - era * 400;
  const int doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 + doe - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int doe = static_cast<int>(z - era * 146097);
  const int yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yoe + era * 400) + (m <= 2);
}

}  // namespace

std::int64_t parse_iso8601(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  const int got = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h,
                              &mi, &s);
  if (got < 6 || (sep != 'T' && sep != ' ')) {
    throw Error("bad timestamp '" + text + "', expected ISO-8601 like 2012-09-01T00:00:00");
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
      s < 0 || s > 60) {
    throw Error("timestamp '" + text + "' out of range");
  }
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601(std::int64_t unix_seconds) {
  std::int64_t days = unix_seconds / 86400;
  std::int64_t rem = unix_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02" PRId64 ":%02" PRId64 ":%02" PRId64,
                y, m, d, rem / 3600, (rem % 3600) / 60, rem % 60);
  return buf;
}

MeteoSeries read_meteo_csv(const std::filesystem::path& path, MeteoKind kind,
                           std::string station) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "timestamp,value") {
    throw Error(path.string() + ": expected header 'timestamp,value'");
  }
  std::vector<std::int64_t> ts;
  std::vector<double> vals;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(row) + ": missing comma");
    }
    ts.push_back(parse_iso8601(trim(t.substr(0, comma))));
    try {
      vals.push_back(std::stod(trim(t.substr(comma + 1))));
    } catch (const std::exception&) {
      throw Error(path.string() + ":" + std::to_string(row) + ": bad value");
    }
  }
  if (station.empty()) station = path.stem().string();
  Vec v = Eigen::Map<const Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  return make_meteo_series(std::move(station), kind, std::move(ts), std::move(v));
}

void write_meteo_csv(const std::filesystem::path& path, const MeteoSeries& series) {
  std::ostringstream out;
  out << "timestamp,value\n";
  for (Eigen::Index i = 0; i < series.values.size(); ++i) {
    out << format_iso8601(series.timestamps[static_cast<std::size_t>(i)]) << ','
        << num(series.values[i]) << '\n';
  }
  write_file(path, out.str());
}

void write_profiles_csv(const std::filesystem::path& path,
                        const std::vector<RenewableProfile>& days) {
  std::ostringstream out;
  out << "day,hour,value\n";
  for (std::size_t d = 0; d < days.size(); ++d) {
    for (Eigen::Index h = 0; h < days[d].hours.size(); ++h) {
      out << d << ',' << h << ',' << num(days[d].hours[h]) << '\n';
    }
  }
  write_file(path, out.str());
}

std::vector<RenewableProfile> read_profiles_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || trim(line) != "day,hour,value") {
    throw Error(path.string() + ": expected header 'day,hour,value'");
  }
  std::vector<RenewableProfile> days;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t day, hour;
    double value;
    if (std::sscanf(t.c_str(), "%zu,%zu,%lf", &day, &hour, &value) != 3) {
      throw Error(path.string() + ":" + std::to_string(row) + ": bad row");
    }
    if (day != days.size() && day != days.size() - 1) {
      throw Error(path.string() + ":" + std::to_string(row) + ": days out of order");
    }
    if (day == days.size()) days.push_back(RenewableProfile{Vec::Zero(kHoursPerDay)});
    if (hour >= kHoursPerDay) {
      throw Error(path.string() + ":" + std::to_string(row) + ": hour out of range");
    }
    days.back().hours[static_cast<Eigen::Index>(hour)] = value;
  }
  return days;
}

std::string scenario_set_to_json(const ScenarioSet& set) {
  json root;
  json arr = json::array();
  for (const Scenario& s : set.scenarios) {
    json e;
    e["pi"] = s.probability;
    e["solar"] = vec_to_json(s.solar);
    e["wind"] = vec_to_json(s.wind);
    arr.push_back(std::move(e));
  }
  root["scenarios"] = std::move(arr);
  return root.dump(2) + "\n";
}

ScenarioSet scenario_set_from_json(const std::string& text) {
  json root = json::parse(text);
  if (!root.contains("scenarios")) throw Error("scenario JSON lacks 'scenarios'");
  ScenarioSet set;
  for (const json& e : root["scenarios"]) {
    Scenario s;
    s.probability = e.at("pi").get<double>();
    s.solar = vec_from_json(e.at("solar"), "solar");
    s.wind = vec_from_json(e.at("wind"), "wind");
    set.scenarios.push_back(std::move(s));
  }
  validate(set);
  return set;
}

void write_scenario_set(const std::filesystem::path& path, const ScenarioSet& set) {
  write_file(path, scenario_set_to_json(set));
}

ScenarioSet read_scenario_set(const std::filesystem::path& path) {
  try {
    return scenario_set_from_json(read_file(path));
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

namespace {

UserSpec user_from_json(const json& e, int horizon) {
  UserSpec u;
  u.load_min = vec_from_json(e.at("load_min"), "load_min");
  u.load_max = vec_from_json(e.at("load_max"), "load_max");
  u.preferred = vec_from_json(e.at("preferred"), "preferred");
  u.total_demand = e.contains("total_demand") ? e.at("total_demand").get<double>()
                                              : u.preferred.sum();
  u.discomfort_coeff = e.value("discomfort_coeff", 0.5);
  validate(u, horizon);
  return u;
}

json user_to_json(const UserSpec& u) {
  json e;
  e["discomfort_coeff"] = u.discomfort_coeff;
  e["total_demand"] = u.total_demand;
  e["load_min"] = vec_to_json(u.load_min);
  e["load_max"] = vec_to_json(u.load_max);
  e["preferred"] = vec_to_json(u.preferred);
  return e;
}

}  // namespace

SpecConfig spec_config_from_json(const std::string& text) {
  json root = json::parse(text);
  SpecConfig config;
  MicrogridSpec& spec = config.spec;
  spec.horizon = root.value("horizon", 24);
  spec.days = root.value("days", 3650);
  spec.operator_coeff = root.value("operator_coeff", 0.005);
  spec.inelastic_load = vec_from_json(root.at("inelastic_load"), "inelastic_load");
  for (const json& e : root.at("users")) {
    spec.users.push_back(user_from_json(e, spec.horizon));
  }
  if (root.contains("storage")) {
    const json& st = root["storage"];
    spec.storage.charge_rate_max = st.value("charge_rate_max", 0.25);
    spec.storage.discharge_rate_max = st.value("discharge_rate_max", 0.25);
    spec.storage.charge_eff = st.value("charge_eff", 0.95);
    spec.storage.discharge_eff = st.value("discharge_eff", 0.95);
    spec.storage.soc_min = st.value("soc_min", 0.3);
    spec.storage.soc_max = st.value("soc_max", 0.95);
    spec.storage.soc_init = st.value("soc_init", 0.5);
  }
  if (root.contains("costs")) {
    const json& c = root["costs"];
    config.costs.solar = c.value("solar", 12480.0);
    config.costs.wind = c.value("wind", 7800.0);
    config.costs.storage = c.value("storage", 1950.0);
  }
  config.budget = root.value("budget", 6e6);
  if (root.contains("solver")) {
    const json& s = root["solver"];
    config.solver.step_size_init = s.value("step_size_init", 0.0);
    config.solver.tolerance = s.value("tolerance", 1e-5);
    config.solver.max_iterations = s.value("max_iterations", 50000);
  }
  validate(spec);
  validate(config.solver);
  return config;
}

SpecConfig read_spec_config(const std::filesystem::path& path) {
  try {
    return spec_config_from_json(read_file(path));
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string spec_config_to_json(const SpecConfig& config) {
  json root;
  root["horizon"] = config.spec.horizon;
  root["days"] = config.spec.days;
  root["operator_coeff"] = config.spec.operator_coeff;
  root["inelastic_load"] = vec_to_json(config.spec.inelastic_load);
  json users = json::array();
  for (const UserSpec& u : config.spec.users) users.push_back(user_to_json(u));
  root["users"] = std::move(users);
  root["storage"] = {{"charge_rate_max", config.spec.storage.charge_rate_max},
                     {"discharge_rate_max", config.spec.storage.discharge_rate_max},
                     {"charge_eff", config.spec.storage.charge_eff},
                     {"discharge_eff", config.spec.storage.discharge_eff},
                     {"soc_min", config.spec.storage.soc_min},
                     {"soc_max", config.spec.storage.soc_max},
                     {"soc_init", config.spec.storage.soc_init}};
  root["costs"] = {{"solar", config.costs.solar},
                   {"wind", config.costs.wind},
                   {"storage", config.costs.storage}};
  root["budget"] = config.budget;
  root["solver"] = {{"step_size_init", config.solver.step_size_init},
                    {"tolerance", config.solver.tolerance},
                    {"max_iterations", config.solver.max_iterations}};
  return root.dump(2) + "\n";
}

namespace {

json dispatch_json(const DispatchSolution& sol) {
  json e;
  e["version"] = kReportVersion;
  json loads = json::array();
  for (Eigen::Index i = 0; i < sol.loads.rows(); ++i) {
    loads.push_back(vec_to_json(sol.loads.row(i).transpose()));
  }
  e["loads"] = std::move(loads);
  e["supply"] = vec_to_json(sol.supply);
  e["renewable_used"] = vec_to_json(sol.renewable_used);
  e["grid_purchase"] = vec_to_json(sol.grid_purchase);
  e["charge"] = vec_to_json(sol.charge);
  e["discharge"] = vec_to_json(sol.discharge);
  e["soc"] = vec_to_json(sol.soc);
  e["prices"] = vec_to_json(sol.prices);
  e["objective"] = sol.objective;
  e["converged"] = sol.converged;
  e["iterations"] = sol.iterations;
  return e;
}

}  // namespace

std::string dispatch_to_json(const DispatchSolution& sol) {
  return dispatch_json(sol).dump(2) + "\n";
}

std::string investment_to_json(const InvestmentSolution& sol, bool include_dispatches) {
  json e;
  e["version"] = kReportVersion;
  e["portfolio"] = {{"solar_kw", sol.portfolio.solar_kw},
                    {"wind_kw", sol.portfolio.wind_kw},
                    {"storage_kwh", sol.portfolio.storage_kwh},
                    {"cost_solar", sol.portfolio.cost_solar},
                    {"cost_wind", sol.portfolio.cost_wind},
                    {"cost_storage", sol.portfolio.cost_storage},
                    {"budget", sol.portfolio.budget}};
  e["capital_cost"] = sol.capital_cost;
  e["expected_daily_cost"] = sol.expected_daily_cost;
  e["overall_cost"] = sol.overall_cost;
  e["converged"] = sol.converged;
  e["evaluations"] = sol.evaluations;
  if (include_dispatches) {
    json ds = json::array();
    for (const DispatchSolution& d : sol.dispatches) ds.push_back(dispatch_json(d));
    e["dispatches"] = std::move(ds);
  }
  return e.dump(2) + "\n";
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<IterationRecord>& trace) {
  std::ostringstream out;
  out << "k,price_delta,objective\n";
  for (const IterationRecord& r : trace) {
    out << r.k << ',' << num(r.price_delta) << ',' << num(r.objective) << '\n';
  }
  write_file(path, out.str());
}

void write_budget_sweep_csv(const std::filesystem::path& path,
                            const std::vector<BudgetSweepPoint>& sweep) {
  std::ostringstream out;
  out << "budget,alpha_s,alpha_w,alpha_e,overall_cost\n";
  for (const BudgetSweepPoint& p : sweep) {
    out << num(p.budget) << ',' << num(p.solution.portfolio.solar_kw) << ','
        << num(p.solution.portfolio.wind_kw) << ','
        << num(p.solution.portfolio.storage_kwh) << ','
        << num(p.solution.overall_cost) << '\n';
  }
  write_file(path, out.str());
}

void write_error_sweep_csv(const std::filesystem::path& path,
                           const std::vector<ErrorSweepPoint>& sweep) {
  std::ostringstream out;
  out << "error_pct,investment_expense,overall_cost\n";
  for (const ErrorSweepPoint& p : sweep) {
    out << num(100.0 * p.error_fraction) << ',' << num(p.solution.capital_cost) << ','
        << num(p.solution.overall_cost) << '\n';
  }
  write_file(path, out.str());
}

void require_report_version(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("bad report JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("version") ||
      !root["version"].is_number_integer() ||
      root["version"].get<int>() != kReportVersion) {
    throw Error("unsupported report version; expected " + std::to_string(kReportVersion));
  }
}

}  // namespace microgrid
