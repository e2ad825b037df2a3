// emr_edge_cli: placement, delay, sharing and DVS sizing reports for an
// edge-cached medical record scenario.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emr_edge/emr_edge.hpp"

namespace {

using namespace emr_edge;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string scenario = "paper";
  std::string mode = "auto";
  std::vector<double> weights;
  std::string which = "both";
  std::string scheme = "edge";
  std::string out_dir;
  std::string format = "table";
  std::uint64_t seed = 1;
  std::uint64_t samples = 0;
  unsigned partitions = 1;
  std::string sampler = "location";
  bool count_hosts = false;
  std::optional<double> sweep_min;
  double sweep_max = 600.0;
  double sweep_step = 1.0;
  std::string timeline_csv;
  std::vector<std::string> observations;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--scenario", o.scenario, "Scenario JSON path, or 'paper' for the built-in")
      ->capture_default_str();
  cmd->add_option("--out", o.out_dir, "Directory for CSV and JSON output");
  cmd->add_option("--format", o.format, "Standard output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
}

void add_mode(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "Placement mode")
      ->check(CLI::IsMember({"auto", "omission", "min-combo", "paper", "custom"}))
      ->capture_default_str();
  cmd->add_option("--weights", o.weights, "custom mode: staying,value,combo weights")
      ->delimiter(',')
      ->expected(3);
}

PlacementMode resolve_mode(const Options& o, const EdgeScenario& s) {
  if (!o.weights.empty() && o.mode != "custom") throw UsageError("--weights requires --mode custom");
  if (o.mode == "auto") return auto_mode(s);
  if (o.mode == "omission") return PlacementMode::omission();
  if (o.mode == "min-combo") return PlacementMode::min_combo();
  if (o.mode == "paper") return PlacementMode::paper_fixture();
  if (o.weights.size() != 3) throw UsageError("--mode custom requires --weights a,b,c");
  for (double w : o.weights)
    if (!(w >= 0.0)) throw UsageError("custom weights must be >= 0");
  return PlacementMode::custom({o.weights[0], o.weights[1], o.weights[2]});
}

std::vector<DelayCase> cases_of(const Options& o) {
  if (o.which == "best") return {DelayCase::Best};
  if (o.which == "worst") return {DelayCase::Worst};
  return {DelayCase::Best, DelayCase::Worst};
}

class Emitter {
 public:
  explicit Emitter(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir_, ec);
      if (ec) throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
    }
  }
  void file(const std::string& name, const std::string& content) {
    if (dir_.empty()) return;
    const auto path = (std::filesystem::path(dir_) / name).string();
    write_file(path, content);
    written_.push_back(path);
  }
  void json_file(const std::string& name, const json& j) { file(name, j.dump(2) + "\n"); }
  const std::vector<std::string>& written() const { return written_; }

 private:
  std::string dir_;
  std::vector<std::string> written_;
};

void print(const Options& o, const std::string& table, const std::string& csv, const json& j) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else if (o.format == "csv")
    std::cout << csv;
  else
    std::cout << table;
}

std::string divergence_note(const EdgeScenario& s, const AllocationPlan& plan) {
  if (!is_paper_scenario(s) || plan.mode == PlacementKind::PaperFixture) return {};
  const auto ref = plan_scenario(s, PlacementMode::paper_fixture());
  std::string note;
  for (const auto& id : plan_divergence(plan, ref)) {
    note += "differs from reference allocation at " + id + ": " +
            plan.find_device(id)->cached.label() + " (" + fixed(plan.find_device(id)->cached_gb, 2) +
            " GB) vs " + ref.find_device(id)->cached.label() + " (" +
            fixed(ref.find_device(id)->cached_gb, 2) + " GB)\n";
  }
  return note;
}

json divergence_json(const EdgeScenario& s, const AllocationPlan& plan) {
  auto j = json::array();
  if (!is_paper_scenario(s) || plan.mode == PlacementKind::PaperFixture) return j;
  const auto ref = plan_scenario(s, PlacementMode::paper_fixture());
  for (const auto& id : plan_divergence(plan, ref))
    j.push_back({{"device", id},
                 {"cached", plan.find_device(id)->cached.label()},
                 {"reference", ref.find_device(id)->cached.label()}});
  return j;
}

// --- subcommands ------------------------------------------------------------

int cmd_allocate(const Options& o, const EdgeScenario& s, Emitter& out) {
  const auto plan = plan_scenario(s, resolve_mode(o, s));
  auto j = to_json(plan);
  j["divergence"] = divergence_json(s, plan);
  const auto note = divergence_note(s, plan);
  print(o, "mode: " + std::string(to_string(plan.mode)) + "\n" + allocation_table(plan) + note,
        allocation_csv(plan), j);
  out.file("allocation.csv", allocation_csv(plan));
  out.json_file("allocation.json", j);
  return kExitOk;
}

DelayReport scheme_report(const Options& o, const EdgeScenario& s, AllocationPlan* plan_out) {
  if (o.scheme == "baseline") return baseline_delay(s);
  if (o.scheme == "femtocache") {
    if (o.mode != "auto") throw UsageError("--mode does not apply to the femtocache scheme");
    *plan_out = femtocache_plan(s);
    return femtocache_delay(s);
  }
  *plan_out = plan_scenario(s, resolve_mode(o, s));
  return expected_delay_report(*plan_out, s.locations, s.rates, "edge+dvs");
}

int cmd_delay(const Options& o, const EdgeScenario& s, Emitter& out) {
  AllocationPlan plan;
  const auto report = scheme_report(o, s, &plan);
  auto j = to_json(report);
  std::ostringstream table;
  table << "scheme: " << report.scheme << "\n" << terms_table(report);
  for (auto c : cases_of(o))
    table << to_string(c) << ": " << minutes_str(report.minutes(c)) << " min\n";

  if (o.samples > 0) {
    if (o.scheme == "baseline") throw UsageError("Monte Carlo applies to cached-plan schemes only");
    MonteCarloConfig cfg;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.partitions = o.partitions;
    cfg.sampler = o.sampler == "poisson" ? SamplerKind::PoissonCount : SamplerKind::Location;
    j["monte_carlo"] = json::array();
    for (auto c : cases_of(o)) {
      const auto est = monte_carlo_delay(plan, s.locations, cfg, s.rates, c);
      table << to_string(c) << " (monte carlo, " << est.samples << " samples, seed " << o.seed
            << "): " << minutes_str(est.mean_minutes) << " +/- " << fixed(est.standard_error, 4)
            << " min\n";
      j["monte_carlo"].push_back({{"case", std::string(to_string(c))},
                                  {"samples", est.samples},
                                  {"seed", o.seed},
                                  {"partitions", o.partitions},
                                  {"sampler", o.sampler},
                                  {"mean_minutes", est.mean_minutes},
                                  {"standard_error", est.standard_error}});
    }
  }
  print(o, table.str(), terms_csv(report), j);
  out.file("delay.csv", terms_csv(report));
  out.json_file("delay.json", j);
  return kExitOk;
}

int cmd_compare(const Options& o, const EdgeScenario& s, Emitter& out) {
  const auto c = compare_schemes(s, resolve_mode(o, s));
  auto j = to_json(c);
  j["divergence"] = divergence_json(s, c.plan);
  const auto bars = delay_bars_csv(c.reports());
  print(o,
        "placement mode: " + std::string(to_string(c.mode)) + "\n" + delay_table(c.reports()) + "\n" +
            improvement_table(c.improvements) + divergence_note(s, c.plan),
        bars, j);
  out.file("compare.csv", bars);
  out.file("improvements.csv", improvement_csv(c.improvements));
  out.json_file("compare.json", j);
  return kExitOk;
}

int cmd_share(const Options& o, const EdgeScenario& s, Emitter& out) {
  std::ostringstream table;
  std::string csv = "device,capacity_gb,patients\n";
  auto j = json::object();
  j["devices"] = json::array();
  table << std::left << std::setw(8) << "device" << std::right << std::setw(12) << "capacity_gb"
        << std::setw(10) << "patients" << "\n";
  for (const auto& d : s.devices) {
    long n = patients_served(d.capacity_gb, s.policy);
    if (n == 0 && o.count_hosts) n = 1;
    table << std::left << std::setw(8) << d.id << std::right << std::setw(12) << fixed(d.capacity_gb, 2)
          << std::setw(10) << n << "\n";
    csv += d.id + "," + fixed(d.capacity_gb, 2) + "," + std::to_string(n) + "\n";
    j["devices"].push_back({{"device", d.id}, {"capacity_gb", d.capacity_gb}, {"patients", n}});
  }
  const long total = scenario_capacity(s.devices, s.policy, o.count_hosts);
  table << "total: " << total << "\n";
  csv += "total,," + std::to_string(total) + "\n";
  j["count_hosts"] = o.count_hosts;
  j["total"] = total;
  print(o, table.str(), csv, j);
  out.file("share.csv", csv);
  out.json_file("share.json", j);
  return kExitOk;
}

int cmd_sweep(const Options& o, const EdgeScenario& s, Emitter& out) {
  const double lo = o.sweep_min.value_or(s.policy.host_requirement_gb);
  const auto pts = capacity_sweep(lo, o.sweep_max, o.sweep_step, s.policy);
  const auto csv = sweep_csv(pts);
  print(o, csv, csv, to_json(pts));
  out.file("sweep.csv", csv);
  out.json_file("sweep.json", to_json(pts));
  return kExitOk;
}

int cmd_dvs_size(const Options& o, const EdgeScenario& s, Emitter& out) {
  const auto timeline = o.timeline_csv.empty() ? s.dvs.timeline : load_timeline_csv(o.timeline_csv);
  const auto d = size_dvs(s.dvs, timeline, s.records);
  std::ostringstream table;
  table << "duration:            " << fixed(d.duration_s, 1) << " s\n"
        << "frame-based camera:  " << fixed(d.frame_bytes, 0) << " bytes (" << fixed(d.frame_bytes / 1e9, 4) << " GB)\n"
        << "event-based camera:  " << fixed(d.event_bytes, 0) << " bytes (" << fixed(d.event_bytes / 1e6, 2) << " MB)\n"
        << "event/frame ratio:   " << fixed(d.ratio(), 6) << "\n"
        << "scaled video record: " << fixed(d.scaled_video_gb, 3) << " GB (ratio " << fixed(s.dvs.scale_ratio, 6) << ")\n";
  print(o, table.str(), dvs_csv(d), to_json(d));
  out.file("dvs.csv", dvs_csv(d));
  out.json_file("dvs.json", to_json(d));
  return kExitOk;
}

DelayObservation parse_observation(const std::string& spec, const EdgeScenario& s) {
  // scheme:case:minutes
  const auto a = spec.find(':');
  const auto b = spec.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw UsageError("--observe expects scheme:case:minutes, got '" + spec + "'");
  const std::string scheme = spec.substr(0, a);
  const auto which = parse_delay_case(spec.substr(a + 1, b - a - 1));
  double minutes = 0.0;
  try {
    minutes = std::stod(spec.substr(b + 1));
  } catch (const std::exception&) {
    throw UsageError("--observe: bad minutes in '" + spec + "'");
  }
  if (scheme == "edge") return observe_plan(plan_scenario(s, auto_mode(s)), s.locations, which, minutes);
  if (scheme == "femtocache") return observe_plan(femtocache_plan(s), s.locations, which, minutes);
  if (scheme == "baseline") return observe_baseline(s.demand, s.records, s.locations, which, minutes);
  throw UsageError("--observe: unknown scheme '" + scheme + "'");
}

int cmd_calibrate(const Options& o, const EdgeScenario& s, Emitter& out) {
  auto specs = o.observations;
  if (specs.empty()) specs = {"edge:best:9.872", "baseline:worst:247.467"};
  std::vector<DelayObservation> obs;
  for (const auto& sp : specs) obs.push_back(parse_observation(sp, s));
  const auto rates = calibrate_rates(obs);

  auto calibrated = s;
  calibrated.rates = rates;
  const auto c = compare_schemes(calibrated, auto_mode(calibrated));

  std::ostringstream table;
  table << "edge rate (R1):  " << fixed(rates.edge_gb_per_s, 9) << " GB/s\n"
        << "macro rate (R2): " << fixed(rates.macro_gb_per_s, 9) << " GB/s\n\n"
        << delay_table(c.reports());
  std::string csv = "edge_gb_per_s,macro_gb_per_s\n" + fixed(rates.edge_gb_per_s, 12) + "," +
                    fixed(rates.macro_gb_per_s, 12) + "\n";
  json j;
  j["observations"] = specs;
  j["rates"] = {{"edge_gb_per_s", rates.edge_gb_per_s}, {"macro_gb_per_s", rates.macro_gb_per_s}};
  j["reproduced"] = to_json(c)["schemes"];
  print(o, table.str(), csv, j);
  out.file("calibration.csv", csv);
  out.json_file("calibration.json", j);
  return kExitOk;
}

int cmd_report(const Options& o, const EdgeScenario& s, Emitter& out) {
  const auto mode = resolve_mode(o, s);
  const auto c = compare_schemes(s, mode);
  const long total = scenario_capacity(s.devices, s.policy);
  const auto pts = capacity_sweep(s.policy.host_requirement_gb, o.sweep_max, o.sweep_step, s.policy);
  const auto d = size_dvs(s.dvs, s.dvs.timeline, s.records);

  out.file("scenario.json", save_scenario_string(s));
  out.file("allocation.csv", allocation_csv(c.plan));
  out.file("compare.csv", delay_bars_csv(c.reports()));
  out.file("improvements.csv", improvement_csv(c.improvements));
  out.file("sweep.csv", sweep_csv(pts));
  out.file("dvs.csv", dvs_csv(d));

  json j;
  j["scenario_digest"] = scenario_digest(s);
  j["comparison"] = to_json(c);
  j["divergence"] = divergence_json(s, c.plan);
  j["sharing"] = {{"total", total}, {"total_counting_hosts", scenario_capacity(s.devices, s.policy, true)}};
  j["dvs"] = to_json(d);
  j["emitted"] = out.written();
  if (!o.out_dir.empty()) j["emitted"].push_back((std::filesystem::path(o.out_dir) / "report.json").string());
  out.json_file("report.json", j);

  std::ostringstream table;
  table << "scenario digest: " << scenario_digest(s) << "\n\n"
        << allocation_table(c.plan) << divergence_note(s, c.plan) << "\n"
        << delay_table(c.reports()) << "\n"
        << improvement_table(c.improvements) << "\n"
        << "shared patients: " << total << "\n";
  print(o, table.str(), delay_bars_csv(c.reports()), j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge caching of medical records: placement, delay, sharing and DVS sizing"};
  app.require_subcommand(1);
  Options o;

  auto* allocate = app.add_subcommand("allocate", "Place record classes on edge devices");
  auto* delay = app.add_subcommand("delay", "Expected transmission delay for one scheme");
  auto* compare = app.add_subcommand("compare", "All schemes plus improvement percentages");
  auto* share = app.add_subcommand("share", "Patients served when devices are shared");
  auto* sweep = app.add_subcommand("sweep", "Patients served across a capacity range");
  auto* dvs_size = app.add_subcommand("dvs-size", "Frame-based vs event-based recording volume");
  auto* calibrate = app.add_subcommand("calibrate", "Recover link rates from observed delays");
  auto* report = app.add_subcommand("report", "Run everything and write a full report");

  for (auto* cmd : {allocate, delay, compare, share, sweep, dvs_size, calibrate, report}) add_common(cmd, o);
  for (auto* cmd : {allocate, delay, compare, report}) add_mode(cmd, o);

  delay->add_option("--case", o.which, "best, worst or both")
      ->check(CLI::IsMember({"best", "worst", "both"}))
      ->capture_default_str();
  delay->add_option("--scheme", o.scheme, "edge, femtocache or baseline")
      ->check(CLI::IsMember({"edge", "femtocache", "baseline"}))
      ->capture_default_str();
  delay->add_option("--samples", o.samples, "Monte Carlo samples (0 = closed form only)");
  delay->add_option("--seed", o.seed, "Monte Carlo seed")->capture_default_str();
  delay->add_option("--partitions", o.partitions, "Independent Monte Carlo sub-streams")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  delay->add_option("--sampler", o.sampler, "location or poisson")
      ->check(CLI::IsMember({"location", "poisson"}))
      ->capture_default_str();
  share->add_flag("--count-hosts", o.count_hosts, "Count the host of a non-shareable device");
  sweep->add_option("--min", o.sweep_min, "Lowest capacity (GB); defaults to the host requirement");
  for (auto* cmd : {sweep, report}) {
    cmd->add_option("--max", o.sweep_max, "Highest capacity (GB)")->capture_default_str();
    cmd->add_option("--step", o.sweep_step, "Capacity step (GB)")->capture_default_str();
  }
  dvs_size->add_option("--timeline", o.timeline_csv, "CSV of duration_seconds,level rows");
  calibrate->add_option("--observe", o.observations, "scheme:case:minutes (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const auto scenario = load_scenario(o.scenario);
    Emitter out(o.out_dir);
    if (allocate->parsed()) return cmd_allocate(o, scenario, out);
    if (delay->parsed()) return cmd_delay(o, scenario, out);
    if (compare->parsed()) return cmd_compare(o, scenario, out);
    if (share->parsed()) return cmd_share(o, scenario, out);
    if (sweep->parsed()) return cmd_sweep(o, scenario, out);
    if (dvs_size->parsed()) return cmd_dvs_size(o, scenario, out);
    if (calibrate->parsed()) return cmd_calibrate(o, scenario, out);
    if (report->parsed()) return cmd_report(o, scenario, out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
