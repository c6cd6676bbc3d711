// Command-line front end: planning, validation, oracle runs, generators, rendering, stats.

#include <CLI11.hpp>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "mrp/mrp.hpp"

namespace fs = std::filesystem;
using namespace mrp;
using io::json;

namespace {

constexpr int kOk = 0, kSemantic = 1, kUsage = 2;

struct Exit {
  int code;
};

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") std::cout << j.dump(2) << '\n';
  else io::write_file(out, j.dump(2) + "\n");
}

std::string ratio_text(long long num, long long den) {
  if (den == 0) return "0";
  return std::to_string(num) + "/" + std::to_string(den);
}

json summary(const Instance& inst, const Schedule& s) {
  const int d = max_distance(inst);
  json j = {{"makespan", s.makespan()}, {"d", d}};
  if (d > 0) j["stretch"] = ratio_text((long long)s.makespan(), d), j["stretch_value"] = double(s.makespan()) / d;
  else j["stretch"] = "0";
  return j;
}

json continuous_summary(const ContinuousInstance& inst, const TrajectorySet& ts) {
  const double d = continuous_distance(inst), mk = ts.makespan();
  json j = {{"makespan", mk}, {"d", d}, {"robots", inst.size()}};
  if (d > 0) j["stretch"] = mk / d;
  j["makespan_over_d_plus_sqrt_n"] = mk / (d + std::sqrt(double(inst.size())));
  return j;
}

int cmd_plan(const std::string& in, const std::string& out, bool pipeline_only) {
  Instance inst = io::instance_from_json(io::load(in));
  PlanOptions opt;
  opt.portfolio = !pipeline_only;
  opt.force_pipeline = pipeline_only;
  auto t0 = std::chrono::steady_clock::now();
  Schedule s = plan_auto(inst, opt);
  spdlog::info("planned {} robots in {} ms", inst.size(),
               std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  if (!out.empty()) io::write_file(out, io::to_json(s, inst).dump() + "\n");
  std::cout << summary(inst, s).dump() << '\n';
  return kOk;
}

int cmd_plan_colored(const std::string& in, const std::string& target, const std::string& out, const std::string& inst_out) {
  Image src, dst;
  if (target.empty()) std::tie(src, dst) = io::image_pair_from_json(io::load(in));
  else src = io::image_from_json(io::load(in)), dst = io::image_from_json(io::load(target));
  ColoredPlan p = plan_colored(src, dst);
  if (!out.empty()) io::write_file(out, io::to_json(p.schedule, p.labeled).dump() + "\n");
  if (!inst_out.empty()) io::write_file(inst_out, io::to_json(p.labeled).dump() + "\n");
  json j = summary(p.labeled, p.schedule);
  j["bottleneck"] = p.bottleneck;
  std::cout << j.dump() << '\n';
  return kOk;
}

int cmd_plan_continuous(const std::string& in, const std::string& out, const std::string& mode) {
  ContinuousInstance inst = io::continuous_from_json(io::load(in));
  TrajectorySet ts;
  if (mode == "separated") ts = plan_separated(inst);
  else if (mode == "dense") ts = plan_dense(inst);
  else throw Error(ErrorCode::Parse, "--mode must be separated or dense");
  if (!out.empty()) io::write_file(out, io::to_json(ts, inst).dump() + "\n");
  std::cout << continuous_summary(inst, ts).dump() << '\n';
  return kOk;
}

json violation_json(const Violation& v, const Instance& inst) {
  auto label = [&](int r) { return r < 0 ? json(nullptr) : json(inst.ids[r]); };
  static const char* kinds[] = {"None", "OutOfBounds", "Collision", "Swap", "BadConfiguration"};
  return {{"kind", kinds[v.kind]}, {"robot_a", label(v.robot_a)}, {"robot_b", label(v.robot_b)}, {"cell", {v.cell.x, v.cell.y}}};
}

int cmd_validate(const std::string& in, const std::string& sched) {
  json ji = io::load(in);
  json js = io::load(sched);
  if (io::format_of(ji) == io::kContinuousFormat) {
    ContinuousInstance inst = io::continuous_from_json(ji);
    TrajectorySet ts = io::trajectories_from_json(js, inst);
    TrajectoryReport rep = validate_trajectories(ts, inst);
    json j = {{"valid", rep.ok},
              {"min_distance", rep.min_distance},
              {"max_speed", rep.max_speed},
              {"endpoint_error", rep.endpoint_error},
              {"makespan", ts.makespan()}};
    if (rep.pair_a >= 0) j["closest_pair"] = {inst.ids[rep.pair_a], inst.ids[rep.pair_b]}, j["closest_time"] = rep.at_time;
    std::cout << j.dump() << '\n';
    return rep.ok ? kOk : kSemantic;
  }
  Instance inst = io::instance_from_json(ji);
  Schedule s = io::schedule_from_json(js, inst);
  ScheduleReport rep = apply_schedule(inst, s);
  json j = {{"valid", rep.ok()}, {"makespan", s.makespan()}, {"d", max_distance(inst)}};
  switch (rep.kind) {
    case ScheduleReport::StepViolation:
      j["error"] = "StepViolation", j["step_index"] = rep.step_index, j["violation"] = violation_json(rep.violation, inst);
      break;
    case ScheduleReport::TargetMismatch:
      j["error"] = "TargetMismatch", j["robot"] = rep.robot, j["got"] = {rep.got.x, rep.got.y}, j["want"] = {rep.want.x, rep.want.y};
      break;
    case ScheduleReport::BadInstance: j["error"] = "BadInstance"; break;
    default: break;
  }
  std::cout << j.dump() << '\n';
  return rep.ok() ? kOk : kSemantic;
}

int cmd_oracle(const std::string& in, int cap) {
  Instance inst = io::instance_from_json(io::load(in));
  OracleResult r = optimal_makespan(inst, cap);
  json j = {{"status", oracle_status_name(r.status)}, {"states", r.states}};
  if (r.status == OracleResult::Exact) j["optimum"] = r.value;
  std::cout << j.dump() << '\n';
  return kOk;
}

struct GenArgs {
  std::string mode = "full", out, cnf, witness_out;
  int n1 = 24, n2 = 24, robots = -1, vars = 4, clauses = 3, colors = 3;
  int dmax = 2;
  double sep = 2.0, cdmax = 0.0;
  std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& a) {
  const GridDims g{a.n1, a.n2};
  if (a.mode == "full" || a.mode == "sparse" || a.mode == "clustered") {
    std::size_t N = a.mode == "full" ? std::size_t(g.cells()) : std::size_t(a.robots < 0 ? std::max(1, a.n1 / 4) : a.robots);
    Instance inst = gen_random(g, N, a.dmax, a.seed, a.mode == "clustered" ? GenMode::Clustered : GenMode::Sparse);
    emit(io::to_json(inst), a.out);
    return kOk;
  }
  if (a.mode == "sat") {
    Cnf f = a.cnf.empty() ? random_monotone3(a.vars, a.clauses, a.seed) : io::parse_dimacs(io::read_file(a.cnf));
    check_monotone3(f);
    auto assignment = brute_force_sat(f);
    SatInstance si = gen_sat_instance(f, assignment);
    emit(io::to_json(si.instance), a.out);
    if (!a.witness_out.empty() && si.witness) io::write_file(a.witness_out, io::to_json(*si.witness, si.instance).dump() + "\n");
    json j = {{"M", si.M}, {"satisfiable", assignment.has_value()}, {"robots", si.instance.size()}};
    if (!a.out.empty()) std::cout << j.dump() << '\n';
    else std::cerr << j.dump() << '\n';
    return kOk;
  }
  if (a.mode == "hex") {
    emit(io::to_json(gen_hex(std::size_t(std::max(1, a.robots)))), a.out);
    return kOk;
  }
  if (a.mode == "continuous") {
    emit(io::to_json(gen_continuous(std::size_t(std::max(0, a.robots)), a.sep, a.cdmax, a.seed)), a.out);
    return kOk;
  }
  if (a.mode == "colored") {
    std::mt19937_64 rng(a.seed);
    Image src{g, std::vector<int>(g.cells(), 0)};
    for (auto& c : src.cells) c = int(rng() % std::uint64_t(a.colors + 1));
    Image dst = src;
    std::shuffle(dst.cells.begin(), dst.cells.end(), rng);
    emit(io::image_pair_to_json(src, dst), a.out);
    return kOk;
  }
  throw Error(ErrorCode::Parse, "unknown --mode for gen: " + a.mode);
}

int cmd_render(const std::string& in, const std::string& sched, const std::string& dir, const std::string& animated, int cell) {
  Instance inst = io::instance_from_json(io::load(in));
  Schedule s = sched.empty() ? Schedule{} : io::schedule_from_json(io::load(sched), inst);
  RenderOptions opt;
  opt.cell = cell;
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir);
    auto frames = render_frames(inst, s, opt);
    for (std::size_t k = 0; k < frames.size(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%05zu.svg", k);
      io::write_file((fs::path(dir) / name).string(), frames[k]);
    }
    std::cout << json{{"frames", frames.size()}, {"dir", dir}}.dump() << '\n';
  }
  if (!animated.empty()) io::write_file(animated, render_animated(inst, s, opt));
  return kOk;
}

struct StatRow {
  std::string file, kind;
  std::size_t robots = 0;
  double d = 0, makespan = 0;
  bool valid = false;
  std::string error;
  long long millis = 0;
};

StatRow stat_one(const fs::path& p, const std::string& mode) {
  StatRow row;
  row.file = p.filename().string();
  auto t0 = std::chrono::steady_clock::now();
  try {
    json j = io::load(p.string());
    std::string f = io::format_of(j);
    if (f == io::kContinuousFormat) {
      row.kind = "continuous-" + mode;
      ContinuousInstance inst = io::continuous_from_json(j);
      TrajectorySet ts = mode == "separated" ? plan_separated(inst) : plan_dense(inst);
      row.robots = inst.size();
      row.d = continuous_distance(inst);
      row.makespan = ts.makespan();
      row.valid = validate_trajectories(ts, inst).ok;
    } else if (f == io::kImagePairFormat) {
      row.kind = "colored";
      auto [a, b] = io::image_pair_from_json(j);
      ColoredPlan cp = plan_colored(a, b);
      row.robots = cp.labeled.size();
      row.d = cp.bottleneck;
      row.makespan = double(cp.schedule.makespan());
      row.valid = apply_schedule(cp.labeled, cp.schedule).ok();
    } else {
      row.kind = "labeled";
      Instance inst = io::instance_from_json(j);
      Schedule s = plan_auto(inst);
      row.robots = inst.size();
      row.d = max_distance(inst);
      row.makespan = double(s.makespan());
      row.valid = apply_schedule(inst, s).ok();
    }
  } catch (const Error& e) {
    row.error = error_name(e.code());
  }
  row.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

int cmd_stats(const std::string& corpus, const std::string& out, const std::string& mode) {
  if (!fs::is_directory(corpus)) throw Error(ErrorCode::Io, "corpus is not a directory: " + corpus);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(corpus))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<std::future<StatRow>> jobs;
  for (const auto& f : files) jobs.push_back(std::async(std::launch::async, stat_one, f, mode));
  std::ostringstream csv;
  csv << "file,kind,robots,d,makespan,stretch,makespan_over_d_plus_sqrt_n,valid,error,millis\n";
  double max_st = 0, sum_st = 0;
  int n_st = 0;
  bool all_valid = true;
  for (auto& j : jobs) {
    StatRow r = j.get();
    std::string st, dn;
    if (r.error.empty() && r.d > 0) {
      double s = r.makespan / r.d;
      st = std::to_string(s);
      max_st = std::max(max_st, s), sum_st += s, ++n_st;
    }
    if (r.error.empty() && r.kind.rfind("continuous", 0) == 0) dn = std::to_string(r.makespan / (r.d + std::sqrt(double(r.robots))));
    all_valid = all_valid && r.error.empty() && r.valid;
    csv << r.file << ',' << r.kind << ',' << r.robots << ',' << r.d << ',' << r.makespan << ',' << st << ',' << dn << ','
        << (r.valid ? "true" : "false") << ',' << r.error << ',' << r.millis << '\n';
  }
  json agg = {{"instances", files.size()}, {"max_stretch", max_st}, {"mean_stretch", n_st ? sum_st / n_st : 0.0}, {"all_valid", all_valid}};
  if (out.empty() || out == "-") {
    std::cout << csv.str();
    std::cerr << agg.dump() << '\n';
  } else {
    io::write_file(out, csv.str());
    std::cout << agg.dump() << '\n';
  }
  return all_valid ? kOk : kSemantic;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("mrp");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* lv = std::getenv("MRP_LOG")) spdlog::cfg::helpers::load_levels(lv);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Constant-stretch multi-robot grid planner"};
  app.require_subcommand(1);

  std::string in, out, target, inst_out, sched, mode, frames_dir, animated, corpus;
  bool pipeline_only = false;
  int cap = 64, cell = 20;
  GenArgs ga;

  auto* plan = app.add_subcommand("plan", "plan a labelled instance");
  plan->add_option("--in", in, "instance JSON")->required();
  plan->add_option("--out", out, "schedule JSON to write");
  plan->add_flag("--pipeline-only", pipeline_only, "use the tiled pipeline without the whole-grid alternative");

  auto* pcol = app.add_subcommand("plan-colored", "plan a coloured image transformation");
  pcol->add_option("--in", in, "image pair JSON, or the source image when --target is given")->required();
  pcol->add_option("--target", target, "target image JSON");
  pcol->add_option("--out", out, "schedule JSON to write");
  pcol->add_option("--instance-out", inst_out, "induced labelled instance JSON to write");

  auto* pcon = app.add_subcommand("plan-continuous", "plan unit disks in the plane");
  pcon->add_option("--in", in, "continuous instance JSON")->required();
  pcon->add_option("--out", out, "trajectory JSON to write");
  pcon->add_option("--mode", mode, "separated | dense")->required()->check(CLI::IsMember({"separated", "dense"}));

  auto* val = app.add_subcommand("validate", "check a schedule or trajectory set");
  val->add_option("--in", in, "instance JSON (labelled or continuous)")->required();
  val->add_option("--schedule", sched, "schedule or trajectory JSON")->required();

  auto* orc = app.add_subcommand("oracle", "exact optimum by exhaustive search");
  orc->add_option("--in", in, "instance JSON")->required();
  orc->add_option("--cap", cap, "largest makespan to search");

  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->add_option("--mode", ga.mode, "full | sparse | clustered | sat | hex | continuous | colored")
      ->check(CLI::IsMember({"full", "sparse", "clustered", "sat", "hex", "continuous", "colored"}));
  gen->add_option("--out", ga.out, "output JSON (stdout if absent)");
  gen->add_option("--seed", ga.seed, "random seed");
  gen->add_option("--n1", ga.n1, "grid columns");
  gen->add_option("--n2", ga.n2, "grid rows");
  gen->add_option("--robots", ga.robots, "number of robots");
  gen->add_option("--dmax", ga.dmax, "largest start-target distance (grid modes)");
  gen->add_option("--cnf", ga.cnf, "DIMACS monotone 3-CNF (sat mode)");
  gen->add_option("--vars", ga.vars, "variables of a random formula (sat mode)");
  gen->add_option("--clauses", ga.clauses, "clauses of a random formula (sat mode)");
  gen->add_option("--witness-out", ga.witness_out, "witness schedule JSON (sat mode, satisfiable formulas)");
  gen->add_option("--sep", ga.sep, "minimum centre distance (continuous mode)");
  gen->add_option("--radius", ga.cdmax, "target within this distance of the start; 0 = anywhere (continuous mode)");
  gen->add_option("--colors", ga.colors, "number of colours (colored mode)");

  auto* ren = app.add_subcommand("render", "SVG frames of a schedule");
  ren->add_option("--in", in, "instance JSON")->required();
  ren->add_option("--schedule", sched, "schedule JSON");
  ren->add_option("--frames-dir", frames_dir, "directory for one SVG per configuration");
  ren->add_option("--animated", animated, "single animated SVG to write");
  ren->add_option("--cell", cell, "pixels per cell");

  auto* sts = app.add_subcommand("stats", "plan every instance of a corpus and report stretch as CSV");
  sts->add_option("--corpus", corpus, "directory of instance JSON files")->required();
  sts->add_option("--out", out, "CSV to write (stdout if absent)");
  sts->add_option("--mode", mode, "separated | dense, for continuous instances")->check(CLI::IsMember({"separated", "dense"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*plan) return cmd_plan(in, out, pipeline_only);
    if (*pcol) return cmd_plan_colored(in, target, out, inst_out);
    if (*pcon) return cmd_plan_continuous(in, out, mode);
    if (*val) return cmd_validate(in, sched);
    if (*orc) return cmd_oracle(in, cap);
    if (*gen) return cmd_gen(ga);
    if (*ren) return cmd_render(in, sched, frames_dir, animated, cell);
    if (*sts) return cmd_stats(corpus, out, mode.empty() ? "dense" : mode);
  } catch (const Error& e) {
    json j = {{"error", error_name(e.code())}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
    return e.code() == ErrorCode::Io || e.code() == ErrorCode::Parse ? kUsage : kSemantic;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return kSemantic;
  }
  return kUsage;
}
