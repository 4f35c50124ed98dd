// Command-line driver: manufactured-solution runs, convergence studies, and
// the physical benchmarks (notched disk, cube, imported-mesh ball), plus
// checkpoint resume with a piecewise-constant omega schedule.
//
//   tdgl mms --dim 2 --order 1 --omega 1 --M 16 --dt 1e-3 --steps 125
//   tdgl orders --dim 2 --order 1 --M 16 --omega-list 1,1e-2,0 --steps 125
//   tdgl bench-disk --kappa 4 --H 0.9 --steps 5000 --dt 1
//   tdgl resume --checkpoint out/checkpoint_final.ck --geometry disk --H 0.9 \
//        --steps 2000 --omega-schedule 0:1e-4,5000:1
//
// Every subcommand accepts --config FILE with plain "key = value" lines;
// command-line flags override file values, unknown keys are rejected.

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tdgl/convergence.hpp"
#include "tdgl/io.hpp"
#include "tdgl/solver.hpp"
#include "tdgl/vortices.hpp"

namespace {

using namespace tdgl;

// plain "key = value" lines; '#' or ';' comments, blank lines ignored
std::vector<std::pair<std::string, std::string>> read_config_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot read config file " + path);
  const auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IOError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') && val.back() == val.front())
      val = val.substr(1, val.size() - 2);
    if (key.empty() || val.empty())
      throw IOError(path + ":" + std::to_string(lineno) + ": expected key = value");
    pairs.emplace_back(std::move(key), std::move(val));
  }
  return pairs;
}

// splices "--config FILE" contents in as --key=value tokens right after the
// subcommand, so flags given on the command line override file values
// (options keep the last occurrence)
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> in(argv + 1, argv + argc);
  if (in.empty() || in.front().rfind("-", 0) == 0) return in;
  std::string file;
  for (size_t i = 1; i < in.size(); ++i) {
    if (in[i] == "--config" && i + 1 < in.size())
      file = in[i + 1];
    else if (in[i].rfind("--config=", 0) == 0)
      file = in[i].substr(9);
  }
  if (file.empty()) return in;
  std::vector<std::string> out{in.front()};
  for (const auto& [key, val] : read_config_pairs(file)) out.push_back("--" + key + "=" + val);
  out.insert(out.end(), in.begin() + 1, in.end());
  return out;
}

// "0:1e-4,5000:1" -> {(0, 1e-4), (5000, 1)}
OmegaSchedule parse_schedule(const std::string& text) {
  OmegaSchedule sched;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("--omega-schedule: entry '" + item + "' is not step:omega");
    size_t used = 0;
    int at = 0;
    double w = 0.0;
    try {
      at = std::stoi(item.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("");
      w = std::stod(item.substr(colon + 1), &used);
      if (used != item.size() - colon - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("--omega-schedule: cannot parse entry '" + item + "'");
    }
    if (w < 0.0) throw std::invalid_argument("--omega-schedule: omega must be >= 0");
    if (!sched.empty() && at <= sched.back().first)
      throw std::invalid_argument("--omega-schedule: steps must be strictly increasing");
    sched.emplace_back(at, w);
  }
  if (sched.empty()) throw std::invalid_argument("--omega-schedule: empty schedule");
  return sched;
}

std::string step_name(const char* stem, int n, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%06d.%s", stem, n, ext);
  return buf;
}

struct ObsRow {
  RunLogEntry e;
  double normal_zone = -1.0;  // -1: not configured
};

void write_observables_csv(const std::string& path, const std::vector<ObsRow>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IOError("cannot open " + path + " for writing");
  std::fprintf(f, "step,t,energy,rel_energy_diff,vortex_count,normal_zone_fraction\n");
  for (const auto& r : rows)
    std::fprintf(f, "%d,%.12g,%.12g,%.12g,%d,%.12g\n", r.e.n, r.e.t, r.e.energy, r.e.rel_ediff,
                 r.e.vortices, r.normal_zone);
  std::fclose(f);
}

// output/observer settings shared by the run-style subcommands
struct RunIO {
  std::string out = "out";
  int log_every = 10;
  int snapshot_every = 0;    // VTK cadence in steps; 0: only the final state
  int checkpoint_every = 0;  // checkpoint cadence in steps; 0: only final
  bool vortices = false;     // per-log-row vortex count (2D Lagrange)
  bool nz = false;           // normal-zone fraction column
  std::vector<double> nz_center;
  double nz_radius = 0.5;
  double nz_tau = 0.3;
};

void add_run_io_options(CLI::App* sub, RunIO& io) {
  sub->add_option("--out", io.out, "output directory")->capture_default_str();
  sub->add_option("--log-every", io.log_every, "observable cadence in steps")
      ->capture_default_str();
  sub->add_option("--snapshot-every", io.snapshot_every,
                  "VTK snapshot cadence in steps (0: final state only)")
      ->capture_default_str();
  sub->add_option("--checkpoint-every", io.checkpoint_every,
                  "checkpoint cadence in steps (0: final state only)")
      ->capture_default_str();
  sub->add_option("--nz-center", io.nz_center, "normal-zone disc center (x,y[,z])")
      ->delimiter(',');
  sub->add_option("--nz-radius", io.nz_radius, "normal-zone disc radius")->capture_default_str();
  sub->add_option("--nz-tau", io.nz_tau, "|psi| threshold of the normal zone")
      ->capture_default_str();
}

// steps the solver, logging observables / snapshots / checkpoints, then
// writes observables.csv plus the final VTK state and checkpoint
int execute_run(TDGLSolver& s, int steps, const OmegaSchedule& sched, const RunIO& io) {
  namespace fs = std::filesystem;
  fs::create_directories(io.out);
  const std::string dir = io.out + "/";

  std::vector<ObsRow> rows;
  const auto observer = [&](const TDGLSolver& sv, const RunLogEntry& e) {
    ObsRow row;
    row.e = e;
    if (io.vortices)
      row.e.vortices = static_cast<int>(count_vortices(sv.psi_space(), sv.psi()).size());
    if (io.nz) {
      std::array<double, 3> c = {0, 0, 0};
      for (size_t i = 0; i < io.nz_center.size() && i < 3; ++i) c[i] = io.nz_center[i];
      row.normal_zone = normal_zone_fraction(sv.psi_space(), sv.psi(), c, io.nz_radius, io.nz_tau);
    }
    rows.push_back(row);
    const bool last = e.n == steps ? true : false;
    if (io.snapshot_every > 0 && (e.n % io.snapshot_every == 0 || last))
      write_vtk(dir + step_name("state", e.n, "vtk"), sv);
    if (io.checkpoint_every > 0 && (e.n % io.checkpoint_every == 0 || last))
      write_checkpoint(dir + step_name("checkpoint", e.n, "ck"), sv);
    std::printf("n=%-8d t=%-12.6g G=%-16.10g relG=%-10.3e", e.n, e.t, e.energy, e.rel_ediff);
    if (io.vortices) std::printf(" vortices=%d", row.e.vortices);
    if (io.nz) std::printf(" nz=%.4f", row.normal_zone);
    std::printf("\n");
    std::fflush(stdout);
  };

  s.run(steps, io.log_every, sched, observer);

  write_observables_csv(dir + "observables.csv", rows);
  write_vtk(dir + "state_final.vtk", s);
  write_checkpoint(dir + "checkpoint_final.ck", s);
  std::printf("wrote %sobservables.csv, state_final.vtk, checkpoint_final.ck\n", dir.c_str());
  return 0;
}

// ---------------------------------------------------------------------------

struct MmsArgs {
  int dim = 2;
  int order = 1;
  int M = 16;
  double kappa = 1.0;
  double omega = 1.0;
  double dt = 1e-3;
  int steps = 125;
  RunIO io;
};

int run_mms(const MmsArgs& a) {
  Mesh mesh = a.dim == 2 ? generate_unit_square_mesh(a.M) : generate_unit_cube_mesh(a.M);
  SolverOptions opt;
  opt.kappa = a.kappa;
  opt.omega = a.omega;
  opt.dt = a.dt;
  opt.degree = a.order;
  TDGLSolver s(mesh, opt);
  ManufacturedCase c;
  c.dim = a.dim;
  c.kappa = a.kappa;
  c.omega = a.omega;
  s.use_manufactured(c);
  const int rc = execute_run(s, a.steps, {}, a.io);
  const auto err = s.errors_vs_exact();
  std::printf("L2 errors at t=%.6g:\n", s.time());
  for (int k = 0; k < 5; ++k) std::printf("  %-10s %.6e\n", kErrorColumns[k], err[k]);
  std::FILE* f = std::fopen((a.io.out + "/errors.csv").c_str(), "w");
  if (!f) throw IOError("cannot open " + a.io.out + "/errors.csv for writing");
  std::fprintf(f, "psi,A,gamma,curl_gamma,div_A\n");
  std::fprintf(f, "%.12g,%.12g,%.12g,%.12g,%.12g\n", err[0], err[1], err[2], err[3], err[4]);
  std::fclose(f);
  return rc;
}

struct OrdersArgs {
  int dim = 2;
  int order = 1;
  int M = 16;
  int levels = 3;
  double kappa = 1.0;
  std::vector<double> omegas = {1.0};
  double dt = 1e-3;
  int steps = 125;
  bool graphical = false;
  double t_final = 0.125;
  std::string out = "out";
};

int run_orders(const OrdersArgs& a) {
  namespace fs = std::filesystem;
  fs::create_directories(a.out);
  std::FILE* sweep = std::fopen((a.out + "/orders_sweep.csv").c_str(), "w");
  if (!sweep) throw IOError("cannot open " + a.out + "/orders_sweep.csv for writing");
  std::fprintf(sweep, "omega,psi,A,gamma,curl_gamma,div_A\n");
  for (double w : a.omegas) {
    ManufacturedCase c;
    c.dim = a.dim;
    c.kappa = a.kappa;
    c.omega = w;
    char tag[32];
    std::snprintf(tag, sizeof(tag), "%g", w);
    std::array<double, 5> ord{};
    if (a.graphical) {
      const auto st = graphical_study(c, a.order, a.M, a.levels, a.t_final);
      ord = st.slopes;
      write_study_csv(a.out + "/orders_graphical_omega" + tag + ".csv", st);
    } else {
      const auto st = richardson_study(c, a.order, a.M, a.levels, a.dt, a.steps);
      ord = st.orders;
      write_study_csv(a.out + "/orders_richardson_omega" + tag + ".csv", st);
    }
    std::fprintf(sweep, "%.12g,%.6g,%.6g,%.6g,%.6g,%.6g\n", w, ord[0], ord[1], ord[2], ord[3],
                 ord[4]);
    std::printf("omega=%-8s orders: psi=%.4f A=%.4f gamma=%.4f curl=%.4f div=%.4f\n", tag, ord[0],
                ord[1], ord[2], ord[3], ord[4]);
    std::fflush(stdout);
  }
  std::fclose(sweep);
  std::printf("wrote %s/orders_sweep.csv\n", a.out.c_str());
  return 0;
}

struct BenchArgs {
  double kappa = 4.0;
  std::vector<double> H = {0.9};
  double R = 5.0;
  double nodes_per_xi = 3.0;
  int M = 20;  // cube only
  std::string mesh_path;
  int order = 2;
  double omega = 1.0;
  std::string schedule_text;
  double dt = 1.0;
  int steps = 5000;
  RunIO io;
};

int run_bench(const std::string& kind, const BenchArgs& a) {
  Mesh mesh = [&] {
    if (kind == "disk") {
      NotchedDiskParams p;
      p.radius = a.R;
      p.target_h = 1.0 / (a.kappa * a.nodes_per_xi);
      return generate_notched_disk_mesh(p);
    }
    if (kind == "cube") return generate_unit_cube_mesh(a.M);
    return read_msh(a.mesh_path);
  }();
  std::printf("%s mesh: %d vertices, %d cells (dim %d)\n", kind.c_str(), mesh.nverts(),
              mesh.ncells(), mesh.dim);

  SolverOptions opt;
  opt.kappa = a.kappa;
  opt.omega = a.omega;
  opt.dt = a.dt;
  opt.degree = a.order;
  OmegaSchedule sched;
  if (!a.schedule_text.empty()) {
    sched = parse_schedule(a.schedule_text);
    if (sched.front().first == 0) opt.omega = sched.front().second;
  }
  TDGLSolver s(mesh, opt);
  std::array<double, 3> H = {0, 0, 0};
  for (size_t i = 0; i < a.H.size() && i < 3; ++i) H[i] = a.H[i];
  s.use_applied_field(H);

  RunIO io = a.io;
  if (mesh.dim == 2) {
    io.vortices = true;
    if (io.nz_center.empty() && kind == "disk") {
      NotchedDiskParams p;
      p.radius = a.R;
      const auto corner = notched_disk_corner(p);
      io.nz_center = {corner[0], corner[1]};
      io.nz = true;
    }
  }
  if (!io.nz_center.empty()) io.nz = true;

  const int rc = execute_run(s, a.steps, sched, io);
  if (mesh.dim == 2) {
    const auto v = count_vortices(s.psi_space(), s.psi());
    std::printf("final state: %zu vortices, Gibbs energy %.6f\n", v.size(), s.gibbs_energy());
    for (const auto& vx : v)
      std::printf("  vortex at (%8.4f, %8.4f)  winding %+.2f  cells %d\n", vx.position[0],
                  vx.position[1], vx.winding, vx.ncells);
  } else {
    std::printf("final state: Gibbs energy %.6f\n", s.gibbs_energy());
  }
  return rc;
}

struct ResumeArgs {
  std::string checkpoint;
  std::string geometry;  // square | cube | disk | msh
  int M = 16;
  double R = 5.0;
  double nodes_per_xi = 3.0;
  std::string mesh_path;
  std::vector<double> H;
  double omega = -1.0;  // <0: keep the checkpoint's omega
  std::string schedule_text;
  double dt = -1.0;  // <0: keep the checkpoint's dt
  int steps = 1000;
  RunIO io;
};

int run_resume(const ResumeArgs& a) {
  const Checkpoint ck = read_checkpoint(a.checkpoint);
  Mesh mesh = [&] {
    if (a.geometry == "square") return generate_unit_square_mesh(a.M);
    if (a.geometry == "cube") return generate_unit_cube_mesh(a.M);
    if (a.geometry == "disk") {
      NotchedDiskParams p;
      p.radius = a.R;
      p.target_h = 1.0 / (ck.kappa * a.nodes_per_xi);
      return generate_notched_disk_mesh(p);
    }
    if (a.geometry == "msh") return read_msh(a.mesh_path);
    throw std::invalid_argument("--geometry must be square, cube, disk, or msh");
  }();

  SolverOptions opt;
  opt.kappa = ck.kappa;
  opt.omega = a.omega >= 0.0 ? a.omega : ck.omega;
  opt.dt = a.dt > 0.0 ? a.dt : ck.dt;
  opt.degree = ck.degree;
  OmegaSchedule sched;
  if (!a.schedule_text.empty()) sched = parse_schedule(a.schedule_text);

  TDGLSolver s(mesh, opt);
  std::array<double, 3> H = {0, 0, 0};
  for (size_t i = 0; i < a.H.size() && i < 3; ++i) H[i] = a.H[i];
  s.use_applied_field(H);
  install_checkpoint(ck, s);
  std::printf("resumed at step %d, t=%.6g, omega=%.6g (mesh hash %" PRIx64 ")\n", s.step_index(),
              s.time(), s.options().omega, mesh.content_hash());

  RunIO io = a.io;
  io.vortices = mesh.dim == 2;
  if (!io.nz_center.empty()) io.nz = true;
  return execute_run(s, a.steps, sched, io);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed finite element solver for the time-dependent Ginzburg-Landau system"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string config_sink;
  const auto configure = [&config_sink](CLI::App* sub) {
    sub->add_option("--config", config_sink,
                    "plain 'key = value' file; flags override file values, unknown keys are "
                    "rejected");
  };

  MmsArgs mms;
  auto* sub_mms = app.add_subcommand("mms", "manufactured-solution run with exact-error report");
  configure(sub_mms);
  sub_mms->add_option("--dim", mms.dim, "2 or 3")->capture_default_str();
  sub_mms->add_option("--order", mms.order, "polynomial degree r")->capture_default_str();
  sub_mms->add_option("--M", mms.M, "mesh subdivisions per side")->capture_default_str();
  sub_mms->add_option("--kappa", mms.kappa)->capture_default_str();
  sub_mms->add_option("--omega", mms.omega, "gauge parameter")->capture_default_str();
  sub_mms->add_option("--dt", mms.dt)->capture_default_str();
  sub_mms->add_option("--steps", mms.steps)->capture_default_str();
  mms.io.log_every = 25;
  add_run_io_options(sub_mms, mms.io);

  OrdersArgs ord;
  auto* sub_ord = app.add_subcommand("orders", "convergence orders over an omega sweep");
  configure(sub_ord);
  sub_ord->add_option("--dim", ord.dim)->capture_default_str();
  sub_ord->add_option("--order", ord.order)->capture_default_str();
  sub_ord->add_option("--M", ord.M, "coarsest mesh; levels double from here")
      ->capture_default_str();
  sub_ord->add_option("--levels", ord.levels)->capture_default_str();
  sub_ord->add_option("--kappa", ord.kappa)->capture_default_str();
  sub_ord->add_option("--omega-list", ord.omegas, "omega values to sweep")
      ->delimiter(',')
      ->capture_default_str();
  sub_ord->add_option("--dt", ord.dt, "time step (Richardson flavour)")->capture_default_str();
  sub_ord->add_option("--steps", ord.steps, "steps per level (Richardson flavour)")
      ->capture_default_str();
  sub_ord->add_flag("--graphical", ord.graphical,
                    "slopes of errors vs exact solution with dt = M^-3 (default: Richardson "
                    "pair differences at fixed dt)");
  sub_ord->add_option("--t-final", ord.t_final, "end time (graphical flavour)")
      ->capture_default_str();
  sub_ord->add_option("--out", ord.out)->capture_default_str();

  BenchArgs disk;
  auto* sub_disk = app.add_subcommand("bench-disk", "notched-disk vortex benchmark");
  configure(sub_disk);
  sub_disk->add_option("--kappa", disk.kappa)->capture_default_str();
  sub_disk->add_option("--H", disk.H, "applied field")->delimiter(',')->capture_default_str();
  sub_disk->add_option("--R", disk.R, "disk radius")->capture_default_str();
  sub_disk->add_option("--nodes-per-xi", disk.nodes_per_xi, "mesh nodes per coherence length")
      ->capture_default_str();
  sub_disk->add_option("--order", disk.order)->capture_default_str();
  auto* disk_w = sub_disk->add_option("--omega", disk.omega)->capture_default_str();
  auto* disk_ws = sub_disk->add_option("--omega-schedule", disk.schedule_text,
                                       "piecewise-constant omega: step:value,step:value,...");
  disk_w->excludes(disk_ws);
  sub_disk->add_option("--dt", disk.dt)->capture_default_str();
  sub_disk->add_option("--steps", disk.steps)->capture_default_str();
  add_run_io_options(sub_disk, disk.io);

  BenchArgs cube;
  cube.kappa = 10.0;
  cube.H = {0.0, 0.0, 5.0};
  cube.order = 1;
  cube.dt = 0.1;
  cube.steps = 1000;
  auto* sub_cube = app.add_subcommand("bench-cube", "unit-cube vortex benchmark");
  configure(sub_cube);
  sub_cube->add_option("--kappa", cube.kappa)->capture_default_str();
  sub_cube->add_option("--H", cube.H, "applied field hx,hy,hz")
      ->delimiter(',')
      ->capture_default_str();
  sub_cube->add_option("--M", cube.M, "mesh subdivisions per side")->capture_default_str();
  auto* cube_w = sub_cube->add_option("--omega", cube.omega)->capture_default_str();
  auto* cube_ws = sub_cube->add_option("--omega-schedule", cube.schedule_text);
  cube_w->excludes(cube_ws);
  sub_cube->add_option("--dt", cube.dt)->capture_default_str();
  sub_cube->add_option("--steps", cube.steps)->capture_default_str();
  add_run_io_options(sub_cube, cube.io);

  BenchArgs ball;
  ball.kappa = 10.0;
  ball.H = {0.0, 0.0, 5.0};
  ball.order = 1;
  ball.dt = 0.1;
  ball.steps = 1000;
  auto* sub_ball = app.add_subcommand("bench-sphere", "imported-mesh ball benchmark");
  configure(sub_ball);
  sub_ball->add_option("--mesh", ball.mesh_path, "MSH 2.2 ASCII tetrahedral mesh")
      ->required()
      ->check(CLI::ExistingFile);
  sub_ball->add_option("--kappa", ball.kappa)->capture_default_str();
  sub_ball->add_option("--H", ball.H, "applied field hx,hy,hz")
      ->delimiter(',')
      ->capture_default_str();
  auto* ball_w = sub_ball->add_option("--omega", ball.omega)->capture_default_str();
  auto* ball_ws = sub_ball->add_option("--omega-schedule", ball.schedule_text);
  ball_w->excludes(ball_ws);
  sub_ball->add_option("--dt", ball.dt)->capture_default_str();
  sub_ball->add_option("--steps", ball.steps)->capture_default_str();
  add_run_io_options(sub_ball, ball.io);

  ResumeArgs res;
  auto* sub_res = app.add_subcommand("resume", "continue a run from a checkpoint");
  configure(sub_res);
  sub_res->add_option("--checkpoint", res.checkpoint)->required()->check(CLI::ExistingFile);
  sub_res->add_option("--geometry", res.geometry, "square | cube | disk | msh")->required();
  sub_res->add_option("--M", res.M, "subdivisions (square/cube geometry)")->capture_default_str();
  sub_res->add_option("--R", res.R, "disk radius")->capture_default_str();
  sub_res->add_option("--nodes-per-xi", res.nodes_per_xi)->capture_default_str();
  sub_res->add_option("--mesh", res.mesh_path, "MSH path (msh geometry)");
  sub_res->add_option("--H", res.H, "applied field")->delimiter(',')->required();
  auto* res_w = sub_res->add_option("--omega", res.omega, "override the checkpoint omega");
  auto* res_ws = sub_res->add_option("--omega-schedule", res.schedule_text);
  res_w->excludes(res_ws);
  sub_res->add_option("--dt", res.dt, "override the checkpoint dt");
  sub_res->add_option("--steps", res.steps, "further steps to take")->capture_default_str();
  add_run_io_options(sub_res, res.io);

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (sub_mms->parsed()) return run_mms(mms);
    if (sub_ord->parsed()) return run_orders(ord);
    if (sub_disk->parsed()) return run_bench("disk", disk);
    if (sub_cube->parsed()) return run_bench("cube", cube);
    if (sub_ball->parsed()) return run_bench("msh", ball);
    if (sub_res->parsed()) return run_resume(res);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
