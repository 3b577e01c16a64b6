#include "ringflow/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <fstream>
#include <sstream>
#include <thread>

#include "ringflow/control.hpp"
#include "ringflow/fibers.hpp"
#include "ringflow/io.hpp"
#include "ringflow/jacobians.hpp"
#include "ringflow/oracle.hpp"
#include "ringflow/simulate.hpp"

namespace ringflow::cli {

using nlohmann::json;

namespace {

json to_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

json header(std::string_view command) {
  return json{{"schema_version", io::kSchemaVersion}, {"command", command}};
}

json tracer_json(const TracerOptions& o) {
  return {{"initial_step", o.initial_step}, {"min_step", o.min_step}, {"max_step", o.max_step},
          {"corrector_tol", o.corrector_tol}, {"max_corrector_iters", o.max_corrector_iters},
          {"max_steps", o.max_steps}};
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    io::write_atomic(path, content);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string state_csv(std::string_view prefix, const std::vector<double>& times,
                      const std::vector<StateVector>& states, const std::vector<double>* extra,
                      std::size_t every) {
  std::string csv = "t";
  const std::size_t n = states.front().size();
  for (std::size_t i = 1; i <= n; ++i) csv += "," + std::string(prefix) + "_" + std::to_string(i);
  if (extra != nullptr) csv += ",residual";
  csv += "\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k % every != 0 && k + 1 != times.size()) continue;
    csv += io::format_double(times[k]);
    for (double v : states[k].values()) csv += "," + io::format_double(v);
    if (extra != nullptr) csv += "," + io::format_double((*extra)[k]);
    csv += "\n";
  }
  return csv;
}

const std::vector<double>& need(const std::optional<std::vector<double>>& v, const char* what) {
  if (!v) throw Error(ErrorCode::InvalidArgument, std::string("missing required input: ") + what);
  return *v;
}

double need(const std::optional<double>& v, const char* what) {
  if (!v) throw Error(ErrorCode::InvalidArgument, std::string("missing required input: ") + what);
  return *v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// ---- commands --------------------------------------------------------------

int run_equilibrium(const RunConfig& cfg, std::ostream& out) {
  const ParamVector lam(need(cfg.lambda, "--lambda"));
  const double s = need(cfg.s, "--s");
  const HomotopyProblem prob = HomotopyProblem::from_unit(lam, s);
  cfg.tracer.validate();
  const StateVector e = equilibrium_at(lam, s, cfg.tracer);
  json j = header("equilibrium");
  j["n"] = lam.size();
  j["s"] = s;
  j["lambda"] = to_json(lam.values());
  j["e"] = to_json(e.values());
  j["residual_norm"] = max_abs(augmented_residual(lam, e, s));
  j["near_boundary"] = prob.near_boundary();
  emit(cfg.out, dump(j), out);
  return kSuccess;
}

int run_trace(const RunConfig& cfg, std::ostream& out) {
  const ParamVector lam_end(need(cfg.lambda, "--lambda"));
  const ParamVector lam_start = cfg.lambda_start ? ParamVector(*cfg.lambda_start)
                                                 : ParamVector::ones(lam_end.size());
  const HomotopyProblem prob(lam_start, lam_end, need(cfg.s, "--s"));
  const PathTrace trace = trace_path(prob, cfg.tracer);
  if (trace.status != TraceStatus::Converged) {
    throw Error(trace.status == TraceStatus::StepUnderflow ? ErrorCode::StepUnderflow : ErrorCode::MaxSteps,
                "continuation stopped at t = " + io::format_double(trace.nodes.back().t));
  }
  std::vector<double> times, residuals;
  std::vector<StateVector> states;
  for (const PathNode& node : trace.nodes) {
    times.push_back(node.t);
    states.push_back(node.e);
    residuals.push_back(node.residual_norm);
  }
  const std::string csv = state_csv("e", times, states, &residuals, 1);

  json j = header("trace");
  j["problem"] = {{"n", prob.size()}, {"s", prob.s()}, {"lambda_start", to_json(lam_start.values())},
                  {"lambda_end", to_json(lam_end.values())}};
  j["options"] = tracer_json(cfg.tracer);
  j["status"] = to_string(trace.status);
  j["near_boundary"] = trace.near_boundary;
  j["nodes"] = trace.nodes.size();
  j["rejected_steps"] = trace.rejected_steps;
  j["final_e"] = to_json(trace.nodes.back().e.values());
  j["final_residual"] = trace.nodes.back().residual_norm;
  double min_det = INFINITY;
  for (const PathNode& node : trace.nodes) min_det = std::min(min_det, std::abs(node.det_w));
  j["min_abs_det_w"] = min_det;

  if (cfg.out.empty() || cfg.out == "-") {
    out << csv;
    if (!cfg.meta.empty()) io::write_atomic(cfg.meta, dump(j));
  } else {
    j["csv"] = std::filesystem::path(cfg.out).filename().string();
    const std::string meta = cfg.meta.empty() ? cfg.out + ".json" : cfg.meta;
    io::write_atomic(cfg.out, csv);
    io::write_atomic(meta, dump(j));
  }
  return kSuccess;
}

int run_fiber(const RunConfig& cfg, std::ostream& out) {
  const StateVector e(need(cfg.state, "--e"));
  const Fiber fiber = fiber_over(e);
  json j = header("fiber");
  j["e"] = to_json(e.values());
  switch (fiber.kind) {
    case Fiber::Kind::Ray: {
      j["kind"] = "Ray";
      const ParamVector& omega = fiber.direction->omega;
      j["omega"] = to_json(omega.values());
      j["residual_norm"] = equilibrium_residual(omega, e).norm_inf();
      break;
    }
    case Fiber::Kind::WholeSpace:
      j["kind"] = "WholeSpace";
      j["omega"] = nullptr;
      j["residual_norm"] = 0.0;
      break;
    case Fiber::Kind::Empty:
      j["kind"] = "Empty";
      j["omega"] = nullptr;
      j["residual_norm"] = nullptr;
      break;
  }
  emit(cfg.out, dump(j), out);
  return kSuccess;
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const ParamVector lam(need(cfg.lambda, "--lambda"));
  const StateVector x0(need(cfg.state, "--x0"));
  require_same_size(lam.size(), x0.size(), "simulate");
  const Trajectory traj = cfg.tol ? integrate_to_tolerance(lam, x0, *cfg.tol, cfg.t_end, cfg.dt)
                                  : integrate(lam, x0, cfg.t_end, cfg.dt);
  emit(cfg.out, state_csv("x", traj.times, traj.states, nullptr, cfg.every), out);
  return kSuccess;
}

int run_control(const RunConfig& cfg, std::ostream& out) {
  const StateVector target(need(cfg.target, "--target"));
  std::optional<StateVector> x0;
  if (cfg.state) {
    x0.emplace(*cfg.state);
    require_same_size(x0->size(), target.size(), "control");
  }
  if (!cfg.trajectory.empty() && !x0) {
    throw Error(ErrorCode::InvalidArgument, "--trajectory needs --x0");
  }
  const ControlPlan p = plan(target, cfg.scale);
  json j = header("control");
  j["target"] = to_json(target.values());
  j["lambda"] = to_json(p.lam.values());
  j["scale"] = p.scale;
  j["residual_norm"] = equilibrium_residual(p.lam, target).norm_inf();
  if (x0) {
    const bool ok = reachable(*x0, target);
    j["x0"] = to_json(x0->values());
    j["reachable"] = ok;
    if (!ok) {
      throw Error(ErrorCode::InvalidArgument,
                  "target is not reachable from x0: first integrals " +
                      io::format_double(first_integral(*x0)) + " vs " +
                      io::format_double(first_integral(target)));
    }
    const double tol = cfg.tol.value_or(1e-10);
    const Trajectory traj = integrate_to_tolerance(p.lam, *x0, tol, cfg.t_end, cfg.dt);
    double dist = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      dist = std::max(dist, std::abs(traj.states.back()[i] - target[i]));
    }
    j["validation"] = {{"time", traj.times.back()}, {"field_tol", tol},
                       {"final_state", to_json(traj.states.back().values())},
                       {"distance_to_target", dist}};
    if (!cfg.trajectory.empty()) {
      io::write_atomic(cfg.trajectory, state_csv("x", traj.times, traj.states, nullptr, cfg.every));
    }
  }
  emit(cfg.out, dump(j), out);
  return kSuccess;
}

struct Sample {
  std::vector<double> lam;
  std::vector<double> e;
};

int run_certify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.uniqueness) {
    const ParamVector lam(need(cfg.lambda, "--lambda"));
    const double s = need(cfg.s, "--s");
    start_point(lam.size(), s);  // range check
    const MultistartReport r = newton_multistart(lam, s, cfg.seeds, cfg.rng_seed);
    json j = header("certify");
    j["mode"] = "uniqueness";
    j["lambda"] = to_json(lam.values());
    j["s"] = s;
    j["rng_seed"] = r.rng_seed;
    j["seeds_tried"] = r.seeds_tried;
    j["converged"] = r.converged;
    j["out_of_cube"] = r.out_of_cube;
    j["failed"] = r.failed;
    j["cluster_radius"] = kClusterRadius;
    json centers = json::array();
    for (const auto& c : r.cluster_centers) centers.push_back(to_json(c.values()));
    j["cluster_centers"] = centers;
    j["cluster_sizes"] = r.cluster_sizes;
    j["max_cluster_radius"] = r.max_cluster_radius;
    j["unique"] = r.cluster_centers.size() == 1;
    emit(cfg.out, dump(j), out);
    return kSuccess;
  }

  if (cfg.n < 2) throw Error(ErrorCode::InvalidArgument, "--n must be >= 2");
  if (cfg.samples == 0) throw Error(ErrorCode::InvalidArgument, "--samples must be >= 1");
  if (!(cfg.threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "--threshold must be > 0");
  std::vector<MatrixKind> kinds;
  for (const auto& k : cfg.kinds) kinds.push_back(parse_matrix_kind(k));
  if (kinds.empty()) kinds = {MatrixKind::JLambda, MatrixKind::JE, MatrixKind::A, MatrixKind::W};
  const bool closed_form = cfg.n >= 3;

  // Samples are drawn serially so the report does not depend on the thread count.
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> log_rate(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> occupancy(0.05, 0.95);
  std::vector<Sample> samples(cfg.samples);
  for (Sample& smp : samples) {
    for (std::size_t i = 0; i < cfg.n; ++i) smp.lam.push_back(std::exp(log_rate(rng)));
    for (std::size_t i = 0; i < cfg.n; ++i) smp.e.push_back(occupancy(rng));
  }

  struct Row {
    std::vector<RankCertificate> certs;
    double det_closed = 0.0;
    double det_lu = 0.0;
  };
  std::vector<Row> rows(samples.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t k = begin; k < samples.size(); k += stride) {
      const ParamVector lam(samples[k].lam);
      const StateVector e(samples[k].e);
      for (MatrixKind kind : kinds) rows[k].certs.push_back(rank_certificate(kind, lam, e, cfg.threshold));
      if (closed_form) {
        rows[k].det_closed = det_A_closed_form(lam, e);
        rows[k].det_lu = lu_determinant(reduced_matrix_A(lam, e));
      }
    }
  };
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(cfg.threads ? cfg.threads : std::thread::hardware_concurrency(),
                                                     samples.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work, t, threads);
  work(0, threads);
  for (auto& th : pool) th.join();

  json j = header("certify");
  j["mode"] = "rank";
  j["n"] = cfg.n;
  j["samples"] = cfg.samples;
  j["rng_seed"] = cfg.rng_seed;
  j["relative_threshold"] = cfg.threshold;
  json summary = json::array();
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    std::size_t failures = 0;
    double min_sigma = INFINITY, min_ratio = INFINITY;
    for (const Row& row : rows) {
      const RankCertificate& c = row.certs[ki];
      if (!c.full_rank) ++failures;
      min_sigma = std::min(min_sigma, c.smallest_singular_value);
      min_ratio = std::min(min_ratio, c.largest_singular_value > 0.0
                                          ? c.smallest_singular_value / c.largest_singular_value
                                          : 0.0);
    }
    summary.push_back({{"kind", to_string(kinds[ki])}, {"full_rank_failures", failures},
                       {"min_sigma_min", min_sigma}, {"min_sigma_ratio", min_ratio}});
  }
  j["certificates"] = summary;
  if (closed_form) {
    double worst_rel = 0.0, min_det = INFINITY;
    for (const Row& row : rows) {
      worst_rel = std::max(worst_rel, std::abs(std::abs(row.det_lu) - row.det_closed) / row.det_closed);
      min_det = std::min(min_det, row.det_closed);
    }
    j["det_A"] = {{"min_closed_form", min_det}, {"max_rel_diff_lu", worst_rel}};
  }
  emit(cfg.out, dump(j), out);
  return kSuccess;
}

// ---- argument parsing --------------------------------------------------------

struct VectorFlag {
  std::string inline_text;
  std::string file;
};

void add_vector(CLI::App* sub, VectorFlag& flag, const std::string& name, const std::string& what) {
  auto* a = sub->add_option("--" + name, flag.inline_text, what + " as comma-separated values");
  auto* b = sub->add_option("--" + name + "-file", flag.file, what + " from a JSON or CSV file")
                ->check(CLI::ExistingFile);
  a->excludes(b);
}

std::optional<std::vector<double>> load(const VectorFlag& flag, std::string_view key) {
  if (!flag.inline_text.empty()) return io::parse_number_list(flag.inline_text);
  if (!flag.file.empty()) return io::read_vector_file(flag.file, key);
  return std::nullopt;
}

void add_tracer(CLI::App* sub, TracerOptions& o) {
  sub->add_option("--initial-step", o.initial_step, "initial step in t")->capture_default_str();
  sub->add_option("--min-step", o.min_step, "smallest allowed step in t")->capture_default_str();
  sub->add_option("--max-step", o.max_step, "largest allowed step in t")->capture_default_str();
  sub->add_option("--corrector-tol", o.corrector_tol, "Newton tolerance on ||H||_inf")->capture_default_str();
  sub->add_option("--max-corrector-iters", o.max_corrector_iters, "Newton iterations per step")
      ->capture_default_str();
  sub->add_option("--max-steps", o.max_steps, "step attempts before giving up")->capture_default_str();
}

void write_error(std::ostream& err, std::string_view code, std::string_view message, int exit_code) {
  json j{{"schema_version", io::kSchemaVersion},
         {"status", "error"},
         {"code", code},
         {"message", message},
         {"exit_code", exit_code}};
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equilibria of the ring flow model: continuation, fibers, simulation, control"};
  app.require_subcommand(1);
  RunConfig cfg;
  VectorFlag lambda, lambda_start, e, x0, target;
  std::string input;
  std::optional<double> s_opt, scale_opt, tol_opt;
  double t_max = 2000.0;

  auto* eq = app.add_subcommand("equilibrium", "equilibrium on the hyperplane sum(e) = s");
  add_vector(eq, lambda, "lambda", "rates");
  eq->add_option("--s", s_opt, "first integral")->required();
  add_tracer(eq, cfg.tracer);
  eq->add_option("--out", cfg.out, "JSON output (default stdout)");

  auto* tr = app.add_subcommand("trace", "continuation path as CSV plus a JSON sidecar");
  add_vector(tr, lambda, "lambda", "target rates");
  add_vector(tr, lambda_start, "lambda-start", "start rates (default all ones)");
  tr->add_option("--s", s_opt, "first integral")->required();
  add_tracer(tr, cfg.tracer);
  tr->add_option("--out", cfg.out, "CSV output (default stdout)");
  tr->add_option("--meta", cfg.meta, "JSON sidecar (default <out>.json)");

  auto* fb = app.add_subcommand("fiber", "rate direction making a state an equilibrium");
  add_vector(fb, e, "e", "state");
  fb->add_option("--out", cfg.out, "JSON output (default stdout)");

  auto* sm = app.add_subcommand("simulate", "RK4 trajectory as CSV");
  add_vector(sm, lambda, "lambda", "rates");
  add_vector(sm, x0, "x0", "initial state");
  sm->add_option("--t-end", cfg.t_end, "final time (upper bound when --tol is set)")->capture_default_str();
  sm->add_option("--dt", cfg.dt, "step size")->capture_default_str();
  sm->add_option("--tol", tol_opt, "stop once ||field||_inf <= tol");
  sm->add_option("--every", cfg.every, "write every k-th step")->capture_default_str()->check(CLI::PositiveNumber);
  sm->add_option("--out", cfg.out, "CSV output (default stdout)");

  auto* ct = app.add_subcommand("control", "open-loop rates steering to a target equilibrium");
  ct->add_option("--input", input, "JSON file with target, x0 and optional scale")->check(CLI::ExistingFile);
  add_vector(ct, target, "target", "target state");
  add_vector(ct, x0, "x0", "initial state for validation");
  ct->add_option("--scale", scale_opt, "norm of the planned rates (default sqrt(n))");
  ct->add_option("--t-max", t_max, "validation time limit")->capture_default_str();
  ct->add_option("--dt", cfg.dt, "validation step size")->capture_default_str();
  ct->add_option("--tol", tol_opt, "validation field tolerance (default 1e-10)");
  ct->add_option("--every", cfg.every, "write every k-th step")->capture_default_str()->check(CLI::PositiveNumber);
  ct->add_option("--trajectory", cfg.trajectory, "validation trajectory CSV");
  ct->add_option("--out", cfg.out, "JSON output (default stdout)");

  auto* cf = app.add_subcommand("certify", "rank certificates or a uniqueness report");
  cf->add_option("--n", cfg.n, "dimension for rank sampling");
  cf->add_option("--samples", cfg.samples, "random samples")->capture_default_str();
  cf->add_option("--kinds", cfg.kinds, "matrix kinds: JLambda JE A W")->delimiter(',');
  cf->add_option("--threshold", cfg.threshold, "relative rank threshold")->capture_default_str();
  cf->add_option("--threads", cfg.threads, "worker threads (0: hardware)");
  cf->add_flag("--uniqueness", cfg.uniqueness, "Newton multistart uniqueness report");
  add_vector(cf, lambda, "lambda", "rates (uniqueness mode)");
  cf->add_option("--s", s_opt, "first integral (uniqueness mode)");
  cf->add_option("--seeds", cfg.seeds, "multistart seeds")->capture_default_str();
  cf->add_option("--seed", cfg.rng_seed, "RNG seed")->capture_default_str();
  cf->add_option("--out", cfg.out, "JSON output (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& ex) {
    write_error(err, "BadArguments", ex.what(), kBadInput);
    return kBadInput;
  }

  try {
    // Load every input before any computation.
    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    if (name == "equilibrium") cfg.command = Command::Equilibrium;
    else if (name == "trace") cfg.command = Command::Trace;
    else if (name == "fiber") cfg.command = Command::Fiber;
    else if (name == "simulate") cfg.command = Command::Simulate;
    else if (name == "control") cfg.command = Command::Control;
    else cfg.command = Command::Certify;

    cfg.lambda = load(lambda, "lambda");
    cfg.lambda_start = load(lambda_start, "lambda_start");
    cfg.target = load(target, "target");
    cfg.state = cfg.command == Command::Fiber ? load(e, "e") : load(x0, "x0");
    cfg.s = s_opt;
    cfg.scale = scale_opt;
    cfg.tol = tol_opt;
    if (cfg.command == Command::Control) cfg.t_end = t_max;
    if (!input.empty()) {
      std::ifstream in(input);
      json j;
      try {
        j = json::parse(in);
        if (!cfg.target && j.contains("target")) cfg.target = j.at("target").get<std::vector<double>>();
        if (!cfg.state && j.contains("x0")) cfg.state = j.at("x0").get<std::vector<double>>();
        if (!cfg.scale && j.contains("scale")) cfg.scale = j.at("scale").get<double>();
      } catch (const json::exception& ex) {
        throw Error(ErrorCode::InvalidArgument, "bad JSON in '" + input + "': " + ex.what());
      }
    }
    if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "dt and t_end must be > 0");
    }
    cfg.tracer.validate();

    switch (cfg.command) {
      case Command::Equilibrium: return run_equilibrium(cfg, out);
      case Command::Trace: return run_trace(cfg, out);
      case Command::Fiber: return run_fiber(cfg, out);
      case Command::Simulate: return run_simulate(cfg, out);
      case Command::Control: return run_control(cfg, out);
      case Command::Certify: return run_certify(cfg, out);
    }
    return kSuccess;
  } catch (const Error& ex) {
    const int code = is_numerical(ex.code()) ? kNumericalFailure : kBadInput;
    write_error(err, to_string(ex.code()), ex.what(), code);
    return code;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ringflow::cli
