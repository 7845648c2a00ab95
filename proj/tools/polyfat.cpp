// polyfat command line: data generation, learning, evaluation, bounds,
// geometry checks, the dimension sweep benchmark and the reductions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polyfat/polyfat.hpp"

namespace {

using namespace polyfat;
using io::json;

enum Exit { kOk = 0, kFailure = 1, kInfeasible = 2, kDegenerate = 3 };

struct Global {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool json = false;
  bool csv = false;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

// gen -----------------------------------------------------------------------

struct GenArgs {
  std::size_t dim = 2;
  std::size_t points = 1000;
  double margin = 0.05;
  std::string out;
  std::string target;
};

int run_gen(const GenArgs& a, const Global& g) {
  ExperimentConfig cfg;
  cfg.n_points = a.points;
  cfg.margin = a.margin;
  Rng rng(g.seed);
  const Instance inst = generate_instance(a.dim, cfg, rng);
  io::write_points_csv(a.out, inst.points, a.dim);
  if (!a.target.empty()) io::write_model(a.target, inst.target, a.margin);
  std::size_t pos = 0;
  for (const auto& p : inst.points) pos += p.label() == Label::Positive;
  if (g.json) print_json({{"points", inst.points.size()}, {"positives", pos}, {"out", a.out}});
  else std::cout << "wrote " << inst.points.size() << " points (" << pos << " positive) to " << a.out << '\n';
  return kOk;
}

// learn ---------------------------------------------------------------------

struct LearnArgs {
  std::string algo = "greedy";
  double gamma = 0.1;
  std::optional<std::size_t> t;
  std::string in;
  std::string out;
  std::optional<std::size_t> budget;
  std::size_t directions = 10'000;
  std::string jl_out;
};

int run_learn(const LearnArgs& a, const Global& g) {
  const Sample s = io::read_points_csv(a.in);
  if (s.empty()) throw DomainError(a.in + " holds no points");
  Result<Polytope> model = Failure{FailureKind::NotFound, "not run"};
  json info = {{"algo", a.algo}, {"gamma", a.gamma}, {"points", s.size()}};
  if (a.algo == "heuristic") {
    Rng rng(g.seed);
    model = heuristic_learn(s, a.directions, rng, g.threads);
  } else {
    LearnerConfig cfg;
    cfg.gamma = a.gamma;
    cfg.t_hint = a.t;
    cfg.candidate_budget = a.budget;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    const CandidateSet c = build_candidates(s, cfg);
    info["candidates"] = c.size();
    info["projected_dim"] = c.projected_dim;
    info["net_directions"] = c.net_size;
    if (!a.jl_out.empty() && c.embedding) {
      std::ofstream f(a.jl_out);
      f << io::jl_to_json(*c.embedding).dump() << '\n';
    }
    if (a.algo == "enumerate") {
      if (!a.t) throw DomainError("--algo enumerate needs --t");
      model = enumerate_t_polytope(s, a.gamma, *a.t, c, cfg.enumeration_cap, g.threads);
    } else {
      model = greedy_polytope(s, a.gamma, c, cfg.greedy_iteration_cap.value_or(default_greedy_cap(s.size(), a.t)),
                              g.threads);
    }
  }
  if (!model) {
    info["status"] = to_string(model.failure().kind);
    info["detail"] = model.failure().detail;
    if (g.json) print_json(info);
    else std::cerr << "learning failed (" << to_string(model.failure().kind) << "): " << model.failure().detail << '\n';
    return kFailure;
  }
  const double fat = a.algo == "heuristic" ? 0.0 : a.gamma / 4.0;
  io::write_model(a.out, *model, fat);
  info["status"] = "ok";
  info["halfspaces"] = model->size();
  if (g.json) print_json(info);
  else std::cout << "learned " << model->size() << " halfspaces, wrote " << a.out << '\n';
  return kOk;
}

// eval ----------------------------------------------------------------------

int run_eval(const std::string& model_path, const std::string& in, std::optional<double> gamma, const Global& g) {
  const io::Model m = io::read_model(model_path);
  const Sample s = io::read_points_csv(in);
  const double gm = gamma.value_or(m.gamma);
  const EvalCounts c = evaluate(m.polytope, s, gm);
  if (g.csv) {
    std::cout << "true_pos,true_neg,false_pos,false_neg,margin_violations,errors,error_rate\n"
              << c.true_pos << ',' << c.true_neg << ',' << c.false_pos << ',' << c.false_neg << ','
              << c.margin_violations << ',' << c.errors << ',' << c.error_rate() << '\n';
  } else if (g.json) {
    print_json({{"gamma", gm},
                {"true_pos", c.true_pos},
                {"true_neg", c.true_neg},
                {"false_pos", c.false_pos},
                {"false_neg", c.false_neg},
                {"margin_violations", c.margin_violations},
                {"errors", c.errors},
                {"error_rate", c.error_rate()}});
  } else {
    std::cout << "points " << c.total() << "  errors " << c.errors << " (" << c.error_rate() << ")  margin violations "
              << c.margin_violations << " at gamma " << gm << '\n';
  }
  return kOk;
}

// bounds --------------------------------------------------------------------

struct BoundsArgs {
  std::string what;
  double gamma = 0.1;
  std::size_t d = 1;
  std::size_t t = 1;
  double m = 1000;
  double dvc = 10;
  double eps = 0.1;
  double delta = 0.05;
};

int run_bounds(const BoundsArgs& a, const Global& g) {
  json inputs;
  double value = 0.0;
  std::string log_base = bounds::kVcLogBase;
  if (a.what == "vc-h") {
    inputs = {{"gamma", a.gamma}};
    value = bounds::vc_fat_hyperplane(a.gamma);
    log_base = "none";
  } else if (a.what == "vc-p") {
    inputs = {{"d", a.d}, {"t", a.t}, {"gamma", a.gamma}};
    value = bounds::vc_fat_polytope(a.d, a.t, a.gamma);
  } else if (a.what == "vc-env") {
    inputs = {{"d", a.d}, {"t", a.t}, {"gamma", a.gamma}};
    value = bounds::vc_envelope_polytope(a.d, a.t, a.gamma);
  } else if (a.what == "gen-err") {
    inputs = {{"m", a.m}, {"d_vc", a.dvc}, {"delta", a.delta}};
    value = bounds::generalization_error(a.m, a.dvc, a.delta);
    log_base = bounds::kGeneralizationLogBase;
  } else {
    inputs = {{"t", a.t}, {"gamma", a.gamma}, {"eps", a.eps}, {"delta", a.delta}};
    value = static_cast<double>(bounds::pac_sample_size(a.t, a.gamma, a.eps, a.delta));
    log_base = bounds::kGeneralizationLogBase;
  }
  if (g.json) {
    print_json({{"what", a.what},
                {"inputs", inputs},
                {"value", value},
                {"log_base", log_base},
                {"big_o_constant", bounds::kBigOConstant}});
  } else {
    std::printf("%.17g\n", value);
  }
  return kOk;
}

// verify-geometry -----------------------------------------------------------

struct VerifyArgs {
  std::string check;
  std::string model;
  double gamma = 0.1;
  std::size_t samples = 10'000;
  double radius = 1.0;
  std::string times = "0,0.1,0.2,0.3,0.4,0.5";
  double dt = 0.01;
  std::string speeds;
  std::optional<double> box;
  double tolerance = 0.05;
  std::size_t grid = 1000;
};

int run_verify(const VerifyArgs& a, const Global& g) {
  const io::Model m = io::read_model(a.model);
  const Polytope& p = m.polytope;
  Rng rng(g.seed);
  json out = {{"check", a.check}};
  bool ok = true;
  if (a.check == "inner-identity") {
    const auto r = verify_inner_identity(p, a.gamma, a.samples, rng, a.radius, g.threads);
    out["checked"] = r.checked;
    out["violations"] = r.violations;
    ok = r.violations == 0;
  } else if (a.check == "margin-envelope") {
    MarginEnvelopeReport r;
    try {
      r = verify_margin_in_envelope(p, a.gamma, a.samples, rng, std::nullopt, std::nullopt, g.threads);
    } catch (const DomainError& e) {
      std::cerr << "not applicable: " << e.what() << '\n';
      return kFailure;
    }
    out["checked"] = r.checked;
    out["draws"] = r.draws;
    out["violations"] = r.violations;
    ok = r.violations == 0;
  } else if (a.check == "no-reenter") {
    std::vector<double> times(a.grid);
    for (std::size_t i = 0; i < a.grid; ++i) times[i] = 2.0 * static_cast<double>(i) / static_cast<double>(a.grid);
    std::size_t bad = 0;
    for (std::size_t trial = 0; trial < a.samples; ++trial) {
      Rng r = rng.child(trial);
      std::vector<double> sp(p.size());
      for (double& s : sp) s = r.uniform();
      const ExpandingPolytope q(p, sp);
      const Vector p0 = 2.0 * sample_unit_ball(p.dim(), r);
      const Vector v = 2.0 * r.uniform() * sample_unit_sphere(p.dim(), r);
      bad += !no_reenter_check(q, p0, v, times);
    }
    out["checked"] = a.samples;
    out["violations"] = bad;
    ok = bad == 0;
  } else {
    std::vector<double> sp = a.speeds.empty() ? std::vector<double>(p.size(), 1.0) : parse_list(a.speeds);
    const ExpandingPolytope q(p, sp);
    const std::vector<double> times = parse_list(a.times);
    const auto prof = hausdorff_speed_profile(q, times, a.dt, a.samples, rng, a.box, g.threads);
    std::size_t rises = 0;
    for (std::size_t i = 1; i < prof.size(); ++i) rises += prof[i] > prof[i - 1] + a.tolerance;
    out["times"] = times;
    out["speeds"] = prof;
    out["violations"] = rises;
    ok = rises == 0;
  }
  out["ok"] = ok;
  if (g.json) print_json(out);
  else std::cout << a.check << ": " << (ok ? "ok" : "VIOLATED") << ' ' << out.dump() << '\n';
  return ok ? kOk : kFailure;
}

// bench-fig3 ----------------------------------------------------------------

int run_fig3_cmd(ExperimentConfig cfg, const std::string& out_path, const Global& g) {
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  const auto rows = run_fig3(cfg);
  std::ostringstream csv;
  csv << "d,mean_halfspaces,std_halfspaces,trials,failures\n";
  csv.precision(17);
  for (const auto& r : rows)
    csv << r.d << ',' << r.mean_halfspaces << ',' << r.std_halfspaces << ',' << r.trials << ',' << r.failures << '\n';
  if (g.json) {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"d", r.d},
                     {"mean_halfspaces", r.mean_halfspaces},
                     {"std_halfspaces", r.std_halfspaces},
                     {"trials", r.trials},
                     {"failures", r.failures}});
    print_json(arr);
  } else {
    std::cout << csv.str();
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << csv.str();
  }
  return kOk;
}

// reduce-graph / lp-solve ---------------------------------------------------

int run_reduce(const std::string& edges, const std::string& out, const Global& g) {
  const Graph graph = io::read_edges(edges);
  const Sample s = graph_to_instance(graph);
  io::write_points_csv(out, s, graph.size());
  if (g.json) print_json({{"vertices", graph.size()}, {"edges", graph.edges().size()}, {"points", s.size()}});
  else std::cout << "wrote " << s.size() << " points in dimension " << graph.size() << " to " << out << '\n';
  return kOk;
}

int run_lp(const std::string& a_path, const std::string& b_path, bool strict, std::size_t max_updates,
           const Global& g) {
  const StrictLp lp(io::read_matrix_csv(a_path), io::read_vector_csv(b_path));
  const LpResult r = strict ? lp_strict_solve(lp, perceptron_separator(max_updates))
                            : lp_solve(lp, perceptron_strict_solver(max_updates));
  if (g.json) {
    json j = {{"status", to_string(r.status)}, {"oracle_calls", r.oracle_calls}, {"detail", r.detail}};
    if (r.solved()) j["x"] = io::to_json_array(r.x);
    print_json(j);
  } else if (r.solved()) {
    std::cout.precision(17);
    for (Eigen::Index i = 0; i < r.x.size(); ++i) std::cout << (i ? "," : "") << r.x[i];
    std::cout << '\n';
  } else {
    std::cerr << to_string(r.status) << ": " << r.detail << '\n';
  }
  switch (r.status) {
    case LpStatus::Solved: return kOk;
    case LpStatus::InfeasibleOrTimeout: return kInfeasible;
    case LpStatus::Degenerate: return kDegenerate;
  }
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn and analyze margin-separated convex polytopes"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  auto* fj = app.add_flag("--json", g.json, "JSON output");
  auto* fc = app.add_flag("--csv", g.csv, "CSV output");
  fj->excludes(fc);

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Sample a labeled instance from a random target polytope");
  c_gen->add_option("--dim", gen.dim, "Dimension (>= 2)")->required();
  c_gen->add_option("--points", gen.points, "Ball points drawn before the margin filter")->capture_default_str();
  c_gen->add_option("--margin", gen.margin, "Label margin")->capture_default_str();
  c_gen->add_option("--out", gen.out, "Points CSV")->required();
  c_gen->add_option("--target", gen.target, "Also write the target polytope as model JSON");

  LearnArgs learn;
  auto* c_learn = app.add_subcommand("learn", "Learn a polytope from a points CSV");
  c_learn->add_option("--algo", learn.algo)->check(CLI::IsMember({"enumerate", "greedy", "heuristic"}))->capture_default_str();
  c_learn->add_option("--gamma", learn.gamma, "Margin of the target class")->required();
  c_learn->add_option("--t", learn.t, "Number of halfspaces of the target (enumeration size, greedy cap hint)");
  c_learn->add_option("--in", learn.in, "Points CSV")->required()->check(CLI::ExistingFile);
  c_learn->add_option("--out", learn.out, "Model JSON")->required();
  c_learn->add_option("--budget", learn.budget, "Perceptron runs allowed during candidate generation");
  c_learn->add_option("--directions", learn.directions, "Directions per round for the heuristic")->capture_default_str();
  c_learn->add_option("--jl-out", learn.jl_out, "Dump the projection matrix as JSON");

  std::string eval_model, eval_in;
  std::optional<double> eval_gamma;
  auto* c_eval = app.add_subcommand("eval", "Score a model on a points CSV");
  c_eval->add_option("--model", eval_model)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--in", eval_in)->required()->check(CLI::ExistingFile);
  c_eval->add_option("--gamma", eval_gamma, "Margin for violation counts (default: the model's)");

  BoundsArgs ba;
  auto* c_bounds = app.add_subcommand("bounds", "VC and sample-size calculators");
  c_bounds->add_option("--what", ba.what)->required()->check(CLI::IsMember({"vc-h", "vc-p", "vc-env", "gen-err", "sample-size"}));
  c_bounds->add_option("--gamma", ba.gamma)->capture_default_str();
  c_bounds->add_option("--d", ba.d)->capture_default_str();
  c_bounds->add_option("--t", ba.t)->capture_default_str();
  c_bounds->add_option("--m", ba.m, "Sample size")->capture_default_str();
  c_bounds->add_option("--dvc", ba.dvc, "VC dimension")->capture_default_str();
  c_bounds->add_option("--eps", ba.eps)->capture_default_str();
  c_bounds->add_option("--delta", ba.delta)->capture_default_str();

  VerifyArgs va;
  auto* c_verify = app.add_subcommand("verify-geometry", "Monte-Carlo checks of margin and envelope geometry");
  c_verify->add_option("--check", va.check)->required()->check(CLI::IsMember({"inner-identity", "margin-envelope", "no-reenter", "hausdorff-speed"}));
  c_verify->add_option("--model", va.model)->required()->check(CLI::ExistingFile);
  c_verify->add_option("--gamma", va.gamma)->capture_default_str();
  c_verify->add_option("--samples", va.samples, "Sample points, trials or ray directions")->capture_default_str();
  c_verify->add_option("--radius", va.radius, "Sampling ball radius for inner-identity")->capture_default_str();
  c_verify->add_option("--times", va.times, "Comma-separated times for hausdorff-speed")->capture_default_str();
  c_verify->add_option("--dt", va.dt)->capture_default_str();
  c_verify->add_option("--speeds", va.speeds, "Comma-separated expansion speeds (default all 1)");
  c_verify->add_option("--box", va.box, "Clip to [-box, box]^d for the Hausdorff estimate");
  c_verify->add_option("--tolerance", va.tolerance, "Allowed rise in the speed profile")->capture_default_str();
  c_verify->add_option("--grid", va.grid, "Time grid points for no-reenter")->capture_default_str();

  ExperimentConfig fig;
  fig.trials = 100;
  std::string fig_out;
  auto* c_fig = app.add_subcommand("bench-fig3", "Halfspace counts of the heuristic across dimensions");
  c_fig->add_option("--dmin", fig.dim_lo)->capture_default_str();
  c_fig->add_option("--dmax", fig.dim_hi)->capture_default_str();
  c_fig->add_option("--points", fig.n_points)->capture_default_str();
  c_fig->add_option("--directions", fig.directions, "M")->capture_default_str();
  c_fig->add_option("--trials", fig.trials)->capture_default_str();
  c_fig->add_option("--margin", fig.margin)->capture_default_str();
  c_fig->add_option("--out", fig_out, "Also write the CSV here");

  std::string edges, reduce_out;
  auto* c_reduce = app.add_subcommand("reduce-graph", "Graph to separation instance");
  c_reduce->add_option("--edges", edges)->required()->check(CLI::ExistingFile);
  c_reduce->add_option("--out", reduce_out)->required();

  std::string lp_a, lp_b;
  bool lp_strict = false;
  std::size_t lp_updates = 200'000;
  auto* c_lp = app.add_subcommand("lp-solve", "Solve A x <= b (or A x < b) through a separator");
  c_lp->add_option("--A", lp_a)->required()->check(CLI::ExistingFile);
  c_lp->add_option("--b", lp_b)->required()->check(CLI::ExistingFile);
  c_lp->add_flag("--strict", lp_strict);
  c_lp->add_option("--max-updates", lp_updates, "Perceptron budget per oracle call")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_gen) return run_gen(gen, g);
    if (*c_learn) return run_learn(learn, g);
    if (*c_eval) return run_eval(eval_model, eval_in, eval_gamma, g);
    if (*c_bounds) return run_bounds(ba, g);
    if (*c_verify) return run_verify(va, g);
    if (*c_fig) return run_fig3_cmd(fig, fig_out, g);
    if (*c_reduce) return run_reduce(edges, reduce_out, g);
    if (*c_lp) return run_lp(lp_a, lp_b, lp_strict, lp_updates, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
