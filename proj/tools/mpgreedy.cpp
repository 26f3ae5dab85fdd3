// Command-line front end for the mpgreedy library.
//
// Exit codes: 0 success, 1 usage, 2 numeric failure, 3 verification failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mpgreedy/mpgreedy.hpp"

namespace fs = std::filesystem;
using namespace mpgreedy;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumeric = 2;
constexpr int kVerification = 3;

// An option that can also be set from the key=value config file. Values given
// on the command line win.
struct Binding {
  std::string key;
  CLI::Option* opt = nullptr;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& desc) : app_(parent.add_subcommand(name, desc)) {}

  CLI::App* app() { return app_; }

  CLI::Option* flag(const std::string& key, double& v, const std::string& desc) {
    return bind(key, v, desc, [&v, key](const std::string& s) { v = io::to_double(s, key); }, [&v] { return io::fmt(v); });
  }
  CLI::Option* flag(const std::string& key, int& v, const std::string& desc) {
    return bind(key, v, desc, [&v, key](const std::string& s) { v = io::to_int(s, key); }, [&v] { return io::fmt(v); });
  }
  CLI::Option* flag(const std::string& key, std::string& v, const std::string& desc) {
    return bind(key, v, desc, [&v](const std::string& s) { v = s; }, [&v] { return v; });
  }

  void apply_config(const std::map<std::string, std::string>& cfg) {
    for (auto& b : bindings_) {
      auto it = cfg.find(b.key);
      if (it != cfg.end() && b.opt->count() == 0) b.set(it->second);
    }
  }

  io::Echo echo() const {
    io::Echo e{{"command", app_->get_name()}};
    for (const auto& b : bindings_) e.emplace_back(b.key, b.get());
    return e;
  }

 private:
  template <class T>
  CLI::Option* bind(const std::string& key, T& v, const std::string& desc, std::function<void(const std::string&)> set,
                    std::function<std::string()> get) {
    CLI::Option* o = app_->add_option("--" + key, v, desc)->capture_default_str();
    bindings_.push_back({key, o, std::move(set), std::move(get)});
    return o;
  }

  CLI::App* app_;
  std::vector<Binding> bindings_;
};

void write_file(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw usage_error("cannot write '" + path + "'");
  os << text;
  if (!os) throw usage_error("write failed for '" + path + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw usage_error("cannot read '" + path + "'");
  return is;
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

double meta_double(const io::Table& t, const std::string& key) {
  auto it = t.meta.find(key);
  if (it == t.meta.end()) throw usage_error("input is missing '" + key + "' in its header");
  return io::to_double(it->second, key);
}

void add_margins(io::Report& rep, const std::string& prefix, const ClosedFormBundle& b) {
  rep.set(prefix + "c", b.c);
  rep.set(prefix + "R_G", b.rg);
  rep.set(prefix + "R_G.maximizer", b.rg_maximizer);
  rep.set(prefix + "R_G.scan", b.rg_scan);
  for (const auto& m : b.margins) {
    rep.set(prefix + "margins." + m.name + ".lhs", m.lhs);
    rep.set(prefix + "margins." + m.name + ".bound", m.bound);
    rep.set(prefix + "margins." + m.name + ".satisfied", m.satisfied());
  }
}

void add_verification(io::Report& rep, const VerificationReport& v) {
  rep.set("verify.pass", v.pass());
  rep.set("verify.min_margin", v.min_margin());
  rep.set("verify.max_discrepancy", v.max_discrepancy());
  rep.set("verify.schedule.pass", v.schedule.pass);
  rep.set("verify.schedule.max_norm_error", v.schedule.max_norm_error);
  rep.set("verify.schedule.max_unit_error", v.schedule.max_unit_error);
  rep.set("verify.schedule.max_selection_error", v.schedule.max_selection_error);
  rep.set("verify.schedule.max_orthogonality", v.schedule.max_orthogonality);
  rep.set("verify.schedule.alpha_min", v.schedule.alpha_min);
  rep.set("verify.schedule.xi_min", v.schedule.xi_min);
  rep.set("verify.schedule.xi_max", v.schedule.xi_max);
  rep.set("verify.pairs.checked", v.pairs.pairs_checked);
  rep.set("verify.pairs.strict", v.pairs.strict);
  rep.set("verify.pairs.max_ratio", v.pairs.max_ratio);
  rep.set("verify.pairs.worst_n", v.pairs.worst_n);
  rep.set("verify.pairs.worst_k", v.pairs.worst_k);
  rep.set("verify.pairs.max_ratio_below", v.pairs.max_ratio_below);
  rep.set("verify.pairs.max_ratio_above", v.pairs.max_ratio_above);
  rep.set("verify.pairs.max_discrepancy", v.pairs.max_discrepancy);
  rep.set("verify.pairs.max_diagonal_error", v.pairs.max_diagonal_error);
  rep.set("verify.tilde.epsilon", v.tilde.epsilon);
  rep.set("verify.tilde.strict", v.tilde.strict);
  rep.set("verify.tilde.max_ratio", v.tilde.max_ratio);
  rep.set("verify.tilde.worst_n", v.tilde.worst_n);
  rep.set("verify.tilde.max_discrepancy", v.tilde.max_discrepancy);
  rep.set("verify.tilde.base_error", v.tilde.base_error);
  rep.set("verify.d_tilde_norm_error", v.d_tilde_norm_error);
  rep.set("verify.span_residual", v.span_residual);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy approximation algorithms and a worst-case dictionary for matching pursuit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file supplying defaults for any option");

  double beta_margin = 0.002, tau_margin = 0.02;
  auto add_point = [&](Command& c) {
    c.flag("beta_margin", beta_margin, "beta = beta* - beta_margin");
    c.flag("tau_margin", tau_margin, "tau = (1 - tau_margin) tau*(beta)");
  };

  // constants
  Command c_const(app, "constants", "rate exponent, critical constants and margins");
  double shrinkage = 1.0;
  std::string const_out = "constants.txt";
  c_const.flag("shrinkage", shrinkage, "shrinkage s in (0, 1]");
  add_point(c_const);
  c_const.flag("out", const_out, "report path");

  // solve_f
  Command c_solve(app, "solve_f", "solve the integral equation by bracketing iteration");
  int grid_m = 2001, max_iter = 500;
  double tol = 1e-8;
  std::string solve_dir = "solve_f";
  add_point(c_solve);
  c_solve.flag("grid", grid_m, "grid size M (odd)");
  c_solve.flag("tol", tol, "stop when sup|f_{j+2} - f_j| < tol");
  c_solve.flag("max_iter", max_iter, "iteration cap");
  c_solve.flag("out_dir", solve_dir, "directory for f0..f3.csv, f.csv, solve_f.txt");

  // make_phi
  Command c_phi(app, "make_phi", "mollify and normalize f into phi and check its conditions");
  std::string phi_in = "solve_f/f.csv", phi_out = "phi.csv", phi_report = "phi.txt";
  double t0 = 0.01, t_min = 1e-4;
  int phi_grid = 2001, a_points = 2000;
  c_phi.flag("f", phi_in, "converged f grid csv");
  c_phi.flag("t", t0, "initial mollifier width");
  c_phi.flag("t_min", t_min, "smallest width tried");
  c_phi.flag("phi_grid", phi_grid, "grid size for phi on [0, 1]");
  c_phi.flag("a_points", a_points, "evaluation points for the sup conditions");
  c_phi.flag("out", phi_out, "phi grid csv");
  c_phi.flag("report", phi_report, "condition report path");

  // build
  Command c_build(app, "build", "construct and certify the worst-case instance");
  std::string build_phi_in = "phi.csv", build_out = "instance.txt", build_report = "build.txt";
  int K = 200, N = 400, n_max = 5000, doublings = 4;
  double epsilon = 0.0;
  c_build.flag("phi", build_phi_in, "phi grid csv from make_phi");
  c_build.flag("K", K, "start index of the construction");
  c_build.flag("N", N, "first dictionary index (doubled on failure)");
  c_build.flag("n_max", n_max, "last constructed index");
  c_build.flag("max_doublings", doublings, "how often N may double");
  c_build.flag("epsilon", epsilon, "fixed epsilon (0 searches 2^-j)");
  c_build.flag("out", build_out, "instance file");
  c_build.flag("report", build_report, "construction diagnostics");

  // verify
  Command c_verify(app, "verify", "re-check every inequality of a stored instance");
  std::string verify_in = "instance.txt", verify_out = "verify.txt";
  c_verify.flag("instance", verify_in, "instance file");
  c_verify.flag("report", verify_out, "verification report");

  // run
  Command c_run(app, "run", "run a greedy algorithm on the instance target");
  std::string run_in = "instance.txt", run_out = "trace.csv", algorithm = "pga";
  int steps = 0;
  double run_shrink = 1.0;
  c_run.flag("instance", run_in, "instance file");
  c_run.flag("algorithm", algorithm, "pga, pga_shrink, oga or rga");
  c_run.flag("steps", steps, "number of steps (0 runs n_max - N)");
  c_run.flag("shrinkage", run_shrink, "shrinkage for pga_shrink");
  c_run.flag("out", run_out, "trace csv");

  // rate
  Command c_rate(app, "rate", "fit the decay exponent of a trace");
  std::string rate_in = "trace.csv", rate_out = "rate.txt";
  int fit_min = 500, fit_max = 0;
  double rate_alpha = 0.0;
  c_rate.flag("trace", rate_in, "trace csv");
  c_rate.flag("n_min", fit_min, "first index of the fit (instance indexing)");
  c_rate.flag("n_max", fit_max, "last index of the fit (0 = end of trace)");
  c_rate.flag("alpha", rate_alpha, "exponent for the bound witnesses (0 = 1/2 - beta)");
  c_rate.flag("out", rate_out, "report path");

  // plot
  Command c_plot(app, "plot", "render trace or grid csv files as SVG");
  std::vector<std::string> plot_in;
  std::string plot_out = "plot.svg", plot_title;
  c_plot.app()->add_option("--input", plot_in, "csv files (repeatable)")->required();
  c_plot.flag("title", plot_title, "plot title");
  c_plot.flag("out", plot_out, "svg path");

  // compare
  Command c_cmp(app, "compare", "run several algorithms on the instance and fit each");
  std::string cmp_in = "instance.txt", cmp_out = "compare.csv", cmp_algs = "pga,oga";
  int cmp_steps = 0, cmp_min = 500;
  double cmp_shrink = 0.5;
  c_cmp.flag("instance", cmp_in, "instance file");
  c_cmp.flag("algorithms", cmp_algs, "comma-separated algorithm list");
  c_cmp.flag("steps", cmp_steps, "steps per algorithm (0 runs n_max - N)");
  c_cmp.flag("shrinkage", cmp_shrink, "shrinkage for pga_shrink");
  c_cmp.flag("n_min", cmp_min, "first index of the fits");
  c_cmp.flag("out", cmp_out, "table csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    std::map<std::string, std::string> cfg;
    if (!config_path.empty()) {
      auto is = open_input(config_path);
      cfg = io::parse_key_values(is);
    }
    for (Command* c : {&c_const, &c_solve, &c_phi, &c_build, &c_verify, &c_run, &c_rate, &c_plot, &c_cmp}) {
      c->apply_config(cfg);
    }
    OperatingPoint op{beta_margin, tau_margin};

    if (c_const.app()->parsed()) {
      RateConstants rc = solve_gamma(shrinkage);
      double bstar = solve_beta_star();
      double tstar = tau_star(bstar);
      ClosedFormBundle crit = bundle(bstar, tstar);
      ClosedFormBundle at = bundle(op.beta(), op.tau());
      io::Report rep;
      rep.set("shrinkage", shrinkage);
      rep.set("gamma", rc.gamma);
      rep.set("alpha", rc.alpha);
      rep.set("beta", rc.beta);
      rep.set("gamma_residual", rc.residual);
      rep.set("beta_star", bstar);
      rep.set("tau_star", tstar);
      rep.set("alpha_from_beta_star", 0.5 - bstar);
      add_margins(rep, "critical.", crit);
      rep.set("operating.beta", op.beta());
      rep.set("operating.tau", op.tau());
      add_margins(rep, "operating.", at);
      rep.set("operating.all_satisfied", at.all_satisfied());
      write_file(const_out, render([&](std::ostream& os) { rep.write(os, "constants", c_const.echo()); }));
      std::cout << "alpha=" << io::fmt(rc.alpha) << "\n";
      return at.all_satisfied() ? kOk : kVerification;
    }

    if (c_solve.app()->parsed()) {
      double beta = op.beta(), tau = op.tau();
      ClosedFormBundle b = bundle(beta, tau);
      GridFunction G = power_law_G(b.c, beta, tau, static_cast<std::size_t>(grid_m));
      IterationReport br = bracket_sequence(G, tau, 4);
      IterationReport sol = solve_f(G, tau, tol, max_iter);
      io::Echo echo = c_solve.echo();
      for (int j = 0; j <= 3; ++j) {
        write_file((fs::path(solve_dir) / ("f" + std::to_string(j) + ".csv")).string(), render([&](std::ostream& os) {
                     io::write_header(os, "grid", echo);
                     os << "# name=f" << j << ",beta=" << io::fmt(beta) << ",tau=" << io::fmt(tau) << "\n";
                     io::write_grid_body(os, br.iterates[static_cast<std::size_t>(j)]);
                   }));
      }
      write_file((fs::path(solve_dir) / "f.csv").string(), render([&](std::ostream& os) {
                   io::write_header(os, "grid", echo);
                   os << "# name=f,beta=" << io::fmt(beta) << ",tau=" << io::fmt(tau) << "\n";
                   io::write_grid_body(os, sol.converged_f);
                 }));
      io::Report rep;
      rep.set("beta", beta);
      rep.set("tau", tau);
      rep.set("c", b.c);
      rep.set("R_G.closed_form", b.rg);
      rep.set("R_G.numeric", sol.rg);
      rep.set("iterations", sol.iterations);
      rep.set("bracket_width", sol.bracket_width);
      rep.set("residual_sup", sol.residual_sup);
      rep.set("f3_min", br.iterates[3].min_value());
      rep.set("upper_bracket_ok", sol.upper_bracket_ok);
      rep.set("lower_bracket_ok", sol.lower_bracket_ok);
      rep.set("derivative_max", sol.derivative_max);
      rep.set("derivative_bound", sol.derivative_bound);
      ConditionReport fc = check_conditions(sol.converged_f, beta, tau, ConditionMode::f_form);
      for (const auto& e : fc.entries) {
        rep.set("conditions." + e.name + ".sup", e.sup_value);
        rep.set("conditions." + e.name + ".argmax", e.argmax);
        rep.set("conditions." + e.name + ".pass", e.pass);
      }
      write_file((fs::path(solve_dir) / "solve_f.txt").string(),
                 render([&](std::ostream& os) { rep.write(os, "solve_f", echo); }));
      std::cout << "residual_sup=" << io::fmt(sol.residual_sup) << "\n";
      return kOk;
    }

    if (c_phi.app()->parsed()) {
      auto is = open_input(phi_in);
      io::Table t = io::read_table(is);
      double beta = meta_double(t, "beta");
      GridFunction f = io::grid_from_table(t);
      PhiOptions po;
      po.t = t0;
      po.t_min = t_min;
      po.grid = static_cast<std::size_t>(phi_grid);
      po.a_points = a_points;
      PhiProfile prof = build_phi(f, beta, po);
      io::Echo echo = c_phi.echo();
      write_file(phi_out, render([&](std::ostream& os) {
                   io::write_header(os, "grid", echo);
                   os << "# name=phi,beta=" << io::fmt(beta) << ",tau=" << io::fmt(prof.tau) << ",t=" << io::fmt(prof.t)
                      << ",C_t=" << io::fmt(prof.C_t) << "\n";
                   io::write_grid_body(os, prof.phi);
                 }));
      io::Report rep;
      rep.set("beta", beta);
      rep.set("tau", prof.tau);
      rep.set("t", prof.t);
      rep.set("delta", prof.delta);
      rep.set("C_t", prof.C_t);
      for (std::size_t i = 0; i < prof.attempts.size(); ++i) {
        rep.set("attempt." + std::to_string(i) + ".t", prof.attempts[i].first);
        rep.set("attempt." + std::to_string(i) + ".C_t", prof.attempts[i].second);
      }
      rep.set("equality.value", prof.conditions.equality_value);
      rep.set("equality.residual", prof.conditions.equality_residual);
      for (const auto& e : prof.conditions.entries) {
        rep.set("conditions." + e.name + ".sup", e.sup_value);
        rep.set("conditions." + e.name + ".argmax", e.argmax);
        rep.set("conditions." + e.name + ".pass", e.pass);
      }
      rep.set("conditions.all_pass", prof.conditions.all_pass());
      write_file(phi_report, render([&](std::ostream& os) { rep.write(os, "make_phi", echo); }));
      std::cout << "t=" << io::fmt(prof.t) << " C_t=" << io::fmt(prof.C_t) << "\n";
      return kOk;
    }

    if (c_build.app()->parsed()) {
      auto is = open_input(build_phi_in);
      io::Table t = io::read_table(is);
      PhiProfile prof;
      prof.phi = io::grid_from_table(t);
      prof.beta = meta_double(t, "beta");
      prof.tau = meta_double(t, "tau");
      prof.t = meta_double(t, "t");
      prof.C_t = meta_double(t, "C_t");
      prof.delta = prof.tau - 2.0 * prof.t;
      io::Echo echo = c_build.echo();
      io::Report rep;
      VerificationReport vr;
      AdversarialInstance inst;
      if (epsilon > 0.0) {
        ConstructionParams p{prof.beta, K, N, n_max, epsilon, prof};
        inst = finalize(construct(p), p);
        vr = verify(inst);
      } else {
        BuildOptions bo{K, N, n_max, doublings};
        BuildResult res = build_instance(prof, prof.beta, bo);
        for (std::size_t i = 0; i < res.attempts.size(); ++i) {
          rep.set("attempt." + std::to_string(i) + ".N", res.attempts[i].first);
          rep.set("attempt." + std::to_string(i) + ".max_ratio", res.attempts[i].second);
        }
        inst = std::move(res.instance);
        vr = res.report;
      }
      const auto& p = inst.params;
      rep.set("beta", p.beta);
      rep.set("K", p.K);
      rep.set("N", p.N);
      rep.set("n_max", p.n_max);
      rep.set("epsilon", p.epsilon);
      rep.set("variation_bound", inst.variation_bound);
      rep.set("f_norm", norm(inst.f));
      rep.set("alpha_n_max", inst.state.alpha[static_cast<std::size_t>(p.n_max)]);
      rep.set("xi_n_max", inst.state.xi[static_cast<std::size_t>(p.n_max)]);
      add_verification(rep, vr);
      write_file(build_report, render([&](std::ostream& os) { rep.write(os, "build", echo); }));
      if (!vr.pass()) {
        std::cerr << "build: instance fails verification\n";
        return kVerification;
      }
      write_file(build_out,
                 render([&](std::ostream& os) { io::write_instance(os, p, sequence_rows(inst.state), echo); }));
      std::cout << "N=" << p.N << " epsilon=" << io::fmt(p.epsilon) << " min_margin=" << io::fmt(vr.min_margin()) << "\n";
      return kOk;
    }

    if (c_verify.app()->parsed()) {
      auto is = open_input(verify_in);
      io::InstanceFile file = io::read_instance(is);
      AdversarialInstance inst = io::load_instance(file);
      VerificationReport vr = verify(inst);
      io::Report rep;
      rep.set("N", inst.params.N);
      rep.set("n_max", inst.params.n_max);
      add_verification(rep, vr);
      write_file(verify_out, render([&](std::ostream& os) { rep.write(os, "verify", c_verify.echo()); }));
      std::cout << "pass=" << io::fmt(vr.pass()) << " min_margin=" << io::fmt(vr.min_margin()) << "\n";
      return vr.pass() ? kOk : kVerification;
    }

    auto load = [](const std::string& path) {
      auto is = open_input(path);
      return io::load_instance(io::read_instance(is));
    };

    if (c_run.app()->parsed()) {
      AdversarialInstance inst = load(run_in);
      RunOptions ro;
      ro.algorithm = parse_algorithm(algorithm);
      ro.steps = steps > 0 ? steps : inst.params.n_max - inst.params.N;
      ro.shrinkage = run_shrink;
      ro.variation_bound = inst.variation_bound;
      GreedyTrace tr = run(inst.f, inst.dictionary(), ro);
      io::Echo meta{{"index_offset", io::fmt(inst.params.N)},
                    {"beta", io::fmt(inst.params.beta)},
                    {"variation_bound", io::fmt(inst.variation_bound)}};
      write_file(run_out, render([&](std::ostream& os) { io::write_trace_csv(os, tr, c_run.echo(), meta); }));
      std::cout << "steps=" << tr.steps.size() << "\n";
      return kOk;
    }

    if (c_rate.app()->parsed()) {
      auto is = open_input(rate_in);
      io::Table t = io::read_table(is);
      GreedyTrace tr = io::trace_from_table(t);
      int offset = t.meta.count("index_offset") ? io::to_int(t.meta.at("index_offset"), "index_offset") : 0;
      int hi = fit_max > 0 ? fit_max : (tr.steps.empty() ? 0 : tr.steps.back().step_index + offset);
      RateFit fit = fit_decay(tr, fit_min, hi, offset);
      io::Report rep;
      rep.set("index_offset", offset);
      rep.set("fit.slope", fit.slope);
      rep.set("fit.intercept", fit.intercept);
      rep.set("fit.r_squared", fit.r_squared);
      rep.set("fit.n_min", fit.n_min);
      rep.set("fit.n_max", fit.n_max);
      rep.set("fit.points", fit.points);
      double alpha = rate_alpha;
      if (alpha <= 0.0 && t.meta.count("beta")) alpha = 0.5 - meta_double(t, "beta");
      if (alpha > 0.0 && t.meta.count("variation_bound")) {
        BoundReport br = check_bounds(tr, alpha, meta_double(t, "variation_bound"), offset);
        rep.set("bounds.alpha", alpha);
        rep.set("bounds.upper_witness", br.upper_witness);
        rep.set("bounds.upper_at", br.upper_at);
        rep.set("bounds.lower_witness", br.lower_witness);
        rep.set("bounds.lower_at", br.lower_at);
      }
      write_file(rate_out, render([&](std::ostream& os) { rep.write(os, "rate", c_rate.echo()); }));
      std::cout << "slope=" << io::fmt(fit.slope) << "\n";
      return kOk;
    }

    if (c_plot.app()->parsed()) {
      std::vector<plot::Series> series;
      bool any_trace = false, any_grid = false;
      for (const auto& path : plot_in) {
        auto is = open_input(path);
        io::Table t = io::read_table(is);
        plot::Series s;
        s.name = t.meta.count("name") ? t.meta.at("name") : fs::path(path).stem().string();
        bool is_trace = std::find(t.columns.begin(), t.columns.end(), "residual_norm") != t.columns.end();
        if (is_trace) {
          any_trace = true;
          int offset = t.meta.count("index_offset") ? io::to_int(t.meta.at("index_offset"), "index_offset") : 0;
          if (t.meta.count("algorithm")) s.name = t.meta.at("algorithm");
          std::size_t cn = t.column("n"), cr = t.column("residual_norm");
          for (const auto& r : t.rows) {
            s.x.push_back(r[cn] + offset);
            s.y.push_back(r[cr]);
          }
        } else {
          any_grid = true;
          std::size_t cx = t.column("x"), cv = t.column("value");
          for (const auto& r : t.rows) {
            s.x.push_back(r[cx]);
            s.y.push_back(r[cv]);
          }
        }
        series.push_back(std::move(s));
      }
      if (any_trace && any_grid) throw usage_error("plot: cannot mix traces and grid functions");
      plot::PlotOptions po;
      po.title = plot_title;
      po.log_log = any_trace;
      po.x_label = any_trace ? "n" : "a";
      po.y_label = any_trace ? "residual norm" : "value";
      write_file(plot_out, plot::render_svg(series, po));
      return kOk;
    }

    if (c_cmp.app()->parsed()) {
      AdversarialInstance inst = load(cmp_in);
      std::vector<Algorithm> algs;
      for (const auto& name : io::split(cmp_algs, ',')) algs.push_back(parse_algorithm(name));
      CompareOptions co;
      co.steps = cmp_steps > 0 ? cmp_steps : inst.params.n_max - inst.params.N;
      co.shrinkage = cmp_shrink;
      co.variation_bound = inst.variation_bound;
      co.fit_min = cmp_min;
      co.index_offset = inst.params.N;
      auto rows = compare(inst.f, inst.dictionary(), algs, co);
      write_file(cmp_out, render([&](std::ostream& os) {
                   io::write_header(os, "compare", c_cmp.echo());
                   os << "algorithm,steps,final_residual,slope,r2\n";
                   for (const auto& r : rows) {
                     os << to_string(r.algorithm) << "," << r.steps << "," << io::fmt(r.final_residual) << ","
                        << io::fmt(r.slope) << "," << io::fmt(r.r2) << "\n";
                   }
                 }));
      for (const auto& r : rows) std::cout << to_string(r.algorithm) << " slope=" << io::fmt(r.slope) << "\n";
      return kOk;
    }
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
