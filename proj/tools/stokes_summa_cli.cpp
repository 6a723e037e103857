// stokes-summa: moment Borel-Laplace summation of the formal solutions of
// d_t u = a (d_t t)^p t^q d_z^r u, with Stokes line location and jump
// evaluation by closed form, hyperfunction pairing and lateral differences.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "stokes_summa/io.hpp"
#include "stokes_summa/stokes_summa.hpp"
#include "stokes_summa/verification.hpp"

namespace ss = stokes_summa;

namespace {

int thread_cap() {
  const char* env = std::getenv("STOKES_SUMMA_THREADS");
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (env) {
    const int v = std::atoi(env);
    if (v >= 1) cap = v;
  }
  return cap;
}

/// Index-parallel loop; results are written by index so the output order
/// never depends on the schedule.
template <class F>
void parallel_for(int n, F&& body) {
  const int threads = std::min(thread_cap(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

void write_output(const ss::RunConfig& rc, const std::string& payload) {
  if (rc.out_path.empty()) {
    std::cout << payload << "\n";
    return;
  }
  std::ofstream f(rc.out_path, std::ios::binary);
  if (!f) throw ss::domain_error("cannot open output file " + rc.out_path);
  f << payload << "\n";
}

std::string config_line(const ss::RunConfig& rc) {
  ss::JsonWriter w;
  ss::emit_config(w, rc);
  return w.str();
}

int cmd_classify(const ss::RunConfig& rc) {
  const ss::Regime reg = ss::classify(rc.problem);
  std::vector<ss::StokesLine> lines;
  if (reg.summable()) lines = ss::singular_directions(rc.problem, rc.z);
  ss::JsonWriter w;
  w.begin_object();
  w.key("config");
  ss::emit_config(w, rc);
  w.key("regime").value(reg.name());
  w.key("k").value(reg.k);
  w.key("stokes").begin_array();
  for (const auto& L : lines) w.value(L.direction);
  w.end_array();
  if (!reg.summable()) w.key("note").value("convergent regime, no Stokes analysis");
  w.end_object();
  write_output(rc, w.str());
  return 0;
}

int cmd_stokes(const ss::RunConfig& rc) {
  const auto lines = ss::singular_directions(rc.problem, rc.z);
  if (rc.format == "csv") {
    std::ostringstream os;
    os << "# stokes-summa " << ss::version_string << "\n# config " << config_line(rc) << "\n";
    os << "index,origin,direction,k_sum,anti_stokes_minus,anti_stokes_plus,conditioning_warning\n";
    for (const auto& L : lines) {
      const auto anti = L.anti_stokes();
      os << L.index << "," << (L.origin == ss::StokesLine::Origin::case1 ? "case1" : "case2")
         << "," << ss::format_double(L.direction) << "," << ss::format_double(L.k_sum) << ","
         << ss::format_double(anti[0]) << "," << ss::format_double(anti[1]) << ","
         << (L.conditioning_warning ? 1 : 0) << "\n";
    }
    write_output(rc, os.str());
    return 0;
  }
  ss::JsonWriter w;
  w.begin_object();
  w.key("config");
  ss::emit_config(w, rc);
  w.key("lines").begin_array();
  for (const auto& L : lines) {
    const auto anti = L.anti_stokes();
    w.begin_object();
    w.key("index").value(L.index);
    w.key("origin").value(L.origin == ss::StokesLine::Origin::case1 ? "case1" : "case2");
    w.key("direction").value(L.direction);
    w.key("k_sum").value(L.k_sum);
    w.key("anti_stokes").begin_array().value(anti[0]).value(anti[1]).end_array();
    w.key("conditioning_warning").value(L.conditioning_warning);
    w.end_object();
  }
  w.end_array();
  if (lines.empty()) w.key("note").value("convergent regime, no Stokes analysis");
  w.end_object();
  write_output(rc, w.str());
  return 0;
}

int cmd_sum(const ss::RunConfig& rc) {
  const ss::Regime reg = ss::classify(rc.problem);
  if (!std::isfinite(rc.direction) && reg.summable())
    throw ss::domain_error("sum: a summable regime needs --direction");
  const double d = std::isfinite(rc.direction) ? rc.direction : 0.0;
  if (reg.summable()) {
    for (const auto& L : ss::singular_directions(rc.problem, rc.z)) {
      if (std::abs(d - L.direction) < 1e-12)
        throw ss::domain_error("sum: direction lies on the Stokes line index " +
                               std::to_string(L.index) + " at direction " +
                               ss::format_double(L.direction));
    }
  }
  const double targ = std::isfinite(rc.grid.argument) ? rc.grid.argument : d;
  const auto moduli = rc.grid.moduli();
  const int n = static_cast<int>(moduli.size());
  std::vector<ss::complex> values(moduli.size());
  std::vector<double> errors(moduli.size(), 0.0);
  ss::QuadratureConfig cfg;
  cfg.abs_tol = rc.tol;
  if (reg.summable()) {
    const ss::KernelPair kp = ss::kernel_for(rc.problem);
    parallel_for(n, [&](int i) {
      const auto out = ss::lateral_sum(rc.problem, d, ss::CoverPoint::polar(moduli[static_cast<std::size_t>(i)], targ),
                                       rc.z, kp, cfg);
      values[static_cast<std::size_t>(i)] = out.value;
      errors[static_cast<std::size_t>(i)] = out.error;
    });
  } else {
    for (int i = 0; i < n; ++i)
      values[static_cast<std::size_t>(i)] =
          ss::exact_sum(rc.problem, std::polar(moduli[static_cast<std::size_t>(i)], targ), rc.z);
  }
  if (rc.format == "csv") {
    std::ostringstream os;
    os << "# stokes-summa " << ss::version_string << "\n# config " << config_line(rc) << "\n";
    os << "t_re,t_im,u_re,u_im,error\n";
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      const ss::complex t = std::polar(moduli[i], targ);
      os << ss::format_double(t.real()) << "," << ss::format_double(t.imag()) << ","
         << ss::format_double(values[i].real()) << "," << ss::format_double(values[i].imag())
         << "," << ss::format_double(errors[i]) << "\n";
    }
    write_output(rc, os.str());
    return 0;
  }
  ss::JsonWriter w;
  w.begin_object();
  w.key("config");
  ss::emit_config(w, rc);
  w.key("regime").value(reg.name());
  w.key("samples").begin_array();
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    w.begin_object();
    w.key("t").value(ss::complex(std::polar(moduli[i], targ)));
    w.key("u").value(values[i]);
    w.key("error").value(errors[i]);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  write_output(rc, w.str());
  return 0;
}

int cmd_jump(const ss::RunConfig& rc) {
  const auto lines = ss::singular_directions(rc.problem, rc.z);
  if (lines.empty()) throw ss::domain_error("jump: no Stokes lines in this regime");
  if (rc.line_index < 0 || rc.line_index >= static_cast<int>(lines.size()))
    throw ss::domain_error("jump: line index out of range");
  ss::QuadratureConfig cfg;
  cfg.abs_tol = rc.tol;
  const ss::StokesLine line = lines[static_cast<std::size_t>(rc.line_index)];
  const auto moduli = rc.grid.moduli();
  const ss::KernelPair kp = ss::kernel_for(rc.problem);
  std::vector<ss::JumpSample> samples(moduli.size());
  parallel_for(static_cast<int>(moduli.size()), [&](int i) {
    samples[static_cast<std::size_t>(i)] = ss::jump_sample(
        rc.problem, line, moduli[static_cast<std::size_t>(i)], rc.z, kp, rc.eps, cfg);
  });
  ss::JumpReport rep;
  rep.line = line;
  rep.samples = samples;
  for (const auto& s : samples)
    rep.max_rel_disagreement = std::max(rep.max_rel_disagreement, s.max_rel_disagreement);

  if (rc.format == "csv") {
    std::ostringstream os;
    os << "# stokes-summa " << ss::version_string << "\n# config " << config_line(rc) << "\n";
    os << "t_re,t_im,closed_re,closed_im,pairing_re,pairing_im,lateral_re,lateral_im,eps,"
          "max_rel_disagreement\n";
    for (const auto& s : rep.samples) {
      const ss::complex t = s.t.value();
      auto opt = [](const std::optional<ss::complex>& v, int which) {
        if (!v) return std::string("nan");
        return ss::format_double(which == 0 ? v->real() : v->imag());
      };
      os << ss::format_double(t.real()) << "," << ss::format_double(t.imag()) << ","
         << opt(s.closed, 0) << "," << opt(s.closed, 1) << "," << opt(s.pairing, 0) << ","
         << opt(s.pairing, 1) << "," << opt(s.lateral, 0) << "," << opt(s.lateral, 1) << ","
         << ss::format_double(s.eps) << "," << ss::format_double(s.max_rel_disagreement)
         << "\n";
    }
    write_output(rc, os.str());
    return 0;
  }
  ss::JsonWriter w;
  w.begin_object();
  w.key("config");
  ss::emit_config(w, rc);
  w.key("report");
  ss::emit_jump_report(w, rep);
  w.end_object();
  write_output(rc, w.str());
  return 0;
}

int cmd_verify(const ss::RunConfig& rc) {
  const auto results = ss::run_acceptance_checks();
  bool all = true;
  ss::JsonWriter w;
  w.begin_object();
  w.key("config");
  ss::emit_config(w, rc);
  w.key("checks").begin_array();
  for (const auto& r : results) {
    std::fprintf(stderr, "[%s] %2d. %-28s max_dev %.3e  tol %.3e  (%.2f s)%s%s\n",
                 r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.max_dev, r.tol, r.seconds,
                 r.detail.empty() ? "" : "  ", r.detail.c_str());
    all = all && r.pass;
    w.begin_object();
    w.key("id").value(r.id);
    w.key("name").value(r.name);
    w.key("pass").value(r.pass);
    w.key("max_dev").value(r.max_dev);
    w.key("tol").value(r.tol);
    w.key("seconds").value(r.seconds);
    if (!r.detail.empty()) w.key("detail").value(r.detail);
    w.end_object();
  }
  w.end_array();
  w.key("all_pass").value(all);
  w.end_object();
  write_output(rc, w.str());
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment Borel-Laplace sums, Stokes lines and jumps for d_t u = a (d_t t)^p t^q d_z^r u"};
  app.set_version_flag("--version", std::string(ss::version_string));

  std::string config_path, out_path, format;
  double tol = -1.0, eps = -1.0, direction = std::numeric_limits<double>::quiet_NaN();
  int line_index = -1;
  std::vector<double> tmod;
  double targ = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> zvals;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", config_path, "problem/run configuration (JSON)");
    if (need_config) opt->required();
    sub->add_option("--tol", tol, "absolute quadrature tolerance");
    sub->add_option("--eps", eps, "lateral offset for jumps");
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "json|csv");
    sub->add_option("--direction", direction, "summation direction (cover radians)");
    sub->add_option("--line", line_index, "Stokes line index");
    sub->add_option("--t-modulus", tmod, "t grid: modulus_min [modulus_max count]")
        ->expected(1, 3);
    sub->add_option("--t-argument", targ, "t grid: cover argument");
    sub->add_option("--z", zvals, "evaluation point z (re [im])")->expected(1, 2);
  };

  auto* c_classify = app.add_subcommand("classify", "regime, index k and singular directions");
  auto* c_sum = app.add_subcommand("sum", "lateral Borel-Laplace sum u^d(t, z) on a t-grid");
  auto* c_stokes = app.add_subcommand("stokes", "Stokes and anti-Stokes line table");
  auto* c_jump = app.add_subcommand("jump", "jump across one Stokes line by every route");
  auto* c_verify = app.add_subcommand("verify", "run the verification suite");
  for (auto* sub : {c_classify, c_sum, c_stokes, c_jump})
    add_common(sub, true);
  add_common(c_verify, false);
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    ss::RunConfig rc;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ss::domain_error("cannot read config file " + config_path);
      ss::json j = ss::json::parse(f);
      rc = ss::parse_run_config(j);
    } else {
      rc.problem = ss::CauchyProblem{2, 0, 0, ss::complex(1.0),
                                     ss::InitialDatum::constant(ss::complex(1.0))};
    }
    if (tol > 0.0) rc.tol = tol;
    if (eps > 0.0) rc.eps = eps;
    if (std::isfinite(direction)) rc.direction = direction;
    if (line_index >= 0) rc.line_index = line_index;
    if (!format.empty()) rc.format = format;
    if (!out_path.empty()) rc.out_path = out_path;
    if (!tmod.empty()) {
      rc.grid.modulus_min = tmod[0];
      rc.grid.modulus_max = tmod.size() > 1 ? tmod[1] : tmod[0];
      rc.grid.count = tmod.size() > 2 ? static_cast<int>(tmod[2]) : 1;
    }
    if (std::isfinite(targ)) rc.grid.argument = targ;
    if (!zvals.empty()) rc.z = ss::complex(zvals[0], zvals.size() > 1 ? zvals[1] : 0.0);
    if (rc.format != "json" && rc.format != "csv")
      throw ss::domain_error("--format must be json or csv");

    if (c_classify->parsed()) {
      rc.command = "classify";
      return cmd_classify(rc);
    }
    if (c_sum->parsed()) {
      rc.command = "sum";
      return cmd_sum(rc);
    }
    if (c_stokes->parsed()) {
      rc.command = "stokes";
      return cmd_stokes(rc);
    }
    if (c_jump->parsed()) {
      rc.command = "jump";
      return cmd_jump(rc);
    }
    rc.command = "verify";
    return cmd_verify(rc);
  } catch (const ss::accuracy_error& e) {
    std::cerr << "numerical accuracy failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
