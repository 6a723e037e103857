#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stokes_summa/cauchy.hpp"
#include "stokes_summa/cover.hpp"
#include "stokes_summa/errors.hpp"
#include "stokes_summa/initial_data.hpp"
#include "stokes_summa/stokes.hpp"
#include "stokes_summa/version.hpp"

namespace stokes_summa {

// -------- deterministic JSON emission --------
// Field order is insertion order and every float prints as %.12e, so equal
// configs produce byte-identical artifacts.

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

class JsonWriter {
 public:
  std::string str() const { return out_; }

  JsonWriter& begin_object() { return token("{"); }
  JsonWriter& end_object() { return close("}"); }
  JsonWriter& begin_array() { return token("["); }
  JsonWriter& end_array() { return close("]"); }

  JsonWriter& key(const std::string& k) {
    comma();
    out_ += '"';
    out_ += k;
    out_ += "\":";
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double v) { return raw(format_double(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(long v) { return raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(const std::string& s) { return raw("\"" + escape(s) + "\""); }
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& value(complex c) {
    begin_array();
    value(c.real());
    value(c.imag());
    return end_array();
  }
  JsonWriter& null() { return raw("null"); }

 private:
  static std::string escape(const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      if (c == '\n') {
        r += "\\n";
        continue;
      }
      r += c;
    }
    return r;
  }
  void comma() {
    if (!out_.empty() && !pending_value_) {
      const char last = out_.back();
      if (last != '{' && last != '[') out_ += ',';
    }
  }
  JsonWriter& token(const char* t) {
    comma();
    out_ += t;
    pending_value_ = false;
    return *this;
  }
  JsonWriter& close(const char* t) {
    out_ += t;
    pending_value_ = false;
    return *this;
  }
  JsonWriter& raw(const std::string& s) {
    comma();
    out_ += s;
    pending_value_ = false;
    return *this;
  }
  std::string out_;
  bool pending_value_ = false;
};

// -------- strict parsing --------

using nlohmann::json;

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) ok = true;
    if (!ok) throw domain_error(where + ": unknown field \"" + it.key() + "\"");
  }
}

inline complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw domain_error(where + ": expected [re, im]");
  return complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace detail

/// {"variant": "...", "params": {...}}
inline InitialDatum parse_initial_datum(const json& j) {
  detail::reject_unknown(j, {"variant", "params"}, "phi");
  if (!j.contains("variant")) throw domain_error("phi: missing \"variant\"");
  const std::string v = j.at("variant").get<std::string>();
  const json params = j.value("params", json::object());
  if (v == "polynomial") {
    detail::reject_unknown(params, {"coeffs"}, "phi.params");
    std::vector<complex> cs;
    for (const auto& c : params.at("coeffs")) cs.push_back(detail::parse_complex(c, "phi"));
    return InitialDatum::polynomial(std::move(cs));
  }
  if (v == "constant") {
    detail::reject_unknown(params, {"value"}, "phi.params");
    return InitialDatum::constant(detail::parse_complex(params.at("value"), "phi"));
  }
  if (v == "exp") {
    detail::reject_unknown(params, {"lambda"}, "phi.params");
    return InitialDatum::exponential(detail::parse_complex(params.at("lambda"), "phi"));
  }
  if (v == "rational") {
    detail::reject_unknown(params, {"z0", "m"}, "phi.params");
    return InitialDatum::rational_pole(detail::parse_complex(params.at("z0"), "phi"),
                                       params.value("m", 1));
  }
  if (v == "power_branch") {
    detail::reject_unknown(params, {"z0", "alpha"}, "phi.params");
    return InitialDatum::power_branch(detail::parse_complex(params.at("z0"), "phi"),
                                      params.at("alpha").get<double>());
  }
  if (v == "log_branch") {
    detail::reject_unknown(params, {"z0"}, "phi.params");
    return InitialDatum::log_branch(detail::parse_complex(params.at("z0"), "phi"));
  }
  throw domain_error("phi: unknown variant \"" + v + "\"");
}

inline void emit_initial_datum(JsonWriter& w, const InitialDatum& d) {
  w.begin_object();
  w.key("variant").value(d.variant_name());
  w.key("params").begin_object();
  switch (d.variant()) {
    case InitialDatum::Variant::polynomial:
      w.key("coeffs").begin_array();
      for (complex c : d.coefficients()) w.value(c);
      w.end_array();
      break;
    case InitialDatum::Variant::exponential:
      w.key("lambda").value(d.lambda());
      break;
    case InitialDatum::Variant::rational_pole:
      w.key("z0").value(*d.singular_point());
      w.key("m").value(d.pole_order());
      break;
    case InitialDatum::Variant::power_branch:
      w.key("z0").value(*d.singular_point());
      w.key("alpha").value(d.alpha());
      break;
    case InitialDatum::Variant::log_branch:
      w.key("z0").value(*d.singular_point());
      break;
  }
  w.end_object();
  w.end_object();
}

/// {"p": int, "q": int, "r": int, "a": [re, im], "phi": {...}}
inline CauchyProblem parse_problem(const json& j) {
  detail::reject_unknown(j, {"p", "q", "r", "a", "phi"}, "problem");
  CauchyProblem cp;
  cp.p = j.at("p").get<int>();
  cp.q = j.at("q").get<int>();
  cp.r = j.at("r").get<int>();
  cp.a = detail::parse_complex(j.at("a"), "problem.a");
  cp.phi = parse_initial_datum(j.at("phi"));
  cp.validate();
  return cp;
}

inline void emit_problem(JsonWriter& w, const CauchyProblem& cp) {
  w.begin_object();
  w.key("p").value(cp.p);
  w.key("q").value(cp.q);
  w.key("r").value(cp.r);
  w.key("a").value(cp.a);
  w.key("phi");
  emit_initial_datum(w, cp.phi);
  w.end_object();
}

// -------- run configuration --------

struct TGridSpec {
  double modulus_min = 0.1;
  double modulus_max = 0.3;
  int count = 3;
  double argument = std::numeric_limits<double>::quiet_NaN();  // default: line/sum direction

  std::vector<double> moduli() const {
    std::vector<double> out;
    if (count <= 1) {
      out.push_back(modulus_min);
      return out;
    }
    for (int i = 0; i < count; ++i)
      out.push_back(modulus_min +
                    (modulus_max - modulus_min) * static_cast<double>(i) / (count - 1));
    return out;
  }
};

struct RunConfig {
  CauchyProblem problem;
  std::string command;  // classify | sum | stokes | jump | verify
  double tol = 1e-9;
  double eps = 0.25;
  double direction = std::numeric_limits<double>::quiet_NaN();
  complex z{0.0, 0.0};
  int line_index = 0;
  TGridSpec grid;
  std::string format = "json";  // json | csv
  std::string out_path;         // empty: stdout
  std::string kernel_cache;     // optional directory
};

inline RunConfig parse_run_config(const json& j) {
  detail::reject_unknown(j,
                         {"problem", "command", "tol", "eps", "direction", "z", "line_index",
                          "t_grid", "format", "out", "kernel_cache"},
                         "config");
  RunConfig rc;
  rc.problem = parse_problem(j.at("problem"));
  rc.command = j.value("command", std::string());
  rc.tol = j.value("tol", rc.tol);
  rc.eps = j.value("eps", rc.eps);
  if (j.contains("direction")) rc.direction = j.at("direction").get<double>();
  if (j.contains("z")) rc.z = detail::parse_complex(j.at("z"), "config.z");
  rc.line_index = j.value("line_index", 0);
  if (j.contains("t_grid")) {
    const json& g = j.at("t_grid");
    detail::reject_unknown(g, {"modulus_min", "modulus_max", "count", "argument"},
                           "config.t_grid");
    rc.grid.modulus_min = g.value("modulus_min", rc.grid.modulus_min);
    rc.grid.modulus_max = g.value("modulus_max", rc.grid.modulus_max);
    rc.grid.count = g.value("count", rc.grid.count);
    if (g.contains("argument")) rc.grid.argument = g.at("argument").get<double>();
  }
  rc.format = j.value("format", rc.format);
  rc.out_path = j.value("out", rc.out_path);
  rc.kernel_cache = j.value("kernel_cache", rc.kernel_cache);
  if (rc.format != "json" && rc.format != "csv")
    throw domain_error("config: format must be json or csv");
  return rc;
}

/// The resolved configuration (defaults filled in) embedded in every
/// artifact for reproducibility.
inline void emit_config(JsonWriter& w, const RunConfig& rc) {
  w.begin_object();
  w.key("version").value(std::string(version_string));
  w.key("command").value(rc.command);
  w.key("problem");
  emit_problem(w, rc.problem);
  w.key("tol").value(rc.tol);
  w.key("eps").value(rc.eps);
  if (std::isfinite(rc.direction))
    w.key("direction").value(rc.direction);
  else
    w.key("direction").null();
  w.key("z").value(rc.z);
  w.key("line_index").value(rc.line_index);
  w.key("t_grid").begin_object();
  w.key("modulus_min").value(rc.grid.modulus_min);
  w.key("modulus_max").value(rc.grid.modulus_max);
  w.key("count").value(rc.grid.count);
  if (std::isfinite(rc.grid.argument))
    w.key("argument").value(rc.grid.argument);
  else
    w.key("argument").null();
  w.end_object();
  w.key("format").value(rc.format);
  w.end_object();
}

inline void emit_jump_report(JsonWriter& w, const JumpReport& rep) {
  w.begin_object();
  w.key("line").begin_object();
  w.key("direction").value(rep.line.direction);
  w.key("k_sum").value(rep.line.k_sum);
  w.key("index").value(rep.line.index);
  w.key("origin").value(rep.line.origin == StokesLine::Origin::case1 ? "case1" : "case2");
  if (rep.line.origin == StokesLine::Origin::case2) {
    w.key("theta_z").value(rep.line.theta_z);
    w.key("conditioning_warning").value(rep.line.conditioning_warning);
  }
  const auto anti = rep.line.anti_stokes();
  w.key("anti_stokes").begin_array().value(anti[0]).value(anti[1]).end_array();
  w.end_object();
  w.key("samples").begin_array();
  for (const auto& s : rep.samples) {
    w.begin_object();
    w.key("t").value(complex(s.t.value()));
    if (s.closed)
      w.key("closed").value(*s.closed);
    else
      w.key("closed").null();
    if (s.pairing)
      w.key("pairing").value(*s.pairing);
    else
      w.key("pairing").null();
    if (s.lateral)
      w.key("lateral").value(*s.lateral);
    else
      w.key("lateral").null();
    w.key("eps").value(s.eps);
    w.key("max_rel_disagreement").value(s.max_rel_disagreement);
    w.end_object();
  }
  w.end_array();
  w.key("max_rel_disagreement").value(rep.max_rel_disagreement);
  w.end_object();
}

}  // namespace stokes_summa
