#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quasumb/error.hpp"
#include "quasumb/export.hpp"
#include "quasumb/frame_flow.hpp"
#include "quasumb/generators.hpp"
#include "quasumb/loci_classify.hpp"
#include "quasumb/verify.hpp"

namespace quasumb {

/// Everything the command line can set. Only one subcommand runs, so all
/// subcommands bind into the same struct.
struct CliConfig {
  std::string builtin;
  std::string surface;
  std::string theta1, theta2;
  std::string f;
  std::string H, k;
  std::string u_range, v_range;
  double tol = kClassifyTol;
  double step = kDefaultStep;
  bool json = false;
  std::string out;
  std::string format = "obj";
  std::string example;
};

namespace cli {

inline double parse_double(const std::string& s) {
  double x = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw Error(ErrorKind::UsageError, "not a finite number: '" + s + "'");
  return x;
}

/// "lo:hi:n" with finite lo < hi and n >= 2.
inline GridAxis parse_axis(const std::string& s) {
  const auto a = s.find(':'), b = s.rfind(':');
  if (a == std::string::npos || a == b) throw Error(ErrorKind::UsageError, "range must be lo:hi:n, got '" + s + "'");
  const double lo = parse_double(s.substr(0, a)), hi = parse_double(s.substr(a + 1, b - a - 1));
  int n = 0;
  const std::string ns = s.substr(b + 1);
  const auto [ptr, ec] = std::from_chars(ns.data(), ns.data() + ns.size(), n);
  if (ec != std::errc() || ptr != ns.data() + ns.size()) throw Error(ErrorKind::UsageError, "bad sample count in '" + s + "'");
  if (!(lo < hi)) throw Error(ErrorKind::UsageError, "range needs lo < hi, got '" + s + "'");
  if (n < 2) throw Error(ErrorKind::UsageError, "range needs at least 2 samples, got '" + s + "'");
  return {lo, hi, n};
}

inline BuiltinId parse_builtin(const std::string& s) {
  for (BuiltinId id : {BuiltinId::Ex1, BuiltinId::Ex2, BuiltinId::Ex3, BuiltinId::Ex4, BuiltinId::Hyperboloid,
                       BuiltinId::TimelikePlane})
    if (s == to_string(id)) return id;
  throw Error(ErrorKind::UsageError, "unknown builtin '" + s + "'");
}

/// Region shown in the figures or natural for each builtin.
inline Grid default_grid(BuiltinId id) {
  constexpr double pi = std::numbers::pi;
  switch (id) {
    case BuiltinId::Ex1: return {{-3, 3, 32}, {-2, 2, 32}};
    case BuiltinId::Ex2: return {{-pi, pi, 32}, {-1, 1, 32}};
    case BuiltinId::Ex3: return {{-1.2, 1.2, 32}, {-1, 1, 32}};
    case BuiltinId::Ex4: return {{0, 2 * pi, 32}, {-3, 3, 32}};
    case BuiltinId::Hyperboloid: return {{-pi, pi, 32}, {-2, 2, 32}};
    case BuiltinId::TimelikePlane: return {{-2, 2, 32}, {-2, 2, 32}};
  }
  return {{-1, 1, 32}, {-1, 1, 32}};
}

/// Splits "a,b,c" on commas outside parentheses.
inline std::vector<std::string> split_components(const std::string& s) {
  std::vector<std::string> parts(1);
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) parts.emplace_back();
    else parts.back() += c;
  }
  return parts;
}

struct Source {
  SurfaceSpec spec;
  Grid grid;
};

inline Grid grid_from(const CliConfig& c, Grid fallback) {
  if (!c.u_range.empty()) fallback.u = parse_axis(c.u_range);
  if (!c.v_range.empty()) fallback.v = parse_axis(c.v_range);
  return fallback;
}

inline Source surface_source(const CliConfig& c) {
  const int given = !c.builtin.empty() + !c.surface.empty() + (!c.theta1.empty() || !c.theta2.empty());
  if (given != 1) throw Error(ErrorKind::UsageError, "give exactly one of --builtin, --surface, --theta1/--theta2");
  const Grid generic{{-1, 1, 32}, {-1, 1, 32}};
  if (!c.builtin.empty()) {
    const BuiltinId id = parse_builtin(c.builtin);
    return {builtin_example(id), grid_from(c, default_grid(id))};
  }
  if (!c.surface.empty()) {
    const auto parts = split_components(c.surface);
    if (parts.size() != 3) throw Error(ErrorKind::UsageError, "--surface needs three comma-separated components");
    return {expression_surface(parse_expr(parts[0]), parse_expr(parts[1]), parse_expr(parts[2]), c.surface),
            grid_from(c, generic)};
  }
  if (c.theta1.empty() || c.theta2.empty()) throw Error(ErrorKind::UsageError, "--theta1 and --theta2 go together");
  const Grid g = grid_from(c, {{-std::numbers::pi, std::numbers::pi, 32}, {-1, 1, 32}});
  const ThetaSpec t{parse_expr(c.theta1), parse_expr(c.theta2)};
  return {ruled_null_surface(t, {g.u.lo, g.u.hi, 256}), g};
}

/// Writes to --out when given, else to the command's output stream.
inline void emit(const CliConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw Error(ErrorKind::IOError, "cannot open " + c.out);
  file << text;
  file.flush();
  if (!file) throw Error(ErrorKind::IOError, "write failed for " + c.out);
}

inline MeshFormat parse_format(const std::string& s) {
  if (s == "obj") return MeshFormat::OBJ;
  if (s == "csv") return MeshFormat::CSV;
  throw Error(ErrorKind::UsageError, "unknown format '" + s + "'");
}

// --- subcommands ------------------------------------------------------------------------

inline std::string classify_text(const GlobalReport& r) {
  std::ostringstream os;
  const ClassCounts& c = r.counts;
  os << "verdict: " << to_string(r.verdict) << '\n'
     << "nodes: " << r.grid_size << '\n'
     << "umbilic: " << c.umbilic << '\n'
     << "quasi_umbilic: " << c.quasi_umbilic << '\n'
     << "real_diagonalizable: " << c.real_diagonalizable << '\n'
     << "complex_diagonalizable: " << c.complex_diagonalizable << '\n'
     << "not_timelike: " << c.not_timelike << '\n'
     << "failed: " << c.failed << '\n'
     << "K: " << fmt17(r.K.min) << " .. " << fmt17(r.K.max) << '\n'
     << "H: " << fmt17(r.H.min) << " .. " << fmt17(r.H.max) << '\n'
     << "disc: " << fmt17(r.disc.min) << " .. " << fmt17(r.disc.max) << '\n'
     << "umbilic_locus: " << r.umbilic_locus.size() << " samples\n";
  for (const std::string& n : r.notes) os << "note: " << n << '\n';
  return os.str();
}

inline int run_classify(const CliConfig& c, std::ostream& out) {
  const Source s = surface_source(c);
  const GlobalReport r = classify_surface(s.spec, s.grid, c.tol);
  emit(c, out, c.json ? report_json(r) + "\n" : classify_text(r));
  return 0;
}

inline int run_curvature(const CliConfig& c, std::ostream& out) {
  const Source s = surface_source(c);
  const auto nodes = evaluate_grid(s.spec, s.grid, c.tol);
  if (c.json) {
    emit(c, out, nodes_json(nodes).dump() + "\n");
  } else {
    std::ostringstream os;
    write_csv(os, mesh_nodes(nodes));
    emit(c, out, os.str());
  }
  return 0;
}

inline int run_locus(const CliConfig& c, std::ostream& out) {
  const Source s = surface_source(c);
  const UmbilicLocus l = umbilic_locus(s.spec, s.grid.u, s.grid.v.lo, s.grid.v.hi, c.tol);
  if (c.json) {
    emit(c, out, Json{{"umbilic_locus", locus_json(l.points)}, {"notes", l.notes}}.dump() + "\n");
  } else {
    std::ostringstream os;
    os << "u,v\n";
    for (const LocusPoint& p : l.points) os << fmt17(p.u) << ',' << fmt17(p.v) << '\n';
    emit(c, out, os.str());
  }
  return 0;
}

inline int run_mesh(const CliConfig& c, std::ostream& out) {
  const MeshFormat f = parse_format(c.format);
  const Source s = surface_source(c);
  std::ostringstream os;
  write_mesh(os, mesh_nodes(evaluate_grid(s.spec, s.grid, c.tol)), s.grid, f);
  emit(c, out, os.str());
  return 0;
}

inline int run_case1(const CliConfig& c, std::ostream& out) {
  const MeshFormat f = parse_format(c.format);
  const SurfaceSpec spec = case1_cylinder(parse_expr(c.f), NullFrame::standard());
  const Grid g = grid_from(c, {{-1, 1, 32}, {-1, 1, 32}});
  if (c.json) {
    emit(c, out, report_json(classify_surface(spec, g, c.tol)) + "\n");
    return 0;
  }
  std::ostringstream os;
  write_mesh(os, mesh_nodes(evaluate_grid(spec, g, c.tol)), g, f);
  emit(c, out, os.str());
  return 0;
}

inline int run_case2(const CliConfig& c, std::ostream& out) {
  const MeshFormat f = parse_format(c.format);
  if (!(c.step > 0)) throw Error(ErrorKind::UsageError, "--step must be positive");
  const Grid g = grid_from(c, {{0.5, 1.5, 16}, {0.5, 1.5, 16}});
  const Case2Reconstruction rec =
      reconstruct_case2(parse_expr(c.H), parse_expr(c.k), FrameState::standard(), g.u, g.v, c.step, kReconstructionStencil, c.tol);
  if (c.json) {
    double null_defect = 0, straight = 0;
    for (const Case2Node& n : rec.nodes) {
      null_defect = std::max(null_defect, n.null_defect);
      straight = std::max(straight, n.straight_defect);
    }
    Json nodes = Json::array();
    for (const Case2Node& n : rec.nodes)
      nodes.push_back({{"u", n.u}, {"v", n.v}, {"x", {n.x.x0, n.x.x1, n.x.x2}}, {"H", n.H}, {"class", to_string(n.cls)}});
    emit(c, out,
         Json{{"max_gram_defect", rec.max_gram_defect},
              {"max_null_defect", null_defect},
              {"max_straight_defect", straight},
              {"nodes", nodes}}
                 .dump() +
             "\n");
    return 0;
  }
  std::ostringstream os;
  write_mesh(os, mesh_nodes(rec), g, f);
  emit(c, out, os.str());
  return 0;
}

inline int run_verify(const CliConfig& c, std::ostream& out) {
  const std::vector<Check> checks = verify_example(c.example);
  const bool ok = std::all_of(checks.begin(), checks.end(), [](const Check& k) { return k.pass; });
  if (c.json) {
    Json a = Json::array();
    for (const Check& k : checks)
      a.push_back({{"name", k.name}, {"observed", k.observed}, {"requirement", k.requirement}, {"pass", k.pass}});
    emit(c, out, Json{{"example", c.example}, {"checks", a}, {"pass", ok}}.dump() + "\n");
  } else {
    std::ostringstream os;
    for (const Check& k : checks) {
      const std::string obs = k.observed.is_number() ? fmt17(k.observed.get<double>()) : k.observed.get<std::string>();
      os << (k.pass ? "PASS " : "FAIL ") << k.name << ": " << obs << " (" << k.requirement << ")\n";
    }
    emit(c, out, os.str());
  }
  return ok ? 0 : 1;
}

}  // namespace cli

/// Runs one command line (without the program name). Exit codes: 0 on
/// success, 1 on a domain or spec error, 2 on a usage error. Nothing is
/// thrown past this function.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CliConfig c;
  CLI::App app{"Quasi-umbilic timelike surfaces in Minkowski 3-space", "quasumb"};
  app.require_subcommand(1);

  const auto add_source = [&](CLI::App* s) {
    auto* b = s->add_option("--builtin", c.builtin, "ex1 | ex2 | ex3 | ex4 | hyperboloid | plane");
    auto* e = s->add_option("--surface", c.surface, "three expressions in u, v: \"x0,x1,x2\"");
    auto* t1 = s->add_option("--theta1", c.theta1, "angle of alpha' = (1, cos, sin), in u");
    auto* t2 = s->add_option("--theta2", c.theta2, "angle of the ruling direction, in u");
    b->excludes(e)->excludes(t1)->excludes(t2);
    e->excludes(t1)->excludes(t2);
  };
  const auto add_grid = [&](CLI::App* s) {
    s->add_option("--u", c.u_range, "u samples as lo:hi:n");
    s->add_option("--v", c.v_range, "v samples as lo:hi:n");
    s->add_option("--tol", c.tol, "classification tolerance")->check(CLI::PositiveNumber);
  };
  const auto add_output = [&](CLI::App* s, bool mesh) {
    s->add_flag("--json", c.json, "JSON instead of text");
    s->add_option("--out", c.out, "write to this file instead of stdout");
    if (mesh) s->add_option("--format", c.format, "obj | csv")->check(CLI::IsMember({"obj", "csv"}));
  };

  auto* classify = app.add_subcommand("classify", "classify every grid node and the surface as a whole");
  add_source(classify);
  add_grid(classify);
  add_output(classify, false);
  auto* curvature = app.add_subcommand("curvature", "K, H, discriminant and class per grid node");
  add_source(curvature);
  add_grid(curvature);
  add_output(curvature, false);
  auto* locus = app.add_subcommand("umbilic-locus", "umbilic points on each u sample, by bisection in v");
  add_source(locus);
  add_grid(locus);
  add_output(locus, false);
  auto* mesh = app.add_subcommand("mesh", "export the sampled surface as OBJ or CSV");
  add_source(mesh);
  add_grid(mesh);
  add_output(mesh, true);

  auto* reconstruct = app.add_subcommand("reconstruct", "build a surface from frame data");
  reconstruct->require_subcommand(1);
  auto* case1 = reconstruct->add_subcommand("case1", "flat null cylinder from f(u)");
  case1->add_option("--f", c.f, "the function f(u)")->required();
  add_grid(case1);
  add_output(case1, true);
  auto* case2 = reconstruct->add_subcommand("case2", "integrate the frame for mean curvature H and k");
  case2->add_option("--H", c.H, "mean curvature H(u)")->required();
  case2->add_option("--k", c.k, "the function k(u)")->required();
  case2->add_option("--step", c.step, "RK4 step length");
  add_grid(case2);
  add_output(case2, true);

  auto* verify = app.add_subcommand("verify", "check a worked example against its closed forms");
  verify->add_option("--example", c.example, "example name")->required()->check(CLI::IsMember(verify_example_names()));
  verify->add_flag("--json", c.json, "JSON instead of text");
  verify->add_option("--out", c.out, "write to this file instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (classify->parsed()) return cli::run_classify(c, out);
    if (curvature->parsed()) return cli::run_curvature(c, out);
    if (locus->parsed()) return cli::run_locus(c, out);
    if (mesh->parsed()) return cli::run_mesh(c, out);
    if (case1->parsed()) return cli::run_case1(c, out);
    if (case2->parsed()) return cli::run_case2(c, out);
    if (verify->parsed()) return cli::run_verify(c, out);
  } catch (const Error& e) {
    err << "quasumb: " << e.what() << '\n';
    return e.kind() == ErrorKind::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    err << "quasumb: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace quasumb
