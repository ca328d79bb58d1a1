#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasumb/error.hpp"
#include "quasumb/frame_flow.hpp"
#include "quasumb/grid.hpp"
#include "quasumb/loci_classify.hpp"

namespace quasumb {

/// %.17g in the C locale (the library never calls setlocale).
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

enum class MeshFormat { OBJ, CSV };

/// One exported vertex. `label` is the CSV class column: a point class, or
/// the error kind for a node the pipeline rejected.
struct MeshNode {
  double u = 0, v = 0;
  MVec3 x;
  double K = std::nan(""), H = std::nan(""), disc = std::nan("");
  std::string label;
  bool has_curvature = false;
  bool regular = true;  // false drops every face touching this node
};

inline std::vector<MeshNode> mesh_nodes(const std::vector<NodeResult>& nodes) {
  std::vector<MeshNode> out;
  out.reserve(nodes.size());
  for (const NodeResult& nd : nodes) {
    MeshNode m;
    m.u = nd.u;
    m.v = nd.v;
    m.x = nd.x;
    if (nd.error) {
      m.label = to_string(*nd.error);
      m.regular = *nd.error != ErrorKind::NotRegular && is_finite(nd.x);
    } else {
      m.K = nd.report.K;
      m.H = nd.report.H;
      m.disc = nd.report.disc;
      m.label = to_string(nd.report.cls);
      m.has_curvature = true;
    }
    out.push_back(m);
  }
  return out;
}

inline std::vector<MeshNode> mesh_nodes(const Case2Reconstruction& rec) {
  std::vector<MeshNode> out;
  out.reserve(rec.nodes.size());
  for (const Case2Node& nd : rec.nodes) out.push_back({nd.u, nd.v, nd.x, nd.K, nd.H, nd.disc, to_string(nd.cls), true});
  return out;
}

/// Wavefront OBJ. Vertices are row-major over the grid and written as
/// `v x1 x2 x0`, so the time axis is the vertical one. Each quad
/// (i,j) (i+1,j) (i+1,j+1) (i,j+1) becomes two triangles sharing the
/// (i,j)-(i+1,j+1) diagonal. Unusable nodes are written at the origin and
/// their faces are skipped, which keeps vertex numbering row-major.
inline void write_obj(std::ostream& os, const std::vector<MeshNode>& nodes, int nu, int nv) {
  os << "# quasumb mesh " << nu << "x" << nv << "\n";
  for (const MeshNode& m : nodes) {
    const MVec3 p = is_finite(m.x) ? m.x : MVec3{0, 0, 0};
    os << "v " << fmt17(p.x1) << ' ' << fmt17(p.x2) << ' ' << fmt17(p.x0) << '\n';
  }
  const auto ok = [&](int i, int j) {
    const MeshNode& m = nodes[static_cast<std::size_t>(i) * nv + j];
    return m.regular && is_finite(m.x);
  };
  const auto id = [&](int i, int j) { return i * nv + j + 1; };
  for (int i = 0; i + 1 < nu; ++i) {
    for (int j = 0; j + 1 < nv; ++j) {
      if (ok(i, j) && ok(i + 1, j) && ok(i + 1, j + 1)) os << "f " << id(i, j) << ' ' << id(i + 1, j) << ' ' << id(i + 1, j + 1) << '\n';
      if (ok(i, j) && ok(i + 1, j + 1) && ok(i, j + 1)) os << "f " << id(i, j) << ' ' << id(i + 1, j + 1) << ' ' << id(i, j + 1) << '\n';
    }
  }
}

inline void write_csv(std::ostream& os, const std::vector<MeshNode>& nodes) {
  os << "u,v,x0,x1,x2,K,H,disc,class\n";
  for (const MeshNode& m : nodes) {
    os << fmt17(m.u) << ',' << fmt17(m.v) << ',' << fmt17(m.x.x0) << ',' << fmt17(m.x.x1) << ',' << fmt17(m.x.x2)
       << ',';
    if (m.has_curvature) os << fmt17(m.K) << ',' << fmt17(m.H) << ',' << fmt17(m.disc);
    else os << ",,";
    os << ',' << m.label << '\n';
  }
}

inline void write_mesh(std::ostream& os, const std::vector<MeshNode>& nodes, const Grid& grid, MeshFormat f) {
  if (f == MeshFormat::OBJ) write_obj(os, nodes, grid.u.n, grid.v.n);
  else write_csv(os, nodes);
}

inline void export_mesh(const SurfaceSpec& spec, const Grid& grid, MeshFormat f, const std::string& path,
                        double tol = kClassifyTol) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::IOError, "cannot open " + path);
  write_mesh(file, mesh_nodes(evaluate_grid(spec, grid, tol)), grid, f);
  file.flush();
  if (!file) throw Error(ErrorKind::IOError, "write failed for " + path);
}

// --- JSON ---------------------------------------------------------------------------

// nlohmann::json keeps object keys sorted, so output is deterministic.
// Doubles are written in shortest round-trip form; NaN becomes null.
using Json = nlohmann::json;

inline Json extremum_json(const Extremum& e) { return {{"min", e.min}, {"max", e.max}}; }

inline Json locus_json(const std::vector<LocusPoint>& pts) {
  Json a = Json::array();
  for (const LocusPoint& p : pts) a.push_back({p.u, p.v});
  return a;
}

inline Json report_json_value(const GlobalReport& r) {
  const ClassCounts& c = r.counts;
  return {{"verdict", to_string(r.verdict)},
          {"grid_size", r.grid_size},
          {"counts",
           {{"umbilic", c.umbilic},
            {"quasi_umbilic", c.quasi_umbilic},
            {"real_diagonalizable", c.real_diagonalizable},
            {"complex_diagonalizable", c.complex_diagonalizable},
            {"not_timelike", c.not_timelike},
            {"failed", c.failed}}},
          {"K", extremum_json(r.K)},
          {"H", extremum_json(r.H)},
          {"disc", extremum_json(r.disc)},
          {"umbilic_locus", locus_json(r.umbilic_locus)},
          {"notes", r.notes}};
}

inline std::string report_json(const GlobalReport& r) { return report_json_value(r).dump(); }

inline Json nodes_json(const std::vector<NodeResult>& nodes) {
  Json a = Json::array();
  for (const NodeResult& nd : nodes) {
    if (nd.error) {
      a.push_back({{"u", nd.u}, {"v", nd.v}, {"error", to_string(*nd.error)}});
    } else {
      a.push_back({{"u", nd.u},
                   {"v", nd.v},
                   {"K", nd.report.K},
                   {"H", nd.report.H},
                   {"disc", nd.report.disc},
                   {"class", to_string(nd.report.cls)}});
    }
  }
  return a;
}

}  // namespace quasumb
