#include "latsch/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace latsch {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string coo_export(const TruncatedOperator& T) {
  std::string out;
  const int N = static_cast<int>(T.box.size());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double v = T.matrix(i, j);
      if (v == 0.0) continue;
      out += std::to_string(i) + " " + std::to_string(j) + " " + format_double(v) + "\n";
    }
  return out;
}

std::string eigenvalues_csv(const std::vector<double>& eigenvalues) {
  std::string out = "index,eigenvalue\n";
  for (size_t i = 0; i < eigenvalues.size(); ++i)
    out += std::to_string(i) + "," + format_double(eigenvalues[i]) + "\n";
  return out;
}

std::string spectrum_json(const std::string& lattice, int d, int grid,
                          const std::vector<Interval>& intervals) {
  nlohmann::ordered_json j;
  j["lattice"] = lattice;
  j["d"] = d;
  j["grid"] = grid;
  auto& arr = j["intervals"] = nlohmann::ordered_json::array();
  for (const auto& iv : intervals) arr.push_back({iv.lo, iv.hi});
  return j.dump(2) + "\n";
}

std::string thresholds_json(const std::string& lattice, int d, const ThresholdsResult& result) {
  nlohmann::ordered_json j;
  j["lattice"] = lattice;
  j["d"] = d;
  j["values"] = result.values;
  j["unconverged_candidates"] = result.unconverged.size();
  return j.dump(2) + "\n";
}

std::string fermi_csv(const FermiSample& sample) {
  if (sample.points.empty()) return "x1,abs_p,grad_norm\n";
  const size_t d = sample.points.front().size();
  std::string out;
  for (size_t i = 1; i <= d; ++i) out += "x" + std::to_string(i) + ",";
  out += "abs_p,grad_norm\n";
  for (size_t i = 0; i < sample.points.size(); ++i) {
    for (double c : sample.points[i]) out += format_double(c) + ",";
    out += format_double(sample.abs_p[i]) + "," + format_double(sample.grad_norms[i]) + "\n";
  }
  return out;
}

std::string shells_csv(const LatticeSpec& spec, const HeightFunction& hf, const VertexId& root,
                       int n_max) {
  std::string out = "n,j";
  for (int i = 1; i <= spec.d(); ++i) out += ",n" + std::to_string(i);
  out += ",h\n";
  for (int n = 1; n <= n_max; ++n) {
    auto shell = dependence_shell(spec, hf, root, n);
    for (const auto& v : shell.members) {
      out += std::to_string(n) + "," + std::to_string(v.cell);
      for (int c : v.n) out += "," + std::to_string(c);
      out += "," + std::to_string(hf.h(v)) + "\n";
    }
  }
  return out;
}

std::string growth_report_json(const GrowthReport& report) {
  nlohmann::ordered_json j;
  j["C0"] = report.C0;
  j["D0"] = report.D0;
  j["equation_vertices_checked"] = report.equation_vertices_checked;
  j["all_hold"] = report.all_hold();
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"n", r.n},
                    {"lhs", r.lhs},
                    {"sup_shell", r.sup_shell},
                    {"bound", r.bound},
                    {"margin", r.bound - r.lhs},
                    {"holds", r.holds}});
  return j.dump(2) + "\n";
}

namespace {

nlohmann::ordered_json vertex_json(const VertexId& v) {
  return {{"j", v.cell}, {"n", v.n}};
}

}  // namespace

std::string ucp_report_json(const std::string& graph_id, const std::string& condition,
                            const std::string& result, const std::vector<VertexId>& witness) {
  nlohmann::ordered_json j;
  j["graph_id"] = graph_id;
  j["condition"] = condition;
  j["result"] = result;
  auto& w = j["witness_vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : witness) w.push_back(vertex_json(v));
  return j.dump(2) + "\n";
}

std::string boundary_graph_json(const BoundaryGraph& G) {
  nlohmann::ordered_json j;
  auto& interior = j["interior"] = nlohmann::ordered_json::array();
  for (const auto& v : G.interior()) interior.push_back(vertex_json(v));
  auto& boundary = j["boundary"] = nlohmann::ordered_json::array();
  for (const auto& v : G.boundary()) boundary.push_back(vertex_json(v));
  auto& edges = j["edges"] = nlohmann::ordered_json::array();
  for (int i = 0; i < G.num_vertices(); ++i)
    for (int k : G.adjacency(i))
      if (i < k) edges.push_back({vertex_json(G.vertex(i)), vertex_json(G.vertex(k))});
  return j.dump(2) + "\n";
}

std::string path_csv(const PathSample& ps) {
  const int d = ps.points.empty() ? 0 : ps.points.front().dim();
  std::string out = "t";
  for (int i = 1; i <= d; ++i)
    out += ",re_z" + std::to_string(i) + ",im_z" + std::to_string(i);
  out += ",residual\n";
  for (size_t i = 0; i < ps.points.size(); ++i) {
    out += format_double(ps.t_grid[i]);
    for (const auto& c : ps.points[i].z)
      out += "," + format_double(c.real()) + "," + format_double(c.imag());
    out += "," + format_double(ps.residuals[i]) + "\n";
  }
  return out;
}

}  // namespace latsch
