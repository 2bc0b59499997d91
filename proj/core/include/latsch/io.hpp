#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "latsch/connectivity.hpp"
#include "latsch/height.hpp"
#include "latsch/momentum.hpp"
#include "latsch/operators.hpp"
#include "latsch/ucp.hpp"

namespace latsch {

/// 17 significant digits, locale-independent.
std::string format_double(double x);

/// Write via a temporary file and an atomic rename; no partial files on error.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

/// "row col value" per nonzero entry, row-major, 0-based indices.
std::string coo_export(const TruncatedOperator& T);

/// CSV with header "index,eigenvalue".
std::string eigenvalues_csv(const std::vector<double>& eigenvalues);

std::string spectrum_json(const std::string& lattice, int d, int grid,
                          const std::vector<Interval>& intervals);

std::string thresholds_json(const std::string& lattice, int d, const ThresholdsResult& result);

/// CSV with header "x1,...,xd,abs_p,grad_norm".
std::string fermi_csv(const FermiSample& sample);

/// CSV with header "n,j,n1..nd,h" listing shell members for n = 1..n_max.
std::string shells_csv(const LatticeSpec& spec, const HeightFunction& hf, const VertexId& root,
                       int n_max);

std::string growth_report_json(const GrowthReport& report);

std::string ucp_report_json(const std::string& graph_id, const std::string& condition,
                            const std::string& result, const std::vector<VertexId>& witness);

std::string boundary_graph_json(const BoundaryGraph& G);

/// CSV with header "t,re_z1,im_z1,...,re_zd,im_zd,residual".
std::string path_csv(const PathSample& ps);

}  // namespace latsch
