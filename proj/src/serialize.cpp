#include "altproj/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace altproj {

namespace {

Matrix rows_to_columns(const json& rows, Index row_length, const char* what) {
  if (!rows.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  Matrix m(row_length, static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const json& row = rows[j];
    if (!row.is_array() || static_cast<Index>(row.size()) != row_length) {
      throw DimensionError(std::string(what) + ": row " + std::to_string(j) +
                           " has the wrong length");
    }
    for (Index i = 0; i < row_length; ++i) m(i, static_cast<Index>(j)) = row[i].get<double>();
  }
  return m;
}

json columns_to_rows(const Matrix& m) {
  json rows = json::array();
  for (Index j = 0; j < m.cols(); ++j) {
    json row = json::array();
    for (Index i = 0; i < m.rows(); ++i) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const Subspace& s) {
  return {{"ambient_dim", s.ambient_dim()}, {"basis", columns_to_rows(s.basis())}};
}

Subspace subspace_from_json(const json& j) {
  const auto d = j.at("ambient_dim").get<Index>();
  if (d < 1) throw DimensionError("subspace: ambient_dim must be positive");
  const Matrix basis = rows_to_columns(j.at("basis"), d, "subspace basis");
  const double defect = orthonormality_defect(basis);
  if (!(defect <= 1e-8)) {
    throw std::invalid_argument("subspace: basis rows are not orthonormal (defect " +
                                format_double(defect) + ")");
  }
  std::vector<Vector> cols;
  for (Index i = 0; i < basis.cols(); ++i) cols.emplace_back(basis.col(i));
  return orthonormalize(d, cols, 0.5);
}

json to_json(const SpectralModel& m) {
  return {{"values", m.values}, {"weights", m.weights}, {"eigenbasis", columns_to_rows(m.eigenbasis)}};
}

SpectralModel spectral_from_json(const json& j) {
  SpectralModel m;
  m.values = j.at("values").get<std::vector<double>>();
  m.weights = j.contains("weights") ? j.at("weights").get<std::vector<double>>()
                                    : std::vector<double>(m.values.size(), 1.0);
  const json& rows = j.at("eigenbasis");
  const Index d = rows.empty() ? 0 : static_cast<Index>(rows.at(0).size());
  m.eigenbasis = rows_to_columns(rows, d, "eigenbasis");
  for (double v : m.values) m.source_norm = std::max(m.source_norm, std::abs(v));
  m.validate();
  return m;
}

json to_json(const AngleReport& r) {
  return {{"friedrichs_cosine", r.friedrichs_cosine},
          {"principal_cosines", r.principal_cosines},
          {"intersection_rank", r.intersection_rank}};
}

json to_json(const SlowPointPlan& p) {
  return {{"s", p.s},         {"t", p.t},       {"k0", p.k0},
          {"k1", p.k1},       {"alpha", p.alpha}, {"bins", p.bins},
          {"valid_k_max", p.valid_k_max}};
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "k,error,kw_bound\n";
  for (std::size_t k = 0; k < trace.errors.size(); ++k) {
    out << (k + 1) << ',' << format_double(trace.errors[k]) << ','
        << format_double(trace.kw_bounds[k]) << '\n';
  }
}

void write_verification_csv(std::ostream& out, const BoundReport& report) {
  out << "k,n,lambda_k,t_bound,pba_norm,margin\n";
  for (const BoundRow& r : report.rows) {
    out << r.k << ',' << r.n << ',' << format_double(r.lambda_k) << ','
        << format_double(r.t_bound) << ',' << format_double(r.pba_norm) << ','
        << format_double(r.margin) << '\n';
  }
}

}  // namespace altproj
