#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "altproj/dynamics.hpp"
#include "altproj/models.hpp"
#include "altproj/slowpoint.hpp"
#include "altproj/spectral.hpp"
#include "altproj/subspace.hpp"

namespace altproj {

using json = nlohmann::json;

/// Shortest form that keeps 17 significant digits ("%.17g").
std::string format_double(double v);

/// {"ambient_dim": d, "basis": [[...], ...]}, one row per basis vector.
json to_json(const Subspace& s);
/// Rejects bases whose orthonormality defect exceeds 1e-8; accepted bases
/// are re-orthonormalized.
Subspace subspace_from_json(const json& j);

/// {"values": [...], "weights": [...], "eigenbasis": [[...], ...]} with one
/// eigenbasis row per atom.
json to_json(const SpectralModel& m);
SpectralModel spectral_from_json(const json& j);

json to_json(const AngleReport& r);
json to_json(const SlowPointPlan& p);

/// Header `k,error,kw_bound`.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);
/// Header `k,n,lambda_k,t_bound,pba_norm,margin`.
void write_verification_csv(std::ostream& out, const BoundReport& report);

}  // namespace altproj
