#pragma once

// JSON / CSV encodings of profiles, curvature reports and submersion field
// tables.  Floats are written in shortest round-trip form so identical inputs
// give byte-identical files.

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "pscgeom/curvature.hpp"
#include "pscgeom/profiles.hpp"

namespace pscgeom {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

Json to_json(const CurvatureReport& report, bool include_samples = false);
// Header "<coordinate names>,s", one row per sample.
std::string to_csv(const CurvatureReport& report);

// {kind, domain: [t0, t1], pieces: [{type, params, sub_domain}]}
Json profile_to_json(const Profile& profile);
Profile profile_from_json(const Json& j);

// Header t,phi,dphi,ddphi.
std::string sample_csv(const Profile& profile, int points);

// Columns point_id, s_h, A_sq and optionally u (path parameter in [0, 1]).
// Rows sharing a u value form one path sample; without u the table is a
// single field.
struct FieldTable {
  std::vector<std::string> point_ids;  // from the first path sample
  std::vector<double> u;               // distinct path parameters, ascending
  std::vector<std::vector<double>> base_s;
  std::vector<std::vector<double>> a_norm_sq;
};

FieldTable read_field_csv(std::istream& in);
FieldTable read_field_csv_file(const std::string& path);

}  // namespace pscgeom
