#include "pscgeom/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pscgeom/error.hpp"

namespace pscgeom {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json to_json(const CurvatureReport& r, bool include_samples) {
  Json j;
  j["verdict"] = to_string(r.verdict.kind);
  if (r.verdict.kind == VerdictKind::Positive) j["margin"] = r.verdict.margin;
  j["s_min"] = r.s_min;
  j["s_max"] = r.s_max;
  j["scale"] = r.scale;
  j["tolerance"] = {{"flat", r.tolerances.flat},
                    {"non_negative", r.tolerances.non_negative},
                    {"applied", r.verdict.tolerance}};
  j["grid"] = r.grid;
  j["crosscheck"] = r.crosscheck;
  j["coordinates"] = r.coordinate_names;
  j["sample_count"] = r.samples.size();
  if (include_samples) {
    Json rows = Json::array();
    for (const auto& s : r.samples) {
      Json row = s.coords;
      row.push_back(s.s);
      rows.push_back(std::move(row));
    }
    j["samples"] = std::move(rows);
  }
  return j;
}

std::string to_csv(const CurvatureReport& r) {
  std::string out;
  for (const auto& name : r.coordinate_names) out += name + ",";
  out += "s\n";
  for (const auto& s : r.samples) {
    for (double c : s.coords) out += format_double(c) + ",";
    out += format_double(s.s) + "\n";
  }
  return out;
}

namespace {

Json piece_params(const Piece& p) {
  Json params;
  params["origin"] = p.origin;
  params["outer_power"] = p.outer_power;
  switch (p.type) {
    case PieceType::Constant:
      params["value"] = p.value;
      break;
    case PieceType::Linear:
      params["value"] = p.value;
      params["slope"] = p.slope;
      break;
    case PieceType::Sine:
      params["amplitude"] = p.amplitude;
      params["rate"] = p.rate;
      break;
    case PieceType::Power:
      params["coeff"] = p.coeff;
      params["exponent"] = p.exponent;
      break;
    case PieceType::Quintic:
      params["coeffs"] = p.coeffs;
      break;
    case PieceType::LogSmoothstep:
      params["from"] = p.from;
      params["to"] = p.to;
      params["width"] = p.width;
      break;
  }
  return params;
}

double number(const Json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number())
    fail(ErrorKind::InvalidParameter, std::string("profile parameter '") + key +
                                          "' must be a number");
  return obj.at(key).get<double>();
}

double required(const Json& obj, const char* key) {
  if (!obj.contains(key))
    fail(ErrorKind::InvalidParameter, std::string("profile piece is missing '") + key + "'");
  return number(obj, key, 0.0);
}

}  // namespace

Json profile_to_json(const Profile& profile) {
  Json j;
  j["kind"] = to_string(profile.kind());
  j["domain"] = {profile.domain().lo, profile.domain().hi};
  Json pieces = Json::array();
  for (const auto& p : profile.pieces()) {
    pieces.push_back({{"type", to_string(p.type)},
                      {"params", piece_params(p)},
                      {"sub_domain", {p.sub_domain.lo, p.sub_domain.hi}}});
  }
  j["pieces"] = std::move(pieces);
  return j;
}

Profile profile_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("pieces") || !j.at("pieces").is_array())
    fail(ErrorKind::InvalidParameter, "profile JSON needs a 'pieces' array");
  std::vector<Piece> pieces;
  for (const auto& pj : j.at("pieces")) {
    Piece p;
    p.type = piece_type_from_string(pj.at("type").get<std::string>());
    const auto& sd = pj.at("sub_domain");
    if (!sd.is_array() || sd.size() != 2)
      fail(ErrorKind::InvalidParameter, "sub_domain must be [lo, hi]");
    p.sub_domain = {sd[0].get<double>(), sd[1].get<double>()};
    const Json params = pj.value("params", Json::object());
    p.origin = number(params, "origin", 0.0);
    p.outer_power = number(params, "outer_power", 1.0);
    switch (p.type) {
      case PieceType::Constant:
        p.value = required(params, "value");
        break;
      case PieceType::Linear:
        p.value = required(params, "value");
        p.slope = required(params, "slope");
        break;
      case PieceType::Sine:
        p.amplitude = required(params, "amplitude");
        p.rate = required(params, "rate");
        break;
      case PieceType::Power:
        p.coeff = required(params, "coeff");
        p.exponent = required(params, "exponent");
        break;
      case PieceType::Quintic: {
        const auto& c = params.at("coeffs");
        if (!c.is_array() || c.size() != 6)
          fail(ErrorKind::InvalidParameter, "quintic needs 6 coefficients");
        for (std::size_t k = 0; k < 6; ++k) p.coeffs[k] = c[k].get<double>();
        break;
      }
      case PieceType::LogSmoothstep:
        p.from = required(params, "from");
        p.to = required(params, "to");
        p.width = required(params, "width");
        if (!(p.from > 0.0 && p.to > 0.0 && p.width > 0.0))
          fail(ErrorKind::InvalidParameter, "log_smoothstep needs positive from/to/width");
        break;
    }
    pieces.push_back(p);
  }
  Profile profile(std::move(pieces));
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    if (!d.is_array() || d.size() != 2 ||
        std::abs(d[0].get<double>() - profile.domain().lo) > 1e-12 ||
        std::abs(d[1].get<double>() - profile.domain().hi) > 1e-12)
      fail(ErrorKind::InvalidParameter, "declared domain does not match the pieces");
  }
  return profile;
}

std::string sample_csv(const Profile& profile, int points) {
  std::string out = "t,phi,dphi,ddphi\n";
  for (double t : linspace(profile.domain().lo, profile.domain().hi, points)) {
    const Jet j = profile.eval(t);
    out += format_double(t) + "," + format_double(j.value) + "," + format_double(j.d1) +
           "," + format_double(j.d2) + "\n";
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    out.push_back(cell);
  }
  return out;
}

double parse_number(const std::string& s, int line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorKind::ConfigError,
         "line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  return v;
}

}  // namespace

FieldTable read_field_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) fail(ErrorKind::ConfigError, "field CSV is empty");
  const auto header = split(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_id = col("point_id");
  const int c_s = col("s_h");
  const int c_a = col("A_sq");
  const int c_u = col("u");
  if (c_id < 0 || c_s < 0 || c_a < 0)
    fail(ErrorKind::ConfigError, "field CSV header must contain point_id, s_h, A_sq");
  for (const auto& h : header)
    if (h != "point_id" && h != "s_h" && h != "A_sq" && h != "u")
      fail(ErrorKind::ConfigError, "line 1: unknown column '" + h + "'");

  std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_u;
  std::map<double, std::vector<std::string>> ids_by_u;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      fail(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(header.size()) + " columns");
    const double u = c_u >= 0 ? parse_number(cells[static_cast<std::size_t>(c_u)], line_no) : 0.0;
    auto& slot = by_u[u];
    slot.first.push_back(parse_number(cells[static_cast<std::size_t>(c_s)], line_no));
    slot.second.push_back(parse_number(cells[static_cast<std::size_t>(c_a)], line_no));
    ids_by_u[u].push_back(cells[static_cast<std::size_t>(c_id)]);
  }
  if (by_u.empty()) fail(ErrorKind::ConfigError, "field CSV has no data rows");

  FieldTable t;
  t.point_ids = ids_by_u.begin()->second;
  for (auto& [u, fields] : by_u) {
    if (ids_by_u[u] != t.point_ids)
      fail(ErrorKind::ConfigError, "every path sample must list the same point ids");
    t.u.push_back(u);
    t.base_s.push_back(std::move(fields.first));
    t.a_norm_sq.push_back(std::move(fields.second));
  }
  return t;
}

FieldTable read_field_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open field CSV '" + path + "'");
  return read_field_csv(in);
}

}  // namespace pscgeom
