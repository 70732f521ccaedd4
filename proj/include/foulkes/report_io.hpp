#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "driver.hpp"

namespace foulkes {

using Json = nlohmann::ordered_json;

inline Json point_to_json(const Point& v)
{
  Json forms = Json::array();
  for (const auto& l : v.forms()) forms.push_back(l.coords);
  return Json{{"power", v.power()}, {"forms", std::move(forms)}};
}

inline Point point_from_json(const Json& j)
{
  std::vector<LinearForm> forms;
  for (const auto& f : j.at("forms")) forms.push_back(LinearForm{f.get<std::vector<long>>()});
  return Point(std::move(forms), j.at("power").get<int>());
}

// Big integers travel as decimal strings.
inline Json matrix_to_json(const IntMatrix& m)
{
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_decimal(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const Json& j, int rows, int cols)
{
  IntMatrix m(rows, cols);
  if (static_cast<int>(j.size()) != rows) throw std::invalid_argument("matrix: wrong row count");
  for (int i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("matrix: wrong column count");
    for (int c = 0; c < cols; ++c) m(i, c) = parse_bigint(row.at(static_cast<std::size_t>(c)).get<std::string>());
  }
  return m;
}

inline Json fillings_to_json(const std::vector<Filling>& ts)
{
  Json out = Json::array();
  for (const auto& t : ts) out.push_back(t.to_string());
  return out;
}

inline std::vector<Filling> fillings_from_json(const Json& j, ContentSpec content)
{
  std::vector<Filling> out;
  for (const auto& s : j) out.push_back(Filling::parse(s.get<std::string>(), content));
  return out;
}

inline Json points_to_json(const std::vector<Point>& vs)
{
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(point_to_json(v));
  return out;
}

inline std::vector<Point> points_from_json(const Json& j)
{
  std::vector<Point> out;
  for (const auto& v : j) out.push_back(point_from_json(v));
  return out;
}

/// Everything of a report that is known before any Psi evaluation.
inline Json report_head_json(const KernelReport& r)
{
  Json j;
  j["a"] = r.a;
  j["b"] = r.b;
  j["lambda"] = r.lambda.to_string();
  j["seed"] = r.seed;
  j["p"] = r.p;
  j["p_prime"] = r.p_prime;
  j["status"] = status_name(r.status);
  if (!r.error.empty()) j["error"] = r.error;
  j["source_tableaux"] = fillings_to_json(r.source_tableaux);
  j["source_points"] = points_to_json(r.source_points);
  j["target_tableaux"] = fillings_to_json(r.target_tableaux);
  j["target_points"] = points_to_json(r.target_points);
  return j;
}

inline Json report_to_json(const KernelReport& r)
{
  Json j;
  j["a"] = r.a;
  j["b"] = r.b;
  j["lambda"] = r.lambda.to_string();
  j["p"] = r.p;
  j["p_prime"] = r.p_prime;
  j["rank"] = r.rank;
  j["kernel_mult"] = r.kernel_mult;
  j["status"] = status_name(r.status);
  if (!r.error.empty()) j["error"] = r.error;
  j["seed"] = r.seed;
  j["source_tableaux"] = fillings_to_json(r.source_tableaux);
  j["source_points"] = points_to_json(r.source_points);
  j["target_tableaux"] = fillings_to_json(r.target_tableaux);
  j["target_points"] = points_to_json(r.target_points);
  j["matrix"] = matrix_to_json(r.matrix);
  return j;
}

inline std::string report_line(const KernelReport& r) { return report_to_json(r).dump() + "\n"; }

inline std::string summary_csv_header() { return "lambda,p,p_prime,rank,kernel_mult\n"; }

inline std::string summary_csv_line(const KernelReport& r)
{
  return "\"" + r.lambda.to_string() + "\"," + std::to_string(r.p) + "," + std::to_string(r.p_prime) + "," +
         std::to_string(r.rank) + "," + std::to_string(r.kernel_mult) + "\n";
}

} // namespace foulkes
