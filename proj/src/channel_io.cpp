#include "cfsearch/channel_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cfsearch/errors.hpp"

namespace cfsearch {

namespace {

Complex entry_from_json(const nlohmann::json& e) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    throw InvalidInput("channel entries must be [re, im] pairs");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

bool is_pair(const nlohmann::json& e) {
  return e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number();
}

}  // namespace

ComplexMatrix channel_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("channel must be a nonempty JSON array");
  nlohmann::json rows = j;
  if (is_pair(j[0])) rows = nlohmann::json::array({j});
  const std::size_t cols = rows[0].is_array() ? rows[0].size() : 0;
  if (cols == 0) throw InvalidInput("channel rows must be nonempty arrays of [re, im] pairs");
  ComplexMatrix h(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != cols) {
      throw InvalidInput("channel rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entry_from_json(rows[r][c]);
    }
  }
  return h;
}

nlohmann::json channel_to_json(const ComplexMatrix& h) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < h.cols(); ++c) row.push_back({h(r, c).real(), h(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

ComplexMatrix parse_channel(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InvalidInput("channel is not valid JSON");
  return channel_from_json(j);
}

ComplexMatrix read_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read channel file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_channel(text.str());
}

void write_channel_file(const std::string& path, const ComplexMatrix& h) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << channel_to_json(h).dump() << '\n';
  if (!out.flush()) throw IoError("write to '" + path + "' failed");
}

nlohmann::json coefficients_to_json(const CoefficientVector& a) {
  nlohmann::json coords = nlohmann::json::array();
  if (a.ring() == Ring::Gaussian) {
    for (const auto& g : a.gaussian()) coords.push_back({g.re, g.im});
  } else {
    for (const auto& e : a.eisenstein()) coords.push_back({e.a, e.b});
  }
  return coords;
}

nlohmann::json result_to_json(const SearchResult& result) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& v : result.a_opt.values()) values.push_back({v.real(), v.imag()});
  return {
      {"ring", std::string(to_string(result.a_opt.ring()))},
      {"a", coefficients_to_json(result.a_opt)},
      {"a_complex", values},
      {"f_min", result.f_min},
      {"rate", result.rate},
      {"candidates_checked", result.candidates_checked},
      {"elapsed_ms", static_cast<double>(result.elapsed.count()) * 1e-6},
  };
}

}  // namespace cfsearch
