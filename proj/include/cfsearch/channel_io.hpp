#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "cfsearch/cf_model.hpp"

namespace cfsearch {

// Channel JSON: an array of rows, each row an array of [re, im] pairs. A bare
// row (array of pairs) is accepted as a single-antenna channel.
ComplexMatrix channel_from_json(const nlohmann::json& j);
nlohmann::json channel_to_json(const ComplexMatrix& h);

ComplexMatrix parse_channel(const std::string& text);
ComplexMatrix read_channel_file(const std::string& path);
void write_channel_file(const std::string& path, const ComplexMatrix& h);

nlohmann::json coefficients_to_json(const CoefficientVector& a);
nlohmann::json result_to_json(const SearchResult& result);

}  // namespace cfsearch
