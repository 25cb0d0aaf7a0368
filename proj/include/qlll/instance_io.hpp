#pragma once
// JSON ingestion and canonical serialization of instances.

#include "qlll/instance.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qlll {

// Carries a "line L, column C" or JSON-path location in its message.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses text with nlohmann and rethrows syntax errors with line/column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);
std::string read_file(const std::string& path);

QlllInstance instance_from_json(const nlohmann::json& j);
QlllInstance load_instance(const std::string& path);

// Always emits explicit matrices, so the output is canonical.
nlohmann::json instance_to_json(const QlllInstance& inst);

// Random projector of the given rank on a k-dimensional space (Gaussian
// matrix, orthonormalized).
Mat random_projector(std::size_t dim, int rank, std::uint64_t seed);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);
std::string instance_hash(const QlllInstance& inst);

}  // namespace qlll
