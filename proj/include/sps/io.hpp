#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sps/fiber.hpp"
#include "sps/params.hpp"

namespace sps {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 17 significant digits; round-trips any double.
std::string format_double(double x);

using Metadata = std::map<std::string, std::string>;

/// `# key=value` lines, then a `r,u` header and one row per node.
void write_radial_csv(const std::filesystem::path& path, const RadialFunction& u, const Metadata& meta = {});

struct RadialTable {
    std::vector<double> r, u;
    Metadata meta;
};
RadialTable read_radial_csv(const std::filesystem::path& path);

/// Monotone cubic interpolation of a table onto `grid`; u(r_1) below the
/// first tabulated radius, zero beyond the last. The outer node is pinned.
RadialFunction resample_onto(const GridPtr& grid, const RadialTable& table);

/// Grid parameters as CSV metadata.
Metadata grid_metadata(const RadialGrid& g);

/// Writes a generic CSV: header line plus rows already formatted.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows, const Metadata& meta = {});

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const Problem& pb);
nlohmann::ordered_json to_json(const FunctionalRecord& rec);
nlohmann::ordered_json to_json(const FiberResult& fr);
nlohmann::ordered_json to_json(const CriticalConstants& cc);

}  // namespace sps
