#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "cpbures/cpmap.hpp"

namespace cpbures {

/// Complex matrix as row-major nested arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const CMat& a);
/// Throws ParseError on malformed input.
CMat matrix_from_json(const nlohmann::json& j);

/// Parses {"dim_in", "dim_out", "kraus" | "choi"}. "kraus" is a list of
/// dim_in x dim_out matrices; a single matrix is read as a one-block list.
/// Throws ParseError for schema problems and the CpMap errors otherwise.
CpMap cpmap_from_json(const nlohmann::json& j);

enum class MapEncoding { Choi, Kraus };

/// The Choi encoding reproduces the Choi matrix bit for bit on parsing.
nlohmann::json cpmap_to_json(const CpMap& phi, MapEncoding encoding = MapEncoding::Choi);

CpMap read_cpmap(const std::filesystem::path& path);
void write_cpmap(const std::filesystem::path& path, const CpMap& phi,
                 MapEncoding encoding = MapEncoding::Choi);

/// Serializes with enough digits for every double to round-trip.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace cpbures
