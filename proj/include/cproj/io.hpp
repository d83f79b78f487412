#pragma once

#include "cproj/algorithms.hpp"

#include <filesystem>
#include <string>

namespace capprox {

// JSON documents for bundles and polyhedra. Doubles are written in shortest
// round-trip form, so a load after a save is bit-exact.

std::string bundle_to_json(const SolutionBundle& b);
SolutionBundle bundle_from_json(const std::string& text);

void save_bundle(const SolutionBundle& b, const std::filesystem::path& path);
SolutionBundle load_bundle(const std::filesystem::path& path);

std::string polyhedron_to_json(const PolyhedronH& H, const PolyhedronV* V = nullptr);
PolyhedronH polyhedron_h_from_json(const std::string& text);
PolyhedronV polyhedron_v_from_json(const std::string& text);

}  // namespace capprox
