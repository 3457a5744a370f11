#pragma once

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

#include "toric/expsum.hpp"
#include "toric/newton.hpp"
#include "toric/polytope.hpp"
#include "toric/solver.hpp"

// Versioned JSON file formats shared by the CLI and the tests.
namespace toric::jsonio {

struct SystemFile {
    SupportsPtr supports;
    std::optional<expsum::ExpSumSystem> system;  // absent for supports-only files
    std::vector<std::string> labels;
};

SystemFile parse_system(const nlohmann::json& j);
SystemFile load_system(const std::string& path);
nlohmann::json system_to_json(const expsum::ExpSumSystem& system,
                              const std::vector<std::string>& labels = {});

std::string system_hash(const expsum::ExpSumSystem& system);

nlohmann::json certificate_to_json(const newton::Certificate& cert);
newton::Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json roots_to_json(const expsum::ExpSumSystem& system,
                             const std::vector<lattice::TorusPoint>& roots,
                             const std::vector<newton::Certificate>& certs);
struct RootsFile {
    std::string system_hash;
    std::vector<lattice::TorusPoint> roots;
    std::vector<newton::Certificate> certificates;
};
RootsFile parse_roots(const nlohmann::json& j, int n);
RootsFile load_roots(const std::string& path, int n);

nlohmann::json invariants_to_json(const polytope::InvariantReport& report);

}  // namespace toric::jsonio
