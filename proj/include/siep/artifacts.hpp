#ifndef SIEP_ARTIFACTS_HPP
#define SIEP_ARTIFACTS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "siep/infinite.hpp"
#include "siep/siep.hpp"

namespace siep::artifacts {

// Solution directory:
//   solution.json  options, seed, target spectrum, step records
//   matrix.coo     the solved matrix
//   graph.json     the prescribed graph
//   levels/level_NNNN.coo  Ã_1, ..., Ã_n
//
// Tower directory:
//   tower.json     sequence, options, seed, deltas, budgets, certificate, fingerprint
//   graph.ladj     lower adjacency of the first N vertices
//   level_NNNN.coo Ã_1, ..., Ã_N

std::string level_file_name(Eigen::Index level);

nlohmann::json options_to_json(const SiepOptions& opts);
/// Inverse of options_to_json; a custom budget_schedule is not representable.
SiepOptions options_from_json(const nlohmann::json& j);

nlohmann::json step_to_json(const StepRecord& rec);
nlohmann::json fingerprint_to_json(const SpectralFingerprint& fp);
SpectralFingerprint fingerprint_from_json(const nlohmann::json& j);

void write_solution(const std::filesystem::path& dir, const SiepSolution& sol, const SiepOptions& opts,
                    std::uint64_t seed);

struct TowerArtifact {
  TruncationTower tower;
  SpectralCertificate certificate;
  SpectralFingerprint fingerprint;
};

void write_tower(const std::filesystem::path& dir, const TowerArtifact& art, const TowerOptions& opts,
                 std::uint64_t seed);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  /// "solution" or "tower".
  std::string kind;
  std::vector<Check> checks;
  /// Recomputed from the stored matrices and sequence (towers only).
  std::optional<SpectralFingerprint> fingerprint;

  bool ok() const;
};

/// Re-derives every stored claim from the files in `dir` alone. Throws
/// io::ParseError when the directory is not a readable artifact.
VerifyReport verify(const std::filesystem::path& dir);

}  // namespace siep::artifacts

#endif  // SIEP_ARTIFACTS_HPP
