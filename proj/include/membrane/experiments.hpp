#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "membrane/config.hpp"

namespace membrane {

struct ExperimentOptions {
    std::string out_dir;  // artifacts land here; created if missing
    std::optional<std::uint64_t> seed;
    std::optional<int> resolution;  // cells per unit length
    Config config;
};

std::vector<std::string> experiment_ids();

// ids: fig3-1d, rectangle-junction, vs-instability, weiss-monotonicity,
// spectrum-table. The manifest is also written to <out_dir>/manifest.json.
ExperimentManifest run_experiment(const std::string& id,
                                  const ExperimentOptions& opts);

}  // namespace membrane
