#ifndef CROWD_IO_HPP
#define CROWD_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crowd/compass.hpp"
#include "crowd/ensemble.hpp"
#include "crowd/metrics.hpp"
#include "crowd/state.hpp"

namespace crowd {

inline constexpr const char* kArtifactVersion = "1.0.0";

// All numeric output is printed with 9 significant digits.
std::string fmt9(double v);
// Nearest double to the 9-significant-digit decimal form; applied to values
// stored in JSON reports so dumps honour the same rule.
double round9(double v);

std::uint64_t fnv1a64(const std::string& data);

// One CSV row per (step, agent); followers keep their row after evacuating,
// with the flag set.
class TrajectoryWriter {
public:
    explicit TrajectoryWriter(const std::string& path);
    void record(const CrowdState& state);

private:
    std::ofstream out_;
};

void write_ensemble_csv(const ParticleEnsemble& ens, const std::string& path);

// Plain-text grid dump: header lines with bounds/resolution/time/mass, then
// row-major values.
void write_density_dump(const DensityGrid& g, const std::string& path);

void write_cost_history_csv(const std::vector<CompassEntry>& history,
                            const std::string& path);

nlohmann::json series_to_json(const std::vector<StepStats>& series);

void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);

}  // namespace crowd

#endif
