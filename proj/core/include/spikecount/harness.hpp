#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spikecount/detection.hpp"
#include "spikecount/models.hpp"
#include "spikecount/prior.hpp"
#include "spikecount/recovery.hpp"

namespace spikecount::harness {

enum class Mode { Threshold, PhaseDiagram, DetectSim, RecoverSim, LowDeg };
enum class Model { Wigner, Wishart };

struct LowDegConfig {
    int D = 15;
    int reps = 100000;
    std::vector<int> n_list;
};

struct ExperimentConfig {
    Mode mode = Mode::Threshold;
    Model model = Model::Wigner;
    models::ModelParams params;
    prior::PriorSpec prior_spec;
    detection::DetectConfig detect;
    recovery::RecoverConfig recover;
    LowDegConfig lowdeg;
    int trials = 1;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
    double gamma = 1.0;    // Threshold / PhaseDiagram
    int grid = 200;        // PhaseDiagram lambda grid size

    // Canonical JSON echo (defaults resolved); also the manifest content.
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);
};

struct RunManifest {
    std::string config_json;
    std::string content_hash;
    double wall_clock_sec = 0.0;
    std::vector<std::uint64_t> per_trial_seeds;
    std::string summary_json;  // mode-specific scalars (error rates, AUC, ...)

    std::string to_json() const;
};

// Executes the config, writing <mode>.csv and manifest.json under
// config.out_dir. Output files appear only on success.
RunManifest run(const ExperimentConfig& config);

// One phase-diagram row per lambda: critical mu for the subgraph, PLS and
// CCA methods (infinities become empty CSV fields).
std::string phase_diagram_csv(double gamma, double rho, const std::vector<double>& lambda_grid);

// Rank-based AUC of positives vs negatives (ties count half).
double auc(const std::vector<double>& positives, const std::vector<double>& negatives);

}  // namespace spikecount::harness
