#ifndef BLOCHLAB_EXPERIMENTS_HPP
#define BLOCHLAB_EXPERIMENTS_HPP

#include <map>

#include "blochlab/fit.hpp"
#include "blochlab/transport.hpp"

namespace blochlab {

struct UnknownExperiment : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One named sweep: experiment name, model parameter overrides, sizes, fluxes,
// filling fraction, tolerance overrides, output path, seed.
struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, double> params;
    std::vector<int> sizes;       // ascending; empty selects the preset default
    std::vector<double> fluxes;   // empty selects the preset default
    double filling = 0.5;
    std::map<std::string, double> tolerances;
    std::string out = "";         // empty: no file written
    unsigned seed = 1;
    int workers = 1;
    double tol_scale = 1.0;

    void validate() const;
    static ExperimentConfig from_json(const std::string& json_text);
    static ExperimentConfig from_file(const std::string& path);
};

struct ScalingRow {
    std::string experiment;
    int L = 0;
    std::string quantity;
    double value = 0.0;
    double gap = 0.0;
    int p = 1;
    double residual = 0.0;
    unsigned seed = 0;
};

struct ScalingSeries {
    std::vector<ScalingRow> rows;

    void add(const std::string& experiment, int L, const std::string& quantity, double value,
             double gap = 0.0, int p = 1, double residual = 0.0, unsigned seed = 0);
    std::vector<double> sizes_of(const std::string& quantity) const;
    std::vector<double> values_of(const std::string& quantity) const;
    DecayFit fit(const std::string& quantity) const;

    static const char* csv_header(); // experiment,L,quantity,value,gap,p,residual,seed
    std::string csv() const;
    void write_csv(const std::string& path) const;
};

struct RunResult {
    ScalingSeries series;
    std::vector<std::string> checks;   // "pass: ..." / "FAIL: ..." lines
    bool passed = true;
    int exit_code() const { return passed ? 0 : 1; }
};

std::vector<std::string> experiment_names();
RunResult run_experiment(const ExperimentConfig& config);

} // namespace blochlab

#endif
