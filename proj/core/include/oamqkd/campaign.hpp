#ifndef OAMQKD_CAMPAIGN_HPP
#define OAMQKD_CAMPAIGN_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "oamqkd/crosstalk.hpp"
#include "oamqkd/subspace.hpp"
#include "oamqkd/turbulence.hpp"

namespace oamqkd {

/// Full description of a Monte Carlo campaign. Defaults reproduce the
/// production configuration (2048^2 grid, 5 mm resolution, 4000
/// realizations); desk_preset() is the scaled-down variant for interactive
/// runs.
struct CampaignConfig {
    // geometry sweep
    std::vector<double> H_list{2.0e5, 2.5e5, 3.0e5, 3.5e5, 4.0e5, 4.5e5, 5.0e5};
    std::vector<double> theta_z_list{0.0, 0.7853981633974483};  // radians
    double h0 = 3000.0;

    // optics
    double w0 = 0.15;
    double lambda = 1064e-9;
    std::vector<double> r_a_list{1.0, 4.0};

    // turbulence
    double A = 9.6e-14;
    double Vg = 3.0;
    double L_outer = 5.0;
    double l_inner = 0.01;

    // numerics
    std::size_t grid_n = 2048;
    double grid_delta = 0.005;
    int subharmonic_orders = 3;
    bool edge_absorber = false;
    bool zero_turbulence = false;  // debug: all-zero screens

    // Monte Carlo
    std::size_t n_realizations = 4000;
    std::uint64_t master_seed = 20260811ULL;

    // analysis
    std::vector<int> dims{2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<double> misalignment_list{0.0};          // meters
    double misalignment_direction = 0.7853981633974483;  // +45 degrees
    std::vector<double> infidelity_list{0.0};
    bool conjugation = true;
    bool without_conjugation = true;
    bool filter_from_shifted = false;  // alternative: filter sees the shift too

    // optional fixed subspaces; when none of dimension d is given, the
    // subspace search picks one per d
    std::vector<std::vector<int>> fixed_subspaces;

    std::string store_path = "ensemble.jsonl";

    static CampaignConfig production_defaults() { return {}; }
    static CampaignConfig desk_preset();

    /// Shift magnitudes to project during the run: the configured
    /// misalignment list with 0 always included, ascending, deduplicated.
    std::vector<double> shift_magnitudes() const;

    std::size_t geometry_count() const { return H_list.size() * theta_z_list.size(); }
    ChannelGeometry geometry(std::size_t index) const;

    void validate() const;
};

void to_json(nlohmann::json& j, const CampaignConfig& c);
void from_json(const nlohmann::json& j, CampaignConfig& c);
CampaignConfig load_config(const std::string& path);
void save_config(const std::string& path, const CampaignConfig& c);

/// Modes every stored crosstalk matrix covers.
const std::vector<int>& full_mode_set();

struct ShiftBlock {
    double magnitude = 0.0;
    Eigen::MatrixXcd c;  // 9x9 over full_mode_set()
};
struct ApertureBlock {
    double r_a = 0.0;
    std::vector<ShiftBlock> shifts;
};

/// One line of the ensemble store.
struct RealizationRecord {
    std::size_t geometry_index = 0;
    std::size_t realization_index = 0;
    std::uint64_t seed = 0;
    double H = 0.0, theta_z = 0.0, h0 = 0.0;
    std::size_t slab_count = 0;
    std::vector<ApertureBlock> apertures;

    const ApertureBlock& aperture(double r_a) const;
};

struct EnsembleStore {
    std::vector<RealizationRecord> records;  // sorted (geometry, realization)

    static EnsembleStore load(const std::string& path);
    std::vector<const RealizationRecord*> geometry_records(std::size_t geometry_index) const;
    std::vector<std::size_t> geometry_indices() const;
};

/// Runs the sweep, appending one JSONL record per (geometry, realization)
/// to config.store_path. Resumable: records already present are skipped.
/// Parallel over realizations; output order and content depend only on
/// (config, master_seed). Thread count honors OAMQKD_THREADS.
void run_campaign(const CampaignConfig& config);

struct ResultRecord {
    double H = 0.0, theta_z = 0.0, h0 = 0.0, r_a = 0.0;
    int d = 0;
    std::vector<int> subspace;
    bool conjugated = false;
    double misalignment = 0.0;
    double infidelity = 0.0;
    double Q = 0.0, T = 0.0;
    double K1 = 0.0, K = 0.0;  // NaN for d = 6 (no modeled rate expression)
    std::size_t n_realizations = 0;
    double wall_time_s = 0.0;
};

/// Protocol analysis over a store; pure (never mutates the store).
std::vector<ResultRecord> analyze(const EnsembleStore& store, const CampaignConfig& config);

void write_results_json(const std::string& path, const std::vector<ResultRecord>& results,
                        const CampaignConfig& config);
std::vector<ResultRecord> load_results_json(const std::string& path);
void write_results_csv(const std::string& path, const std::vector<ResultRecord>& results);
void write_results_csv(std::ostream& os, const std::vector<ResultRecord>& results);

struct ValidationEntry {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};
struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool all_pass() const;
};

/// Numerical self-checks: vacuum-propagation overlaps for all |l| <= 4 at
/// every configured distance, MUB relations for every dimension, phase
/// screen statistics against the PSD-derived curve, and conjugate-filter
/// identities over random channels.
ValidationReport validate_suite(const CampaignConfig& config);
void print_report(std::ostream& os, const ValidationReport& report);

std::size_t worker_count_from_env();

} // namespace oamqkd

#endif
