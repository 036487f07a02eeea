#include "oamqkd/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "oamqkd/conjugation.hpp"
#include "oamqkd/lg.hpp"
#include "oamqkd/phase_screen.hpp"
#include "oamqkd/propagation.hpp"
#include "oamqkd/qkd.hpp"
#include "oamqkd/rng.hpp"

namespace oamqkd {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

CampaignConfig CampaignConfig::desk_preset() {
    CampaignConfig c;
    c.grid_n = 512;
    c.grid_delta = 0.02;
    c.n_realizations = 300;
    c.edge_absorber = true;
    return c;
}

std::vector<double> CampaignConfig::shift_magnitudes() const {
    std::vector<double> mags = misalignment_list;
    mags.push_back(0.0);
    std::sort(mags.begin(), mags.end());
    mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
    return mags;
}

ChannelGeometry CampaignConfig::geometry(std::size_t index) const {
    const std::size_t nt = theta_z_list.size();
    if (index >= geometry_count()) throw std::invalid_argument("geometry index out of range");
    return ChannelGeometry(H_list[index / nt], h0, theta_z_list[index % nt]);
}

void CampaignConfig::validate() const {
    if (H_list.empty() || theta_z_list.empty() || r_a_list.empty())
        throw std::invalid_argument("config: geometry and aperture sweeps must be non-empty");
    GridSpec grid(grid_n, grid_delta);
    BeamParams beam(w0, lambda);
    TurbulenceProfile profile(A, Vg, L_outer, l_inner);
    double l_max = 0.0;
    for (std::size_t g = 0; g < geometry_count(); ++g)
        l_max = std::max(l_max, geometry(g).length());
    const double w_max = beam_radius(beam, l_max);
    if (grid.extent() < 4.0 * w_max)
        throw std::invalid_argument("config: grid extent below 4x the largest beam radius");
    for (double ra : r_a_list)
        if (!(ra > 0.0) || ra > 0.5 * grid.extent())
            throw std::invalid_argument("config: aperture radius outside the grid");
    for (double m : misalignment_list)
        if (m < 0.0 || m > 0.25 * grid.extent())
            throw std::invalid_argument("config: misalignment outside the supported range");
    for (int d : dims)
        if (d < 2 || d > 9) throw std::invalid_argument("config: dims must be within [2, 9]");
    for (double i : infidelity_list)
        if (i < 0.0 || i >= 1.0) throw std::invalid_argument("config: infidelity outside [0, 1)");
    for (const auto& ls : fixed_subspaces) EncodingSubspace check(ls);  // throws if malformed
    if (n_realizations == 0) throw std::invalid_argument("config: n_realizations must be positive");
}

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

template <typename T>
void get_to_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

} // namespace

void to_json(json& j, const CampaignConfig& c) {
    std::vector<double> theta_deg;
    for (double t : c.theta_z_list) theta_deg.push_back(t / kDegree);
    j = json{
        {"geometry", {{"H", c.H_list}, {"theta_z_deg", theta_deg}, {"h0", c.h0}}},
        {"optics", {{"w0", c.w0}, {"lambda", c.lambda}, {"r_a", c.r_a_list}}},
        {"turbulence",
         {{"A", c.A}, {"Vg", c.Vg}, {"L_outer", c.L_outer}, {"l_inner", c.l_inner}}},
        {"numerics",
         {{"grid_n", c.grid_n},
          {"grid_delta", c.grid_delta},
          {"subharmonic_orders", c.subharmonic_orders},
          {"edge_absorber", c.edge_absorber},
          {"zero_turbulence", c.zero_turbulence}}},
        {"monte_carlo", {{"n_realizations", c.n_realizations}, {"master_seed", c.master_seed}}},
        {"analysis",
         {{"dims", c.dims},
          {"misalignment", c.misalignment_list},
          {"misalignment_direction_deg", c.misalignment_direction / kDegree},
          {"infidelity", c.infidelity_list},
          {"conjugation", c.conjugation},
          {"without_conjugation", c.without_conjugation},
          {"filter_from_shifted", c.filter_from_shifted},
          {"fixed_subspaces", c.fixed_subspaces}}},
        {"store_path", c.store_path}};
}

void from_json(const json& j, CampaignConfig& c) {
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        get_to_if(g, "H", c.H_list);
        if (g.contains("theta_z_deg")) {
            std::vector<double> deg;
            g.at("theta_z_deg").get_to(deg);
            c.theta_z_list.clear();
            for (double t : deg) c.theta_z_list.push_back(t * kDegree);
        }
        get_to_if(g, "h0", c.h0);
    }
    if (j.contains("optics")) {
        const auto& o = j.at("optics");
        get_to_if(o, "w0", c.w0);
        get_to_if(o, "lambda", c.lambda);
        get_to_if(o, "r_a", c.r_a_list);
    }
    if (j.contains("turbulence")) {
        const auto& t = j.at("turbulence");
        get_to_if(t, "A", c.A);
        get_to_if(t, "Vg", c.Vg);
        get_to_if(t, "L_outer", c.L_outer);
        get_to_if(t, "l_inner", c.l_inner);
    }
    if (j.contains("numerics")) {
        const auto& n = j.at("numerics");
        get_to_if(n, "grid_n", c.grid_n);
        get_to_if(n, "grid_delta", c.grid_delta);
        get_to_if(n, "subharmonic_orders", c.subharmonic_orders);
        get_to_if(n, "edge_absorber", c.edge_absorber);
        get_to_if(n, "zero_turbulence", c.zero_turbulence);
    }
    if (j.contains("monte_carlo")) {
        const auto& m = j.at("monte_carlo");
        get_to_if(m, "n_realizations", c.n_realizations);
        get_to_if(m, "master_seed", c.master_seed);
    }
    if (j.contains("analysis")) {
        const auto& a = j.at("analysis");
        get_to_if(a, "dims", c.dims);
        get_to_if(a, "misalignment", c.misalignment_list);
        if (a.contains("misalignment_direction_deg"))
            c.misalignment_direction = a.at("misalignment_direction_deg").get<double>() * kDegree;
        get_to_if(a, "infidelity", c.infidelity_list);
        get_to_if(a, "conjugation", c.conjugation);
        get_to_if(a, "without_conjugation", c.without_conjugation);
        get_to_if(a, "filter_from_shifted", c.filter_from_shifted);
        get_to_if(a, "fixed_subspaces", c.fixed_subspaces);
    }
    get_to_if(j, "store_path", c.store_path);
}

CampaignConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    json j;
    is >> j;
    CampaignConfig c = j.get<CampaignConfig>();
    c.validate();
    return c;
}

void save_config(const std::string& path, const CampaignConfig& c) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write config file: " + path);
    os << json(c).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Store
// ---------------------------------------------------------------------------

const std::vector<int>& full_mode_set() {
    static const std::vector<int> modes{-4, -3, -2, -1, 0, 1, 2, 3, 4};
    return modes;
}

const ApertureBlock& RealizationRecord::aperture(double r_a) const {
    for (const auto& a : apertures)
        if (std::abs(a.r_a - r_a) < 1e-12) return a;
    throw std::invalid_argument("store record does not cover aperture radius " +
                                std::to_string(r_a));
}

namespace {

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json arr = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            arr.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    return arr;
}

Eigen::MatrixXcd matrix_from_json(const json& arr, Eigen::Index dim) {
    if (static_cast<Eigen::Index>(arr.size()) != dim * dim)
        throw std::runtime_error("store: malformed crosstalk matrix");
    Eigen::MatrixXcd m(dim, dim);
    Eigen::Index i = 0;
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c, ++i)
            m(r, c) = std::complex<double>(arr[i][0].get<double>(), arr[i][1].get<double>());
    return m;
}

std::string record_to_line(const RealizationRecord& rec) {
    json j{{"g", rec.geometry_index}, {"r", rec.realization_index}, {"seed", rec.seed},
           {"H", rec.H},              {"theta_z", rec.theta_z},     {"h0", rec.h0},
           {"slabs", rec.slab_count}};
    json aps = json::array();
    for (const auto& a : rec.apertures) {
        json shifts = json::array();
        for (const auto& s : a.shifts)
            shifts.push_back(json{{"m", s.magnitude}, {"c", matrix_to_json(s.c)}});
        aps.push_back(json{{"r_a", a.r_a}, {"shifts", shifts}});
    }
    j["apertures"] = aps;
    return j.dump();
}

RealizationRecord record_from_line(const std::string& line) {
    const json j = json::parse(line);
    RealizationRecord rec;
    rec.geometry_index = j.at("g").get<std::size_t>();
    rec.realization_index = j.at("r").get<std::size_t>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.H = j.at("H").get<double>();
    rec.theta_z = j.at("theta_z").get<double>();
    rec.h0 = j.at("h0").get<double>();
    rec.slab_count = j.at("slabs").get<std::size_t>();
    const auto dim = static_cast<Eigen::Index>(full_mode_set().size());
    for (const auto& a : j.at("apertures")) {
        ApertureBlock block;
        block.r_a = a.at("r_a").get<double>();
        for (const auto& s : a.at("shifts")) {
            ShiftBlock sb;
            sb.magnitude = s.at("m").get<double>();
            sb.c = matrix_from_json(s.at("c"), dim);
            block.shifts.push_back(std::move(sb));
        }
        rec.apertures.push_back(std::move(block));
    }
    return rec;
}

} // namespace

EnsembleStore EnsembleStore::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open ensemble store: " + path);
    EnsembleStore store;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        store.records.push_back(record_from_line(line));
    }
    std::sort(store.records.begin(), store.records.end(),
              [](const RealizationRecord& a, const RealizationRecord& b) {
                  return std::tie(a.geometry_index, a.realization_index) <
                         std::tie(b.geometry_index, b.realization_index);
              });
    return store;
}

std::vector<const RealizationRecord*> EnsembleStore::geometry_records(
    std::size_t geometry_index) const {
    std::vector<const RealizationRecord*> out;
    for (const auto& r : records)
        if (r.geometry_index == geometry_index) out.push_back(&r);
    return out;
}

std::vector<std::size_t> EnsembleStore::geometry_indices() const {
    std::set<std::size_t> gs;
    for (const auto& r : records) gs.insert(r.geometry_index);
    return {gs.begin(), gs.end()};
}

// ---------------------------------------------------------------------------
// Campaign runner
// ---------------------------------------------------------------------------

std::size_t worker_count_from_env() {
    if (const char* env = std::getenv("OAMQKD_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

namespace {

std::vector<PhaseScreen> zero_screens(const ChannelRealizationSpec& spec) {
    std::vector<PhaseScreen> screens(spec.partition.slabs.size());
    for (std::size_t j = 0; j < screens.size(); ++j) {
        screens[j].grid = spec.grid;
        screens[j].r0 = std::numeric_limits<double>::infinity();
        screens[j].phases.assign(spec.grid.size(), 0.0);
    }
    return screens;
}

} // namespace

void run_campaign(const CampaignConfig& config) {
    config.validate();
    const GridSpec grid(config.grid_n, config.grid_delta);
    const BeamParams beam(config.w0, config.lambda);
    const TurbulenceProfile profile(config.A, config.Vg, config.L_outer, config.l_inner);
    const auto shift_mags = config.shift_magnitudes();
    const double dir = config.misalignment_direction;

    std::set<std::pair<std::size_t, std::size_t>> done;
    if (std::filesystem::exists(config.store_path)) {
        const EnsembleStore existing = EnsembleStore::load(config.store_path);
        for (const auto& r : existing.records)
            done.emplace(r.geometry_index, r.realization_index);
    }

    std::ofstream os(config.store_path, std::ios::app);
    if (!os) throw std::runtime_error("cannot open store for writing: " + config.store_path);

    const std::size_t workers = std::min<std::size_t>(worker_count_from_env(), config.n_realizations);

    for (std::size_t g = 0; g < config.geometry_count(); ++g) {
        std::vector<std::size_t> pending;
        for (std::size_t r = 0; r < config.n_realizations; ++r)
            if (!done.count({g, r})) pending.push_back(r);
        if (pending.empty()) continue;

        const ChannelGeometry geom = config.geometry(g);
        const double L = geom.length();
        const SlabPartition partition = partition_slabs(geom, profile, config.lambda);
        const std::uint64_t geom_seed = derive_seed(config.master_seed, g);

        // One receiver basis per (aperture, shift); workers share them
        // read-only. Projecting onto a basis back-shifted by -delta equals
        // projecting the field shifted by +delta onto the centered basis.
        std::vector<std::vector<ReceiverBasis>> bases(config.r_a_list.size());
        for (std::size_t a = 0; a < config.r_a_list.size(); ++a)
            for (double m : shift_mags)
                bases[a].push_back(make_receiver_basis(full_mode_set(), L, beam, grid,
                                                       config.r_a_list[a], -m * std::cos(dir),
                                                       -m * std::sin(dir)));

        const auto process = [&](std::size_t r) {
            ChannelRealizationSpec spec;
            spec.geometry = geom;
            spec.partition = partition;
            spec.profile = profile;
            spec.beam = beam;
            spec.grid = grid;
            spec.seed = derive_seed(geom_seed, r);
            spec.subharmonic_orders = config.subharmonic_orders;
            spec.edge_absorber = config.edge_absorber;

            const auto screens =
                config.zero_turbulence ? zero_screens(spec) : realization_screens(spec);
            const auto received = propagate_mode_set(full_mode_set(), spec, screens);

            RealizationRecord rec;
            rec.geometry_index = g;
            rec.realization_index = r;
            rec.seed = spec.seed;
            rec.H = geom.H;
            rec.theta_z = geom.theta_z;
            rec.h0 = geom.h0;
            rec.slab_count = partition.count();
            for (std::size_t a = 0; a < config.r_a_list.size(); ++a) {
                ApertureBlock block;
                block.r_a = config.r_a_list[a];
                for (std::size_t s = 0; s < shift_mags.size(); ++s) {
                    ShiftBlock sb;
                    sb.magnitude = shift_mags[s];
                    sb.c = project_fields(bases[a][s], received).c;
                    block.shifts.push_back(std::move(sb));
                }
                rec.apertures.push_back(std::move(block));
            }
            return record_to_line(rec);
        };

        // Workers fill an ordered buffer; the writer drains it in
        // realization order so the store bytes never depend on the worker
        // count.
        std::mutex mu;
        std::condition_variable cv;
        std::map<std::size_t, std::string> ready;
        std::atomic<std::size_t> cursor{0};
        std::exception_ptr failure;

        const auto worker = [&]() {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= pending.size()) return;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (failure) return;
                }
                try {
                    std::string line = process(pending[i]);
                    std::lock_guard<std::mutex> lock(mu);
                    ready.emplace(pending[i], std::move(line));
                    cv.notify_all();
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!failure) failure = std::current_exception();
                    cv.notify_all();
                    return;
                }
            }
        };

        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);

        std::size_t written = 0;
        {
            std::unique_lock<std::mutex> lock(mu);
            while (written < pending.size()) {
                cv.wait(lock, [&] { return failure || ready.count(pending[written]) > 0; });
                if (failure) break;
                while (written < pending.size() && ready.count(pending[written])) {
                    os << ready[pending[written]] << "\n";
                    ready.erase(pending[written]);
                    ++written;
                }
                if (!os) {
                    failure = std::make_exception_ptr(
                        std::runtime_error("store write failed (disk full?)"));
                    break;
                }
            }
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        os.flush();
    }
}

// ---------------------------------------------------------------------------
// Analysis
// ---------------------------------------------------------------------------

namespace {

const ShiftBlock& shift_block(const ApertureBlock& block, double magnitude) {
    for (const auto& s : block.shifts)
        if (std::abs(s.magnitude - magnitude) < 1e-12) return s;
    throw std::invalid_argument("store does not cover misalignment " + std::to_string(magnitude));
}

std::vector<CrosstalkMatrix> restrict_ensemble(const std::vector<CrosstalkMatrix>& full,
                                               const std::vector<int>& ls) {
    std::vector<CrosstalkMatrix> out;
    out.reserve(full.size());
    for (const auto& c : full) out.push_back(c.restricted(ls));
    return out;
}

struct Rates {
    double Q = 0.0, T = 0.0, K1 = 0.0, K = 0.0;
};

Rates rates_from_rho(const DensityMatrix& rho, const MUBSet& mubs, int d) {
    Rates r;
    r.Q = average_error_rate(rho, mubs);
    r.T = rho.T;
    if (d == 6) {
        r.K1 = std::numeric_limits<double>::quiet_NaN();
        r.K = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.K1 = key_rate_per_photon(r.Q, d);
        r.K = secret_key_rate(r.T, r.K1);
    }
    return r;
}

Rates plain_rates(const std::vector<CrosstalkMatrix>& restricted, const MUBSet& mubs, int d) {
    std::vector<Eigen::VectorXcd> states;
    states.reserve(restricted.size());
    for (const auto& c : restricted) states.push_back(postselect_state(c));
    return rates_from_rho(average_density_matrix(states), mubs, d);
}

/// Subspace choice at zero noise, ranking by K in the relevant pipeline
/// (post-selected or conjugated). d = 6 has no rate, so the smallest
/// alphabet is used.
EncodingSubspace pick_subspace(int d, const std::vector<CrosstalkMatrix>& ensemble0,
                               const MUBSet& mubs, bool conjugated) {
    const auto candidates = subspace_candidates(d);
    if (d == 6) return candidates.front();
    EncodingSubspace best = candidates.front();
    double best_k = -1.0;
    for (const auto& cand : candidates) {
        const auto restricted = restrict_ensemble(ensemble0, cand.ls);
        double k;
        if (conjugated) {
            const DensityMatrix rho = conjugated_ensemble(restricted);
            k = secret_key_rate(rho.T, key_rate_per_photon(average_error_rate(rho, mubs), d));
        } else {
            k = plain_rates(restricted, mubs, d).K;
        }
        if (k > best_k) {
            best_k = k;
            best = cand;
        }
    }
    return best;
}

} // namespace

std::vector<ResultRecord> analyze(const EnsembleStore& store, const CampaignConfig& config) {
    std::vector<ResultRecord> results;
    for (std::size_t g : store.geometry_indices()) {
        const auto recs = store.geometry_records(g);
        if (recs.size() < 100)
            std::cerr << "analyze: geometry " << g << " has only " << recs.size()
                      << " realizations; estimates will be noisy\n";
        const double H = recs.front()->H;
        const double theta_z = recs.front()->theta_z;
        const double h0 = recs.front()->h0;

        for (double r_a : config.r_a_list) {
            // Full-alphabet ensembles per misalignment magnitude.
            std::vector<double> mags = config.misalignment_list;
            if (std::find(mags.begin(), mags.end(), 0.0) == mags.end()) mags.push_back(0.0);
            std::map<double, std::vector<CrosstalkMatrix>> full;
            for (double m : mags) {
                auto& vec = full[m];
                vec.reserve(recs.size());
                for (const auto* rec : recs) {
                    CrosstalkMatrix c;
                    c.modes = full_mode_set();
                    c.c = shift_block(rec->aperture(r_a), m).c;
                    vec.push_back(std::move(c));
                }
            }

            for (int d : config.dims) {
                const MUBSet mubs = build_mubs(d);
                std::vector<EncodingSubspace> fixed;
                for (const auto& ls : config.fixed_subspaces)
                    if (static_cast<int>(ls.size()) == d) fixed.emplace_back(ls);

                const auto emit = [&](const EncodingSubspace& sub, bool conj, double m, double infid,
                                      const Rates& rates, double wall) {
                    ResultRecord rr;
                    rr.H = H;
                    rr.theta_z = theta_z;
                    rr.h0 = h0;
                    rr.r_a = r_a;
                    rr.d = d;
                    rr.subspace = sub.ls;
                    rr.conjugated = conj;
                    rr.misalignment = m;
                    rr.infidelity = infid;
                    rr.Q = rates.Q;
                    rr.T = rates.T;
                    rr.K1 = rates.K1;
                    rr.K = rates.K;
                    rr.n_realizations = recs.size();
                    rr.wall_time_s = wall;
                    results.push_back(std::move(rr));
                };

                if (config.without_conjugation) {
                    std::vector<EncodingSubspace> subspaces = fixed;
                    if (subspaces.empty())
                        subspaces.push_back(pick_subspace(d, full[0.0], mubs, false));
                    for (const auto& sub : subspaces) {
                        for (double m : config.misalignment_list) {
                            const auto t0 = std::chrono::steady_clock::now();
                            const Rates r = plain_rates(restrict_ensemble(full[m], sub.ls), mubs, d);
                            const double wall =
                                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                    .count();
                            emit(sub, false, m, 0.0, r, wall);
                        }
                    }
                }

                if (config.conjugation) {
                    std::vector<EncodingSubspace> subspaces = fixed;
                    if (subspaces.empty() && d != 6)
                        subspaces.push_back(pick_subspace(d, full[0.0], mubs, true));
                    if (subspaces.empty()) subspaces.push_back(subspace_candidates(d).front());
                    for (const auto& sub : subspaces) {
                        const auto filter_base = restrict_ensemble(full[0.0], sub.ls);
                        for (double m : config.misalignment_list) {
                            const auto t0 = std::chrono::steady_clock::now();
                            const auto measured = restrict_ensemble(full[m], sub.ls);
                            const auto& filter_src =
                                config.filter_from_shifted ? measured : filter_base;
                            const DensityMatrix rho0 = conjugated_ensemble(measured, &filter_src);
                            for (double infid : config.infidelity_list) {
                                const DensityMatrix rho =
                                    infid > 0.0 ? depolarize(rho0, infid, d) : rho0;
                                const Rates r = rates_from_rho(rho, mubs, d);
                                const double wall = std::chrono::duration<double>(
                                                        std::chrono::steady_clock::now() - t0)
                                                        .count();
                                emit(sub, true, m, infid, r, wall);
                            }
                        }
                    }
                }
            }
        }
    }
    return results;
}

// ---------------------------------------------------------------------------
// Result output
// ---------------------------------------------------------------------------

namespace {

json result_to_json(const ResultRecord& r) {
    return json{{"H", r.H},
                {"theta_z", r.theta_z},
                {"h0", r.h0},
                {"r_a", r.r_a},
                {"d", r.d},
                {"subspace", r.subspace},
                {"conjugated", r.conjugated},
                {"misalignment", r.misalignment},
                {"infidelity", r.infidelity},
                {"Q", r.Q},
                {"T", r.T},
                {"K1", r.K1},
                {"K", r.K},
                {"n_realizations", r.n_realizations},
                {"wall_time_s", r.wall_time_s}};
}

ResultRecord result_from_json(const json& j) {
    ResultRecord r;
    j.at("H").get_to(r.H);
    j.at("theta_z").get_to(r.theta_z);
    j.at("h0").get_to(r.h0);
    j.at("r_a").get_to(r.r_a);
    j.at("d").get_to(r.d);
    j.at("subspace").get_to(r.subspace);
    j.at("conjugated").get_to(r.conjugated);
    j.at("misalignment").get_to(r.misalignment);
    j.at("infidelity").get_to(r.infidelity);
    r.Q = j.at("Q").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("Q").get<double>();
    r.T = j.at("T").get<double>();
    r.K1 =
        j.at("K1").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("K1").get<double>();
    r.K = j.at("K").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("K").get<double>();
    j.at("n_realizations").get_to(r.n_realizations);
    j.at("wall_time_s").get_to(r.wall_time_s);
    return r;
}

} // namespace

void write_results_json(const std::string& path, const std::vector<ResultRecord>& results,
                        const CampaignConfig& config) {
    json j{{"config", json(config)}, {"results", json::array()}};
    for (const auto& r : results) j["results"].push_back(result_to_json(r));
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write results: " + path);
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("results write failed: " + path);
}

std::vector<ResultRecord> load_results_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open results: " + path);
    json j;
    is >> j;
    std::vector<ResultRecord> out;
    for (const auto& r : j.at("results")) out.push_back(result_from_json(r));
    return out;
}

void write_results_csv(std::ostream& os, const std::vector<ResultRecord>& results) {
    os << "H,theta_z_deg,h0,r_a,d,subspace,conjugated,misalignment_m,infidelity,Q,T,K1,K,"
          "n_realizations,wall_time_s\n";
    os.precision(12);
    for (const auto& r : results) {
        std::string sub = "{";
        for (std::size_t i = 0; i < r.subspace.size(); ++i)
            sub += (i ? ";" : "") + std::to_string(r.subspace[i]);
        sub += "}";
        os << r.H << ',' << r.theta_z / kDegree << ',' << r.h0 << ',' << r.r_a << ',' << r.d << ','
           << sub << ',' << (r.conjugated ? 1 : 0) << ',' << r.misalignment << ',' << r.infidelity
           << ',' << r.Q << ',' << r.T << ',' << r.K1 << ',' << r.K << ',' << r.n_realizations
           << ',' << r.wall_time_s << '\n';
    }
}

void write_results_csv(const std::string& path, const std::vector<ResultRecord>& results) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write CSV: " + path);
    write_results_csv(os, results);
    if (!os) throw std::runtime_error("CSV write failed: " + path);
}

// ---------------------------------------------------------------------------
// Validation suite
// ---------------------------------------------------------------------------

bool ValidationReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

ValidationReport validate_suite(const CampaignConfig& config) {
    ValidationReport report;
    const GridSpec grid(config.grid_n, config.grid_delta);
    const BeamParams beam(config.w0, config.lambda);
    const TurbulenceProfile profile(config.A, config.Vg, config.L_outer, config.l_inner);

    // Vacuum propagation against the analytic profile, every distance and l.
    const double overlap_threshold = (config.grid_n >= 2048) ? 0.999 : 0.99;
    for (std::size_t g = 0; g < config.geometry_count(); ++g) {
        const ChannelGeometry geom = config.geometry(g);
        const double L = geom.length();
        for (int l = -4; l <= 4; ++l) {
            const auto launched = lg_field(ModeIndex(l), 0.0, beam, grid);
            const auto arrived = vacuum_step(launched, L, beam);
            const auto analytic = lg_field(ModeIndex(l), L, beam, grid);
            const double mod = std::abs(overlap(analytic, arrived));
            std::ostringstream name;
            name << "vacuum overlap l=" << l << " L=" << L / 1000.0 << "km";
            report.entries.push_back(
                {name.str(), mod > overlap_threshold, mod, overlap_threshold, ">"});
        }
    }

    // MUB relations.
    for (int d = 2; d <= 9; ++d) {
        const MUBSet m = build_mubs(d);
        double ortho_dev = 0.0, unbiased_dev = 0.0;
        for (int b1 = 0; b1 < m.basis_count(); ++b1) {
            for (int b2 = b1; b2 < m.basis_count(); ++b2) {
                const Eigen::MatrixXcd gram = m.bases[b1].adjoint() * m.bases[b2];
                for (int i = 0; i < d; ++i) {
                    for (int j = 0; j < d; ++j) {
                        const double p = std::norm(gram(i, j));
                        if (b1 == b2) {
                            ortho_dev = std::max(ortho_dev, std::abs(p - (i == j ? 1.0 : 0.0)));
                        } else {
                            unbiased_dev = std::max(unbiased_dev, std::abs(p - 1.0 / d));
                        }
                    }
                }
            }
        }
        report.entries.push_back({"mub d=" + std::to_string(d) + " orthonormal", ortho_dev < 1e-12,
                                  ortho_dev, 1e-12, "<"});
        report.entries.push_back({"mub d=" + std::to_string(d) + " unbiased (" +
                                      std::to_string(m.basis_count()) + " bases)",
                                  unbiased_dev < 1e-10, unbiased_dev, 1e-10, "<"});
    }

    // Phase-screen statistics: 200 screens vs the PSD-derived curve.
    {
        const double r0 = 0.1;
        auto rng = make_engine(derive_seed(config.master_seed, 0xBEEF));
        std::vector<PhaseScreen> screens;
        screens.reserve(200);
        for (int i = 0; i < 200; ++i)
            screens.push_back(
                generate_phase_screen(r0, grid, profile, rng, config.subharmonic_orders));
        std::vector<double> seps;
        const double lo = 5.0 * profile.l_inner;
        const double hi = profile.L_outer / 3.0;
        for (double dr = lo; dr <= hi * 1.0001; dr *= 1.45) seps.push_back(dr);
        double worst = 0.0;
        for (const auto& p : screen_structure_function(screens, seps)) {
            const double th = theory_structure_function(p.dr, r0, profile);
            worst = std::max(worst, std::abs(p.value / th - 1.0));
        }
        report.entries.push_back(
            {"phase screen structure function (200 screens)", worst < 0.15, worst, 0.15, "<"});
    }

    // Conjugate-filter identities over random contractive channels.
    {
        auto rng = make_engine(derive_seed(config.master_seed, 0xF117));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double worst_identity = 0.0, worst_gain = 0.0;
        for (int d = 2; d <= 9; ++d) {
            for (int trial = 0; trial < 1000; ++trial) {
                Eigen::MatrixXcd m(d, d);
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c) m(r, c) = std::complex<double>(gauss(rng), gauss(rng));
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
                m /= svd.singularValues()(0) * (1.0 + uni(rng));
                CrosstalkMatrix cm;
                cm.modes.resize(d);
                cm.c = m;
                const KrausOperator k = kraus_from_realization(cm);
                if (k.gamma_min <= 1e-12) continue;
                const ConjugateFilter f = conjugate_filter(k);
                const double dev =
                    (f.Mt * m - k.gamma_min * Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
                Eigen::JacobiSVD<Eigen::MatrixXcd> fsvd(f.Mt);
                worst_identity = std::max(worst_identity, dev);
                worst_gain = std::max(worst_gain, fsvd.singularValues()(0) - 1.0);
            }
        }
        report.entries.push_back({"conjugate filter identity (8000 channels)",
                                  worst_identity < 1e-10, worst_identity, 1e-10, "<"});
        report.entries.push_back(
            {"conjugate filter physicality", worst_gain < 1e-10, worst_gain, 1e-10, "<"});
    }

    return report;
}

void print_report(std::ostream& os, const ValidationReport& report) {
    for (const auto& e : report.entries) {
        os << (e.pass ? "[PASS] " : "[FAIL] ") << e.name << "  measured=" << e.measured
           << "  required" << (e.detail.empty() ? " " : " " + e.detail + " ") << e.threshold
           << "\n";
    }
    os << (report.all_pass() ? "validation: all checks passed\n"
                             : "validation: FAILURES present\n");
}

} // namespace oamqkd
