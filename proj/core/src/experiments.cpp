#include "blochlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "blochlab/freefermion.hpp"
#include "blochlab/quasiadiabatic.hpp"

namespace blochlab {

using std::numbers::pi;

void ExperimentConfig::validate() const {
    const auto names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end())
        throw UnknownExperiment("unknown experiment: " + experiment);
    if (!std::is_sorted(sizes.begin(), sizes.end()))
        throw ConfigInvalid("config field 'sizes': L list must be ascending");
    if (workers < 1) throw ConfigInvalid("config field 'workers': must be >= 1");
    if (tol_scale <= 0) throw ConfigInvalid("config field 'tol_scale': must be positive");
    if (filling <= 0 || filling >= 1) throw ConfigInvalid("config field 'filling': need 0 < rho < 1");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigInvalid(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    try {
        c.experiment = j.at("experiment").get<std::string>();
        if (j.contains("params"))
            for (auto& [k, v] : j.at("params").items()) c.params[k] = v.get<double>();
        if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<int>>();
        if (j.contains("fluxes")) c.fluxes = j.at("fluxes").get<std::vector<double>>();
        if (j.contains("filling")) c.filling = j.at("filling").get<double>();
        if (j.contains("tolerances"))
            for (auto& [k, v] : j.at("tolerances").items()) c.tolerances[k] = v.get<double>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("seed")) c.seed = j.at("seed").get<unsigned>();
        if (j.contains("workers")) c.workers = j.at("workers").get<int>();
        if (j.contains("tol_scale")) c.tol_scale = j.at("tol_scale").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigInvalid(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

void ScalingSeries::add(const std::string& experiment, int L, const std::string& quantity,
                        double value, double gap, int p, double residual, unsigned seed) {
    rows.push_back({experiment, L, quantity, value, gap, p, residual, seed});
}

std::vector<double> ScalingSeries::sizes_of(const std::string& quantity) const {
    std::vector<double> out;
    for (const auto& r : rows)
        if (r.quantity == quantity) out.push_back(r.L);
    return out;
}

std::vector<double> ScalingSeries::values_of(const std::string& quantity) const {
    std::vector<double> out;
    for (const auto& r : rows)
        if (r.quantity == quantity) out.push_back(r.value);
    return out;
}

DecayFit ScalingSeries::fit(const std::string& quantity) const {
    return fit_decay(sizes_of(quantity), values_of(quantity));
}

const char* ScalingSeries::csv_header() { return "experiment,L,quantity,value,gap,p,residual,seed"; }

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

std::string ScalingSeries::csv() const {
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const auto& r : rows)
        out << r.experiment << ',' << r.L << ',' << r.quantity << ',' << fmt(r.value) << ','
            << fmt(r.gap) << ',' << r.p << ',' << fmt(r.residual) << ',' << r.seed << '\n';
    return out.str();
}

void ScalingSeries::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << csv();
}

namespace {

struct Checker {
    RunResult& result;
    double scale;

    void require(bool ok, const std::string& what, const std::string& detail = "") {
        std::string line = (ok ? "pass: " : "FAIL: ") + what;
        if (!detail.empty()) line += " (" + detail + ")";
        result.checks.push_back(line);
        if (!ok) result.passed = false;
    }
    void leq(double value, double limit, const std::string& what) {
        require(value <= limit * scale,
                what, fmt(value) + " vs limit " + fmt(limit * scale));
    }
    void window(double value, double lo, double hi, const std::string& what) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo) * scale;
        require(value >= mid - half && value <= mid + half, what,
                fmt(value) + " vs [" + fmt(mid - half) + ", " + fmt(mid + half) + "]");
    }
};

double param(const ExperimentConfig& c, const std::string& key, double fallback) {
    auto it = c.params.find(key);
    return it == c.params.end() ? fallback : it->second;
}

double tolerance(const ExperimentConfig& c, const std::string& key, double fallback) {
    auto it = c.tolerances.find(key);
    return it == c.tolerances.end() ? fallback : it->second;
}

std::vector<int> sizes_or(const ExperimentConfig& c, std::vector<int> fallback) {
    return c.sizes.empty() ? fallback : c.sizes;
}

double flux_or(const ExperimentConfig& c, double fallback) {
    return c.fluxes.empty() ? fallback : c.fluxes.front();
}

int half_filling(int L, double rho) { return std::max(1, (int)std::lround(rho * L)); }

// log-log fit of |j| vs L with an even/odd-N covariate: half-filled rings
// alternate between Fermi-sea parities whose 1/L coefficients differ, so the
// plain two-parameter fit picks up a spurious tilt. Model:
//   ln j = a + p ln L + b s,  s = +-1 for even/odd N.
double parity_resolved_exponent(const std::vector<double>& L, const std::vector<int>& N,
                                const std::vector<double>& values) {
    const int n = static_cast<int>(L.size());
    if (n < 4) throw InsufficientPoints("parity_resolved_exponent: need at least four points");
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        if (values[i] <= 0) throw NonPositiveValues("parity_resolved_exponent: need |j| > 0");
        X(i, 0) = 1.0;
        X(i, 1) = std::log(L[i]);
        X(i, 2) = N[i] % 2 == 0 ? 1.0 : -1.0;
        y(i) = std::log(values[i]);
    }
    Eigen::Vector3d beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    return beta(1);
}

// Runs fn(i) for i in [0, n) on a small pool; results land in submission order
// so the CSV is byte-identical regardless of worker count.
template <typename Fn>
std::vector<ScalingSeries> parallel_sweep(int n, int workers, Fn fn) {
    std::vector<ScalingSeries> out(n);
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

void merge(ScalingSeries& into, const std::vector<ScalingSeries>& parts) {
    for (const auto& part : parts)
        into.rows.insert(into.rows.end(), part.rows.begin(), part.rows.end());
}

// ---------------------------------------------------------------- gapless-1d

void run_gapless_1d(const ExperimentConfig& c, RunResult& res, Checker& check) {
    const auto Ls = sizes_or(c, {8, 10, 12, 14});
    const double t = param(c, "t", 1.0), V = param(c, "V", 1.0), phi = flux_or(c, 1.0);

    auto parts = parallel_sweep((int)Ls.size(), c.workers, [&](int i) {
        const int L = Ls[i];
        ModelSpec model = tv_ring(L, t, V, phi);
        auto basis = FockBasis::fixed_charge(L, half_filling(L, c.filling));
        SpectralData spec = diagonalize(model.realize(basis), DiagMode::lowest_k, 6, c.seed);
        BlochBound b = bloch_bound_1d(model, spec);
        ScalingSeries s;
        s.add(c.experiment, L, "current", std::abs(b.current), b.gap, b.p, 0.0, c.seed);
        s.add(c.experiment, L, "bound", b.bound, b.gap, b.p, 0.0, c.seed);
        return s;
    });
    merge(res.series, parts);

    auto cur = res.series.values_of("current");
    auto bnd = res.series.values_of("bound");
    for (size_t i = 0; i < cur.size(); ++i)
        check.require(cur[i] <= bnd[i] + 1e-10,
                      "variational bound holds at L=" + std::to_string(Ls[i]),
                      fmt(cur[i]) + " <= " + fmt(bnd[i]));
    if (cur.size() >= 4) {
        std::vector<double> Ld;
        std::vector<int> Ns;
        for (int L : Ls) {
            Ld.push_back(L);
            Ns.push_back(half_filling(L, c.filling));
        }
        const double p = parity_resolved_exponent(Ld, Ns, cur);
        check.window(p, tolerance(c, "exp_lo", -1.3), tolerance(c, "exp_hi", -0.7),
                     "current decay exponent is O(1/L) (parity-resolved fit)");
    }
}

// ----------------------------------------------------------------- gapped-1d

void run_gapped_1d(const ExperimentConfig& c, RunResult& res, Checker& check) {
    std::vector<int> Ls = c.sizes;
    if (Ls.empty())
        for (int L = 20; L <= 400; L += 20) Ls.push_back(L);
    const double t1 = param(c, "t1", 1.0), t2 = param(c, "t2", 0.5), phi = flux_or(c, 1.0);

    for (int L : Ls) {
        const double j = freefermion::dimerized_current_exact(L, t1, t2, phi);
        res.series.add(c.experiment, L, "current", std::abs(j), 2.0 * std::abs(t1 - t2), 1, 0.0,
                       c.seed);
    }

    DecayFit f = res.series.fit("current");
    check.require(f.law == DecayLaw::exponential, "exponential fit preferred over power law",
                  "AIC slope " + fmt(f.exponent));
    // local log-log slopes beyond L = 100
    auto sz = res.series.sizes_of("current");
    auto vals = res.series.values_of("current");
    double max_slope = -1e300;
    for (size_t i = 1; i < sz.size(); ++i)
        if (sz[i - 1] >= 100)
            max_slope = std::max(max_slope,
                                 std::log(vals[i] / vals[i - 1]) / std::log(sz[i] / sz[i - 1]));
    check.require(max_slope < -3.0, "local power-law slope < -3 beyond L=100", fmt(max_slope));

    // interacting many-body comparison: CDW-gapped V=4 vs gapless V=1
    const auto mbLs = std::vector<int>{8, 10, 12, 14};
    const double t = param(c, "t", 1.0);
    auto parts = parallel_sweep((int)mbLs.size(), c.workers, [&](int i) {
        const int L = mbLs[i];
        ScalingSeries s;
        for (double V : {4.0, 1.0}) {
            ModelSpec model = tv_ring(L, t, V, phi);
            auto basis = FockBasis::fixed_charge(L, L / 2);
            SpectralData spec = diagonalize(model.realize(basis), DiagMode::lowest_k, 6, c.seed);
            GroundSpace g = ground_cluster(spec);
            const double trPJ =
                std::abs(g.trace_with(current_density(model, basis))) / std::max(1, g.p);
            s.add(c.experiment, L, V > 2 ? "mb_gapped_current" : "mb_gapless_current", trPJ,
                  g.gamma, g.p, 0.0, c.seed);
        }
        return s;
    });
    merge(res.series, parts);
    auto gapped = res.series.values_of("mb_gapped_current");
    auto gapless = res.series.values_of("mb_gapless_current");
    for (size_t i = 0; i < gapped.size(); ++i)
        check.require(gapped[i] < gapless[i],
                      "CDW-gapped current below gapless current at L=" + std::to_string(mbLs[i]),
                      fmt(gapped[i]) + " < " + fmt(gapless[i]));
}

// ---------------------------------------------------------------- thermal-1d

void run_thermal_1d(const ExperimentConfig& c, RunResult& res, Checker& check) {
    const auto Ls = sizes_or(c, {8, 10, 12});
    const double t = param(c, "t", 1.0), V = param(c, "V", 1.0), phi = flux_or(c, 1.0);
    const double beta = param(c, "beta", 2.0);

    auto parts = parallel_sweep((int)Ls.size(), c.workers, [&](int i) {
        const int L = Ls[i];
        ModelSpec model = tv_ring(L, t, V, phi);
        auto sectors = diagonalize_all_sectors(model);
        const double j = thermal_expectation(
            sectors, beta, [&](BasisPtr b) { return current_density(model, b); });
        ThermalBound tb = thermal_bloch_bound(model, sectors, beta);
        ScalingSeries s;
        s.add(c.experiment, L, "thermal_current", std::abs(j), 0.0, 1, 0.0, c.seed);
        s.add(c.experiment, L, "thermal_bound", tb.bound, 0.0, 1, 0.0, c.seed);
        return s;
    });
    merge(res.series, parts);

    auto cur = res.series.values_of("thermal_current");
    auto bnd = res.series.values_of("thermal_bound");
    for (size_t i = 0; i < cur.size(); ++i)
        check.require(cur[i] <= bnd[i] + 1e-10,
                      "thermal bound holds at L=" + std::to_string(Ls[i]),
                      fmt(cur[i]) + " <= " + fmt(bnd[i]));
    // The claim is the C/L envelope, not the current's own decay law: at fixed
    // beta the current falls off thermally (faster than 1/L), so the O(1/L)
    // fit targets the variational bound series.
    if (bnd.size() >= 3) {
        LineFit f;
        {
            std::vector<double> logL, logv;
            for (size_t i = 0; i < bnd.size(); ++i) {
                logL.push_back(std::log((double)Ls[i]));
                logv.push_back(std::log(bnd[i]));
            }
            f = fit_line(logL, logv);
        }
        check.window(f.slope, tolerance(c, "exp_lo", -1.3), tolerance(c, "exp_hi", -0.7),
                     "thermal C/L envelope exponent is O(1/L)");
    }
}

// -------------------------------------------------------------- torus-gapped

void run_torus_gapped(const ExperimentConfig& c, RunResult& res, Checker& check) {
    const auto Ls = sizes_or(c, {3});
    const double t = param(c, "t", 1.0), mu0 = param(c, "mu", 5.0), phi = flux_or(c, 1.0);

    for (int L : Ls) {
        Lattice lat(LatticeKind::torus2d, L);
        std::vector<double> mu(lat.num_sites());
        int N = 0;
        for (int x = 0; x < lat.num_sites(); ++x) {
            mu[x] = ((lat.x1(x) + lat.x2(x)) % 2 == 0) ? mu0 : -mu0;
            if (mu[x] < 0) ++N;
        }
        ModelSpec model = torus_hopping(L, t, mu, phi);
        auto basis = FockBasis::fixed_charge(lat.num_sites(), N);
        SpectralData spec = diagonalize(model.realize(basis));
        SlabBound sb = quasi1d_bound(model, spec);
        GroundSpace g = ground_cluster(spec);
        res.series.add(c.experiment, L, "slab_current", std::abs(sb.slab_current), g.gamma, g.p,
                       0.0, c.seed);
        res.series.add(c.experiment, L, "slab_bound", sb.bound, g.gamma, g.p, 0.0, c.seed);
    }

    auto cur = res.series.values_of("slab_current");
    auto bnd = res.series.values_of("slab_bound");
    for (size_t i = 0; i < cur.size(); ++i) {
        check.require(cur[i] <= bnd[i] + 1e-10, "slab variational bound holds",
                      fmt(cur[i]) + " <= " + fmt(bnd[i]));
        // the 2D bound degenerates to O(1) while the gapped current is tiny
        check.leq(cur[i], tolerance(c, "current_ratio", 0.1) * bnd[i],
                  "gapped slab current far below the degenerate bound");
    }
}

// ---------------------------------------------------------------- k-operator

void run_k_operator(const ExperimentConfig& c, RunResult& res, Checker& check) {
    const auto Ls = sizes_or(c, {8, 10, 12});
    const double t1 = param(c, "t1", 1.0), t2 = param(c, "t2", 0.02), phi = flux_or(c, 1.0);
    const int R = 1;

    auto parts = parallel_sweep((int)Ls.size(), c.workers, [&](int i) {
        const int L = Ls[i];
        ModelSpec model = dimerized_ring(L, t1, t2, phi);
        auto basis = FockBasis::fixed_charge(L, L / 2);
        SpectralData spec = diagonalize(model.realize(basis));
        GroundSpace g = ground_projector(spec);

        Region gamma = half_torus(model.lattice);
        Region sm = boundary_strip(model.lattice, StripSide::minus, R);
        Region sp = boundary_strip(model.lattice, StripSide::plus, R);
        FilterSpec filt(0.9 * g.gamma);
        DressedCharge d = build_dressed_charge(model, spec, gamma, sm, sp, filt);
        Region wide = wide_strip(model.lattice, StripSide::minus, std::max(R + 1, L / 4));
        GappedBlochResult gb = gapped_bloch_check(model, spec, d, wide);

        const double qnorm = d.Q.operator_norm();
        ScalingSeries s;
        s.add(c.experiment, L, "comm_filter_defect", d.comm_filter_defect, g.gamma, g.p, qnorm,
              c.seed);
        s.add(c.experiment, L, "comm_dressed", d.comm_dressed, g.gamma, g.p, 0.0, c.seed);
        s.add(c.experiment, L, "offgap_defect", d.offgap_defect, g.gamma, g.p, 0.0, c.seed);
        s.add(c.experiment, L, "proofline_residual", gb.residual, g.gamma, g.p, 0.0, c.seed);
        s.add(c.experiment, L, "trPJ", std::abs(gb.trPJ), g.gamma, g.p, 0.0, c.seed);
        for (const auto& [dist, val] : d.locality_decay)
            s.add(c.experiment, L, "k_locality", val, g.gamma, g.p, dist, c.seed);
        return s;
    });
    merge(res.series, parts);

    for (const auto& r : res.series.rows) {
        if (r.quantity == "comm_filter_defect")
            check.leq(r.value, tolerance(c, "comm_tol", 1e-9) * r.residual,
                      "||[K,P]-[Q,P]|| <= 1e-9 ||Q|| at L=" + std::to_string(r.L));
        if (r.quantity == "comm_dressed")
            check.leq(r.value, tolerance(c, "dressed_tol", 1e-9),
                      "||[Qbar,P]|| <= 1e-9 at L=" + std::to_string(r.L));
        if (r.quantity == "offgap_defect")
            check.leq(r.value, tolerance(c, "offgap_tol", 1e-12),
                      "off-gap elements of K - Q vanish at L=" + std::to_string(r.L));
    }

    // K_- locality on the largest chain: monotone beyond 2R and a >= 1e3 drop
    const int Lmax = Ls.back();
    std::vector<std::pair<int, double>> decay;
    for (const auto& r : res.series.rows)
        if (r.quantity == "k_locality" && r.L == Lmax)
            decay.emplace_back((int)r.residual, r.value);
    std::sort(decay.begin(), decay.end());
    bool monotone = true;
    double peak = 0, last = 0;
    for (size_t i = 0; i < decay.size(); ++i) {
        peak = std::max(peak, decay[i].second);
        if (decay[i].first < 2 * R) continue;
        if (last > 0 && decay[i].second > last * (1.0 + 1e-9)) monotone = false;
        last = decay[i].second;
    }
    check.require(monotone, "||[K_-, q_x]|| monotone beyond distance 2R on L=" +
                                std::to_string(Lmax));
    check.require(last > 0 && peak / last >= tolerance(c, "drop", 1e3) / c.tol_scale,
                  "K_- locality drop >= 1e3 across the chain",
                  "ratio " + fmt(last > 0 ? peak / last : 0.0));

    // proof-line residual strictly decreases with L
    auto resid = res.series.values_of("proofline_residual");
    bool decreasing = true;
    for (size_t i = 1; i < resid.size(); ++i) decreasing = decreasing && resid[i] < resid[i - 1];
    std::string detail;
    for (double v : resid) detail += fmt(v) + " ";
    check.require(decreasing, "proof-line residual strictly decreasing in L", detail);
}

// --------------------------------------------------------------- index-bloch

void run_index_bloch(const ExperimentConfig& c, RunResult& res, Checker& check) {
    const auto Ls = sizes_or(c, {12});
    const double t1 = param(c, "t1", 1.0), t2 = param(c, "t2", 0.05), phi = flux_or(c, 1.0);

    for (int L : Ls) {
        ModelSpec model = dimerized_ring(L, t1, t2, phi);
        auto basis = FockBasis::fixed_charge(L, L / 2);
        SpectralData spec = diagonalize(model.realize(basis));
        std::vector<double> ts;
        for (int k = 1; k <= 50; ++k) ts.push_back(0.1 * k);
        BlochPathwayResult b = index_bloch_pathway(model, spec, ts);
        res.series.add(c.experiment, L, "trPJ", b.trPJ, 0.0, 1, 0.0, c.seed);
        res.series.add(c.experiment, L, "index_max_dist", b.max_dist, 0.0, 1,
                       b.max_quadrature_error, c.seed);
    }
    for (const auto& r : res.series.rows)
        if (r.quantity == "index_max_dist") {
            check.leq(r.value, tolerance(c, "dist_tol", 1e-5),
                      "max_t dist(t tr(PJ), Z) <= 1e-5 at L=" + std::to_string(r.L));
            check.leq(r.residual, 1e-8, "time-evolution quadrature consistent with t tr(PJ)");
        }
}

// ---------------------------------------------------------------------- pump

void run_pump(const ExperimentConfig& c, RunResult& res, Checker& check) {
    const int L = sizes_or(c, {60}).back();
    const double t = param(c, "t", 1.0), amp = param(c, "amplitude", 1.0);
    const int steps = (int)param(c, "steps", 400);
    Lattice lat(LatticeKind::ring, L);
    const int N = L / 2;

    auto cycle = [&](double s) { return freefermion::rice_mele_hamiltonian(L, t, amp, s); };
    auto reversed = [&](double s) { return cycle(1.0 - s); };
    auto trivial = [&](double) { return cycle(0.0); };

    freefermion::PumpResult fwd = freefermion::pump(cycle, N, lat, steps);
    freefermion::PumpResult rev = freefermion::pump(reversed, N, lat, steps);
    freefermion::PumpResult sta = freefermion::pump(trivial, N, lat, steps);

    res.series.add(c.experiment, L, "pump_cycle", fwd.transported, fwd.min_gap, 1, 0.0, c.seed);
    res.series.add(c.experiment, L, "pump_reversed", rev.transported, rev.min_gap, 1, 0.0,
                   c.seed);
    res.series.add(c.experiment, L, "pump_trivial", sta.transported, sta.min_gap, 1, 0.0, c.seed);

    const double tol = tolerance(c, "pump_tol", 1e-3);
    check.leq(std::abs(fwd.transported - std::round(fwd.transported)), tol,
              "cycle transports an integer charge");
    check.require(std::lround(std::abs(fwd.transported)) == 1,
                  "cycle transports exactly one unit", fmt(fwd.transported));
    check.leq(std::abs(fwd.transported + rev.transported), 2 * tol,
              "reversed cycle flips the sign");
    check.leq(std::abs(sta.transported), 1e-9, "static path transports nothing");
}

// ----------------------------------------------------------- mesoscopic-ring

void run_mesoscopic_ring(const ExperimentConfig& c, RunResult& res, Checker& check) {
    struct Point {
        int L;
        double rho;
        double phi;
    };
    const std::vector<Point> table = {
        {101, 1.0 / 3.0, pi / 2}, {501, 1.0 / 3.0, pi / 2}, {1001, 1.0 / 5.0, 1.0}};

    // The closed-form 1/L asymptotic is the odd-N one (paired +-k modes cancel;
    // an even sea keeps an unpaired O(1/L) mode), so target the nearest odd N.
    auto nearest_odd = [](double x) {
        const long n = std::lround(x);
        if (n % 2 != 0) return (int)n;
        return (int)(x > n ? n + 1 : n - 1);
    };

    auto remainder_constant = [&](double rho, double phi) {
        double worst = 0;
        for (int L = 101; L <= 1001; L += 100) {
            const int N = nearest_odd(rho * L);
            auto f = freefermion::fermi_current(L, phi, N);
            worst = std::max(worst, std::abs(f.exact - f.asymptotic) * L * L);
        }
        return worst;
    };

    for (const auto& pt : table) {
        const int N = nearest_odd(pt.rho * pt.L);
        auto f = freefermion::fermi_current(pt.L, pt.phi, N);
        const double c_rem = remainder_constant(pt.rho, pt.phi);
        res.series.add(c.experiment, pt.L, "ring_current", f.exact, 0.0, 1,
                       std::abs(f.exact - f.asymptotic), c.seed);
        res.series.add(c.experiment, pt.L, "ring_asymptotic", f.asymptotic, 0.0, 1, c_rem,
                       c.seed);
        check.leq(std::abs(f.exact - f.asymptotic), 5.0 * c_rem / (double(pt.L) * pt.L),
                  "closed form matches asymptotic at L=" + std::to_string(pt.L));
    }

    // a longer sweep for the downstream decay fit
    for (int L = 101; L <= 2001; L += 100) {
        const int N = nearest_odd(L / 3.0);
        auto f = freefermion::fermi_current(L, pi / 2, N);
        res.series.add(c.experiment, L, "sweep_current", std::abs(f.exact), 0.0, 1, 0.0, c.seed);
    }
    DecayFit f = res.series.fit("sweep_current");
    check.window(f.exponent, -1.1, -0.9, "flux-ring current scales as 1/L");
}

} // namespace

std::vector<std::string> experiment_names() {
    return {"gapless-1d", "gapped-1d",   "thermal-1d", "torus-gapped",
            "k-operator", "index-bloch", "pump",       "mesoscopic-ring"};
}

RunResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    RunResult res;
    Checker check{res, config.tol_scale};

    if (config.experiment == "gapless-1d")
        run_gapless_1d(config, res, check);
    else if (config.experiment == "gapped-1d")
        run_gapped_1d(config, res, check);
    else if (config.experiment == "thermal-1d")
        run_thermal_1d(config, res, check);
    else if (config.experiment == "torus-gapped")
        run_torus_gapped(config, res, check);
    else if (config.experiment == "k-operator")
        run_k_operator(config, res, check);
    else if (config.experiment == "index-bloch")
        run_index_bloch(config, res, check);
    else if (config.experiment == "pump")
        run_pump(config, res, check);
    else if (config.experiment == "mesoscopic-ring")
        run_mesoscopic_ring(config, res, check);
    else
        throw UnknownExperiment("unknown experiment: " + config.experiment);

    if (!config.out.empty()) res.series.write_csv(config.out);
    return res;
}

} // namespace blochlab
