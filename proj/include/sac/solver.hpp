#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "sac/diagnostics.hpp"
#include "sac/grid.hpp"
#include "sac/noise.hpp"
#include "sac/potential.hpp"
#include "sac/test_function.hpp"

namespace sac {

enum class Scheme { ito_euler, stratonovich_heun };
enum class DiffusionTreatment { explicit_euler, semi_implicit };

// Debug switches that deliberately break the Ito correction terms; they exist
// so the validation suite can prove its checks are falsifiable.
struct DebugMutations {
    bool zero_A = false;
    bool zero_c = false;
    bool zero_psi = false;
};

struct SolverConfig {
    double eps = 0.05;
    double dt = 1e-5;
    double t_end = 0.1;
    Scheme scheme = Scheme::ito_euler;
    DiffusionTreatment diffusion = DiffusionTreatment::explicit_euler;
    double blowup_threshold = 10.0;
    int snapshot_stride = 100;
    // integrate du = grad(u) . X(o dt) only; laplacian and reaction disabled
    bool transport_only = false;
    DebugMutations debug;
};

// Largest stable dt: parabolic CFL for explicit diffusion (with the Ito
// correction folded into the diffusion scale) and the reaction bound
// eps^2 / max|F''| on [-1.2, 1.2]. Semi-implicit runs only carry the
// reaction bound.
double stability_bound(const SolverConfig& cfg, const Grid& grid,
                       const DoubleWell& well, double a_max_eig);

struct SnapshotRow {
    long step = 0;
    double t = 0.0;
    double energy = 0.0;        // E_eps, edge-based gradient part
    double willmore = 0.0;      // int w_eps^2 / eps
    double bv_g = 0.0;          // int |grad G(u)|
    double l1_g = 0.0;          // int |G(u)|
    double umin = 0.0, umax = 0.0;
    double sep_frac = 0.0;      // |{|u| < 0.9}|
    double radius = 0.0;        // set by row_extra hooks, NaN otherwise
    std::vector<double> mu_eta; // localized energies, [0] is eta == 1
    std::vector<double> g_eta;  // <G(u), eta>, [0] is eta == 1
};

// Cumulative energy-identity terms sampled at snapshot times. Entry [k]
// corresponds to rows[k]. All integrals run from t = 0; the residual over
// [t0, t1] is assembled from differences.
struct IdentitySeries {
    std::vector<double> t;
    std::vector<double> mu;   // mu_eta(t)
    std::vector<double> D;    // int_0^t int eta w^2/eps
    std::vector<double> M;    // stochastic terms (Ito sums over recorded dW)
    std::vector<double> P;    // Ito-correction drift terms
    std::vector<double> QV;   // accumulated quadratic variation of M
};

struct TrajectoryResult {
    Grid grid;
    SolverConfig config;
    ScalarField u_final;
    double t_final = 0.0;
    double initial_energy = 0.0;  // Lambda = E_eps(u0)
    std::vector<SnapshotRow> rows;
    // identity[0] is the global (eta == 1) series; identity[1 + j] matches
    // plan.etas[j]
    std::vector<IdentitySeries> identity;
    std::vector<double> increments;  // step-major, steps x n_modes
    int n_modes = 0;
    long steps = 0;
    bool failed = false;
    long fail_step = -1;
    std::vector<ScalarField> fields;  // retained snapshots when requested
};

struct DiagnosticsPlan {
    std::vector<TestFunction> etas;  // localizations beyond the global one
    bool identity = true;
    bool keep_fields = false;
    // optional per-snapshot hook (e.g. interface radius extraction)
    std::function<void(const ScalarField&, SnapshotRow&)> row_extra;
};

struct RunSpec {
    Grid grid;
    std::shared_ptr<const NoiseModel> noise;
    DoubleWell well = DoubleWell::standard();
    SolverConfig config;
    ScalarField u0;
    std::uint64_t stream = 0;  // counter-rng stream seed
    // optional replay table (step-major, steps x n_modes); overrides stream
    const std::vector<double>* increment_table = nullptr;
    DiagnosticsPlan plan;
};

TrajectoryResult run_trajectory(const RunSpec& spec);

// Single-step driver, exposed for scheme-level tests. prepare() computes the
// stencil fields of the current state; apply() advances u in place using
// them. Returns false when the step produced a blowup.
class Stepper {
public:
    Stepper(const Grid& grid, std::shared_ptr<const NoiseModel> noise,
            const DoubleWell& well, const SolverConfig& cfg);

    void prepare(const std::vector<double>& u);
    bool apply(std::vector<double>& u, double t, const double* dW);

    const std::vector<double>& lap() const { return lap_; }
    const std::vector<double>& gx() const { return gx_; }
    const std::vector<double>& gy() const { return gy_; }
    const NoiseGridCache& cache() const { return cache_; }

private:
    void deterministic_drift(const std::vector<double>& u, bool include_lap,
                             std::vector<double>& out) const;

    Grid grid_;
    std::shared_ptr<const NoiseModel> noise_;
    DoubleWell well_;
    SolverConfig cfg_;
    NoiseGridCache cache_;
    bool use_A_ = false, use_c_ = false;
    std::vector<double> lap_, gx_, gy_, hxx_, hyy_, hxy_;
    std::vector<double> drift_, noise0_, pred_, pgx_, pgy_, rhs_;
};

}  // namespace sac
