#include "sac/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sac {

double stability_bound(const SolverConfig& cfg, const Grid& grid,
                       const DoubleWell& well, double a_max_eig) {
    double fpp_max = 0.0;
    for (int i = 0; i <= 240; ++i) {
        const double r = -1.2 + 2.4 * i / 240.0;
        fpp_max = std::max(fpp_max, std::abs(well.fpp(r)));
    }
    const double react = cfg.transport_only
                             ? std::numeric_limits<double>::infinity()
                             : cfg.eps * cfg.eps / fpp_max;
    if (cfg.diffusion == DiffusionTreatment::semi_implicit && !cfg.transport_only)
        return react;
    const double diff =
        grid.h * grid.h / (2.0 * grid.dim * (1.0 + 0.5 * a_max_eig));
    return std::min(diff, react);
}

Stepper::Stepper(const Grid& grid, std::shared_ptr<const NoiseModel> noise,
                 const DoubleWell& well, const SolverConfig& cfg)
    : grid_(grid), noise_(std::move(noise)), well_(well), cfg_(cfg),
      cache_(*noise_, grid) {
    noise_->validate_for(grid_);
    use_A_ = cache_.any_noise && !cfg_.debug.zero_A;
    use_c_ = cache_.any_noise && !cfg_.debug.zero_c;
    const int n = grid_.node_count();
    lap_.assign(n, 0.0);
    gx_.assign(n, 0.0);
    gy_.assign(n, 0.0);
    drift_.assign(n, 0.0);
    noise0_.assign(n, 0.0);
    if (cfg_.scheme == Scheme::ito_euler && use_A_) {
        hxx_.assign(n, 0.0);
        hyy_.assign(n, 0.0);
        hxy_.assign(n, 0.0);
    }
    if (cfg_.scheme == Scheme::stratonovich_heun) {
        pred_.assign(n, 0.0);
        pgx_.assign(n, 0.0);
        pgy_.assign(n, 0.0);
    }
    if (cfg_.diffusion == DiffusionTreatment::semi_implicit)
        rhs_.assign(n, 0.0);
}

void Stepper::prepare(const std::vector<double>& u) {
    laplacian_into(grid_, u.data(), lap_.data());
    gradient_into(grid_, u.data(), gx_.data(),
                  grid_.dim == 2 ? gy_.data() : nullptr);
    if (cfg_.scheme == Scheme::ito_euler && use_A_)
        hessian_into(grid_, u.data(), hxx_.data(),
                     grid_.dim == 2 ? hyy_.data() : nullptr,
                     grid_.dim == 2 ? hxy_.data() : nullptr);
}

void Stepper::deterministic_drift(const std::vector<double>& u, bool include_lap,
                                  std::vector<double>& out) const {
    const int n = grid_.node_count();
    const double ie2 = 1.0 / (cfg_.eps * cfg_.eps);
    const bool dim2 = grid_.dim == 2;
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        if (!cfg_.transport_only) {
            if (include_lap) d = lap_[i];
            d -= well_.fp(u[i]) * ie2;
        }
        out[i] = d;
    }
    if (cfg_.scheme == Scheme::ito_euler && use_A_) {
        for (int i = 0; i < n; ++i) {
            double aH = cache_.a11[i] * hxx_[i];
            if (dim2)
                aH += 2.0 * cache_.a12[i] * hxy_[i] + cache_.a22[i] * hyy_[i];
            out[i] += 0.5 * aH;
        }
    }
    if (cfg_.scheme == Scheme::ito_euler && use_c_) {
        for (int i = 0; i < n; ++i) {
            double cg = cache_.c1[i] * gx_[i];
            if (dim2) cg += cache_.c2[i] * gy_[i];
            out[i] += 0.5 * cg;
        }
    }
    if (cache_.any_drift) {
        for (int i = 0; i < n; ++i) {
            double bg = cache_.bx[i] * gx_[i];
            if (dim2) bg += cache_.by[i] * gy_[i];
            out[i] += bg;
        }
    }
}

bool Stepper::apply(std::vector<double>& u, double, const double* dW) {
    const int n = grid_.node_count();
    const bool dim2 = grid_.dim == 2;
    const int N = cache_.n_modes;

    for (int i = 0; i < n; ++i) noise0_[i] = 0.0;
    for (int k = 0; k < N; ++k) {
        const double w = dW[k];
        if (w == 0.0) continue;
        const double* mx = cache_.mode_x[k].data();
        const double* my = cache_.mode_y[k].data();
        for (int i = 0; i < n; ++i) {
            double dot = gx_[i] * mx[i];
            if (dim2) dot += gy_[i] * my[i];
            noise0_[i] += dot * w;
        }
    }

    if (cfg_.scheme == Scheme::stratonovich_heun) {
        // midpoint treatment of the noise term; drift stepped explicitly
        for (int i = 0; i < n; ++i) pred_[i] = u[i] + noise0_[i];
        gradient_into(grid_, pred_.data(), pgx_.data(),
                      dim2 ? pgy_.data() : nullptr);
        deterministic_drift(u, /*include_lap=*/true, drift_);
        // second noise evaluation at the predictor; pred_ is reusable once
        // its gradient is taken
        std::vector<double>& noise1 = pred_;
        for (int i = 0; i < n; ++i) noise1[i] = 0.0;
        for (int k = 0; k < N; ++k) {
            const double w = dW[k];
            if (w == 0.0) continue;
            const double* mx = cache_.mode_x[k].data();
            const double* my = cache_.mode_y[k].data();
            for (int i = 0; i < n; ++i) {
                double dot = pgx_[i] * mx[i];
                if (dim2) dot += pgy_[i] * my[i];
                noise1[i] += dot * w;
            }
        }
        for (int i = 0; i < n; ++i)
            u[i] += cfg_.dt * drift_[i] + 0.5 * (noise0_[i] + noise1[i]);
    } else if (cfg_.diffusion == DiffusionTreatment::semi_implicit &&
               !cfg_.transport_only) {
        deterministic_drift(u, /*include_lap=*/false, drift_);
        for (int i = 0; i < n; ++i)
            rhs_[i] = u[i] + cfg_.dt * drift_[i] + noise0_[i];
        solve_helmholtz_cg(grid_, cfg_.dt, rhs_, u, 1e-10);
    } else {
        deterministic_drift(u, /*include_lap=*/true, drift_);
        for (int i = 0; i < n; ++i)
            u[i] += cfg_.dt * drift_[i] + noise0_[i];
    }

    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(u[i]) || std::abs(u[i]) > cfg_.blowup_threshold)
            return false;
    }
    return true;
}

namespace {

// Per-localization state for the pathwise energy identity.
struct EtaContext {
    TestFunction fn;
    std::vector<double> eta, gex, gey;       // eta, grad eta at nodes
    std::vector<double> C11, C12, C22, sE;   // drift-term coefficient fields
    double D = 0.0, M = 0.0, P = 0.0, QV = 0.0;
    double prev_dD = 0.0, prev_dP = 0.0;
    double dD = 0.0, dP = 0.0, bpart = 0.0;
    std::vector<double> mk;  // per-mode martingale integrands at current state
    IdentitySeries series;
};

void build_eta_context(EtaContext& ctx, const Grid& grid, const NoiseModel& model,
                       bool zero_psi) {
    const int n = grid.node_count();
    const int my = grid.dim == 2 ? grid.m : 1;
    ctx.eta.assign(n, 0.0);
    ctx.gex.assign(n, 0.0);
    ctx.gey.assign(n, 0.0);
    ctx.C11.assign(n, 0.0);
    ctx.C12.assign(n, 0.0);
    ctx.C22.assign(n, 0.0);
    ctx.sE.assign(n, 0.0);
    ctx.mk.assign(std::max(model.mode_count(), 1), 0.0);
    const int dim = grid.dim;
    for (int iy = 0; iy < my; ++iy)
        for (int ix = 0; ix < grid.m; ++ix) {
            const int idx = dim == 2 ? grid.index(ix, iy) : ix;
            const Vec2 p{grid.coord(ix), dim == 2 ? grid.coord(iy) : 0.0};
            const double e = ctx.fn.value(p);
            const Vec2 ge = ctx.fn.grad(p);
            ctx.eta[idx] = e;
            ctx.gex[idx] = ge.x;
            ctx.gey[idx] = ge.y;
            if (zero_psi || model.mode_count() == 0) continue;

            Mat2 Psi_full;
            double psi = 0.0;
            model.psi_fields(0.0, p, Psi_full, psi);
            Mat2 psi0 = Psi_full;
            for (int d = 0; d < dim; ++d) psi0.a[d][d] -= 0.5 * psi;

            Mat2 C = psi0 * e;
            double s = e * psi;
            if (ctx.fn.kind != TestFunctionKind::constant_one) {
                const Vec2 c = model.correction_c(0.0, p);
                const Mat2 A = model.correction_A(0.0, p);
                const Vec2 divA = model.div_A(0.0, p);
                Mat2 dA[2];
                model.grad_A(0.0, p, dA);
                const Mat2 He = ctx.fn.hess(p);
                // Mjk = sum_i d_i(eta) d_k a_ij ; C += -sym(M)/2
                Mat2 Mm;
                for (int j = 0; j < dim; ++j)
                    for (int k = 0; k < dim; ++k) {
                        double acc = 0.0;
                        for (int i = 0; i < dim; ++i) acc += ge[i] * dA[k].a[i][j];
                        Mm.a[j][k] = acc;
                    }
                for (int j = 0; j < dim; ++j)
                    for (int k = 0; k < dim; ++k)
                        C.a[j][k] -= 0.25 * (Mm.a[j][k] + Mm.a[k][j]);
                double AHe = 0.0, geDivA = 0.0, geC = 0.0;
                for (int j = 0; j < dim; ++j) {
                    geDivA += ge[j] * divA[j];
                    geC += ge[j] * c[j];
                    for (int k = 0; k < dim; ++k) AHe += A.a[j][k] * He.a[j][k];
                }
                s += -0.5 * geC + 0.5 * AHe + geDivA;
            }
            ctx.C11[idx] = C.a[0][0];
            ctx.C12[idx] = 0.5 * (C.a[0][1] + C.a[1][0]);
            ctx.C22[idx] = C.a[1][1];
            ctx.sE[idx] = s;
        }
}

}  // namespace

TrajectoryResult run_trajectory(const RunSpec& spec) {
    const Grid& grid = spec.grid;
    const SolverConfig& cfg = spec.config;
    if (!(cfg.eps > 0.0)) throw std::invalid_argument("run_trajectory: eps <= 0");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("run_trajectory: dt <= 0");
    if (cfg.snapshot_stride < 1)
        throw std::invalid_argument("run_trajectory: snapshot_stride < 1");
    if (!(spec.u0.grid == grid))
        throw std::invalid_argument("run_trajectory: initial field grid mismatch");

    const long steps = std::lround(cfg.t_end / cfg.dt);
    Stepper stepper(grid, spec.noise, spec.well, cfg);
    const NoiseGridCache& cache = stepper.cache();
    const int N = cache.n_modes;
    const int n = grid.node_count();
    const bool dim2 = grid.dim == 2;

    if (spec.increment_table &&
        static_cast<long>(spec.increment_table->size()) < steps * N)
        throw std::invalid_argument("run_trajectory: increment table too short");

    TrajectoryResult res;
    res.grid = grid;
    res.config = cfg;
    res.n_modes = N;
    res.steps = steps;
    res.increments.reserve(static_cast<std::size_t>(steps) * N);

    std::vector<EtaContext> etas;
    if (spec.plan.identity) {
        etas.resize(1 + spec.plan.etas.size());
        etas[0].fn = TestFunction::one();
        for (std::size_t j = 0; j < spec.plan.etas.size(); ++j)
            etas[1 + j].fn = spec.plan.etas[j];
        for (auto& ctx : etas)
            build_eta_context(ctx, grid, *spec.noise, cfg.debug.zero_psi);
    }

    std::vector<double> u = spec.u0.v;
    std::vector<double> wcur(n, 0.0), gu(n, 0.0), dwbuf(std::max(N, 1), 0.0);
    double t = 0.0;

    const auto take_snapshot = [&](long k) {
        SnapshotRow row;
        row.step = k;
        row.t = t;
        ScalarField uf;
        uf.grid = grid;
        uf.v = u;
        row.energy = energy(uf, spec.well, cfg.eps);
        // willmore from the global D integrand of this step
        double wil = 0.0;
        if (dim2) {
            for (int iy = 0; iy < grid.m; ++iy)
                for (int ix = 0; ix < grid.m; ++ix) {
                    const int i = grid.index(ix, iy);
                    wil += grid.weight(ix, iy) * wcur[i] * wcur[i];
                }
        } else {
            for (int i = 0; i < n; ++i)
                wil += grid.weight1(i) * wcur[i] * wcur[i];
        }
        row.willmore = wil / cfg.eps;
        for (int i = 0; i < n; ++i) gu[i] = spec.well.g(u[i]);
        {
            ScalarField gf;
            gf.grid = grid;
            gf.v = gu;
            VectorFieldSample gg = gradient(gf);
            double bv = 0.0, l1 = 0.0, sep = 0.0;
            double umin = u[0], umax = u[0];
            if (dim2) {
                for (int iy = 0; iy < grid.m; ++iy)
                    for (int ix = 0; ix < grid.m; ++ix) {
                        const int i = grid.index(ix, iy);
                        const double wq = grid.weight(ix, iy);
                        bv += wq * std::sqrt(gg.comp[0][i] * gg.comp[0][i] +
                                             gg.comp[1][i] * gg.comp[1][i]);
                        l1 += wq * std::abs(gu[i]);
                        if (std::abs(u[i]) < 0.9) sep += wq;
                        umin = std::min(umin, u[i]);
                        umax = std::max(umax, u[i]);
                    }
            } else {
                for (int i = 0; i < n; ++i) {
                    const double wq = grid.weight1(i);
                    bv += wq * std::abs(gg.comp[0][i]);
                    l1 += wq * std::abs(gu[i]);
                    if (std::abs(u[i]) < 0.9) sep += wq;
                    umin = std::min(umin, u[i]);
                    umax = std::max(umax, u[i]);
                }
            }
            row.bv_g = bv;
            row.l1_g = l1;
            row.sep_frac = sep;
            row.umin = umin;
            row.umax = umax;
        }
        row.radius = std::numeric_limits<double>::quiet_NaN();
        for (auto& ctx : etas) {
            row.mu_eta.push_back(
                ctx.fn.kind == TestFunctionKind::constant_one
                    ? row.energy
                    : surface_measure(uf, spec.well, cfg.eps, ctx.fn));
            double ge = 0.0;
            if (dim2) {
                for (int iy = 0; iy < grid.m; ++iy)
                    for (int ix = 0; ix < grid.m; ++ix) {
                        const int i = grid.index(ix, iy);
                        ge += grid.weight(ix, iy) * ctx.eta[i] * gu[i];
                    }
            } else {
                for (int i = 0; i < n; ++i)
                    ge += grid.weight1(i) * ctx.eta[i] * gu[i];
            }
            row.g_eta.push_back(ge);
        }
        if (spec.plan.row_extra) spec.plan.row_extra(uf, row);
        if (spec.plan.keep_fields) res.fields.push_back(uf);
        for (std::size_t j = 0; j < etas.size(); ++j) {
            EtaContext& ctx = etas[j];
            ctx.series.t.push_back(t);
            ctx.series.mu.push_back(row.mu_eta[j]);
            ctx.series.D.push_back(ctx.D);
            ctx.series.M.push_back(ctx.M);
            ctx.series.P.push_back(ctx.P);
            ctx.series.QV.push_back(ctx.QV);
        }
        res.rows.push_back(std::move(row));
    };

    for (long k = 0;; ++k) {
        stepper.prepare(u);
        const double ieps = 1.0 / cfg.eps;
        for (int i = 0; i < n; ++i)
            wcur[i] = -cfg.eps * stepper.lap()[i] + spec.well.fp(u[i]) * ieps;

        // identity integrands at the current state
        for (auto& ctx : etas) {
            ctx.dD = 0.0;
            ctx.dP = 0.0;
            ctx.bpart = 0.0;
            for (int kk = 0; kk < N; ++kk) ctx.mk[kk] = 0.0;
        }
        if (!etas.empty()) {
            const double* gx = stepper.gx().data();
            const double* gy = stepper.gy().data();
            const int my = dim2 ? grid.m : 1;
            for (int iy = 0; iy < my; ++iy)
                for (int ix = 0; ix < grid.m; ++ix) {
                    const int i = dim2 ? grid.index(ix, iy) : ix;
                    const double wq = dim2 ? grid.weight(ix, iy) : grid.weight1(ix);
                    const double gxi = gx[i], gyi = dim2 ? gy[i] : 0.0;
                    const double wi = wcur[i];
                    const double en =
                        0.5 * cfg.eps * (gxi * gxi + gyi * gyi) +
                        spec.well.f(u[i]) * ieps;
                    const double w2e = wi * wi * ieps;
                    double dotb = 0.0;
                    if (cache.any_drift) {
                        dotb = cache.bx[i] * gxi;
                        if (dim2) dotb += cache.by[i] * gyi;
                    }
                    for (auto& ctx : etas) {
                        const double e = ctx.eta[i];
                        ctx.dD += wq * e * w2e;
                        const double quad = ctx.C11[i] * gxi * gxi +
                                            2.0 * ctx.C12[i] * gxi * gyi +
                                            ctx.C22[i] * gyi * gyi;
                        ctx.dP += wq * (cfg.eps * quad + ctx.sE[i] * en);
                        const double factor =
                            e * wi - cfg.eps * (gxi * ctx.gex[i] + gyi * ctx.gey[i]);
                        if (cache.any_drift) ctx.bpart += wq * factor * dotb;
                        for (int kk = 0; kk < N; ++kk) {
                            double dot = cache.mode_x[kk][i] * gxi;
                            if (dim2) dot += cache.mode_y[kk][i] * gyi;
                            ctx.mk[kk] += wq * factor * dot;
                        }
                    }
                }
        }
        if (k > 0) {
            for (auto& ctx : etas) {
                ctx.D += 0.5 * cfg.dt * (ctx.prev_dD + ctx.dD);
                ctx.P += 0.5 * cfg.dt * (ctx.prev_dP + ctx.dP);
            }
        }
        for (auto& ctx : etas) {
            ctx.prev_dD = ctx.dD;
            ctx.prev_dP = ctx.dP;
        }

        if (k % cfg.snapshot_stride == 0 || k == steps) take_snapshot(k);
        if (k == 0) res.initial_energy = res.rows.front().energy;
        if (k == steps) break;

        const double* dW = dwbuf.data();
        if (spec.increment_table) {
            dW = spec.increment_table->data() + static_cast<std::size_t>(k) * N;
        } else {
            for (int kk = 0; kk < N; ++kk)
                dwbuf[kk] = brownian_increment(spec.stream, k, kk, cfg.dt);
        }
        for (int kk = 0; kk < N; ++kk) res.increments.push_back(dW[kk]);

        for (auto& ctx : etas) {
            double dM = ctx.bpart * cfg.dt;
            double qv = 0.0;
            for (int kk = 0; kk < N; ++kk) {
                dM += ctx.mk[kk] * dW[kk];
                qv += ctx.mk[kk] * ctx.mk[kk];
            }
            ctx.M += dM;
            ctx.QV += qv * cfg.dt;
        }

        if (!stepper.apply(u, t, dW)) {
            res.failed = true;
            res.fail_step = k;
            break;
        }
        t = (k + 1) * cfg.dt;
    }

    res.u_final = ScalarField(grid);
    res.u_final.v = u;
    res.t_final = t;
    for (auto& ctx : etas) res.identity.push_back(std::move(ctx.series));
    return res;
}

}  // namespace sac
