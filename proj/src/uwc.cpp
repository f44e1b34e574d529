#include "prqpe/uwc.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "prqpe/errors.hpp"
#include "prqpe/extract.hpp"

namespace prqpe {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

int block_dim(TransformBlock block, int n) {
    switch (block) {
        case TransformBlock::oo: return TransformParams::n_kappa(n);
        case TransformBlock::bliss: return TransformParams::n_bliss(n);
        case TransformBlock::spin_bliss: return TransformParams::n_spin_bliss(n);
    }
    return 0;
}

Eigen::MatrixXd unpack_symmetric(const Eigen::VectorXd& v, int offset, int n) {
    Eigen::MatrixXd m(n, n);
    int idx = offset;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            m(i, j) = v(idx);
            m(j, i) = v(idx);
            ++idx;
        }
    return m;
}

ElectronIntegrals apply_block(const ElectronIntegrals& x, TransformBlock block,
                              const Eigen::VectorXd& params, Exec exec) {
    const int n = x.n_orbitals;
    switch (block) {
        case TransformBlock::oo:
            return apply_orbital_rotation(x, params, exec);
        case TransformBlock::bliss:
            return apply_bliss(x, params(0), params(1), unpack_symmetric(params, 2, n),
                               x.n_electrons());
        case TransformBlock::spin_bliss: {
            const int stride = n * (n + 1) / 2;
            std::array<Eigen::MatrixXd, 3> zeta = {unpack_symmetric(params, 3, n),
                                                   unpack_symmetric(params, 3 + stride, n),
                                                   unpack_symmetric(params, 3 + 2 * stride, n)};
            return apply_spin_bliss(x, params(0), params(1), params(2), zeta, x.n_electrons(),
                                    x.s_z());
        }
    }
    throw ValidationError("apply_block: unknown block");
}

}  // namespace

void UwcConfig::validate() const {
    if (epsilon_soft <= 0) throw ValidationError("uwc config: epsilon_soft must be positive");
    if (delta_th <= 0) throw ValidationError("uwc config: delta_th must be positive");
    if (n_iter_max < 1) throw ValidationError("uwc config: n_iter_max must be at least 1");
}

double w_soft_from(const CoefficientTable& table, double g_det_factor, double g_rand_factor) {
    if (!table.sorted) throw ValidationError("w_soft_from: table must be sorted");
    const std::size_t L = table.terms.size();
    if (L == 0) throw ValidationError("w_soft_from: empty table");

    std::vector<double> abs_coeffs(L);
    for (std::size_t i = 0; i < L; ++i) abs_coeffs[i] = std::abs(table.terms[i].coefficient);
    const std::size_t ld = optimal_partition(abs_coeffs, g_det_factor, g_rand_factor).l_d;

    if (ld == 0) return abs_coeffs.front() * 1.05;  // sigmoid pushes every term randomized
    if (ld == L) return abs_coeffs.back() / 2.0;
    return 0.5 * (abs_coeffs[ld - 1] + abs_coeffs[ld]);
}

double soft_cost(const std::vector<double>& abs_coeffs, double w_soft, double epsilon_soft,
                 double g_det_factor, double g_rand_factor) {
    double count = 0.0, tail = 0.0;
    for (const double a : abs_coeffs) {
        const double s = sigmoid((a - w_soft) / epsilon_soft);
        count += s;
        tail += a * (1.0 - s);
    }
    return g_det_factor * count + g_rand_factor * tail * tail;
}

double UwcObjectiveContext::evaluate(const ElectronIntegrals& x, Exec exec) const {
    const CoefficientTable table = extract_coefficients(x, exec);
    if (mode == UwcObjective::l1_norm) return table.l1() / normalization;
    std::vector<double> abs_coeffs(table.terms.size());
    for (std::size_t i = 0; i < table.terms.size(); ++i)
        abs_coeffs[i] = std::abs(table.terms[i].coefficient);
    return soft_cost(abs_coeffs, w_soft, epsilon_soft, g_det_factor, g_rand_factor) / normalization;
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&, Exec)>& f,
                            const Eigen::VectorXd& params) {
    const int n = static_cast<int>(params.size());
    Eigen::VectorXd grad(n);
    // 2n independent evaluations; inner work stays serial
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(params(i)));
        Eigen::VectorXd plus = params, minus = params;
        plus(i) += h;
        minus(i) -= h;
        grad(i) = (f(plus, Exec::serial) - f(minus, Exec::serial)) / (2.0 * h);
    }
    return grad;
}

Eigen::VectorXd analytic_block_gradient(const ElectronIntegrals& x, TransformBlock block,
                                        const UwcObjectiveContext& ctx,
                                        const Eigen::VectorXd& params) {
    if (block == TransformBlock::oo)
        throw ValidationError("analytic gradient: available for the linear shift blocks only");
    const int n = x.n_orbitals;
    const int dim = block_dim(block, n);
    if (params.size() != dim) throw ValidationError("analytic gradient: wrong parameter count");

    // The shift blocks are affine in their parameters, so the coefficient
    // vector is c(theta) = c_base + sum_i theta_i * c_dir_i with direction
    // tables extracted once from zero integrals.
    ElectronIntegrals zero = ElectronIntegrals::zeros(n, x.n_alpha, x.n_beta);
    if (x.spin_resolved || block == TransformBlock::spin_bliss)
        zero = zero.promoted_to_spin_resolved();

    std::unordered_map<PauliMask, std::size_t, PauliHash> index;
    std::vector<double> c_base;
    const CoefficientTable base_table = extract_coefficients(x, Exec::serial);
    for (const auto& t : base_table.terms) {
        index.emplace(t.mask, c_base.size());
        c_base.push_back(t.coefficient);
    }

    std::vector<std::vector<std::pair<std::size_t, double>>> dirs(dim);
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(dim);
        unit(i) = 1.0;
        const CoefficientTable dtab =
            extract_coefficients(apply_block(zero, block, unit, Exec::serial), Exec::serial);
        for (const auto& t : dtab.terms) {
            auto it = index.find(t.mask);
            std::size_t slot;
            if (it == index.end()) {
                slot = c_base.size();
                index.emplace(t.mask, slot);
                c_base.push_back(0.0);
            } else {
                slot = it->second;
            }
            dirs[i].emplace_back(slot, t.coefficient);
        }
    }

    std::vector<double> c(c_base);
    for (int i = 0; i < dim; ++i)
        for (const auto& [slot, dc] : dirs[i]) c[slot] += params(i) * dc;

    // dG/d|c_l| for the softened cost; for the l1 objective it is 1
    std::vector<double> dg(c.size());
    if (ctx.mode == UwcObjective::l1_norm) {
        for (std::size_t l = 0; l < c.size(); ++l) dg[l] = 1.0;
    } else {
        double tail = 0.0;
        for (const double v : c) tail += std::abs(v) * (1.0 - sigmoid((std::abs(v) - ctx.w_soft) / ctx.epsilon_soft));
        for (std::size_t l = 0; l < c.size(); ++l) {
            const double a = std::abs(c[l]);
            const double s = sigmoid((a - ctx.w_soft) / ctx.epsilon_soft);
            const double sp = s * (1.0 - s) / ctx.epsilon_soft;
            dg[l] = ctx.g_det_factor * sp +
                    2.0 * ctx.g_rand_factor * tail * (1.0 - s - a * sp);
        }
    }

    Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (const auto& [slot, dc] : dirs[i]) {
            const double sg = c[slot] > 0 ? 1.0 : (c[slot] < 0 ? -1.0 : 0.0);
            acc += dg[slot] * sg * dc;
        }
        grad(i) = acc / ctx.normalization;
    }
    return grad;
}

namespace {

// golden-section line minimization, assuming a reasonable bracket
double line_min(const std::function<double(double)>& f, double a, double b, int iters = 48) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

}  // namespace

BlockResult minimize_block(const ElectronIntegrals& x, TransformBlock block,
                           const UwcObjectiveContext& ctx, const UwcConfig& cfg) {
    const int dim = block_dim(block, x.n_orbitals);
    auto f_exec = [&](const Eigen::VectorXd& params, Exec exec) {
        // out-of-range probes from the line search are rejected, not fatal
        try {
            return ctx.evaluate(apply_block(x, block, params, exec), exec);
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    auto f = [&](const Eigen::VectorXd& params) { return f_exec(params, Exec::parallel); };
    auto grad = [&](const Eigen::VectorXd& params) -> Eigen::VectorXd {
        if (cfg.gradient_mode == GradientMode::analytic && block != TransformBlock::oo)
            return analytic_block_gradient(x, block, ctx, params);
        return fd_gradient(f_exec, params);
    };

    const MinimizeResult res = minimize_lbfgs(f, grad, Eigen::VectorXd::Zero(dim), cfg.optimizer);

    // Cyclic coordinate polish: the softened and l1 objectives are kinked in
    // |c|, where central differences report a vanishing gradient and the
    // quasi-Newton stage stalls.
    Eigen::VectorXd best_x = res.x;
    double best_f = res.value;
    for (int sweep = 0; sweep < cfg.polish_sweeps; ++sweep) {
        const double before = best_f;
        for (int i = 0; i < dim; ++i) {
            const double width = std::max(1.0, std::abs(best_x(i)));
            Eigen::VectorXd probe = best_x;
            auto f1 = [&](double v) {
                probe(i) = v;
                return f_exec(probe, Exec::parallel);
            };
            const double v_star = line_min(f1, best_x(i) - width, best_x(i) + width);
            const double f_star = f1(v_star);
            if (f_star < best_f) {
                best_f = f_star;
                best_x(i) = v_star;
            }
        }
        if (before - best_f <= 1e-12 * std::max(1.0, std::abs(before))) break;
    }

    BlockResult out;
    const double start_value = ctx.evaluate(x, Exec::parallel);
    if (best_f <= start_value) {
        out.integrals = apply_block(x, block, best_x, Exec::parallel);
        out.value = best_f;
    } else {  // identity fallback
        out.integrals = x;
        out.value = start_value;
        out.warning = true;
    }
    out.warning = out.warning || res.line_search_failed;
    return out;
}

UwcResult uwc_optimize(const ElectronIntegrals& x, const CostModelConfig& cost_cfg,
                       const UwcConfig& uwc_cfg) {
    cost_cfg.validate();
    uwc_cfg.validate();
    if (x.spin_resolved) throw ValidationError("uwc_optimize: restricted integrals required");

    UwcResult result;

    // orbital initialization
    const auto candidates = cholesky_basis_candidates(x, uwc_cfg.cholesky_tol);
    ElectronIntegrals current = select_min_l1(candidates).integrals;

    CoefficientTable table = prepare_sorted(extract_coefficients(current));
    if (table.terms.empty()) {
        result.integrals = current;
        result.history.termination = "empty_table";
        return result;
    }

    // the cost chain (delta, M, gate factors) is frozen from the starting
    // representation so iterations compare like against like
    const double lambda0 = table.l1();
    const double c_gs = trotter_constant(lambda0, cost_cfg);
    const StepSizes step = optimal_step(cost_cfg.epsilon, c_gs, cost_cfg.order_p);
    const int m_rounds = rounds(cost_cfg.xi, step.eps_qpe, step.delta);

    UwcObjectiveContext ctx;
    ctx.mode = uwc_cfg.objective;
    ctx.epsilon_soft = uwc_cfg.epsilon_soft;

    RoundCost rc = round_cost(table, m_rounds, step.delta, cost_cfg);
    ctx.g_det_factor = rc.g_det_factor;
    ctx.g_rand_factor = rc.g_rand_factor;
    ctx.normalization = uwc_cfg.objective == UwcObjective::l1_norm
                            ? lambda0
                            : std::max<double>(1.0, static_cast<double>(rc.g_m));

    result.history.initial_g_m = rc.g_m;
    result.history.initial_lambda = lambda0;
    result.history.cost_delta = step.delta;
    result.history.cost_m_rounds = m_rounds;

    std::uint64_t g_prev = rc.g_m;
    ElectronIntegrals best = current;
    result.history.termination = "max_iterations";

    for (int iter = 1; iter <= uwc_cfg.n_iter_max; ++iter) {
        UwcIterationRecord rec;
        rec.iteration = iter;
        ctx.w_soft = w_soft_from(table, ctx.g_det_factor, ctx.g_rand_factor);
        rec.w_soft = ctx.w_soft;

        BlockResult step_oo = minimize_block(current, TransformBlock::oo, ctx, uwc_cfg);
        BlockResult step_bliss = minimize_block(step_oo.integrals, TransformBlock::bliss, ctx, uwc_cfg);
        BlockResult last = std::move(step_bliss);
        if (uwc_cfg.include_spin_bliss)
            last = minimize_block(last.integrals, TransformBlock::spin_bliss, ctx, uwc_cfg);
        rec.optimizer_warning = step_oo.warning || last.warning;
        rec.g_soft = last.value;

        const CoefficientTable next_table = prepare_sorted(extract_coefficients(last.integrals));
        const std::uint64_t g_next = round_cost(next_table, m_rounds, step.delta, cost_cfg).g_m;
        rec.g_m_discrete = g_next;
        rec.lambda = next_table.l1();
        rec.l_d_star = round_cost(next_table, m_rounds, step.delta, cost_cfg).l_d_star;

        const double rel = std::abs(static_cast<double>(g_next) - static_cast<double>(g_prev)) /
                           std::max(1.0, static_cast<double>(g_prev));
        if (rel < uwc_cfg.delta_th) {
            rec.accepted = true;
            result.history.iterations.push_back(rec);
            best = last.integrals;
            result.history.termination = "converged";
            break;
        }
        if (g_next > g_prev) {
            rec.accepted = false;
            result.history.iterations.push_back(rec);
            result.history.termination = "degraded";
            break;
        }
        rec.accepted = true;
        result.history.iterations.push_back(rec);
        current = last.integrals;
        table = next_table;
        g_prev = g_next;
        best = current;
    }

    result.integrals = best;
    return result;
}

}  // namespace prqpe
