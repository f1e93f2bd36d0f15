/*
 * figures.hpp - data tables behind the four figures, plus the single-point record.
 *
 *   qampl          |Theta_01 / a_cl| = sec^2(xi w2 t) for each xi in xi-list
 *   qphase         the quantum phase Phi(xi, x, t) for each x^2 in x2-list
 *   squeeze-num    <q(t)>, <p(t)> for delta phi = pi and each s in s-list
 *   squeeze-phase  the same for delta phi = 0
 *
 * Work fans out over the outer list; rows are assembled by index, so the
 * table does not depend on the thread count.
 */
#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "kerr/errors.hpp"
#include "kerr/expectation.hpp"
#include "kerr/fock_oracle.hpp"
#include "kerr/kerr_moyal.hpp"
#include "kerr/output.hpp"
#include "kerr/run_config.hpp"

namespace kerr {

/// out[i] = f(i) for i < n, computed on up to `threads` workers.
template <class F>
auto parallel_map(std::size_t n, long long threads, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
    std::vector<decltype(f(std::size_t{}))> out(n);
    const std::size_t workers = std::min<std::size_t>(n, std::size_t(std::max(1LL, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

using Rows = std::vector<std::vector<Cell>>;

inline Table figure_qampl(const RunConfig& cfg) {
    const auto times = cfg.time_grid();
    const PhasePoint x{1.0, 0.0};
    auto blocks = parallel_map(cfg.xi_list.size(), cfg.threads, [&](std::size_t i) {
        const KerrParams k{cfg.params.w1, cfg.params.w2, cfg.xi_list[i]};
        Rows rows;
        for (double t : times) {
            Cell ratio = std::string(kSingularSentinel);
            try {
                ratio = std::abs(quantum_trajectory(t, x, k).theta01) / std::abs(classical_flow(t, x, k).a_cl());
            } catch (const SingularWindow&) {
            }
            rows.push_back({k.xi, k.w2 * t, ratio});
        }
        return rows;
    });
    Table table{{"xi", "w2_t", "ratio_abs"}, {}};
    for (auto& b : blocks) table.rows.insert(table.rows.end(), b.begin(), b.end());
    return table;
}

inline Table figure_qphase(const RunConfig& cfg) {
    const auto times = cfg.time_grid();
    auto blocks = parallel_map(cfg.x2_list.size(), cfg.threads, [&](std::size_t i) {
        const double x2 = cfg.x2_list[i];
        Rows rows;
        for (double t : times) {
            Cell phi = std::string(kSingularSentinel);
            try {
                phi = quantum_phase(t, {std::sqrt(x2), 0.0}, cfg.params);
            } catch (const SingularWindow&) {
            }
            rows.push_back({t, x2, phi});
        }
        return rows;
    });
    Table table{{"t", "x2", "phi"}, {}};
    for (auto& b : blocks) table.rows.insert(table.rows.end(), b.begin(), b.end());
    return table;
}

/// The squeezed state with a prescribed s and delta phi around the configured alpha.
inline SqueezedState squeezed_with(const RunConfig& cfg, double s, double dphi) {
    const cplx alpha = cfg.alpha();
    return {{alpha}, SqueezeParams::from_s(s, dphi + 2.0 * std::arg(alpha), cfg.params.xi), cfg.params.xi};
}

inline Table figure_squeeze(const RunConfig& cfg, double dphi) {
    const auto times = cfg.time_grid();
    auto blocks = parallel_map(cfg.s_list.size(), cfg.threads, [&](std::size_t i) {
        const double s = cfg.s_list[i];
        const auto sweep = expectation_a_sweep(times, squeezed_with(cfg, s, dphi), cfg.params);
        Rows rows;
        for (std::size_t j = 0; j < times.size(); ++j) rows.push_back({times[j], s, sweep[j].mean_q, sweep[j].mean_p});
        return rows;
    });
    Table table{{"t", "s", "mean_q", "mean_p"}, {}};
    for (auto& b : blocks) table.rows.insert(table.rows.end(), b.begin(), b.end());
    return table;
}

inline Table figure(const std::string& name, const RunConfig& cfg) {
    cfg.validate();
    if (name == "qampl") return figure_qampl(cfg);
    if (name == "qphase") return figure_qphase(cfg);
    if (name == "squeeze-num") return figure_squeeze(cfg, pi);
    if (name == "squeeze-phase") return figure_squeeze(cfg, 0.0);
    throw ConfigError("figure: unknown name '" + name + "' (qampl, qphase, squeeze-num, squeeze-phase)");
}

// ---------------------------------------------------------------------------
// expect

struct ExpectRecord {
    Table table;
    bool checks_passed = true;
};

inline constexpr double kFockCheckTolerance = 1e-8;
inline constexpr double kQuadratureCheckTolerance = 1e-6;

/// <a(t)> from the closed form; with cfg.check also the Fock oracle and the quadrature,
/// each with its deviation scaled by 1 + |<a>|.
inline ExpectRecord expect_record(const RunConfig& cfg) {
    cfg.validate();
    const SqueezedState st = cfg.state();
    const auto r = expectation_a_closed(cfg.t, st, cfg.params);
    ExpectRecord rec;
    rec.table.columns = {"t", "re_a", "im_a", "mean_q", "mean_p", "branch_winding"};
    std::vector<Cell> row{cfg.t, r.value.real(), r.value.imag(), r.mean_q, r.mean_p, (long long)r.branch_winding};
    if (cfg.check) {
        const double scale = 1.0 + std::abs(r.value);
        const auto fs = squeezed_vector_auto(st);
        const cplx f = heisenberg_expectation({0, 1}, cfg.t, fs.vector, fs.space, cfg.params);
        const double fdev = std::abs(f - r.value) / scale;
        rec.checks_passed = fdev <= kFockCheckTolerance;
        for (const char* c : {"fock_re", "fock_im", "fock_dev", "quad_re", "quad_im", "quad_dev"}) rec.table.columns.push_back(c);
        row.insert(row.end(), {f.real(), f.imag(), fdev});
        try {
            const auto q = expectation_a_quadrature(cfg.t, st, cfg.params);
            const double qdev = std::abs(q.value - r.value) / scale;
            rec.checks_passed = rec.checks_passed && qdev <= kQuadratureCheckTolerance;
            row.insert(row.end(), {q.value.real(), q.value.imag(), qdev});
        } catch (const SingularWindow&) {
            // the integrand has no pointwise value at singular times; the closed form and Fock still count
            for (int i = 0; i < 3; ++i) row.emplace_back(std::string(kSingularSentinel));
        }
    }
    rec.table.rows.push_back(std::move(row));
    return rec;
}

}  // namespace kerr
