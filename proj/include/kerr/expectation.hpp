/*
 * expectation.hpp - <a(t)> in squeezed coherent states and coherent matrix elements.
 *
 * Three routes to <a(t)>:
 *   closed form       the Gaussian integral of Theta_01 against the squeezed
 *                     Wigner symbol, with G^{3/2} continued along t from 0;
 *   quadrature        brute-force panelled Gauss-Kronrod of the same integral;
 *   semiclassical     first order in xi around the classical flow.
 *
 * The closed form is written with cos/sin of theta = xi w2 t instead of
 * T = tan(theta). Multiplying numerator and denominator by cos^2 turns every
 * T-rational factor into a bounded trigonometric expression, so the singular
 * times need no special casing.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kerr/errors.hpp"
#include "kerr/kerr_moyal.hpp"
#include "kerr/phase_space.hpp"
#include "kerr/quantum_states.hpp"
#include "kerr/symbol.hpp"
#include "kerr/star_product.hpp"

namespace kerr {

struct GaussianFactors {
    std::optional<double> T;  ///< tan(xi w2 t); empty inside a singular window
    cplx G{1.0};
    cplx sqrtG3{1.0};  ///< G^{3/2} on the branch continued from t = 0
};

struct ExpectationResult {
    cplx value;
    double mean_q;
    double mean_p;
    int branch_winding;  ///< signed number of tan poles between 0 and xi w2 t
};

namespace detail {

/// G = e^{2i theta} / (d_a d_b), d_a = cos + i s^-2 sin, d_b = cos + i s^2 sin.
inline cplx gaussian_ratio(double theta, double s) {
    const double c = std::cos(theta), sn = std::sin(theta);
    const cplx da(c, sn / (s * s)), db(c, s * s * sn);
    return std::exp(2.0 * I * theta) / (da * db);
}

inline int pole_count(double theta) {
    const double n = std::floor(std::abs(theta) / pi + 0.5);
    return theta < 0.0 ? -int(n) : int(n);
}

}  // namespace detail

/// Continues arg G along a monotone path in theta, starting at theta = 0 where G = 1.
class BranchTracker {
public:
    explicit BranchTracker(double s) : s_(s) {
        if (!(s > 0.0)) throw InvalidState("squeeze factor s must be positive");
    }

    double theta() const { return theta_; }

    GaussianFactors advance(double target) {
        while (theta_ != target) {
            double h = std::clamp(target - theta_, -kMaxStep, kMaxStep);
            bool reaches = std::abs(target - theta_) <= kMaxStep;
            cplx g_new;
            double dphase;
            for (;;) {
                g_new = detail::gaussian_ratio(theta_ + h, s_);
                dphase = std::arg(g_new / g_);
                // G swings fast near theta = n pi when s is small; refine until the step is unambiguous.
                if (std::abs(dphase) <= kMaxPhaseStep || std::abs(h) < 1e-13) break;
                h *= 0.5;
                reaches = false;
            }
            theta_ = reaches ? target : theta_ + h;
            arg_ += dphase;
            g_ = g_new;
        }
        GaussianFactors f;
        f.G = g_;
        f.sqrtG3 = std::pow(std::abs(g_), 1.5) * std::exp(1.5 * I * arg_);
        if (!in_singular_window(theta_)) f.T = std::tan(theta_);
        return f;
    }

private:
    static constexpr double kMaxStep = pi / 32.0;
    static constexpr double kMaxPhaseStep = pi / 8.0;
    double s_;
    double theta_ = 0.0;
    double arg_ = 0.0;
    cplx g_{1.0};
};

namespace detail {

inline ExpectationResult closed_form_from_factors(double t, const SqueezedState& st, const KerrParams& k,
                                                  const GaussianFactors& gf) {
    const double s = st.s(), dphi = st.delta_phi(), theta = k.xi * k.w2 * t;
    const double c = std::cos(theta), sn = std::sin(theta);
    const cplx da(c, sn / (s * s)), db(c, s * s * sn);
    const double kk = std::pow(std::cos(dphi / 2.0), 2) / (s * s) + s * s * std::pow(std::sin(dphi / 2.0), 2);
    const cplx bracket(std::cos(theta - dphi / 2.0) / s, s * std::sin(theta - dphi / 2.0));
    const double a2 = std::norm(st.coherent.alpha);
    const cplx exponent = -2.0 * I * (a2 / k.xi) * sn * cplx(kk * c, sn) / (da * db);
    const cplx v = st.coherent.alpha * gf.sqrtG3 * bracket * std::exp(-I * (k.w1 * t + theta - dphi / 2.0)) *
                   std::exp(exponent);
    return {v, std::sqrt(2.0) * v.real(), std::sqrt(2.0) * v.imag(), pole_count(theta)};
}

inline void check_inputs(const SqueezedState& st, const KerrParams& k) {
    k.validate();
    st.validate();
    if (std::abs(st.xi - k.xi) > 0.0) throw InvalidArgument("state and Kerr parameters disagree on xi");
    if (!(st.s() > 0.0)) throw InvalidState("squeeze factor s underflows to 0");
}

/// The T-form of the closed form as printed, with principal G^{3/2}. Valid only where
/// the principal branch is the continuous one; kept as a cross-check.
inline cplx expectation_a_tan_form(double t, const SqueezedState& st, const KerrParams& k) {
    check_inputs(st, k);
    const double theta = k.xi * k.w2 * t;
    if (in_singular_window(theta)) throw SingularWindow(theta);
    const double T = std::tan(theta), s = st.s(), dphi = st.delta_phi();
    const cplx g = (1.0 + I * T) * (1.0 + I * T) / ((1.0 + I * T / (s * s)) * (1.0 + I * s * s * T));
    const double kk = std::pow(std::cos(dphi / 2.0), 2) / (s * s) + s * s * std::pow(std::sin(dphi / 2.0), 2);
    const cplx bracket(std::cos(theta - dphi / 2.0) / s, s * std::sin(theta - dphi / 2.0));
    const double a2 = std::norm(st.coherent.alpha);
    const cplx exponent = -2.0 * I * (T / k.xi) * a2 * g / ((1.0 + I * T) * (1.0 + I * T)) * (I * T + kk);
    return st.coherent.alpha * std::pow(g, 1.5) * bracket * std::exp(-I * (k.w1 * t + theta - dphi / 2.0)) *
           std::exp(exponent);
}

}  // namespace detail

/// G and its continued G^{3/2} at time t. G has period pi in theta and arg G stays
/// inside (-pi/2, pi/2), so the path is only tracked over theta mod pi.
inline GaussianFactors gaussian_factors(double t, double s, const KerrParams& k) {
    const double theta = k.xi * k.w2 * t;
    const double reduced = theta - pi * std::floor(theta / pi);
    BranchTracker tracker(s);
    GaussianFactors f = tracker.advance(reduced);
    f.T.reset();
    if (!in_singular_window(theta)) f.T = std::tan(theta);
    return f;
}

inline ExpectationResult expectation_a_closed(double t, const SqueezedState& st, const KerrParams& k) {
    detail::check_inputs(st, k);
    return detail::closed_form_from_factors(t, st, k, gaussian_factors(t, st.s(), k));
}

/// One branch-tracked pass over a monotone list of times. The tracker walks the
/// literal path 0 -> t_0 -> t_1 -> ... without reduction.
inline std::vector<ExpectationResult> expectation_a_sweep(const std::vector<double>& times, const SqueezedState& st,
                                                          const KerrParams& k) {
    detail::check_inputs(st, k);
    const bool up = times.size() < 2 || times.back() >= times.front();
    for (std::size_t i = 1; i < times.size(); ++i)
        if (up ? times[i] < times[i - 1] : times[i] > times[i - 1])
            throw InvalidArgument("sweep times must be monotone");
    BranchTracker tracker(st.s());
    std::vector<ExpectationResult> out;
    out.reserve(times.size());
    for (double t : times) {
        GaussianFactors f = tracker.advance(k.xi * k.w2 * t);
        out.push_back(detail::closed_form_from_factors(t, st, k, f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Semiclassical expansion

struct SemiclassicalResult {
    cplx value;
    bool advisory;  ///< outside s in (0.8, 1] or |w2 t| >= 0.1, where the expansion is not expected to hold
};

/// a_cl(t|xbar) {1 + xi [2|tau| e^{i dphi} - 2|alpha|^2 w2 t (w2 t + 4i|tau| cos dphi)]}
inline SemiclassicalResult expectation_a_semiclassical(double t, const SqueezedState& st, const KerrParams& k) {
    detail::check_inputs(st, k);
    const double tau = st.squeeze.magnitude, dphi = st.delta_phi(), wt = k.w2 * t;
    const cplx acl = classical_flow(t, st.coherent.mean(), k).a_cl();
    const cplx corr = 2.0 * tau * std::exp(I * dphi) -
                      2.0 * std::norm(st.coherent.alpha) * wt * (wt + 4.0 * I * tau * std::cos(dphi));
    const double s = st.s();
    return {acl * (1.0 + k.xi * corr), !(s > 0.8) || std::abs(wt) >= 0.1};
}

// ---------------------------------------------------------------------------
// Direct quadrature

/// The squeezed Wigner symbol with its matrices built once.
class SqueezedProjector {
public:
    explicit SqueezedProjector(const SqueezedState& st)
        : xi_(st.xi), s1_(squeeze_matrix(st.squeeze, st.xi)), s2_(s1_ * s1_), m_(st.coherent.mean().vec()) {
        s1m_ = s1_ * m_;
        mm_ = m_.squaredNorm();
    }
    double operator()(const PhasePoint& x) const {
        const Vec2 v = x.vec();
        return 2.0 * std::exp((-v.dot(s2_ * v) + 2.0 * v.dot(s1m_) - mm_) / xi_);
    }
    /// Peak of the Gaussian, S(tau)^{-1} xbar.
    Vec2 center() const { return s1_.inverse() * m_; }
    const Mat2& quadratic() const { return s2_; }

private:
    double xi_;
    Mat2 s1_, s2_;
    Vec2 m_, s1m_;
    double mm_;
};

struct QuadratureOptions {
    double box_scale = 6.0;         ///< half-width of the box in units of sqrt(xi / d) per principal axis
    double max_panel_phase = 24.0;  ///< radians of Theta_01 phase allowed across one panel
    double max_panel_width = 6.0;   ///< panel width cap in Gaussian standard deviations
};

struct QuadratureResult {
    cplx value;
    double error_estimate;
    long evaluations;
};

namespace detail {

struct PanelRule {
    std::vector<double> x, wk, wg;  // nodes on [-1, 1], Kronrod weights, Gauss weights (0 off the Gauss subset)
};

inline const PanelRule& kronrod31() {
    static const PanelRule rule = [] {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        const auto& ka = gauss_kronrod<double, 31>::abscissa();
        const auto& kw = gauss_kronrod<double, 31>::weights();
        const auto& ga = gauss<double, 15>::abscissa();
        const auto& gw = gauss<double, 15>::weights();
        PanelRule r;
        auto gauss_weight = [&](double x) {
            for (std::size_t j = 0; j < ga.size(); ++j)
                if (std::abs(ga[j] - std::abs(x)) < 1e-14) return double(gw[j]);
            return 0.0;
        };
        for (std::size_t i = ka.size(); i-- > 1;) {
            r.x.push_back(-ka[i]);
            r.wk.push_back(kw[i]);
            r.wg.push_back(gauss_weight(ka[i]));
        }
        for (std::size_t i = 0; i < ka.size(); ++i) {
            r.x.push_back(ka[i]);
            r.wk.push_back(kw[i]);
            r.wg.push_back(gauss_weight(ka[i]));
        }
        return r;
    }();
    return rule;
}

/// Splits [lo, hi] so that each panel carries at most max_phase radians of a phase
/// kappa y^2 and spans at most max_width.
inline std::vector<double> panel_edges(double lo, double hi, double kappa, double max_width, double max_phase) {
    std::vector<double> edges{lo};
    double a = lo;
    while (a < hi) {
        auto width_at = [&](double r) { return kappa > 0.0 ? max_phase / (2.0 * kappa * r + 1e-300) : max_width; };
        double w = std::min(max_width, width_at(std::abs(a)));
        w = std::min(max_width, width_at(std::max(std::abs(a), std::abs(a + w))));
        a = std::min(hi, a + w);
        edges.push_back(a);
    }
    return edges;
}

}  // namespace detail

/// (1/2 pi xi) integral of Theta_01(t|x) [|tau alpha><tau alpha|]_w(x) d^2x, computed in the
/// rotated frame y = R(-phi) x where the Wigner Gaussian is axis-aligned.
inline QuadratureResult expectation_a_quadrature(double t, const SqueezedState& st, const KerrParams& k,
                                                 double tol = 1e-7, const QuadratureOptions& opt = {}) {
    detail::check_inputs(st, k);
    const double theta = k.xi * k.w2 * t;
    if (in_singular_window(theta)) throw SingularWindow(theta);

    const SqueezedProjector rho(st);
    const Mat2 rot = rotation(st.squeeze.phase);
    const Mat2 b = rot.transpose() * rho.quadratic() * rot;
    const Vec2 cy = rot.transpose() * rho.center();
    const double xi = k.xi;

    // Phase of Theta_01 grows like kappa |y|^2.
    const double kappa = std::abs(std::tan(theta)) / xi + std::abs(k.w2 * t);

    std::vector<double> edges[2];
    for (int ax = 0; ax < 2; ++ax) {
        const double scale = std::sqrt(xi / b(ax, ax));
        const double half = opt.box_scale * scale;
        const double sigma = scale / std::sqrt(2.0);
        edges[ax] = detail::panel_edges(cy(ax) - half, cy(ax) + half, kappa, opt.max_panel_width * sigma,
                                        opt.max_panel_phase);
    }

    const auto& rule = detail::kronrod31();
    const std::size_t n = rule.x.size();
    const ObservableIndex idx{0, 1};
    auto f = [&](double y1, double y2) {
        const PhasePoint x = apply(rot, PhasePoint{y1, y2});
        return moyal_solution(idx, t, x, k).value() * rho(x);
    };

    std::vector<double> y2nodes;
    std::vector<double> w2k, w2g;
    for (std::size_t j = 0; j + 1 < edges[1].size(); ++j) {
        const double a = edges[1][j], h = 0.5 * (edges[1][j + 1] - a);
        for (std::size_t q = 0; q < n; ++q) {
            y2nodes.push_back(a + h * (1.0 + rule.x[q]));
            w2k.push_back(h * rule.wk[q]);
            w2g.push_back(h * rule.wg[q]);
        }
    }

    cplx total{};
    double err = 0.0;
    long evals = 0;
    const std::size_t panels2 = edges[1].size() - 1;
    std::vector<cplx> inner_k(panels2), inner_g(panels2);
    std::vector<cplx> tile_k(panels2), tile_g(panels2);
    for (std::size_t i = 0; i + 1 < edges[0].size(); ++i) {
        const double a = edges[0][i], h = 0.5 * (edges[0][i + 1] - a);
        std::fill(tile_k.begin(), tile_k.end(), cplx{});
        std::fill(tile_g.begin(), tile_g.end(), cplx{});
        for (std::size_t p = 0; p < n; ++p) {
            const double y1 = a + h * (1.0 + rule.x[p]);
            for (std::size_t j = 0; j < panels2; ++j) {
                cplx sk{}, sg{};
                for (std::size_t q = 0; q < n; ++q) {
                    const std::size_t node = j * n + q;
                    const cplx v = f(y1, y2nodes[node]);
                    sk += w2k[node] * v;
                    sg += w2g[node] * v;
                }
                tile_k[j] += h * rule.wk[p] * sk;
                tile_g[j] += h * rule.wg[p] * sg;
            }
            evals += long(y2nodes.size());
        }
        for (std::size_t j = 0; j < panels2; ++j) {
            total += tile_k[j];
            err += std::abs(tile_k[j] - tile_g[j]);
        }
    }
    const double norm = 1.0 / (2.0 * pi * xi);
    QuadratureResult r{total * norm, err * norm, evals};
    if (!(r.error_estimate <= tol)) throw ToleranceNotMet(r.error_estimate, tol);
    return r;
}

// ---------------------------------------------------------------------------
// Coherent matrix elements

namespace detail {
inline cplx ipow(cplx z, int n) {
    cplx r = 1.0;
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}
}  // namespace detail

/// <alpha| (a^+(t))^s a(t)^m |beta>, finite for every t.
inline cplx matrix_element(const ObservableIndex& idx, double t, cplx alpha, cplx beta, const KerrParams& k) {
    idx.validate();
    k.validate();
    const int dm = idx.m - idx.s;
    const double xi = k.xi;
    const cplx phase = std::exp(-I * (double(dm) * t * (k.w1 + double(idx.m + idx.s - 1) * xi * k.w2)));
    const cplx ex = -(std::norm(alpha) + std::norm(beta)) / (2.0 * xi) +
                    beta * std::conj(alpha) / xi * std::exp(-2.0 * I * (double(dm) * xi * k.w2 * t));
    return detail::ipow(std::conj(alpha), idx.s) * detail::ipow(beta, idx.m) * phase * std::exp(ex);
}

/// <alpha| Delta(x) |beta> normalised so that its integral over d^2x is <alpha|beta>.
inline cplx coherent_quantizer_element(cplx alpha, cplx beta, const PhasePoint& x, double xi) {
    DeformationParameter{xi};
    const cplx z = x.z();
    const cplx c = -(std::norm(alpha) + std::norm(beta) + 2.0 * beta * std::conj(alpha)) / (2.0 * xi);
    return std::exp(-std::norm(z) / xi + std::sqrt(2.0) / xi * (beta * std::conj(z) + std::conj(alpha) * z) + c) /
           (pi * xi);
}

inline GaussPolySymbol coherent_quantizer_symbol(cplx alpha, cplx beta, double xi) {
    DeformationParameter{xi};
    const cplx ac = std::conj(alpha);
    const LinForm lin(std::sqrt(2.0) / xi * (beta + ac), std::sqrt(2.0) / xi * I * (ac - beta));
    const cplx c = -(std::norm(alpha) + std::norm(beta) + 2.0 * beta * ac) / (2.0 * xi) - std::log(pi * xi);
    return GaussPolySymbol(Poly2(1.0), QuadForm::Identity() * cplx(-1.0 / xi), lin, c);
}

/// The same matrix element as the phase-space integral of Theta_sm against <alpha|Delta(x)|beta>.
inline cplx matrix_element_phase_space(const ObservableIndex& idx, double t, cplx alpha, cplx beta,
                                       const KerrParams& k) {
    return phase_space_inner_product(moyal_solution_symbolic(idx, t, k), coherent_quantizer_symbol(alpha, beta, k.xi));
}

}  // namespace kerr
