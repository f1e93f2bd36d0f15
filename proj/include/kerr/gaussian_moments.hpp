/*
 * gaussian_moments.hpp - polynomial moments of (complex) Gaussian weights.
 *
 * For a weight exp(-1/2 y^T M y + v^T y) with complex symmetric M, the
 * normalized moments are those of a "Gaussian" with mean M^{-1} v and
 * covariance M^{-1}; Isserlis/Wick recursion gives every monomial moment
 * without requiring M to be Hermitian. Means may depend polynomially on
 * the outer phase point, so they are carried as Poly2 values.
 */
#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kerr/poly2.hpp"

namespace kerr::detail {

/// Memoized central moments E[prod_a u_a^{n_a}] for covariance C.
class WickMoments {
public:
    explicit WickMoments(Eigen::MatrixXcd cov) : cov_(std::move(cov)) {}

    std::complex<double> moment(std::vector<int> n) {
        int total = 0;
        for (int k : n) total += k;
        if (total == 0) return 1.0;
        if (total % 2 == 1) return 0.0;
        if (auto it = memo_.find(n); it != memo_.end()) return it->second;

        const auto key = n;
        std::size_t a = 0;
        while (n[a] == 0) ++a;
        --n[a];
        std::complex<double> acc{};
        for (std::size_t b = 0; b < n.size(); ++b) {
            if (n[b] == 0) continue;
            const double mult = n[b];
            --n[b];
            acc += cov_(Eigen::Index(a), Eigen::Index(b)) * mult * moment(n);
            ++n[b];
        }
        memo_.emplace(key, acc);
        return acc;
    }

private:
    Eigen::MatrixXcd cov_;
    std::map<std::vector<int>, std::complex<double>> memo_;
};

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

/// E[prod_a (mean_a + u_a)^{n_a}] as a polynomial in the outer (z, zbar).
class ShiftedMoments {
public:
    ShiftedMoments(std::vector<Poly2> mean, Eigen::MatrixXcd cov)
        : mean_(std::move(mean)), wick_(std::move(cov)), powers_(mean_.size()) {
        for (auto& row : powers_) row.emplace_back(1.0);
    }

    Poly2 expectation(const std::vector<int>& n) {
        const std::size_t dim = n.size();
        std::vector<int> j(dim, 0);
        Poly2 acc;
        while (true) {
            int total = 0;
            for (int v : j) total += v;
            if (total % 2 == 0) {
                const std::complex<double> m = wick_.moment(j);
                if (m != std::complex<double>{}) {
                    double comb = 1.0;
                    Poly2 term(m);
                    for (std::size_t a = 0; a < dim; ++a) {
                        comb *= binomial(n[a], j[a]);
                        term *= mean_power(a, n[a] - j[a]);
                    }
                    acc += term * comb;
                }
            }
            std::size_t a = 0;
            while (a < dim && j[a] == n[a]) {
                j[a] = 0;
                ++a;
            }
            if (a == dim) break;
            ++j[a];
        }
        return acc;
    }

private:
    const Poly2& mean_power(std::size_t a, int k) {
        auto& row = powers_[a];
        while (int(row.size()) <= k) row.push_back(row.back() * mean_[a]);
        return row[std::size_t(k)];
    }

    std::vector<Poly2> mean_;
    WickMoments wick_;
    std::vector<std::vector<Poly2>> powers_;
};

}  // namespace kerr::detail
