/*
 * poly2.hpp - finite polynomials in the complex phase-space coordinates.
 *
 * Poly2 stores sum_{k,l} c_{kl} z^k zbar^l with z and zbar treated as
 * independent variables (Wirtinger calculus), so d/dz and d/dzbar act
 * termwise. The total degree k + l is capped; exceeding the cap throws
 * rather than truncating.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>

#include "kerr/errors.hpp"

namespace kerr {

class Poly2 {
public:
    using cplx = std::complex<double>;
    using Key = std::pair<int, int>;
    using Terms = std::map<Key, cplx>;

    static constexpr int kMaxDegree = 64;

    Poly2() = default;
    explicit Poly2(cplx c) {
        if (c != cplx{}) terms_[{0, 0}] = c;
    }

    static Poly2 monomial(int k, int l, cplx coeff = 1.0) {
        Poly2 p;
        p.add_term(k, l, coeff);
        return p;
    }
    static Poly2 z() { return monomial(1, 0); }
    static Poly2 zbar() { return monomial(0, 1); }

    /// q = (z + zbar) / 2
    static Poly2 q() { return monomial(1, 0, 0.5) + monomial(0, 1, 0.5); }
    /// p = (z - zbar) / (2i)
    static Poly2 p() { return monomial(1, 0, cplx{0.0, -0.5}) + monomial(0, 1, cplx{0.0, 0.5}); }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    cplx coeff(int k, int l) const {
        auto it = terms_.find({k, l});
        return it == terms_.end() ? cplx{} : it->second;
    }

    void add_term(int k, int l, cplx c) {
        if (k < 0 || l < 0) return;
        if (k + l > kMaxDegree)
            throw DegreeCapExceeded("polynomial degree " + std::to_string(k + l) + " exceeds cap " +
                                    std::to_string(kMaxDegree));
        if (c == cplx{}) return;
        auto [it, inserted] = terms_.try_emplace({k, l}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == cplx{}) terms_.erase(it);
        }
    }

    int degree() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
        return d;
    }
    int degree_z() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first);
        return d;
    }
    int degree_zbar() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }

    cplx operator()(cplx zv) const { return eval(zv, std::conj(zv)); }

    /// Evaluate with z and zbar as independent arguments.
    cplx eval(cplx zv, cplx zbv) const {
        cplx acc{};
        for (const auto& [k, c] : terms_) acc += c * ipow(zv, k.first) * ipow(zbv, k.second);
        return acc;
    }

    Poly2 d_dz() const {
        Poly2 r;
        for (const auto& [k, c] : terms_)
            if (k.first > 0) r.add_term(k.first - 1, k.second, c * double(k.first));
        return r;
    }
    Poly2 d_dzbar() const {
        Poly2 r;
        for (const auto& [k, c] : terms_)
            if (k.second > 0) r.add_term(k.first, k.second - 1, c * double(k.second));
        return r;
    }

    /// Complex conjugate as a function of x: conj(z^k zbar^l) = z^l zbar^k.
    Poly2 conj() const {
        Poly2 r;
        for (const auto& [k, c] : terms_) r.add_term(k.second, k.first, std::conj(c));
        return r;
    }

    Poly2 pow(int n) const {
        Poly2 r(1.0);
        for (int i = 0; i < n; ++i) r *= *this;
        return r;
    }

    /// Replace z by zs and zbar by zbs.
    Poly2 substitute(const Poly2& zs, const Poly2& zbs) const {
        Poly2 r;
        for (const auto& [k, c] : terms_) r += (zs.pow(k.first) * zbs.pow(k.second)) * c;
        return r;
    }

    /// Drop coefficients with |c| <= tol * max|c|.
    Poly2 pruned(double rel_tol = 0.0) const {
        double mx = 0.0;
        for (const auto& [k, c] : terms_) mx = std::max(mx, std::abs(c));
        Poly2 r;
        for (const auto& [k, c] : terms_)
            if (std::abs(c) > rel_tol * mx) r.terms_.emplace(k, c);
        return r;
    }

    double max_abs_coeff() const {
        double mx = 0.0;
        for (const auto& [k, c] : terms_) mx = std::max(mx, std::abs(c));
        return mx;
    }

    Poly2& operator+=(const Poly2& o) {
        if (&o == this) return *this *= 2.0;
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
        return *this;
    }
    Poly2& operator-=(const Poly2& o) {
        if (&o == this) {
            terms_.clear();
            return *this;
        }
        for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
        return *this;
    }
    Poly2& operator*=(cplx s) {
        if (s == cplx{}) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    Poly2& operator*=(const Poly2& o) {
        Poly2 r;
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : o.terms_) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        *this = std::move(r);
        return *this;
    }

    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator*(Poly2 a, const Poly2& b) { return a *= b; }
    friend Poly2 operator*(Poly2 a, cplx s) { return a *= s; }
    friend Poly2 operator*(cplx s, Poly2 a) { return a *= s; }
    friend Poly2 operator-(Poly2 a) { return a *= -1.0; }

    /// max |a_kl - b_kl| over the union of supports.
    friend double max_coeff_diff(const Poly2& a, const Poly2& b) { return (a - b).max_abs_coeff(); }

private:
    static cplx ipow(cplx base, int n) {
        cplx r{1.0, 0.0};
        while (n > 0) {
            if (n & 1) r *= base;
            base *= base;
            n >>= 1;
        }
        return r;
    }

    Terms terms_;
};

}  // namespace kerr
