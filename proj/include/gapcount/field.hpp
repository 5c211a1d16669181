#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "gapcount/errors.hpp"
#include "gapcount/quadrature.hpp"

namespace gapcount {

// C-infinity ramp: exactly 0 for s <= 0, exactly 1 for s >= 1.
inline double bump01(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double fa = std::exp(-1.0 / s);
    double fb = std::exp(-1.0 / (1.0 - s));
    return fa / (fa + fb);
}

class Field {
  public:
    virtual ~Field() = default;
    virtual double B(double x) const = 0;
    virtual double B_minus() const = 0;
    virtual double B_plus() const = 0;
    // infimum of x with B == B_plus a.e. to the right; +-inf markers for the
    // never/everywhere cases
    virtual double x_plus() const = 0;
    // interval outside which B is constant on each side; empty (lo>hi) when
    // B is constant everywhere
    virtual void variable_span(double& lo, double& hi) const = 0;
    virtual std::string kind() const = 0;
};

class ConstantField final : public Field {
  public:
    explicit ConstantField(double B) : B_(B) {
        if (B <= 0.0) throw ConfigError("field.B_plus: constant field requires B > 0");
    }
    double B(double) const override { return B_; }
    double B_minus() const override { return B_; }
    double B_plus() const override { return B_; }
    double x_plus() const override { return -std::numeric_limits<double>::infinity(); }
    void variable_span(double& lo, double& hi) const override {
        lo = 1.0;
        hi = -1.0;
    }
    std::string kind() const override { return "constant"; }

  private:
    double B_;
};

// B = B_- + (B_+ - B_-) * bump01 over the transition [x0-10w, x0+10w];
// exactly saturated outside, so x_plus = x0 + 10w.
class SmoothStepField final : public Field {
  public:
    SmoothStepField(double Bm, double Bp, double x0, double w)
        : Bm_(Bm), Bp_(Bp), x0_(x0), w_(w) {
        if (Bm <= 0.0 || Bm > Bp) throw ConfigError("field.B_minus: need 0 < B_minus <= B_plus");
        if (w <= 0.0) throw ConfigError("field.w: transition width must be positive");
    }
    double B(double x) const override {
        return Bm_ + (Bp_ - Bm_) * bump01((x - x0_ + 10.0 * w_) / (20.0 * w_));
    }
    double B_minus() const override { return Bm_; }
    double B_plus() const override { return Bp_; }
    double x_plus() const override {
        return Bm_ == Bp_ ? -std::numeric_limits<double>::infinity() : x0_ + 10.0 * w_;
    }
    void variable_span(double& lo, double& hi) const override {
        lo = x0_ - 10.0 * w_;
        hi = x0_ + 10.0 * w_;
    }
    std::string kind() const override { return "smooth-step"; }

  private:
    double Bm_, Bp_, x0_, w_;
};

// Clamped step: B_- for x < x0, B_+ for x >= x0.
class StepField final : public Field {
  public:
    StepField(double Bm, double Bp, double x0) : Bm_(Bm), Bp_(Bp), x0_(x0) {
        if (Bm <= 0.0 || Bm > Bp) throw ConfigError("field.B_minus: need 0 < B_minus <= B_plus");
    }
    double B(double x) const override { return x < x0_ ? Bm_ : Bp_; }
    double B_minus() const override { return Bm_; }
    double B_plus() const override { return Bp_; }
    double x_plus() const override {
        return Bm_ == Bp_ ? -std::numeric_limits<double>::infinity() : x0_;
    }
    // The jump sits on a panel boundary of the cumulative table, so the
    // quadrature there stays exact.
    void variable_span(double& lo, double& hi) const override {
        lo = x0_ - 1.0;
        hi = x0_ + 1.0;
    }
    std::string kind() const override { return "step"; }

  private:
    double Bm_, Bp_, x0_;
};

// Piecewise-linear interpolation of monotone-x samples; queries outside the
// sample range are range errors per the field contract.
class SampledField final : public Field {
  public:
    SampledField(std::vector<double> xs, std::vector<double> Bs) : xs_(std::move(xs)), Bs_(std::move(Bs)) {
        if (xs_.size() != Bs_.size() || xs_.size() < 2)
            throw ConfigError("field.samples: need >= 2 (x,B) pairs");
        for (size_t i = 1; i < xs_.size(); ++i)
            if (xs_[i] <= xs_[i - 1]) throw ConfigError("field.samples: x values must be strictly increasing");
        Bm_ = *std::min_element(Bs_.begin(), Bs_.end());
        Bp_ = *std::max_element(Bs_.begin(), Bs_.end());
        if (Bm_ <= 0.0) throw ConfigError("field.samples: B must stay positive");
    }
    double B(double x) const override {
        if (x < xs_.front() || x > xs_.back())
            throw ConfigError("field.samples: query outside sample range");
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        if (it == xs_.end()) return Bs_.back();
        size_t i = it - xs_.begin();
        if (i == 0) return Bs_.front();
        double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
        return Bs_[i - 1] + t * (Bs_[i] - Bs_[i - 1]);
    }
    double B_minus() const override { return Bm_; }
    double B_plus() const override { return Bp_; }
    double x_plus() const override {
        double tol = 1e-12 * Bp_;
        if (Bs_.back() < Bp_ - tol) return std::numeric_limits<double>::infinity();
        size_t i = Bs_.size() - 1;
        while (i > 0 && Bs_[i - 1] >= Bp_ - tol) --i;
        if (i == 0) return -std::numeric_limits<double>::infinity();
        return xs_[i];
    }
    void variable_span(double& lo, double& hi) const override {
        lo = xs_.front();
        hi = xs_.back();
    }
    std::string kind() const override { return "sampled"; }

  private:
    std::vector<double> xs_, Bs_;
    double Bm_, Bp_;
};

// b(x) = int_0^x B, with a cached cumulative table over the variable span and
// exact linear continuation outside it.
class PotentialB {
  public:
    explicit PotentialB(std::shared_ptr<const Field> field, double inv_tol = 1e-13)
        : field_(std::move(field)), inv_tol_(inv_tol) {
        field_->variable_span(tlo_, thi_);
        constant_ = tlo_ > thi_;
        if (constant_) {
            Bleft_ = Bright_ = field_->B(0.0);
        } else {
            Bleft_ = sample_or_edge(tlo_ - 1.0);
            Bright_ = sample_or_edge(thi_ + 1.0);
            build_table();
        }
        validate_hypotheses();
    }

    const Field& field() const { return *field_; }
    double B_minus() const { return field_->B_minus(); }
    double B_plus() const { return field_->B_plus(); }
    double x_plus() const { return field_->x_plus(); }
    double inverse_tolerance() const { return inv_tol_; }

    double b(double x) const {
        if (constant_) return Bleft_ * x;
        return raw_b(x) - b0_;
    }

    // bracketing bisection seeded with the linear bounds B_-|x| <= |b| <= B_+|x|
    double binv(double k) const {
        if (k == 0.0) return 0.0;
        if (constant_) return k / Bleft_;
        double lo, hi;
        if (k > 0.0) {
            lo = k / B_plus() - 1.0;
            hi = k / B_minus() + 1.0;
        } else {
            lo = k / B_minus() - 1.0;
            hi = k / B_plus() + 1.0;
        }
        double flo = b(lo) - k;
        double fhi = b(hi) - k;
        if (flo > 0.0 || fhi < 0.0) throw NumericsError("binv: seed bracket failed");
        for (int it = 0; it < 200 && hi - lo > inv_tol_; ++it) {
            double mid = 0.5 * (lo + hi);
            if (b(mid) - k <= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

  private:
    void build_table() {
        const int npanels = 256;
        cum_.assign(npanels + 1, 0.0);
        pw_ = (thi_ - tlo_) / npanels;
        const QuadRule& g = gauss_legendre(16);
        for (int p = 0; p < npanels; ++p) {
            double lo = tlo_ + p * pw_;
            double s = 0.0;
            for (size_t i = 0; i < g.x.size(); ++i)
                s += g.w[i] * field_->B(lo + 0.5 * pw_ * (1.0 + g.x[i]));
            cum_[p + 1] = cum_[p] + 0.5 * pw_ * s;
        }
        b0_ = 0.0;
        b0_ = raw_b(0.0);
    }

    // integral of B from tlo_ to x, plus linear pieces outside the table
    double raw_b(double x) const {
        if (x <= tlo_) return Bleft_ * (x - tlo_);
        if (x >= thi_) return cum_.back() + Bright_ * (x - thi_);
        int p = std::min<int>((x - tlo_) / pw_, static_cast<int>(cum_.size()) - 2);
        double lo = tlo_ + p * pw_;
        double s = 0.0;
        const QuadRule& g = gauss_legendre(16);
        for (size_t i = 0; i < g.x.size(); ++i)
            s += g.w[i] * field_->B(lo + 0.5 * (x - lo) * (1.0 + g.x[i]));
        return cum_[p] + 0.5 * (x - lo) * s;
    }

    void validate_hypotheses() const {
        double Bm = B_minus(), Bp = B_plus();
        if (!(Bm > 0.0) || !(Bm <= Bp)) throw ConfigError("field: need 0 < B_minus <= B_plus");
        double lo = constant_ ? -1.0 : tlo_, hi = constant_ ? 1.0 : thi_;
        double span = std::max(1.0, hi - lo);
        for (int i = 0; i <= 200; ++i) {
            double x = lo - 0.25 * span + (hi - lo + 0.5 * span) * i / 200.0;
            double v = sample_or_edge(x);
            if (v < Bm - 1e-9 * Bp || v > Bp + 1e-9 * Bp)
                throw ConfigError("field: B(x) violates the [B_minus, B_plus] bounds");
        }
    }

    double sample_or_edge(double x) const {
        if (field_->kind() == "sampled") {
            double c = std::clamp(x, tlo_, thi_);
            return field_->B(c);
        }
        return field_->B(x);
    }

    std::shared_ptr<const Field> field_;
    double inv_tol_;
    bool constant_ = false;
    double tlo_ = 0.0, thi_ = 0.0, pw_ = 0.0;
    double Bleft_ = 0.0, Bright_ = 0.0, b0_ = 0.0;
    std::vector<double> cum_;
};

}  // namespace gapcount
