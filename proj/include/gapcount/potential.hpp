#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "gapcount/errors.hpp"
#include "gapcount/region.hpp"

namespace gapcount {

// Symbol V(x, xi) >= 0 with decay queries and the partial Fourier transform
// in xi used by the quantized-kernel assembly.
class PotentialV {
   public:
    virtual ~PotentialV() = default;
    virtual double eval(double x, double xi) const = 0;
    virtual double sup() const = 0;
    // Integral of V(x, .) against cos(q .), exact per family.
    virtual double xi_integral(double q, double x) const = 0;
    // Hull of {x : sup_xi V(x, xi) > level}; false when the set is empty.
    virtual bool x_interval(double level, double& lo, double& hi) const = 0;
    // sup |xi| over {V > level}; 0 when the set is empty.
    virtual double xi_extent(double level) const = 0;
    // Representative x of the bulk of the symbol, used for gauge centering.
    virtual double center_x() const = 0;
    virtual std::string kind() const = 0;
};

class IndicatorV final : public PotentialV {
   public:
    IndicatorV(double amp, Region region) : amp_(amp), region_(std::move(region)) {
        if (!(amp > 0.0)) throw ConfigError("potential.amp: amplitude must be positive");
    }
    double eval(double x, double xi) const override {
        return region_contains(region_, x, xi) ? amp_ : 0.0;
    }
    double sup() const override { return amp_; }
    double xi_integral(double q, double x) const override {
        double s = 0.0;
        for (const auto& iv : vertical_section(region_, x)) {
            if (q == 0.0)
                s += iv[1] - iv[0];
            else
                s += (std::sin(q * iv[1]) - std::sin(q * iv[0])) / q;
        }
        return amp_ * s;
    }
    bool x_interval(double level, double& lo, double& hi) const override {
        if (level >= amp_) return false;
        BBox b = bbox(region_);
        lo = b.xlo;
        hi = b.xhi;
        return true;
    }
    double xi_extent(double level) const override {
        if (level >= amp_) return 0.0;
        BBox b = bbox(region_);
        return std::max(std::abs(b.ylo), std::abs(b.yhi));
    }
    double center_x() const override {
        BBox b = bbox(region_);
        return 0.5 * (b.xlo + b.xhi);
    }
    std::string kind() const override { return "indicator"; }
    const Region& region() const { return region_; }
    double amplitude() const { return amp_; }

   private:
    double amp_;
    Region region_;
};

class GaussV final : public PotentialV {
   public:
    GaussV(double A, double cx, double cy, double sigma) : A_(A), cx_(cx), cy_(cy), s_(sigma) {
        if (!(A > 0.0)) throw ConfigError("potential.amp: amplitude must be positive");
        if (!(sigma > 0.0)) throw ConfigError("potential.sigma: width must be positive");
    }
    double eval(double x, double xi) const override {
        double dx = x - cx_, dy = xi - cy_;
        return A_ * std::exp(-(dx * dx + dy * dy) / (2.0 * s_ * s_));
    }
    double sup() const override { return A_; }
    double xi_integral(double q, double x) const override {
        double dx = x - cx_;
        return A_ * std::exp(-dx * dx / (2.0 * s_ * s_)) * std::sqrt(2.0 * M_PI) * s_ *
               std::exp(-0.5 * s_ * s_ * q * q) * std::cos(q * cy_);
    }
    bool x_interval(double level, double& lo, double& hi) const override {
        if (level >= A_) return false;
        double r = s_ * std::sqrt(2.0 * std::log(A_ / level));
        lo = cx_ - r;
        hi = cx_ + r;
        return true;
    }
    double xi_extent(double level) const override {
        if (level >= A_) return 0.0;
        double r = s_ * std::sqrt(2.0 * std::log(A_ / level));
        return std::abs(cy_) + r;
    }
    double center_x() const override { return cx_; }
    std::string kind() const override { return "gauss"; }

   private:
    double A_, cx_, cy_, s_;
};

// V(x, xi) = (1 + (x-x0)^2 + (xi-xi0)^2)^(-m/2), integrable in xi for m > 1.
class PowerLawV final : public PotentialV {
   public:
    PowerLawV(double m, double x0, double xi0) : m_(m), x0_(x0), xi0_(xi0) {
        if (!(m > 1.0)) throw ConfigError("potential.m: decay exponent must exceed 1");
    }
    double eval(double x, double xi) const override {
        double dx = x - x0_, dy = xi - xi0_;
        return std::pow(1.0 + dx * dx + dy * dy, -0.5 * m_);
    }
    double sup() const override { return 1.0; }
    double xi_integral(double q, double x) const override {
        double dx = x - x0_;
        double a = std::sqrt(1.0 + dx * dx);
        double base;
        double aq = std::abs(q);
        if (m_ == 2.0) {
            base = M_PI / a * std::exp(-aq * a);
        } else if (q == 0.0) {
            base = std::sqrt(M_PI) * std::tgamma(0.5 * (m_ - 1.0)) / std::tgamma(0.5 * m_) *
                   std::pow(a, 1.0 - m_);
        } else {
            double nu = 0.5 * (m_ - 1.0);
            base = 2.0 * std::sqrt(M_PI) / std::tgamma(0.5 * m_) * std::pow(0.5 * aq / a, nu) *
                   std::cyl_bessel_k(nu, a * aq);
        }
        return base * std::cos(q * xi0_);
    }
    bool x_interval(double level, double& lo, double& hi) const override {
        if (level >= 1.0) return false;
        double r = std::sqrt(std::pow(level, -2.0 / m_) - 1.0);
        lo = x0_ - r;
        hi = x0_ + r;
        return true;
    }
    double xi_extent(double level) const override {
        if (level >= 1.0) return 0.0;
        double r = std::sqrt(std::pow(level, -2.0 / m_) - 1.0);
        return std::abs(xi0_) + r;
    }
    double center_x() const override { return x0_; }
    std::string kind() const override { return "power-law"; }
    double exponent() const { return m_; }
    double center_xi() const { return xi0_; }

   private:
    double m_, x0_, xi0_;
};

}  // namespace gapcount
