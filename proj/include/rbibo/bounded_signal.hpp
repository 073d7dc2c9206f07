#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rbibo/error.hpp"

namespace rbibo {

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    bool operator==(const Interval&) const = default;
    bool contains(double t) const { return t >= lower && t <= upper; }
};

enum class Continuity { Continuous, PiecewiseContinuous, Measurable };

/// Returns the sorted jump locations inside [lo, hi].
using JumpLocator = std::function<std::vector<double>(double lo, double hi)>;

inline JumpLocator jumps_from_list(std::vector<double> jumps)
{
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
    auto shared = std::make_shared<const std::vector<double>>(std::move(jumps));
    return [shared](double lo, double hi) {
        auto first = std::lower_bound(shared->begin(), shared->end(), lo);
        auto last = std::upper_bound(shared->begin(), shared->end(), hi);
        return std::vector<double>(first, last);
    };
}

/// An input signal with a declared bound on its sup-norm.
///
/// The bound and the support are contracts of the caller; the constructor
/// audits them on 10^4 quasi-random samples and rejects gross violations.
class BoundedSignal {
public:
    using Fn = std::function<double(double)>;

    static constexpr int kAuditSamples = 10000;

    BoundedSignal(Fn evaluator, double sup_bound, std::optional<Interval> support = std::nullopt,
                  Continuity continuity = Continuity::Continuous, JumpLocator jumps = {},
                  std::string description = {})
        : eval_(std::make_shared<const Fn>(std::move(evaluator))),
          sup_bound_(sup_bound),
          support_(support),
          continuity_(continuity),
          jumps_(std::move(jumps)),
          description_(std::move(description))
    {
        if (!(sup_bound >= 0.0) || !std::isfinite(sup_bound))
            throw Error(Errc::InvalidSignal, "sup bound must be finite and non-negative");
        if (support_ && !(support_->lower <= support_->upper))
            throw Error(Errc::InvalidSignal, "support interval is inverted");
        audit();
    }

    double operator()(double t) const { return (*eval_)(t); }

    double sup_bound() const { return sup_bound_; }
    const std::optional<Interval>& support() const { return support_; }
    bool compact() const { return support_.has_value(); }
    Continuity continuity() const { return continuity_; }
    const std::string& description() const { return description_; }

    std::vector<double> jumps_in(double lo, double hi) const
    {
        if (!jumps_ || !(hi >= lo)) return {};
        return jumps_(lo, hi);
    }

    const JumpLocator& jump_locator() const { return jumps_; }
    const std::shared_ptr<const Fn>& shared_evaluator() const { return eval_; }

private:
    void audit() const
    {
        // Weyl sequence with the golden-ratio increment.
        const double step = std::numbers::phi - 1.0;
        double u = 0.5;
        const double slack = sup_bound_ * (1.0 + 1e-12) + 1e-300;
        for (int i = 0; i < kAuditSamples; ++i) {
            u += step;
            u -= std::floor(u);
            double t;
            if (support_) {
                const double width = std::max(1.0, support_->upper - support_->lower);
                t = support_->lower - width + 3.0 * width * u;
            } else {
                t = 10.0 * std::tan(std::numbers::pi * (u - 0.5) * 0.999);
            }
            const double v = (*eval_)(t);
            if (std::isnan(v) || std::abs(v) > slack)
                throw Error(Errc::InvalidSignal, "sample exceeds declared sup bound at t=" + std::to_string(t));
            if (support_ && !support_->contains(t) && v != 0.0)
                throw Error(Errc::InvalidSignal, "nonzero sample outside declared support at t=" + std::to_string(t));
        }
    }

    std::shared_ptr<const Fn> eval_;
    double sup_bound_;
    std::optional<Interval> support_;
    Continuity continuity_;
    JumpLocator jumps_;
    std::string description_;
};

} // namespace rbibo
