#include "kloptim/ratelab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kloptim/errors.hpp"

namespace kloptim {

std::string to_string(RateClass c) {
    switch (c) {
        case RateClass::finite_step: return "finite_step";
        case RateClass::superlinear: return "superlinear";
        case RateClass::linear: return "linear";
        case RateClass::sublinear: return "sublinear";
    }
    return "?";
}

LinFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinFit fit;
    fit.n = xs.size();
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InsufficientDataError("linear_fit: need at least 2 points");
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InsufficientDataError("linear_fit: degenerate abscissa");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        fit.rss += r * r;
    }
    fit.stderr_slope = xs.size() > 2 ? std::sqrt(fit.rss / (n - 2.0) / sxx) : 0.0;
    return fit;
}

std::size_t default_burn_in(std::size_t trace_length) {
    return std::max<std::size_t>(10, trace_length / 5);
}

RatePrediction predict_rates(double theta, RateFamily family) {
    if (!(theta > 0.0) || theta > 1.0)
        throw InputError("predict_rates: theta must be in (0, 1]");
    RatePrediction p;
    if (theta == 1.0) {
        p.cls = RateClass::finite_step;
        return p;
    }
    const bool gda = family == RateFamily::gda_value || family == RateFamily::gda_variable;
    const double threshold = gda ? 0.5 : 1.0 / 3.0;
    if (theta == threshold) {
        p.cls = RateClass::linear;
        return p;
    }
    if (theta > threshold) {
        p.cls = RateClass::superlinear;
        switch (family) {
            case RateFamily::cr_value:
                p.superlinear_order = 2.0 / (3.0 * (1.0 - theta));
                break;
            case RateFamily::cr_variable:
                p.superlinear_order = 2.0 * theta / (3.0 * (1.0 - theta)) + 2.0 / 3.0;
                break;
            case RateFamily::cr_distance:
                p.superlinear_order = 2.0 * theta / (1.0 - theta);
                break;
            case RateFamily::gda_value:
            case RateFamily::gda_variable:
                p.superlinear_order = 1.0 / (2.0 * (1.0 - theta));
                break;
        }
        return p;
    }
    p.cls = RateClass::sublinear;
    switch (family) {
        case RateFamily::cr_value:
            p.sublinear_exponent = 2.0 / (1.0 - 3.0 * theta);
            break;
        case RateFamily::cr_variable:
        case RateFamily::cr_distance:
            p.sublinear_exponent = 2.0 * theta / (1.0 - 3.0 * theta);
            break;
        case RateFamily::gda_value:
            p.sublinear_exponent = 1.0 / (1.0 - 2.0 * theta);
            break;
        case RateFamily::gda_variable:
            p.sublinear_exponent = theta / (1.0 - 2.0 * theta);
            break;
    }
    return p;
}

RateReport classify_rate(const std::vector<double>& errors, std::size_t burn_in) {
    if (errors.empty()) throw InputError("classify_rate: empty sequence");
    if (burn_in >= errors.size())
        throw InputError("classify_rate: burn_in >= sequence length");

    std::vector<double> e(errors);
    for (auto& v : e) {
        if (!std::isfinite(v)) throw InputError("classify_rate: non-finite entry");
        v = std::max(v, 0.0);
    }
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
        if (e[i + 1] > e[i] + 1e-12 * (1.0 + e[i]))
            throw InputError("classify_rate: sequence not nonincreasing at index " +
                             std::to_string(i + 1));

    RateReport rep;
    rep.burn_in = burn_in;

    // Exact zero means finite-step convergence, but only when the sequence
    // lands there abruptly: the preceding value must sit above the noise
    // floor and must not already be in superlinear free-fall (pre-zero ratio
    // >= 1e-2). Otherwise the zero is double-precision underflow of a
    // still-decaying sequence and classification proceeds on the prefix.
    const auto zero_it = std::find(e.begin(), e.end(), 0.0);
    if (zero_it != e.end()) {
        bool genuine = true;
        if (zero_it != e.begin()) {
            const double prev = *(zero_it - 1);
            genuine = prev > ratecfg::kNoiseFloor;
            if (genuine && zero_it - e.begin() >= 2)
                genuine = prev >= 1e-2 * *(zero_it - 2);
        }
        if (genuine) {
            rep.cls = RateClass::finite_step;
            return rep;
        }
    }

    // usable points: past burn-in and above the noise floor
    std::vector<double> ks, loge;
    for (std::size_t k = burn_in; k < e.size(); ++k) {
        if (e[k] <= ratecfg::kNoiseFloor) break;
        ks.push_back(static_cast<double>(k));
        loge.push_back(std::log(e[k]));
    }
    if (ks.size() < 4)
        throw InsufficientDataError("classify_rate: fewer than 4 usable points past burn-in");

    const double spread = loge.front() - loge.back();
    if (spread <= 1e-12 * (1.0 + std::fabs(loge.front()))) {
        rep.degenerate = true;
        rep.cls = RateClass::linear;
        rep.linear_ratio = 1.0;
        return rep;
    }

    const double inf = std::numeric_limits<double>::infinity();

    // linear: log e = a + b k
    const LinFit lin = linear_fit(ks, loge);

    // sublinear: log e = a - p log(k + 1); the abscissa keeps the original
    // iteration index (power laws are not shift-invariant)
    std::vector<double> logk(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) logk[i] = std::log(ks[i] + 1.0);
    const LinFit sub = linear_fit(logk, loge);

    // superlinear: log(-log e) = a + b k on the e < 1 subset
    std::vector<double> ks_sup, z_sup;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (loge[i] < -1e-12) {
            ks_sup.push_back(ks[i]);
            z_sup.push_back(std::log(-loge[i]));
        }
    }
    LinFit sup;
    bool have_sup = false;
    if (ks_sup.size() >= 4) {
        sup = linear_fit(ks_sup, z_sup);
        have_sup = sup.slope > 0.0;  // order must exceed 1
    }

    // compare per-point MSE of the log-e prediction on the common tail window
    auto mse_on = [&](auto&& predict) {
        double s = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (have_sup && loge[i] >= -1e-12) continue;  // common window
            const double r = loge[i] - predict(ks[i]);
            s += r * r;
            ++cnt;
        }
        return cnt ? s / static_cast<double>(cnt) : inf;
    };
    const double mse_lin = mse_on([&](double k) { return lin.intercept + lin.slope * k; });
    const double mse_sub =
        mse_on([&](double k) { return sub.intercept + sub.slope * std::log(k + 1.0); });
    const double mse_sup =
        have_sup ? mse_on([&](double k) { return -std::exp(sup.intercept + sup.slope * k); })
                 : inf;

    const double best = std::min({mse_lin, mse_sub, mse_sup});
    if (mse_lin <= ratecfg::kLinearPreference * best && lin.slope < 0.0) {
        rep.cls = RateClass::linear;
        rep.linear_ratio = std::exp(lin.slope);
        rep.fit_residual = std::sqrt(mse_lin);
    } else if (mse_sup <= mse_sub && have_sup) {
        rep.cls = RateClass::superlinear;
        rep.superlinear_order = std::exp(sup.slope);
        rep.fit_residual = std::sqrt(mse_sup);
    } else {
        rep.cls = RateClass::sublinear;
        rep.sublinear_exponent = -sub.slope;
        rep.fit_residual = std::sqrt(mse_sub);
    }
    return rep;
}

ThetaEstimate estimate_theta(const std::vector<std::pair<double, double>>& pairs,
                             std::size_t burn_in) {
    std::vector<double> lr, lg;
    for (std::size_t i = burn_in; i < pairs.size(); ++i) {
        const auto& [r, g] = pairs[i];
        if (!(r > ratecfg::kNoiseFloor) || !(g > 0.0)) continue;
        if (!std::isfinite(r) || !std::isfinite(g)) continue;
        lr.push_back(std::log(r));
        lg.push_back(std::log(g));
    }
    if (lr.size() < 10)
        throw InsufficientDataError("estimate_theta: fewer than 10 usable pairs");

    const LinFit fit = linear_fit(lg, lr);
    ThetaEstimate est;
    est.slope = fit.slope;
    est.stderr_slope = fit.stderr_slope;
    est.n_points = lr.size();
    if (fit.slope > 1.0) {
        est.theta_hat = std::min(1.0, 1.0 - 1.0 / fit.slope);
    } else {
        est.theta_hat = std::numeric_limits<double>::min();
        est.degenerate = true;
    }
    return est;
}

ErrorBoundFit error_bound_check(const SmoothOracle& oracle, const std::vector<Vec>& points,
                                double value_window) {
    if (!oracle.kl_theta)
        throw InputError("error_bound_check: oracle has no known KL exponent");
    if (!oracle.solution_distance)
        throw InputError("error_bound_check: oracle has no solution_distance");
    const double lam = value_window > 0.0 ? value_window
                                          : std::numeric_limits<double>::infinity();

    std::vector<double> ld, lr;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& x : points) {
        const double r = oracle.value(x) - oracle.f_star;
        if (!(r > 1e-10) || !(r < lam)) continue;
        const double d = oracle.solution_distance(x);
        if (!(d > 0.0)) continue;
        ld.push_back(std::log(d));
        lr.push_back(std::log(r));
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (ld.size() < 10 || rmax < 100.0 * rmin)
        throw InsufficientDataError(
            "error_bound_check: need >= 10 points spanning >= 2 decades of residual");

    const LinFit fit = linear_fit(lr, ld);
    ErrorBoundFit out;
    out.slope = fit.slope;
    out.n_points = ld.size();
    const double theta = *oracle.kl_theta;
    double c = 0.0;
    for (std::size_t i = 0; i < ld.size(); ++i)
        c = std::max(c, std::exp(ld[i] - theta * lr[i]));
    out.constant = c;
    return out;
}

double superlinear_order(const std::vector<double>& errors) {
    // longest strictly decreasing run inside [1e-14, 1e-1]
    std::size_t best_lo = 0, best_len = 0;
    std::size_t lo = 0;
    auto inside = [](double v) { return v >= 1e-14 && v <= 1e-1; };
    for (std::size_t i = 0; i <= errors.size(); ++i) {
        const bool ok = i < errors.size() && inside(errors[i]) &&
                        (i == lo || errors[i] < errors[i - 1]);
        if (!ok) {
            if (i - lo > best_len) {
                best_len = i - lo;
                best_lo = lo;
            }
            lo = i < errors.size() && inside(errors[i]) ? i : i + 1;
        }
    }
    if (best_len < 4)
        throw InsufficientDataError(
            "superlinear_order: need >= 4 consecutive decreasing entries in [1e-14, 1e-1]");

    std::vector<double> ratios;
    for (std::size_t i = best_lo; i + 1 < best_lo + best_len; ++i)
        ratios.push_back(std::log(errors[i + 1]) / std::log(errors[i]));
    std::sort(ratios.begin(), ratios.end());
    const std::size_t m = ratios.size();
    return m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
}

}  // namespace kloptim
