#include "blochlab/fit.hpp"

#include <cmath>

namespace blochlab {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
    const int n = static_cast<int>(x.size());
    if (n < 2) throw InsufficientPoints("fit_line: need at least two points");

    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw InsufficientPoints("fit_line: degenerate abscissas");

    LineFit out;
    out.n = n;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (out.intercept + out.slope * x[i]);
        out.rss += r * r;
    }
    out.r_squared = syy > 0 ? 1.0 - out.rss / syy : 1.0;
    return out;
}

namespace {

double aic(const LineFit& f) {
    // Gaussian AIC up to a constant, two parameters
    const double rss = std::max(f.rss, 1e-300);
    return f.n * std::log(rss / f.n) + 4.0;
}

} // namespace

DecayFit fit_decay(const std::vector<double>& L, const std::vector<double>& values) {
    if (L.size() != values.size()) throw std::invalid_argument("fit_decay: size mismatch");
    if (L.size() < 3) throw InsufficientPoints("fit_decay: need at least three sizes");

    std::vector<double> logL(L.size()), logv(L.size());
    for (size_t i = 0; i < L.size(); ++i) {
        if (L[i] <= 0) throw NonPositiveValues("fit_decay: sizes must be positive");
        const double a = std::abs(values[i]);
        if (a <= 0) throw NonPositiveValues("fit_decay: values must be nonzero");
        logL[i] = std::log(L[i]);
        logv[i] = std::log(a);
    }

    DecayFit out;
    out.power_fit = fit_line(logL, logv);
    std::vector<double> Lc(L);
    out.exp_fit = fit_line(Lc, logv);

    if (aic(out.power_fit) <= aic(out.exp_fit)) {
        out.law = DecayLaw::power;
        out.exponent = out.power_fit.slope;
        out.prefactor = std::exp(out.power_fit.intercept);
        out.r_squared = out.power_fit.r_squared;
    } else {
        out.law = DecayLaw::exponential;
        out.exponent = out.exp_fit.slope;
        out.prefactor = std::exp(out.exp_fit.intercept);
        out.r_squared = out.exp_fit.r_squared;
    }
    return out;
}

} // namespace blochlab
