#ifndef BLOCHLAB_FIT_HPP
#define BLOCHLAB_FIT_HPP

#include <stdexcept>
#include <vector>

namespace blochlab {

struct InsufficientPoints : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveValues : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class DecayLaw { power, exponential };

// Least-squares line fit y = a + b x with goodness-of-fit summary.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    double rss = 0.0; // residual sum of squares
    int n = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Compares |y| ~ C L^p (log-log line) against |y| ~ C e^{-kappa L} (log-linear
// line) and keeps whichever has the smaller AIC. Values must be nonzero.
struct DecayFit {
    DecayLaw law = DecayLaw::power;
    double exponent = 0.0;  // p for power, -kappa for exponential (slope)
    double prefactor = 0.0; // C
    double r_squared = 0.0;
    LineFit power_fit;
    LineFit exp_fit;
};

DecayFit fit_decay(const std::vector<double>& L, const std::vector<double>& values);

} // namespace blochlab

#endif
