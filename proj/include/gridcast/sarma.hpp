#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gridcast/series.hpp"
#include "gridcast/timebase.hpp"

namespace gridcast {

/// Coefficients of the remainder model
///   RC_t = phi0 + phi1·RC_{t-1} + phi24·RC_{t-24} - phi1·phi24·RC_{t-25}
///        + omega1·psi_{t-1} + omega24·psi_{t-24} + omega1·omega24·psi_{t-25} + psi_t
/// with innovations psi_t of variance sigma2.
struct SarmaParams {
    double phi0 = 0;
    double phi1 = 0;
    double phi24 = 0;
    double omega1 = 0;
    double omega24 = 0;
    double sigma2 = 0;
};

/// Each multiplicative factor must be stationary/invertible.
inline constexpr double sarma_coeff_bound = 0.999;

struct SarmaOptions {
    /// Flips the AR lag-25 cross coefficient to +phi1·phi24.  The
    /// default follows the model equation as written; the alternate
    /// sign exists for sensitivity checks only.
    bool alt_lag25_sign = false;
};

/// Fit result with diagnostics.  On a degenerate (constant) input the
/// AR/MA terms are unidentified and returned as 0.
struct SarmaFit {
    SarmaParams params;
    bool converged = false;
    bool boundary_pinned = false;
    bool degenerate_input = false;
    int iterations = 0;
    double css = 0;  // sum of squared residuals past the burn-in
};

/// The 25 most recent RC values and innovation residuals,
/// most-recent-last, as of the end of an observed series.
struct SarmaState {
    std::array<double, 25> rc{};
    std::array<double, 25> psi{};
};

/// Conditional residuals psi_t, recursing with pre-sample RC and psi
/// taken as 0.  The returned series starts 25 hours after rc (burn-in
/// excluded).  Requires rc length > 25 with no missing values.
[[nodiscard]] TimeSeries sarma_residuals(const SarmaParams& params, const TimeSeries& rc,
                                         const SarmaOptions& opt = {});

/// Minimizes the conditional sum of squared residuals over
/// (phi0, phi1, phi24, omega1, omega24) with the non-intercept
/// coefficients clamped to |.| <= 0.999; sigma2 = SSR / (n - 25).
/// Requires length >= 720 and no missing values.
[[nodiscard]] SarmaFit fit_sarma(const TimeSeries& rc, const SarmaOptions& opt = {});

/// CSS objective at the given parameters (diagnostics; same burn-in
/// rule as fit_sarma).
[[nodiscard]] double sarma_css(const SarmaParams& params, const TimeSeries& rc,
                               const SarmaOptions& opt = {});

/// k-step-ahead conditional expectations: future innovations are 0,
/// future RC values are replaced by their own forecasts as the
/// recursion advances.
[[nodiscard]] std::vector<double> forecast_sarma(const SarmaParams& params, const SarmaState& state,
                                                 int horizon, const SarmaOptions& opt = {});

/// State at the end of an observed series (length >= 50).
[[nodiscard]] SarmaState state_from_series(const SarmaParams& params, const TimeSeries& rc,
                                           const SarmaOptions& opt = {});

struct SimulatedSarma {
    TimeSeries rc;
    std::vector<double> psi;  // innovations aligned with rc
};

/// Simulates the model with seeded Gaussian innovations.  The recursion
/// starts from zero pre-sample values `burn` hours before `start`; the
/// burn-in is discarded.  Deterministic per seed.
[[nodiscard]] SimulatedSarma simulate_sarma(const SarmaParams& params, Hour start, std::size_t n,
                                            std::uint64_t seed, std::size_t burn = 0,
                                            const SarmaOptions& opt = {});

}  // namespace gridcast
