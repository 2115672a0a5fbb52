#include "gridcast/sarma.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gridcast/errors.hpp"

namespace gridcast {

namespace {

constexpr int burn_in = 25;  // longest lag in the recursion

struct Coeffs {
    double phi0, a1, a24, a25, m1, m24, m25;
};

Coeffs expand(const SarmaParams& p, const SarmaOptions& o) {
    double s = o.alt_lag25_sign ? 1.0 : -1.0;
    return {p.phi0, p.phi1, p.phi24, s * p.phi1 * p.phi24,
            p.omega1, p.omega24, p.omega1 * p.omega24};
}

/// One-step residuals over the whole series, zero pre-sample.
std::vector<double> innovations(const Coeffs& c, const std::vector<double>& rc) {
    std::size_t n = rc.size();
    std::vector<double> psi(n);
    auto rc_at = [&](std::ptrdiff_t i) { return i >= 0 ? rc[static_cast<std::size_t>(i)] : 0.0; };
    auto psi_at = [&](std::ptrdiff_t i) { return i >= 0 ? psi[static_cast<std::size_t>(i)] : 0.0; };
    std::size_t head = std::min<std::size_t>(n, burn_in);
    for (std::size_t t = 0; t < head; ++t) {
        auto i = static_cast<std::ptrdiff_t>(t);
        psi[t] = rc[t] - c.phi0 - c.a1 * rc_at(i - 1) - c.a24 * rc_at(i - 24) -
                 c.a25 * rc_at(i - 25) - c.m1 * psi_at(i - 1) - c.m24 * psi_at(i - 24) -
                 c.m25 * psi_at(i - 25);
    }
    for (std::size_t t = head; t < n; ++t) {
        psi[t] = rc[t] - c.phi0 - c.a1 * rc[t - 1] - c.a24 * rc[t - 24] - c.a25 * rc[t - 25] -
                 c.m1 * psi[t - 1] - c.m24 * psi[t - 24] - c.m25 * psi[t - 25];
    }
    return psi;
}

double css_of(const Coeffs& c, const std::vector<double>& rc) {
    std::vector<double> psi = innovations(c, rc);
    double ssr = 0;
    for (std::size_t t = burn_in; t < psi.size(); ++t) ssr += psi[t] * psi[t];
    return ssr;
}

std::vector<double> checked_values(const TimeSeries& rc, std::size_t min_len, const char* who) {
    if (rc.size() < min_len)
        throw InputError(std::string(who) + " needs at least " + std::to_string(min_len) +
                         " values, got " + std::to_string(rc.size()));
    if (rc.missing_count() != 0)
        throw InputError(std::string(who) + " requires a series without missing values");
    return rc.values();
}

double acf(const std::vector<double>& x, std::size_t lag) {
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double c0 = 0, ck = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        double d = x[t] - mean;
        c0 += d * d;
        if (t + lag < x.size()) ck += d * (x[t + lag] - mean);
    }
    return c0 == 0 ? 0.0 : ck / c0;
}

double clamp_coeff(double v) { return std::clamp(v, -sarma_coeff_bound, sarma_coeff_bound); }

SarmaParams from_vec(const std::vector<double>& x) {
    SarmaParams p;
    p.phi0 = x[0];
    p.phi1 = clamp_coeff(x[1]);
    p.phi24 = clamp_coeff(x[2]);
    p.omega1 = clamp_coeff(x[3]);
    p.omega24 = clamp_coeff(x[4]);
    return p;
}

struct NmResult {
    std::vector<double> x;
    double f = 0;
    int iterations = 0;
    bool converged = false;
};

/// Standard Nelder-Mead with reflection 1, expansion 2, contraction
/// 0.5, shrink 0.5.  Deterministic: ties keep insertion order.
template <class F>
NmResult nelder_mead(F f, const std::vector<double>& x0, const std::vector<double>& steps,
                     int max_iter) {
    std::size_t dim = x0.size();
    std::vector<std::vector<double>> xs(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) xs[i + 1][i] += steps[i];
    std::vector<double> fs(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fs[i] = f(xs[i]);

    NmResult r;
    auto order = [&] {
        std::vector<std::size_t> idx(dim + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        std::vector<std::vector<double>> nxs(dim + 1);
        std::vector<double> nfs(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            nxs[i] = std::move(xs[idx[i]]);
            nfs[i] = fs[idx[i]];
        }
        xs = std::move(nxs);
        fs = std::move(nfs);
    };

    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        order();
        double diameter = 0;
        for (std::size_t i = 1; i <= dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                diameter = std::max(diameter, std::abs(xs[i][j] - xs[0][j]));
        double spread = fs[dim] - fs[0];
        if (diameter < 1e-6 || spread < 1e-10 * (1 + std::abs(fs[0]))) {
            r.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += xs[i][j] / static_cast<double>(dim);
        auto blend = [&](double w) {
            std::vector<double> x(dim);
            for (std::size_t j = 0; j < dim; ++j) x[j] = centroid[j] + w * (xs[dim][j] - centroid[j]);
            return x;
        };

        std::vector<double> xr = blend(-1.0);
        double fr = f(xr);
        if (fr < fs[0]) {
            std::vector<double> xe = blend(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                xs[dim] = std::move(xe);
                fs[dim] = fe;
            } else {
                xs[dim] = std::move(xr);
                fs[dim] = fr;
            }
        } else if (fr < fs[dim - 1]) {
            xs[dim] = std::move(xr);
            fs[dim] = fr;
        } else {
            std::vector<double> xc = blend(fr < fs[dim] ? -0.5 : 0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fs[dim])) {
                xs[dim] = std::move(xc);
                fs[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j)
                        xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
                    fs[i] = f(xs[i]);
                }
            }
        }
    }
    order();
    r.x = xs[0];
    r.f = fs[0];
    return r;
}

}  // namespace

TimeSeries sarma_residuals(const SarmaParams& params, const TimeSeries& rc,
                           const SarmaOptions& opt) {
    std::vector<double> values = checked_values(rc, burn_in + 1, "sarma_residuals");
    std::vector<double> psi = innovations(expand(params, opt), values);
    std::vector<double> tail(psi.begin() + burn_in, psi.end());
    return TimeSeries(rc.start() + burn_in, std::move(tail), rc.unit());
}

double sarma_css(const SarmaParams& params, const TimeSeries& rc, const SarmaOptions& opt) {
    return css_of(expand(params, opt), checked_values(rc, burn_in + 1, "sarma_css"));
}

SarmaFit fit_sarma(const TimeSeries& rc, const SarmaOptions& opt) {
    std::vector<double> values = checked_values(rc, 30 * 24, "fit_sarma");
    auto n = static_cast<double>(values.size());

    auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    SarmaFit fit;
    if (*min_it == *max_it) {
        fit.params.phi0 = *min_it;
        fit.converged = true;
        fit.degenerate_input = true;
        return fit;
    }

    double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double rho1 = acf(values, 1), rho24 = acf(values, 24);
    auto sgn = [](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); };
    std::vector<double> x0 = {mean, 0.1 * sgn(rho1), 0.1 * sgn(rho24), 0.1 * sgn(rho1),
                              0.1 * sgn(rho24)};

    auto objective = [&](const std::vector<double>& x) {
        return css_of(expand(from_vec(x), opt), values);
    };

    double phi0_step = std::max(0.1, 0.1 * std::abs(mean));
    NmResult round1 = nelder_mead(objective, x0, {phi0_step, 0.1, 0.1, 0.1, 0.1}, 4000);
    // A second start around the incumbent guards against a collapsed
    // simplex ending on a ridge.
    NmResult round2 =
        nelder_mead(objective, round1.x, {0.1 * phi0_step, 0.02, 0.02, 0.02, 0.02}, 4000);
    const NmResult& best = round2.f <= round1.f ? round2 : round1;

    fit.params = from_vec(best.x);
    fit.css = best.f;
    fit.params.sigma2 = best.f / (n - burn_in);
    fit.converged = round2.converged;
    fit.iterations = round1.iterations + round2.iterations;
    for (double v : {fit.params.phi1, fit.params.phi24, fit.params.omega1, fit.params.omega24})
        if (std::abs(v) >= sarma_coeff_bound - 1e-9) fit.boundary_pinned = true;
    return fit;
}

std::vector<double> forecast_sarma(const SarmaParams& params, const SarmaState& state, int horizon,
                                   const SarmaOptions& opt) {
    if (horizon < 1) throw InputError("forecast horizon must be at least 1");
    Coeffs c = expand(params, opt);
    std::vector<double> rc(state.rc.begin(), state.rc.end());
    std::vector<double> psi(state.psi.begin(), state.psi.end());
    rc.reserve(rc.size() + static_cast<std::size_t>(horizon));
    for (int k = 0; k < horizon; ++k) {
        std::size_t t = rc.size();
        double v = c.phi0 + c.a1 * rc[t - 1] + c.a24 * rc[t - 24] + c.a25 * rc[t - 25] +
                   c.m1 * psi[t - 1] + c.m24 * psi[t - 24] + c.m25 * psi[t - 25];
        rc.push_back(v);
        psi.push_back(0.0);
    }
    return std::vector<double>(rc.begin() + burn_in, rc.end());
}

SarmaState state_from_series(const SarmaParams& params, const TimeSeries& rc,
                             const SarmaOptions& opt) {
    std::vector<double> values = checked_values(rc, 50, "state_from_series");
    std::vector<double> psi = innovations(expand(params, opt), values);
    SarmaState s;
    std::size_t n = values.size();
    for (int i = 0; i < burn_in; ++i) {
        s.rc[static_cast<std::size_t>(i)] = values[n - burn_in + static_cast<std::size_t>(i)];
        s.psi[static_cast<std::size_t>(i)] = psi[n - burn_in + static_cast<std::size_t>(i)];
    }
    return s;
}

SimulatedSarma simulate_sarma(const SarmaParams& params, Hour start, std::size_t n,
                              std::uint64_t seed, std::size_t burn, const SarmaOptions& opt) {
    Coeffs c = expand(params, opt);
    double sigma = std::sqrt(params.sigma2);
    std::mt19937_64 gen(seed);
    // Box-Muller on the raw engine: std::normal_distribution's exact
    // sequence is implementation-defined, this one is pinned.
    bool cached = false;
    double cache = 0;
    auto normal = [&]() {
        if (cached) {
            cached = false;
            return cache;
        }
        double u1 = (static_cast<double>(gen() >> 11) + 1.0) * 0x1p-53;
        double u2 = static_cast<double>(gen() >> 11) * 0x1p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
        cache = r * std::sin(a);
        cached = true;
        return r * std::cos(a);
    };

    std::size_t total = burn + n;
    std::vector<double> rc(total), psi(total);
    auto rc_at = [&](std::ptrdiff_t i) { return i >= 0 ? rc[static_cast<std::size_t>(i)] : 0.0; };
    auto psi_at = [&](std::ptrdiff_t i) { return i >= 0 ? psi[static_cast<std::size_t>(i)] : 0.0; };
    for (std::size_t t = 0; t < total; ++t) {
        auto i = static_cast<std::ptrdiff_t>(t);
        psi[t] = sigma * normal();
        rc[t] = c.phi0 + c.a1 * rc_at(i - 1) + c.a24 * rc_at(i - 24) + c.a25 * rc_at(i - 25) +
                c.m1 * psi_at(i - 1) + c.m24 * psi_at(i - 24) + c.m25 * psi_at(i - 25) + psi[t];
    }
    SimulatedSarma out{TimeSeries(start, std::vector<double>(rc.begin() + static_cast<std::ptrdiff_t>(burn), rc.end())),
                       std::vector<double>(psi.begin() + static_cast<std::ptrdiff_t>(burn), psi.end())};
    return out;
}

}  // namespace gridcast
