#include "brt/stats.hpp"

#include <algorithm>
#include <cmath>

#include "brt/errors.hpp"

namespace brt {

namespace {

// series expansion of P(a,x), valid for x < a+1
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a,x), valid for x >= a+1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15)
            break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw NegativeInput("gamma_q requires a > 0 and x >= 0");
    if (x == 0.0)
        return 1.0;
    if (x < a + 1.0)
        return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, int dof) {
    return gamma_q(0.5 * dof, 0.5 * x);
}

double kolmogorov_sf(double lambda) {
    if (lambda <= 0.0)
        return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-12)
            break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

namespace {

// Chi-square GOF for arbitrary pmf on 0..kmax with tail mass in the last
// bin; bins merged greedily so every expected count is >= 5.
double chi_square_pmf(const std::vector<std::size_t>& counts,
                      const std::vector<double>& pmf) {
    if (counts.size() < 100)
        throw InsufficientSamples("chi-square needs at least 100 samples");
    const double n = static_cast<double>(counts.size());
    std::size_t kmax = 0;
    for (std::size_t c : counts)
        kmax = std::max(kmax, c);
    std::vector<double> observed(kmax + 1, 0.0);
    for (std::size_t c : counts)
        observed[c] += 1.0;
    std::vector<double> expected(kmax + 1, 0.0);
    double tail = 1.0;
    for (std::size_t k = 0; k <= kmax && k < pmf.size(); ++k) {
        expected[k] = n * pmf[k];
        tail -= pmf[k];
    }
    expected[kmax] += n * std::max(0.0, tail);
    // merge small-expectation bins into their right neighbour, the final
    // bin into its left
    std::vector<double> obs_m, exp_m;
    double o = 0.0, e = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) {
        o += observed[k];
        e += expected[k];
        if (e >= 5.0) {
            obs_m.push_back(o);
            exp_m.push_back(e);
            o = e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {
        if (obs_m.empty()) {
            obs_m.push_back(o);
            exp_m.push_back(e);
        } else {
            obs_m.back() += o;
            exp_m.back() += e;
        }
    }
    if (obs_m.size() < 2)
        throw InsufficientSamples("degenerate binning in the chi-square test");
    double stat = 0.0;
    for (std::size_t i = 0; i < obs_m.size(); ++i)
        stat += (obs_m[i] - exp_m[i]) * (obs_m[i] - exp_m[i]) / exp_m[i];
    return chi2_sf(stat, static_cast<int>(obs_m.size()) - 1);
}

} // namespace

double chi_square_poisson(const std::vector<std::size_t>& counts, double mean) {
    std::size_t kmax = 0;
    for (std::size_t c : counts)
        kmax = std::max(kmax, c);
    std::vector<double> pmf(kmax + 1);
    double p = std::exp(-mean);
    pmf[0] = p;
    for (std::size_t k = 1; k <= kmax; ++k) {
        p *= mean / static_cast<double>(k);
        pmf[k] = p;
    }
    return chi_square_pmf(counts, pmf);
}

double chi_square_geometric(const std::vector<std::size_t>& counts, double mean) {
    // support {1,2,...}, success probability 1/mean
    const double q = 1.0 / mean;
    std::size_t kmax = 0;
    for (std::size_t c : counts)
        kmax = std::max(kmax, c);
    std::vector<double> pmf(kmax + 1, 0.0);
    double p = q;
    for (std::size_t k = 1; k <= kmax; ++k) {
        pmf[k] = p;
        p *= 1.0 - q;
    }
    return chi_square_pmf(counts, pmf);
}

double ks_geometric(const std::vector<std::size_t>& counts, double mean) {
    if (counts.size() < 100)
        throw InsufficientSamples("ks test needs at least 100 samples");
    const double q = 1.0 / mean;
    const double n = static_cast<double>(counts.size());
    std::size_t kmax = 0;
    for (std::size_t c : counts)
        kmax = std::max(kmax, c);
    std::vector<double> hist(kmax + 1, 0.0);
    for (std::size_t c : counts)
        hist[c] += 1.0;
    double d = 0.0;
    double fn = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) {
        fn += hist[k] / n;
        const double f = 1.0 - std::pow(1.0 - q, static_cast<double>(k));
        d = std::max(d, std::abs(fn - f));
    }
    const double sn = std::sqrt(n);
    return kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
}

double two_sample_ks(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() < 100 || ys.size() < 100)
        throw InsufficientSamples("two-sample ks needs at least 100 samples per side");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n1 = static_cast<double>(xs.size());
    const double n2 = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double x = xs[i], y = ys[j];
        if (x <= y)
            while (i < xs.size() && xs[i] == x)
                ++i;
        if (y <= x)
            while (j < ys.size() && ys[j] == y)
                ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n1 -
                                 static_cast<double>(j) / n2));
    }
    const double ne = std::sqrt(n1 * n2 / (n1 + n2));
    return kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d);
}

MeanStdErr mean_std_error(const std::vector<double>& values) {
    MeanStdErr r;
    r.n = values.size();
    if (r.n == 0)
        return r;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    r.mean = sum / static_cast<double>(r.n);
    if (r.n >= 2) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - r.mean) * (v - r.mean);
        r.std_error = std::sqrt(ss / (static_cast<double>(r.n) * (static_cast<double>(r.n) - 1.0)));
    }
    return r;
}

} // namespace brt
