#pragma once

// Reference computations for the tests. Deliberately naive and independent of
// the library: plain vectors, textbook elimination, a separate generator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Rows a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c]))
                piv = r;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        if (a[c][c] == 0.0)
            throw std::runtime_error("singular system");
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

// mu = (I - M)^{-1} c with c_i = sum_j m_ij l_ij + m_i* l_i*. lengths is K x (K+1).
inline std::vector<double> hitting_times(const Rows& m, const Rows& lengths)
{
    const std::size_t K = m.size();
    Rows a(K, std::vector<double>(K, 0.0));
    std::vector<double> c(K, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            a[i][j] = (i == j ? 1.0 : 0.0) - m[i][j];
            c[i] += m[i][j] * lengths[i][j];
            row += m[i][j];
        }
        c[i] += (1.0 - row) * lengths[i][K];
    }
    return solve(a, c);
}

inline Rows unit_lengths(std::size_t K)
{
    return Rows(K, std::vector<double>(K + 1, 1.0));
}

// Pr(walk from u visits v before absorption) by value iteration on the
// "stop at v" chain; converges geometrically since row sums are < 1.
inline std::vector<double> visit_probs(const Rows& m, std::size_t v, int sweeps = 4000)
{
    const std::size_t K = m.size();
    std::vector<double> r(K, 0.0);
    r[v] = 1.0;
    for (int it = 0; it < sweeps; ++it) {
        std::vector<double> next(K, 0.0);
        for (std::size_t u = 0; u < K; ++u) {
            if (u == v) {
                next[u] = 1.0;
                continue;
            }
            for (std::size_t j = 0; j < K; ++j)
                next[u] += m[u][j] * r[j];
        }
        r = next;
    }
    return r;
}

// A walk simulator with its own generator. Returns (H, total length, nodes visited).
struct Walk {
    int steps = 0;
    double length = 0.0;
    std::vector<int> nodes;  // X_0..X_{H-1}
};

class Walker {
public:
    Walker(Rows m, Rows lengths, std::uint64_t seed) : m_(std::move(m)), l_(std::move(lengths)), gen_(seed) {}

    Walk run(int start)
    {
        const int K = static_cast<int>(m_.size());
        Walk w;
        int x = start;
        while (true) {
            w.nodes.push_back(x);
            double u = unif_(gen_);
            int next = K;  // absorbing
            for (int j = 0; j < K; ++j) {
                if (u < m_[x][j]) {
                    next = j;
                    break;
                }
                u -= m_[x][j];
            }
            ++w.steps;
            w.length += l_[x][next];
            if (next == K)
                return w;
            x = next;
        }
    }

private:
    Rows m_;
    Rows l_;
    std::mt19937 gen_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

// Composite Simpson rule on [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n = 20000)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// E[clip_[0,1](X)], X ~ N(mean, sd), by quadrature over mean +- 12 sd.
inline double clipped_gaussian_mean(double mean, double sd)
{
    const double pi = 3.14159265358979323846;
    const auto pdf = [&](double x) { return std::exp(-0.5 * (x - mean) * (x - mean) / (sd * sd)) / (sd * std::sqrt(2 * pi)); };
    const auto f = [&](double x) { return std::clamp(x, 0.0, 1.0) * pdf(x); };
    return simpson(f, mean - 12 * sd, mean + 12 * sd, 200000);
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    return d;
}

// Asymptotic p-value Q_KS(sqrt(n_e) D) of the Kolmogorov distribution.
inline double ks_pvalue(double d, std::size_t n1, std::size_t n2)
{
    const double ne = static_cast<double>(n1) * n2 / (n1 + n2);
    const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    if (lam < 1e-3)
        return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 200; ++k)
        sum += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    return std::clamp(sum, 0.0, 1.0);
}

// Grid-plus-refinement maximizer of f on [lo, hi]; returns (argmax, max).
template <typename F>
std::pair<double, double> maximize(F f, double lo, double hi, int grid = 2000)
{
    double best_x = lo, best = f(lo);
    for (int i = 1; i <= grid; ++i) {
        const double x = lo + (hi - lo) * i / grid;
        if (const double v = f(x); v > best) {
            best = v;
            best_x = x;
        }
    }
    double a = std::max(lo, best_x - (hi - lo) / grid), b = std::min(hi, best_x + (hi - lo) / grid);
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (f(c) > f(d))
            b = d;
        else
            a = c;
    }
    const double x = (a + b) / 2;
    return {x, f(x)};
}

inline double mean(const std::vector<double>& xs)
{
    return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

inline double stddev(const std::vector<double>& xs)
{
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs)
        s += (x - m) * (x - m);
    return std::sqrt(s / (xs.size() - 1));
}

}  // namespace oracle
