#include "cascade/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

/// Decay exponents of one subsystem: the eigenvalues of its 2x2 no-jump
/// block are lam_plus and lam_minus, split by Lambda around -q.
struct Mode {
    cd lambda;
    cd lam_plus;
    cd lam_minus;
    cd r;  // (K + 2i stark_cavity)/4 - i stark_laser/2
};

Mode mode_of(const DerivedParams& d) {
    const cd z{d.bandwidth, 2.0 * d.stark_cavity};
    const cd q = 0.25 * z + cd{0.0, 0.5 * d.stark_laser};
    Mode m;
    m.lambda = lambda_k(d);
    m.lam_plus = -q + 0.5 * m.lambda;
    m.lam_minus = -q - 0.5 * m.lambda;
    m.r = 0.25 * z - cd{0.0, 0.5 * d.stark_laser};
    return m;
}

/// Divided differences of x -> exp(x t) over up to four nodes, memoized per
/// node subset.  Nodes whose pairwise gap is below the cluster radius
/// max(singular_threshold, 0.5 / t) are grouped; a subset that collapses to
/// one cluster is evaluated through the centered series
///   exp(mean t) t^(k-1) sum_j h_j(deltas) t^j / (k-1+j)!
/// (h_j: complete homogeneous symmetric polynomials of the node offsets from
/// the mean), which converges geometrically because the clustering keeps
/// spread * t <= O(1).  Otherwise the recursion pivots on the widest
/// cross-cluster pair, so every division is by a gap of at least the cluster
/// radius and roundoff stays below ~eps * (2t)^3 * exp(-t K/4).  All
/// physical exponents have non-positive real part, which keeps every
/// intermediate bounded.
class ExpDividedDifference {
  public:
    ExpDividedDifference(const std::array<cd, 4>& nodes, double t)
        : w_(nodes), t_(t) {}

    cd over(unsigned mask) {
        if (have_[mask]) return memo_[mask];
        int idx[4];
        int n = 0;
        for (int i = 0; i < 4; ++i)
            if (mask & (1u << i)) idx[n++] = i;
        cd result;
        if (n == 1) {
            result = std::exp(w_[idx[0]] * t_);
        } else {
            const double radius =
                t_ > 0.0
                    ? std::max(singular_threshold, 0.5 / t_)
                    : std::numeric_limits<double>::infinity();
            int parent[4];
            for (int i = 0; i < n; ++i) parent[i] = i;
            auto find = [&](int i) {
                while (parent[i] != i) i = parent[i] = parent[parent[i]];
                return i;
            };
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (std::abs(w_[idx[i]] - w_[idx[j]]) < radius)
                        parent[find(i)] = find(j);
            bool one_cluster = true;
            for (int i = 1; i < n; ++i)
                if (find(i) != find(0)) one_cluster = false;
            if (one_cluster) {
                result = cluster_series(idx, n);
            } else {
                double widest = -1.0;
                int bi = 0, bj = 1;
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j) {
                        if (find(i) == find(j)) continue;
                        const double sep = std::abs(w_[idx[i]] - w_[idx[j]]);
                        if (sep > widest) {
                            widest = sep;
                            bi = i;
                            bj = j;
                        }
                    }
                result = (over(mask & ~(1u << idx[bj])) -
                          over(mask & ~(1u << idx[bi]))) /
                         (w_[idx[bi]] - w_[idx[bj]]);
            }
        }
        have_[mask] = true;
        memo_[mask] = result;
        return result;
    }

  private:
    cd cluster_series(const int* idx, int n) const {
        cd mean{0.0, 0.0};
        for (int i = 0; i < n; ++i) mean += w_[idx[i]];
        mean /= static_cast<double>(n);

        // power sums of the centered offsets feed Newton's recurrence
        // m h_m = sum_{j=1..m} h_{m-j} p_j for the homogeneous polynomials
        constexpr int max_terms = 64;
        cd offset[4];
        for (int i = 0; i < n; ++i) offset[i] = w_[idx[i]] - mean;
        cd power[4];
        for (int i = 0; i < n; ++i) power[i] = cd{1.0, 0.0};
        std::array<cd, max_terms + 1> p{};
        for (int j = 1; j <= max_terms; ++j) {
            p[j] = cd{0.0, 0.0};
            for (int i = 0; i < n; ++i) {
                power[i] *= offset[i];
                p[j] += power[i];
            }
        }
        std::array<cd, max_terms + 1> h{};
        h[0] = cd{1.0, 0.0};
        for (int m = 1; m <= max_terms; ++m) {
            cd acc{0.0, 0.0};
            for (int j = 1; j <= m; ++j) acc += h[m - j] * p[j];
            h[m] = acc / static_cast<double>(m);
        }

        // term_j = h_j t^(k-1+j) / (k-1+j)!; term_0 is the confluent limit
        double t_pow = 1.0;
        double fact = 1.0;
        for (int m = 1; m < n; ++m) {
            t_pow *= t_;
            fact *= m;
        }
        cd term = cd{t_pow / fact, 0.0};
        cd sum = term;
        int quiet = 0;  // h_1 is always 0, so require two negligible terms
        for (int j = 1; j <= max_terms; ++j) {
            t_pow *= t_;
            fact *= n - 1 + j;
            term = h[j] * (t_pow / fact);
            sum += term;
            quiet = std::abs(term) <= 1e-18 * std::abs(sum) ? quiet + 1 : 0;
            if (quiet == 2) break;
        }
        return std::exp(mean * t_) * sum;
    }

    std::array<cd, 4> w_;
    double t_;
    std::array<cd, 16> memo_{};
    std::array<bool, 16> have_{};
};

/// (exp(x t) - 1) / x with the series limit t (1 + xt/2 + ...) whenever the
/// exponent is small enough that the direct form would cancel.
cd expm1_over(cd x, double t) {
    const cd u = x * t;
    if (std::abs(u) < 0.5) {
        cd term{1.0, 0.0};
        cd sum = term;
        for (int m = 2; m <= 24; ++m) {
            term *= u / static_cast<double>(m);
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return t * sum;
    }
    return (std::exp(u) - 1.0) / x;
}

double time_cap(const SystemParams& p) {
    if (p.derived_a.bandwidth > 0.0)
        return max_time_bandwidths / p.derived_a.bandwidth;
    return std::numeric_limits<double>::infinity();
}

}  // namespace

std::complex<double> lambda_k(const DerivedParams& d) {
    const cd z{d.bandwidth, 2.0 * d.stark_cavity};
    const cd radicand = 0.25 * z * z - 4.0 * d.g_bar * d.g_bar -
                        I * z * d.stark_laser -
                        d.stark_laser * d.stark_laser;
    return std::sqrt(radicand);
}

ClosedFormIntermediates intermediates(const SystemParams& p, double t) {
    const DerivedParams& da = p.derived_a;
    const DerivedParams& db = p.derived_b;
    ClosedFormIntermediates c;
    c.lambda_a = lambda_k(da);
    c.lambda_b = lambda_k(db);
    c.upsilon = cd{0.25 * (da.bandwidth - db.bandwidth),
                   0.5 * (da.stark_cavity - db.stark_cavity)};
    c.theta = 0.5 * (da.stark_laser - db.stark_laser);
    const cd prefactor = da.g_bar * std::sqrt(p.a.kappa * p.b.kappa) *
                         std::exp(I * p.phi) / (c.lambda_a * c.lambda_b);
    const cd decay_b = cd{-0.25 * db.bandwidth, -0.5 * db.stark_cavity} -
                       I * (0.5 * db.stark_laser);
    c.f_plus = prefactor * std::exp((decay_b + 0.5 * c.lambda_b) * t);
    c.f_minus = prefactor * std::exp((decay_b - 0.5 * c.lambda_b) * t);
    const cd shift = c.upsilon + I * c.theta;
    c.g_plus = expm1_over(0.5 * (c.lambda_a + c.lambda_b) - shift, t);
    c.g_minus = expm1_over(0.5 * (c.lambda_a - c.lambda_b) - shift, t);
    c.h_plus = -expm1_over(-(0.5 * (c.lambda_a + c.lambda_b) + shift), t);
    c.h_minus = -expm1_over(-(0.5 * (c.lambda_a - c.lambda_b) + shift), t);
    return c;
}

AmplitudeState amplitudes_driven(const SystemParams& p, double t) {
    if (!(t >= 0.0))
        throw NegativeTime("driven amplitudes need t >= 0, got " +
                           std::to_string(t));
    AmplitudeState s;
    s.t = t;
    s.laser_on = true;
    if (t == 0.0) return s;
    if (t > time_cap(p)) {
        s.alpha = s.beta = s.gamma = s.delta = cd{0.0, 0.0};
        return s;
    }

    const Mode ma = mode_of(p.derived_a);
    const Mode mb = mode_of(p.derived_b);
    ExpDividedDifference dd({ma.lam_plus, ma.lam_minus, mb.lam_plus,
                             mb.lam_minus},
                            t);
    const cd dd_a = dd.over(0b0011);
    s.alpha = 0.5 * (std::exp(ma.lam_plus * t) + std::exp(ma.lam_minus * t)) +
              ma.r * dd_a;
    s.beta = -I * p.derived_a.g_bar * dd_a;

    // the cascade feeds subsystem b through -sqrt(kappa_a kappa_b) e^{i phi}
    const cd feed = p.derived_a.g_bar * std::sqrt(p.a.kappa * p.b.kappa) *
                    std::exp(I * p.phi);
    const cd dd_ab = dd.over(0b1111);
    s.gamma = p.derived_b.g_bar * feed * dd_ab;
    s.delta = I * feed *
              (0.5 * (dd.over(0b0111) + dd.over(0b1011)) - mb.r * dd_ab);
    return s;
}

AmplitudeState amplitudes_stored(const SystemParams& p,
                                 const AmplitudeState& at_tbar, double t) {
    if (!(t >= at_tbar.t))
        throw TimeBeforeSwitchOff("stored amplitudes need t >= " +
                                  std::to_string(at_tbar.t) + ", got " +
                                  std::to_string(t));
    const double tau = t - at_tbar.t;
    AmplitudeState s;
    s.t = t;
    s.laser_on = false;
    s.alpha = at_tbar.alpha;
    s.gamma = at_tbar.gamma;
    const cd sa{0.5 * p.derived_a.bandwidth, p.derived_a.stark_cavity};
    const cd sb{0.5 * p.derived_b.bandwidth, p.derived_b.stark_cavity};
    if (t > time_cap(p)) {
        s.beta = s.delta = cd{0.0, 0.0};
        return s;
    }
    ExpDividedDifference dd({-sa, -sb, cd{0.0, 0.0}, cd{0.0, 0.0}}, tau);
    s.beta = at_tbar.beta * std::exp(-sa * tau);
    s.delta = at_tbar.delta * std::exp(-sb * tau) -
              std::sqrt(p.a.kappa * p.b.kappa) * std::exp(I * p.phi) *
                  at_tbar.beta * dd.over(0b0011);
    return s;
}

AmplitudeState evolve_protocol(const SystemParams& p, const Schedule& sch,
                               double t) {
    if (sch.tbar && t >= *sch.tbar)
        return amplitudes_stored(p, amplitudes_driven(p, *sch.tbar), t);
    return amplitudes_driven(p, t);
}

double p_no(const AmplitudeState& s) {
    const double n = std::norm(s.alpha) + std::norm(s.beta) +
                     std::norm(s.gamma) + std::norm(s.delta);
    return std::clamp(n, 0.0, 1.0);
}

double find_tbar(const SystemParams& p, double t_lo, double t_hi) {
    if (!(t_lo >= 0.0) || !(t_hi > t_lo))
        throw EmptyWindow("need 0 <= t_lo < t_hi, got [" +
                          std::to_string(t_lo) + ", " + std::to_string(t_hi) +
                          "]");
    constexpr double step = 0.01;
    std::vector<double> ts;
    const auto n_steps =
        static_cast<std::size_t>(std::floor((t_hi - t_lo) / step));
    ts.reserve(n_steps + 2);
    for (std::size_t k = 0; k <= n_steps; ++k) ts.push_back(t_lo + k * step);
    if (ts.back() < t_hi - 1e-12 * std::max(1.0, t_hi)) ts.push_back(t_hi);

    auto objective = [&](double t) {
        const AmplitudeState s = amplitudes_driven(p, t);
        return 2.0 * std::abs(s.alpha) * std::abs(s.gamma);
    };
    std::vector<double> cs(ts.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        cs[i] = objective(ts[i]);
        if (cs[i] > cs[best]) best = i;  // strict: leftmost maximizer wins
    }
    if (best == 0 || best + 1 == ts.size()) return ts[best];

    // quadratic refinement through the three points around the best one
    const double x0 = ts[best - 1], x1 = ts[best], x2 = ts[best + 1];
    const double y0 = cs[best - 1], y1 = cs[best], y2 = cs[best + 1];
    const double num = (y0 - y1) * (x2 - x1) * (x2 - x1) -
                       (y2 - y1) * (x1 - x0) * (x1 - x0);
    const double den = (y0 - y1) * (x2 - x1) + (y2 - y1) * (x1 - x0);
    if (den >= 0.0) return ts[best];  // flat or non-concave: keep grid point
    return std::clamp(x1 + 0.5 * num / den, x0, x2);
}

}  // namespace cascade
