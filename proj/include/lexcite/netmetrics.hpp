#pragma once

// Degree-distribution fitting (power-law MLE with KS-selected x_min, likelihood
// ratio comparisons against lognormal and truncated power law) and centrality
// on the co-citation graph (PageRank, eigenvector centrality, Spearman).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include "lexcite/errors.hpp"
#include "lexcite/graphstore.hpp"
#include "lexcite/random.hpp"

namespace lexcite::netmetrics {

using graphstore::CoCitationGraph;

enum class FitMethod {
  // alpha = 1 + n / sum ln(x / (x_min - 0.5)); cheap, accurate for large x_min.
  ContinuousApprox,
  // Exact discrete MLE with Hurwitz-zeta normalization.
  DiscreteExact,
};

constexpr std::string_view to_string(FitMethod m) {
  return m == FitMethod::ContinuousApprox ? "continuous_approx" : "discrete_exact";
}

struct PowerLawOptions {
  FitMethod method = FitMethod::ContinuousApprox;
  std::size_t min_samples = 50;
  std::size_t min_tail = 50;
  std::optional<std::uint64_t> fixed_xmin;
  // When more x_min candidates than this exist, a log-spaced subset of the
  // observed values is scanned.
  std::size_t max_xmin_candidates = 4000;
};

struct PowerLawFit {
  double alpha = 0.0;
  std::uint64_t x_min = 1;
  double sigma = 0.0;
  double ks_d = 0.0;
  std::size_t n_tail = 0;
  std::size_t n_total = 0;
  FitMethod method = FitMethod::ContinuousApprox;
};

// Continuous power-law MLE above `lower`: 1 + n / sum ln(x_i / lower).
inline double continuous_alpha_mle(std::span<const double> tail, double lower) {
  if (tail.empty() || lower <= 0.0) throw InputError("continuous_alpha_mle: empty tail or bad bound");
  double s = 0.0;
  for (double x : tail) s += std::log(x / lower);
  if (s <= 0.0) throw DegenerateInputError("continuous_alpha_mle: all samples at the lower bound");
  return 1.0 + static_cast<double>(tail.size()) / s;
}

// Hurwitz zeta sum_{k>=0} (q + k)^-s for s > 1, q > 0, via Euler-Maclaurin.
inline double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw InputError("hurwitz_zeta: requires s > 1 and q > 0");
  constexpr int kShift = 12;
  double sum = 0.0;
  int n = 0;
  for (; n < kShift || q + n < 12.0; ++n) sum += std::pow(q + n, -s);
  const double a = q + n;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  // B_2k / (2k)!
  static constexpr std::array<double, 7> kCoeff{
      1.0 / 12.0,           -1.0 / 720.0,           1.0 / 30240.0,          -1.0 / 1209600.0,
      1.0 / 47900160.0,     -691.0 / 1307674368000.0, 1.0 / 74724249600.0,
  };
  double rising = s;  // s (s+1) ... (s + 2k - 2)
  double apow = std::pow(a, -s - 1.0);
  for (std::size_t k = 0; k < kCoeff.size(); ++k) {
    const double term = kCoeff[k] * rising * apow;
    sum += term;
    if (std::abs(term) < 1e-17 * sum) break;
    rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
    apow /= a * a;
  }
  return sum;
}

namespace detail {

// KS distance between the empirical tail CDF and a model CDF on integers.
// `uniq`/`cum` describe the tail: cum[j] = number of samples <= uniq[j].
template <typename Cdf>
double ks_distance(std::span<const std::uint64_t> uniq, std::span<const std::size_t> cum,
                   std::size_t n_tail, Cdf&& model_cdf) {
  double d = 0.0;
  const double n = static_cast<double>(n_tail);
  for (std::size_t j = 0; j < uniq.size(); ++j) {
    const double fe = static_cast<double>(cum[j]) / n;
    d = std::max(d, std::abs(fe - model_cdf(static_cast<double>(uniq[j]))));
    // Empirical CDF is flat until the next observed value.
    if (j + 1 < uniq.size() && uniq[j + 1] > uniq[j] + 1) {
      d = std::max(d, std::abs(fe - model_cdf(static_cast<double>(uniq[j + 1] - 1))));
    }
  }
  return std::min(d, 1.0);
}

inline double discrete_alpha_mle(double sum_log, std::size_t n, double x_min) {
  auto neg_ll = [&](double a) {
    return static_cast<double>(n) * std::log(hurwitz_zeta(a, x_min)) + a * sum_log;
  };
  auto r = boost::math::tools::brent_find_minima(neg_ll, 1.0001, 20.0, 40);
  return r.first;
}

}  // namespace detail

inline PowerLawFit fit_power_law(std::span<const std::uint64_t> degrees,
                                 const PowerLawOptions& opts = {}) {
  if (degrees.size() < opts.min_samples) {
    throw InsufficientDataError("fit_power_law: need at least " + std::to_string(opts.min_samples) +
                                " samples, got " + std::to_string(degrees.size()));
  }
  std::vector<std::uint64_t> xs(degrees.begin(), degrees.end());
  std::sort(xs.begin(), xs.end());
  if (xs.front() == 0) throw InputError("fit_power_law: degrees must be positive");
  if (xs.front() == xs.back()) throw DegenerateInputError("fit_power_law: all degrees equal");

  const std::size_t n = xs.size();
  std::vector<double> suffix_log(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix_log[i] = suffix_log[i + 1] + std::log(static_cast<double>(xs[i]));

  std::vector<std::uint64_t> uniq;
  std::vector<std::size_t> first_pos;  // first index of each unique value
  std::vector<std::size_t> cum;        // samples <= uniq[j]
  for (std::size_t i = 0; i < n; ++i) {
    if (uniq.empty() || xs[i] != uniq.back()) {
      uniq.push_back(xs[i]);
      first_pos.push_back(i);
    }
  }
  for (std::size_t j = 0; j < uniq.size(); ++j) {
    cum.push_back(j + 1 < uniq.size() ? first_pos[j + 1] : n);
  }

  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j + 1 < uniq.size(); ++j) {
    if (opts.fixed_xmin && uniq[j] != *opts.fixed_xmin) continue;
    if (n - first_pos[j] < opts.min_tail) break;
    candidates.push_back(j);
  }
  if (opts.fixed_xmin && candidates.empty()) {
    throw InsufficientDataError("fit_power_law: fixed x_min is not an observed value with enough tail");
  }
  if (candidates.empty()) throw InsufficientDataError("fit_power_law: no x_min leaves enough tail");
  if (candidates.size() > opts.max_xmin_candidates) {
    std::vector<std::size_t> thinned;
    const double lo = std::log(static_cast<double>(uniq[candidates.front()]));
    const double hi = std::log(static_cast<double>(uniq[candidates.back()]));
    std::size_t c = 0;
    for (std::size_t k = 0; k < opts.max_xmin_candidates; ++k) {
      const double target = std::exp(lo + (hi - lo) * k / (opts.max_xmin_candidates - 1));
      while (c + 1 < candidates.size() && static_cast<double>(uniq[candidates[c]]) < target) ++c;
      if (thinned.empty() || thinned.back() != candidates[c]) thinned.push_back(candidates[c]);
    }
    candidates = std::move(thinned);
  }

  PowerLawFit best;
  best.ks_d = std::numeric_limits<double>::infinity();
  best.method = opts.method;
  best.n_total = n;
  for (const auto j : candidates) {
    const std::size_t n_tail = n - first_pos[j];
    const double xmin = static_cast<double>(uniq[j]);
    const double sum_log = suffix_log[first_pos[j]];
    double alpha;
    double d;
    const std::span<const std::uint64_t> tail_uniq(uniq.data() + j, uniq.size() - j);
    std::vector<std::size_t> tail_cum(cum.begin() + static_cast<std::ptrdiff_t>(j), cum.end());
    for (auto& c : tail_cum) c -= first_pos[j];
    if (opts.method == FitMethod::ContinuousApprox) {
      const double lower = xmin - 0.5;
      const double s = sum_log - static_cast<double>(n_tail) * std::log(lower);
      alpha = 1.0 + static_cast<double>(n_tail) / s;
      d = detail::ks_distance(tail_uniq, tail_cum, n_tail, [&](double x) {
        return 1.0 - std::pow((x + 0.5) / lower, 1.0 - alpha);
      });
    } else {
      alpha = detail::discrete_alpha_mle(sum_log, n_tail, xmin);
      const double z0 = hurwitz_zeta(alpha, xmin);
      d = detail::ks_distance(tail_uniq, tail_cum, n_tail, [&](double x) {
        return 1.0 - hurwitz_zeta(alpha, x + 1.0) / z0;
      });
    }
    if (d < best.ks_d) {
      best.alpha = alpha;
      best.x_min = uniq[j];
      best.ks_d = d;
      best.n_tail = n_tail;
    }
  }
  best.sigma = (best.alpha - 1.0) / std::sqrt(static_cast<double>(best.n_tail));
  return best;
}

// Approximate discrete power-law sample, floor((x_min - 1/2)(1 - u)^(-1/(alpha-1)) + 1/2).
inline std::uint64_t sample_power_law(Rng& rng, double alpha, std::uint64_t x_min) {
  const double u = rng.uniform();
  const double x = (static_cast<double>(x_min) - 0.5) * std::pow(1.0 - u, -1.0 / (alpha - 1.0)) + 0.5;
  if (x >= 9.0e18) return static_cast<std::uint64_t>(9.0e18);
  return std::max<std::uint64_t>(x_min, static_cast<std::uint64_t>(std::floor(x)));
}

enum class Alternative { Lognormal, TruncatedPowerLaw };

constexpr std::string_view to_string(Alternative a) {
  return a == Alternative::Lognormal ? "lognormal" : "truncated_power_law";
}

struct DistributionComparison {
  Alternative alternative = Alternative::Lognormal;
  double r = 0.0;        // normalized log-likelihood ratio; < 0 favors the alternative
  double p_value = 1.0;
  double log_likelihood_ratio = 0.0;  // unnormalized R
  std::vector<double> parameters;     // fitted alternative parameters
};

namespace detail {

// Nelder-Mead minimizer for the small (2-parameter) fits below.
inline std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> start, std::vector<double> step,
                                       int max_iter = 2000, double tol = 1e-10) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step[i];
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

  for (int it = 0; it < max_iter; ++it) {
    std::vector<std::size_t> order(dim + 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    const auto best = order.front(), worst = order.back(), second = order[dim - 1];
    if (std::abs(values[worst] - values[best]) <= tol * (std::abs(values[best]) + tol)) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / dim;
    }
    auto blend = [&](double t) {
      std::vector<double> p(dim);
      for (std::size_t k = 0; k < dim; ++k) p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
      return p;
    };
    auto reflected = blend(-1.0);
    const double fr = f(reflected);
    if (fr < values[best]) {
      auto expanded = blend(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = std::move(expanded);
        values[worst] = fe;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = fr;
      }
    } else if (fr < values[second]) {
      simplex[worst] = std::move(reflected);
      values[worst] = fr;
    } else {
      auto contracted = fr < values[worst] ? blend(-0.5) : blend(0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, values[worst])) {
        simplex[worst] = std::move(contracted);
        values[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < dim; ++k) {
            simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
          }
          values[i] = f(simplex[i]);
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  return simplex[best];
}

// ln Q(z) for the standard normal upper tail, stable for large z.
inline double log_normal_upper_tail(double z) {
  if (z < 30.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  return -0.5 * z * z - std::log(z * std::sqrt(2.0 * std::numbers::pi)) +
         std::log1p(-1.0 / (z * z));
}

struct TailStats {
  std::vector<double> xs;
  double lower = 0.0;
  double sum_log = 0.0;
  double sum_log_sq = 0.0;
  double sum_x = 0.0;
};

inline double lognormal_log_likelihood(const TailStats& t, double mu, double sigma) {
  const double n = static_cast<double>(t.xs.size());
  const double ss = t.sum_log_sq - 2.0 * mu * t.sum_log + n * mu * mu;
  return -t.sum_log - n * std::log(sigma) - 0.5 * n * std::log(2.0 * std::numbers::pi) -
         ss / (2.0 * sigma * sigma) - n * log_normal_upper_tail((std::log(t.lower) - mu) / sigma);
}

// ln of the normalizer int_lower^inf x^-alpha e^(-lambda x) dx.
inline double truncated_pl_log_norm(double alpha, double lambda, double lower) {
  const double c = lambda * lower;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double u) { return std::pow(1.0 + u, -alpha) * std::exp(-c * u); };
  const double j = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                        std::sqrt(std::numeric_limits<double>::epsilon()));
  return (1.0 - alpha) * std::log(lower) - c + std::log(j);
}

inline double truncated_pl_log_likelihood(const TailStats& t, double alpha, double lambda) {
  const double n = static_cast<double>(t.xs.size());
  return -alpha * t.sum_log - lambda * t.sum_x - n * truncated_pl_log_norm(alpha, lambda, t.lower);
}

}  // namespace detail

// Likelihood-ratio comparisons on the tail x >= x_min, using continuous
// densities on [x_min - 1/2, inf). Lognormal is non-nested (Vuong p-value);
// truncated power law nests the power law (chi-square(1) p-value).
inline std::vector<DistributionComparison> compare_distributions(std::span<const std::uint64_t> degrees,
                                                                 const PowerLawFit& fit,
                                                                 std::size_t min_tail = 50) {
  detail::TailStats t;
  t.lower = static_cast<double>(fit.x_min) - 0.5;
  for (auto x : degrees) {
    if (x >= fit.x_min) t.xs.push_back(static_cast<double>(x));
  }
  if (t.xs.size() < min_tail) {
    throw InsufficientDataError("compare_distributions: tail has " + std::to_string(t.xs.size()) +
                                " samples, need " + std::to_string(min_tail));
  }
  for (double x : t.xs) {
    const double lx = std::log(x);
    t.sum_log += lx;
    t.sum_log_sq += lx * lx;
    t.sum_x += x;
  }
  const double n = static_cast<double>(t.xs.size());
  const double alpha = continuous_alpha_mle(t.xs, t.lower);
  auto pl_point = [&](double x) {
    return std::log(alpha - 1.0) - std::log(t.lower) - alpha * std::log(x / t.lower);
  };

  auto vuong = [&](Alternative which, const std::function<double(double)>& alt_point, bool nested,
                   std::vector<double> params) {
    std::vector<double> l(t.xs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
      l[i] = pl_point(t.xs[i]) - alt_point(t.xs[i]);
      sum += l[i];
    }
    const double mean = sum / n;
    double var = 0.0;
    for (double v : l) var += (v - mean) * (v - mean);
    var /= n;
    DistributionComparison c;
    c.alternative = which;
    c.log_likelihood_ratio = sum;
    c.parameters = std::move(params);
    const double sd = std::sqrt(var);
    c.r = sd > 1e-12 ? sum / (sd * std::sqrt(n)) : 0.0;
    if (nested) {
      c.p_value = std::erfc(std::sqrt(std::abs(sum)));
    } else {
      c.p_value = sd > 1e-12 ? std::erfc(std::abs(c.r) / std::numbers::sqrt2) : 1.0;
    }
    c.p_value = std::clamp(c.p_value, 0.0, 1.0);
    return c;
  };

  std::vector<DistributionComparison> out;

  {
    const double m0 = t.sum_log / n;
    const double s0 = std::sqrt(std::max(t.sum_log_sq / n - m0 * m0, 1e-6));
    auto neg_ll = [&](const std::vector<double>& p) {
      const double sigma = std::exp(p[1]);
      const double v = -detail::lognormal_log_likelihood(t, p[0], sigma);
      return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    std::vector<double> best;
    double best_v = std::numeric_limits<double>::infinity();
    for (double shift : {0.0, -2.0, -6.0}) {
      auto p = detail::nelder_mead(neg_ll, {m0 + shift, std::log(s0) + (shift < 0 ? 0.5 : 0.0)}, {0.5, 0.3});
      const double v = neg_ll(p);
      if (v < best_v) {
        best_v = v;
        best = p;
      }
    }
    const double mu = best[0], sigma = std::exp(best[1]);
    const double log_tail = detail::log_normal_upper_tail((std::log(t.lower) - mu) / sigma);
    auto alt = [&](double x) {
      const double z = (std::log(x) - mu) / sigma;
      return -std::log(x) - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z -
             log_tail;
    };
    out.push_back(vuong(Alternative::Lognormal, alt, false, {mu, sigma}));
  }

  {
    const double pl_ll = [&] {
      double s = 0.0;
      for (double x : t.xs) s += pl_point(x);
      return s;
    }();
    auto neg_ll = [&](const std::vector<double>& p) {
      const double lambda = std::exp(p[1]);
      if (p[1] > std::log(50.0 / t.lower) || p[0] > 20.0 || p[0] < -20.0) {
        return std::numeric_limits<double>::max();
      }
      const double v = -detail::truncated_pl_log_likelihood(t, p[0], lambda);
      return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    std::vector<double> best;
    double best_v = std::numeric_limits<double>::infinity();
    for (double scale : {1e-4, 1e-2, 1.0}) {
      auto p = detail::nelder_mead(neg_ll, {alpha, std::log(scale / t.sum_x * n)}, {0.1, 1.0}, 1000);
      const double v = neg_ll(p);
      if (v < best_v) {
        best_v = v;
        best = p;
      }
    }
    if (-best_v <= pl_ll) {
      // The power law itself (lambda -> 0) is the constrained optimum.
      out.push_back(vuong(Alternative::TruncatedPowerLaw, pl_point, true, {alpha, 0.0}));
    } else {
      const double a = best[0], lambda = std::exp(best[1]);
      const double log_norm = detail::truncated_pl_log_norm(a, lambda, t.lower);
      auto alt = [&](double x) { return -a * std::log(x) - lambda * x - log_norm; };
      out.push_back(vuong(Alternative::TruncatedPowerLaw, alt, true, {a, lambda}));
    }
  }
  return out;
}

// --- centrality ---------------------------------------------------------

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-10;
  int max_iterations = 200;
};

struct IterativeResult {
  std::vector<double> scores;
  int iterations = 0;
};

// Weighted PageRank on the undirected graph: every edge is two arcs and a
// node's outflow is split in proportion to edge weight. Nodes without edges
// spread their mass uniformly.
inline IterativeResult pagerank(const CoCitationGraph& g, const PageRankOptions& opts = {}) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InputError("pagerank: empty graph");
  if (!(opts.damping > 0.0 && opts.damping < 1.0)) throw InputError("pagerank: damping must be in (0,1)");
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
  const double d = opts.damping;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (g.weighted_degree(i) <= 0.0) dangling += x[i];
    }
    const double base = (1.0 - d) / static_cast<double>(n) + d * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = g.weighted_degree(i);
      if (s <= 0.0) continue;
      const double share = d * x[i] / s;
      for (const auto& nb : g.neighbors(i)) next[nb.node] += share * nb.weight;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - x[i]);
    x.swap(next);
    if (change < opts.tol) {
      const double total = std::accumulate(x.begin(), x.end(), 0.0);
      for (auto& v : x) v /= total;
      return {std::move(x), it};
    }
  }
  throw ConvergenceError("pagerank: no convergence after " + std::to_string(opts.max_iterations) +
                             " iterations",
                         std::move(x));
}

struct EigenvectorOptions {
  double tol = 1e-10;
  int max_iterations = 1000;
};

// Connected component labels; component ids ordered by first node.
inline std::vector<std::uint32_t> connected_components(const CoCitationGraph& g) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> comp(g.node_count(), kUnset);
  std::uint32_t next = 0;
  std::vector<std::uint32_t> stack;
  for (std::size_t s = 0; s < g.node_count(); ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = next;
    stack.push_back(static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(u)) {
        if (comp[nb.node] == kUnset) {
          comp[nb.node] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Principal eigenvector of the weighted adjacency restricted to the largest
// connected component, L2-normalized and non-negative; other nodes score 0.
// Power iteration on A + cI keeps bipartite components from oscillating.
inline IterativeResult eigenvector_authority(const CoCitationGraph& g, const EigenvectorOptions& opts = {}) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InputError("eigenvector_authority: empty graph");
  if (g.edge_count() == 0) throw DegenerateInputError("eigenvector_authority: graph has no edges");

  const auto comp = connected_components(g);
  std::vector<std::size_t> sizes;
  for (auto c : comp) {
    if (c >= sizes.size()) sizes.resize(c + 1, 0);
    ++sizes[c];
  }
  const auto largest = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

  double max_strength = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] == largest) max_strength = std::max(max_strength, g.weighted_degree(i));
  }
  const double shift = 0.5 * max_strength;

  std::vector<double> x(n, 0.0), next(n, 0.0);
  const double init = 1.0 / std::sqrt(static_cast<double>(sizes[largest]));
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] == largest) x[i] = init;
  }
  for (int it = 1; it <= opts.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      if (comp[i] != largest) continue;
      double acc = shift * x[i];
      for (const auto& nb : g.neighbors(i)) acc += nb.weight * x[nb.node];
      next[i] = acc;
    }
    double norm = 0.0;
    for (double v : next) norm += v * v;
    norm = std::sqrt(norm);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= norm;
      change = std::max(change, std::abs(next[i] - x[i]));
    }
    x.swap(next);
    if (change < opts.tol) return {std::move(x), it};
  }
  throw ConvergenceError("eigenvector_authority: no convergence after " +
                             std::to_string(opts.max_iterations) + " iterations",
                         std::move(x));
}

// Average ranks (1-based) with ties sharing the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("spearman: length mismatch");
  if (xs.size() < 3) throw InsufficientDataError("spearman: need at least 3 pairs");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean, dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInputError("spearman: constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct CentralityReport {
  std::vector<double> degree;  // weighted degree in G_L
  std::vector<double> pagerank;
  std::vector<double> eigenvector;
  double damping = 0.85;
  int pagerank_iterations = 0;
  int eigenvector_iterations = 0;
  double rho_degree_pagerank = 0.0;
  double rho_degree_eigenvector = 0.0;
  double rho_pagerank_eigenvector = 0.0;
};

inline CentralityReport centrality_report(const CoCitationGraph& g, const PageRankOptions& pr = {},
                                          const EigenvectorOptions& ev = {}) {
  CentralityReport r;
  r.damping = pr.damping;
  for (std::size_t i = 0; i < g.node_count(); ++i) r.degree.push_back(g.weighted_degree(i));
  auto p = pagerank(g, pr);
  r.pagerank = std::move(p.scores);
  r.pagerank_iterations = p.iterations;
  auto e = eigenvector_authority(g, ev);
  r.eigenvector = std::move(e.scores);
  r.eigenvector_iterations = e.iterations;
  if (g.node_count() >= 3) {
    auto safe = [](std::span<const double> a, std::span<const double> b) {
      try {
        return spearman(a, b);
      } catch (const DegenerateInputError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    r.rho_degree_pagerank = safe(r.degree, r.pagerank);
    r.rho_degree_eigenvector = safe(r.degree, r.eigenvector);
    r.rho_pagerank_eigenvector = safe(r.pagerank, r.eigenvector);
  }
  return r;
}

// --- text output ----------------------------------------------------------

inline void write_fit(std::ostream& os, const PowerLawFit& fit) {
  os << "alpha=" << fit.alpha << '\n'
     << "x_min=" << fit.x_min << '\n'
     << "sigma=" << fit.sigma << '\n'
     << "ks_d=" << fit.ks_d << '\n'
     << "n_tail=" << fit.n_tail << '\n'
     << "n_total=" << fit.n_total << '\n'
     << "method=" << to_string(fit.method) << '\n';
}

inline void write_degree_histogram(std::ostream& os, std::span<const std::uint64_t> degrees) {
  std::map<std::uint64_t, std::uint64_t> hist;
  for (auto d : degrees) ++hist[d];
  os << "degree,count\n";
  for (const auto& [d, c] : hist) os << d << ',' << c << '\n';
}

}  // namespace lexcite::netmetrics
