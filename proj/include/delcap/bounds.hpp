// Closed-form and optimized capacity bounds for the 2K-ary i.i.d. deletion
// channel: erasure upper bound, i.i.d. and Markovian lower bounds, the
// composite upper bound C_2K(d) <= C_2(d) + (1-d) log2 K with pluggable
// binary-channel upper-bound sources, and the small-d expansion estimate.
// All values are bits per symbol.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "delcap/core.hpp"

namespace delcap {

inline constexpr double kLog2E = std::numbers::log2e;

// C_2(d) <= 0.4143 (1-d) applies for d >= 0.65
inline constexpr double kQuasiSlope = 0.4143;
inline constexpr double kQuasiFromD = 0.65;

// small-d binary capacity expansion C_2(d) = 1 + d log d - A1 d + A2 d^2 + O(d^{3-eps})
inline constexpr double kExpansionA1 = 1.15416377;
inline constexpr double kExpansionA2 = 1.78628364;

inline double binary_entropy(double d) {
  if (!(d >= 0.0 && d <= 1.0))
    throw std::invalid_argument("binary_entropy: d must be in [0,1]");
  if (d == 0.0 || d == 1.0) return 0.0;
  return -d * std::log2(d) - (1.0 - d) * std::log2(1.0 - d);
}

/// Trivial erasure-channel upper bound (1-d) log2(2K).
inline double erasure_ub(int k, double d) {
  ChannelParams{k, d}.validate();
  return (1.0 - d) * std::log2(2.0 * k);
}

/// I.i.d.-codebook achievable rate, clamped to [0, erasure_ub]. The raw
/// formula log2(2K/(2K-1)) + (1-d)log2(2K-1) - H_b(d) overshoots the erasure
/// capacity for d near 1, where it is not a valid bound; the cap keeps the
/// reported curve meaningful on the whole [0,1] range.
inline double iid_lb(int k, double d) {
  ChannelParams{k, d}.validate();
  const double q = 2.0 * k;
  const double raw = std::log2(q / (q - 1.0)) + (1.0 - d) * std::log2(q - 1.0) - binary_entropy(d);
  return std::max(0.0, std::min(raw, erasure_ub(k, d)));
}

/// Markovian-codebook achievable rate at a fixed (gamma, p) point.
inline double markov_objective(int k, double d, double gamma, double p) {
  if (!(gamma > 0.0)) throw std::invalid_argument("markov_objective: gamma must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("markov_objective: p must be in (0,1)");
  if (!(d >= 0.0 && d < 1.0)) throw std::invalid_argument("markov_objective: d must be in [0,1)");
  const double q2k = 2.0 * k;
  const double t = q2k * p - 1.0;
  const double q = (1.0 / q2k) * (1.0 + (1.0 - d) * (q2k - 1.0) * t / (q2k - 1.0 - d * t));
  const double eg = std::exp(-gamma);
  const double a = eg * (1.0 - p) / ((q2k - 1.0) * (1.0 - eg * (1.0 - (1.0 - p) / (q2k - 1.0))));
  const double b = eg * ((1.0 - p) * a + p);
  const double inner = (1.0 - q) * a + q * b;
  if (!(inner > 0.0))
    throw std::domain_error("markov_objective: nonpositive inner argument");
  return -(1.0 - d) * std::log2(inner) - gamma * kLog2E;
}

struct SearchConfig {
  double gamma_max = 5.0;
  double gamma_step = 0.05;
  double p_min = 0.01;
  double p_max = 0.99;
  double p_step = 0.01;
  double refine_tol = 1e-9;
  int max_refine_iters = 500;
};

struct MarkovSearchResult {
  double value = 0.0; // best achievable rate, clamped at >= 0
  double gamma = 1.0;
  double p = 0.5;
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

/// Minimal two-parameter Nelder-Mead descent; f returns +inf at invalid points.
struct Simplex2Result {
  double x0, x1, f;
  int iterations;
};

inline Simplex2Result nelder_mead2(const std::function<double(double, double)>& f,
                                   double x0, double x1, double scale0, double scale1,
                                   double tol, int max_iters) {
  struct Pt { double a, b, f; };
  std::vector<Pt> s = {{x0, x1, f(x0, x1)},
                       {x0 + scale0, x1, f(x0 + scale0, x1)},
                       {x0, x1 + scale1, f(x0, x1 + scale1)}};
  auto by_f = [](const Pt& l, const Pt& r) { return l.f < r.f; };
  int it = 0;
  for (; it < max_iters; ++it) {
    std::sort(s.begin(), s.end(), by_f);
    const double spread = std::max({std::abs(s[2].f - s[0].f),
                                    std::abs(s[2].a - s[0].a) + std::abs(s[1].a - s[0].a),
                                    std::abs(s[2].b - s[0].b) + std::abs(s[1].b - s[0].b)});
    if (spread < tol) break;
    const double ca = (s[0].a + s[1].a) / 2, cb = (s[0].b + s[1].b) / 2;
    Pt refl{ca + (ca - s[2].a), cb + (cb - s[2].b), 0};
    refl.f = f(refl.a, refl.b);
    if (refl.f < s[0].f) {
      Pt exp_{ca + 2 * (ca - s[2].a), cb + 2 * (cb - s[2].b), 0};
      exp_.f = f(exp_.a, exp_.b);
      s[2] = exp_.f < refl.f ? exp_ : refl;
    } else if (refl.f < s[1].f) {
      s[2] = refl;
    } else {
      Pt con{ca + 0.5 * (s[2].a - ca), cb + 0.5 * (s[2].b - cb), 0};
      con.f = f(con.a, con.b);
      if (con.f < s[2].f) {
        s[2] = con;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].a = s[0].a + 0.5 * (s[i].a - s[0].a);
          s[i].b = s[0].b + 0.5 * (s[i].b - s[0].b);
          s[i].f = f(s[i].a, s[i].b);
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), by_f);
  return {s[0].a, s[0].b, s[0].f, it};
}

} // namespace detail

/// Two-stage sup over (gamma, p): coarse grid, then Nelder-Mead refinement
/// from the best cell. Ties break to smallest gamma then smallest p so the
/// result is schedule-independent.
inline MarkovSearchResult markov_lb(int k, double d, const SearchConfig& cfg = {}) {
  if (!(d >= 0.0 && d < 1.0)) throw std::invalid_argument("markov_lb: d must be in [0,1)");
  long evals = 0;
  auto probe = [&](double gamma, double p) -> double {
    ++evals;
    if (!(gamma > 0.0 && gamma <= cfg.gamma_max && p >= cfg.p_min && p <= cfg.p_max))
      return -std::numeric_limits<double>::infinity();
    try {
      return markov_objective(k, d, gamma, p);
    } catch (const std::domain_error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  double best = -std::numeric_limits<double>::infinity();
  double bg = cfg.gamma_step, bp = cfg.p_min;
  const int ng = static_cast<int>(std::round(cfg.gamma_max / cfg.gamma_step));
  const int np = static_cast<int>(std::round((cfg.p_max - cfg.p_min) / cfg.p_step)) + 1;
  for (int i = 1; i <= ng; ++i) {
    const double gamma = i * cfg.gamma_step;
    for (int jp = 0; jp < np; ++jp) {
      const double p = cfg.p_min + jp * cfg.p_step;
      const double v = probe(gamma, p);
      if (v > best) { best = v; bg = gamma; bp = p; }
    }
  }

  auto neg = [&](double gamma, double p) { return -probe(gamma, p); };
  const auto r = detail::nelder_mead2(neg, bg, bp, cfg.gamma_step, cfg.p_step,
                                      cfg.refine_tol, cfg.max_refine_iters);
  if (-r.f > best) { best = -r.f; bg = r.x0; bp = r.x1; }

  MarkovSearchResult out;
  out.gamma = bg;
  out.p = bp;
  out.value = std::max(0.0, best);
  out.evaluations = evals;
  const double edge = 1e-6;
  out.converged = r.iterations < cfg.max_refine_iters &&
                  bg > edge && bg < cfg.gamma_max - edge &&
                  bp > cfg.p_min + edge && bp < cfg.p_max - edge;
  return out;
}

/// Tabulated binary deletion channel upper bounds, loaded from a "d,ub" CSV.
struct BinaryUbTable {
  std::vector<std::pair<double, double>> rows; // (d, ub), strictly increasing d
  std::string provenance;

  static BinaryUbTable parse(std::istream& in, const std::string& name = "<stream>") {
    BinaryUbTable t;
    t.provenance = name;
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line))
      throw data_format_error(name + ": empty table file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "d,ub")
      throw data_format_error(name + ":1: expected header \"d,ub\", got \"" + line + "\"");
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto where = name + ":" + std::to_string(lineno);
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw data_format_error(where + ": expected \"d,ub\" row");
      double d, ub;
      try {
        std::size_t used;
        d = std::stod(line.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument("");
        const std::string rest = line.substr(comma + 1);
        ub = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw data_format_error(where + ": malformed numeric value");
      }
      if (!(d >= 0.0 && d <= 1.0))
        throw data_format_error(where + ": d out of [0,1]");
      if (!(ub >= 0.0 && ub <= 1.0))
        throw data_format_error(where + ": ub out of [0,1]");
      if (!t.rows.empty() && d <= t.rows.back().first)
        throw data_format_error(where + ": d values must be strictly increasing");
      t.rows.emplace_back(d, ub);
    }
    if (t.rows.empty()) throw data_format_error(name + ": table has no rows");
    return t;
  }

  static BinaryUbTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_format_error(path + ": cannot open table file");
    return parse(in, path);
  }

  /// Linear interpolation in d; nullopt outside the tabulated range.
  std::optional<double> interpolate(double d) const {
    if (rows.empty() || d < rows.front().first || d > rows.back().first) return std::nullopt;
    auto hi = std::lower_bound(rows.begin(), rows.end(), d,
                               [](const auto& r, double v) { return r.first < v; });
    if (hi->first == d) return hi->second;
    auto lo = hi - 1;
    const double w = (d - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  }
};

/// Best available binary deletion channel capacity upper bound at d:
/// min of the trivial 1-d, the 0.4143(1-d) bound for d >= 0.65, and the
/// table interpolation when one is supplied and covers d.
inline double binary_ub(double d, const BinaryUbTable* table = nullptr) {
  if (!(d >= 0.0 && d <= 1.0))
    throw std::invalid_argument("binary_ub: d must be in [0,1]");
  double ub = 1.0 - d;
  if (d >= kQuasiFromD) ub = std::min(ub, kQuasiSlope * (1.0 - d));
  if (table)
    if (auto t = table->interpolate(d)) ub = std::min(ub, *t);
  return ub;
}

/// The composite upper bound C_2K(d) <= C_2^UB(d) + (1-d) log2 K.
inline double theorem1_ub(int k, double d, const BinaryUbTable* table = nullptr) {
  ChannelParams{k, d}.validate();
  return binary_ub(d, table) + (1.0 - d) * std::log2(static_cast<double>(k));
}

/// Small-d expansion of the composite bound, valid for d <= d_max (an
/// estimate: the O(d^{3-eps}) remainder is dropped).
inline double smalld_ub(int k, double d, double d_max = 0.1) {
  ChannelParams{k, d}.validate();
  const double logk = std::log2(static_cast<double>(k));
  if (d == 0.0) return 1.0 + logk;
  if (d > d_max)
    throw std::domain_error("smalld_ub: d=" + std::to_string(d) +
                            " outside validity range (0," + std::to_string(d_max) + "]");
  return 1.0 + d * std::log2(d) - (kExpansionA1 + logk) * d + kExpansionA2 * d * d + logk;
}

} // namespace delcap
