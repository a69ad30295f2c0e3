// Blahut-Arimoto capacity of the finite-block-length 2K-ary deletion channel.
// The transition law is assembled from subsequence embedding counts:
// P(y|x) = emb(x,y) d^(L-|y|) (1-d)^|y|. Rows are sparse (an input of length
// L has at most 2^L distinct subsequences), which keeps desk-scale instances
// cheap.
#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "delcap/bounds.hpp"
#include "delcap/core.hpp"

namespace delcap {

/// Number of index subsets of x whose induced subsequence equals y.
inline std::uint64_t embedding_count(const SymbolSequence& x, const SymbolSequence& y) {
  const std::size_t m = y.size();
  if (m > x.size()) return 0;
  std::vector<std::uint64_t> dp(m + 1, 0);
  dp[0] = 1;
  for (int s : x)
    for (std::size_t j = m; j >= 1; --j)
      if (y[j - 1] == s) dp[j] += dp[j - 1];
  return dp[m];
}

/// Deletion channel law for a fixed input length |x|.
inline double transition_prob(const SymbolSequence& x, const SymbolSequence& y, double d) {
  if (!(d >= 0.0 && d <= 1.0))
    throw std::invalid_argument("transition_prob: d must be in [0,1]");
  const auto emb = embedding_count(x, y);
  if (emb == 0) return 0.0;
  const auto l = x.size(), m = y.size();
  return static_cast<double>(emb) * std::pow(d, static_cast<double>(l - m)) *
         std::pow(1.0 - d, static_cast<double>(m));
}

struct BaaProblem {
  int l = 1;
  ChannelParams params;
  double tolerance = 1e-7;   // capacity-gap stopping threshold, bits
  long max_iterations = 100000;
  double state_budget = 8192.0; // (2K)^L cap

  void validate() const {
    params.validate();
    if (l < 1) throw std::invalid_argument("BaaProblem: l must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("BaaProblem: tolerance must be > 0");
  }
};

struct BaaResult {
  double capacity_per_symbol = 0.0;
  std::vector<double> input_distribution; // over (2K)^L sequences, odometer order
  long iterations = 0;
  double final_gap = 0.0; // bits
};

namespace detail {

inline std::vector<SymbolSequence> all_sequences(int alphabet, int length) {
  std::vector<SymbolSequence> out;
  if (length == 0) { out.emplace_back(); return out; }
  SymbolSequence x(length, 1);
  while (true) {
    out.push_back(x);
    int i = length - 1;
    while (i >= 0 && x[i] == alphabet) x[i--] = 1;
    if (i < 0) break;
    ++x[i];
  }
  return out;
}

} // namespace detail

/// Standard alternating maximization with the max-min divergence bracket as
/// the stopping rule; capacity reported per symbol in bits.
inline BaaResult baa_capacity(const BaaProblem& problem) {
  problem.validate();
  const int q = problem.params.alphabet_size();
  const int l = problem.l;
  const double d = problem.params.d;
  const double nstates = std::pow(static_cast<double>(q), l);
  if (nstates > problem.state_budget)
    throw budget_error("baa_capacity: (2K)^L = " + std::to_string(nstates) +
                       " exceeds state budget " + std::to_string(problem.state_budget));

  const auto inputs = detail::all_sequences(q, l);
  const std::size_t nx = inputs.size();

  // sparse rows: distinct subsequences of each input with their probabilities
  std::map<std::string, std::size_t> yindex;
  std::vector<std::vector<std::pair<std::size_t, double>>> row(nx); // (y, P(y|x))
  const std::uint64_t nsub = std::uint64_t{1} << l;
  for (std::size_t i = 0; i < nx; ++i) {
    std::map<std::string, std::pair<std::uint64_t, std::size_t>> subs; // key -> (count, len)
    for (std::uint64_t mask = 0; mask < nsub; ++mask) {
      std::string key;
      std::size_t len = 0;
      for (int t = 0; t < l; ++t)
        if (mask >> t & 1) { key.push_back(static_cast<char>(inputs[i][t])); ++len; }
      auto& e = subs[key];
      ++e.first;
      e.second = len;
    }
    for (const auto& [key, e] : subs) {
      const double p = static_cast<double>(e.first) *
                       std::pow(d, static_cast<double>(l) - static_cast<double>(e.second)) *
                       std::pow(1.0 - d, static_cast<double>(e.second));
      if (p <= 0.0) continue;
      auto [it, inserted] = yindex.try_emplace(key, yindex.size());
      row[i].emplace_back(it->second, p);
    }
  }
  const std::size_t ny = yindex.size();

  // precompute p log p per sparse entry (nats)
  std::vector<std::vector<double>> row_plogp(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    row_plogp[i].reserve(row[i].size());
    for (const auto& [yj, p] : row[i]) row_plogp[i].push_back(p * std::log(p));
  }

  std::vector<double> qx(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> r(ny), div(nx);
  double lower = 0.0, gap = 0.0;
  long iter = 0;
  double prev_lower = -1.0;
  for (; iter < problem.max_iterations; ++iter) {
    std::fill(r.begin(), r.end(), 0.0);
    for (std::size_t i = 0; i < nx; ++i)
      for (const auto& [yj, p] : row[i]) r[yj] += qx[i] * p;
    std::vector<double> logr(ny);
    for (std::size_t jy = 0; jy < ny; ++jy) logr[jy] = r[jy] > 0.0 ? std::log(r[jy]) : 0.0;

    double dmax = -std::numeric_limits<double>::infinity();
    double ilow = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      double s = 0.0;
      for (std::size_t e = 0; e < row[i].size(); ++e)
        s += row_plogp[i][e] - row[i][e].second * logr[row[i][e].first];
      div[i] = s; // KL(P(.|x) || r), nats
      ilow += qx[i] * s;
      if (s > dmax) dmax = s;
    }
    lower = ilow * kLog2E;
    gap = (dmax * kLog2E) - lower;
    assert(lower >= prev_lower - 1e-9); // lower estimate is nondecreasing
    prev_lower = lower;
    if (gap <= problem.tolerance) { ++iter; break; }

    double z = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      qx[i] *= std::exp(div[i] - dmax);
      z += qx[i];
    }
    for (std::size_t i = 0; i < nx; ++i) qx[i] /= z;
  }

  BaaResult res;
  res.capacity_per_symbol = lower / static_cast<double>(l);
  res.input_distribution = std::move(qx);
  res.iterations = iter;
  res.final_gap = gap;
  return res;
}

struct FiniteLengthCheck {
  double lhs = 0.0; // L * BAA capacity per symbol of the 2K-ary channel
  double rhs = 0.0; // L*C_2^UB(d) + 2K log2(L+1) + L(1-d) log2 K
  bool ok = false;
};

/// Finite-length consistency check of the composite bound: the exact
/// finite-L mutual information maximum must stay below the binary-channel
/// bound plus the log(L+1) slack terms.
inline FiniteLengthCheck finite_length_theorem1_check(int l, int k, double d,
                                                      const BinaryUbTable* table = nullptr,
                                                      double tolerance = 1e-6) {
  BaaProblem problem;
  problem.l = l;
  problem.params = {k, d};
  const BaaResult res = baa_capacity(problem);
  FiniteLengthCheck chk;
  chk.lhs = res.capacity_per_symbol * l;
  chk.rhs = l * binary_ub(d, table) + 2.0 * k * std::log2(l + 1.0) +
            l * (1.0 - d) * std::log2(static_cast<double>(k));
  chk.ok = chk.lhs <= chk.rhs + tolerance;
  return chk;
}

} // namespace delcap
