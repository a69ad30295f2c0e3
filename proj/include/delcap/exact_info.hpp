// Exact information quantities for small block lengths by exhaustive
// enumeration of the joint distribution over (input sequence, deletion
// pattern). Everything downstream of an atom (Y, the subchannel streams, the
// label vectors, the deletion counts) is a deterministic function of it, so
// all mutual informations here are exact sums, no sampling.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "delcap/core.hpp"

namespace delcap {

constexpr double kDefaultAtomBudget = 67108864.0; // 2^26

inline double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

/// Input codebook ensemble: uniform i.i.d. symbols, or the symmetric Markov
/// chain with hold probability p and uniform stationary start.
struct InputProcess {
  enum class Kind { IidUniform, SymmetricMarkov };
  Kind kind = Kind::IidUniform;
  double hold_p = 0.5; // used by SymmetricMarkov only

  static InputProcess iid_uniform() { return {Kind::IidUniform, 0.5}; }
  static InputProcess symmetric_markov(double p) {
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("InputProcess: hold probability must be in (0,1)");
    return {Kind::SymmetricMarkov, p};
  }

  double probability(const SymbolSequence& x, int alphabet) const {
    if (x.empty()) return 1.0;
    if (kind == Kind::IidUniform)
      return std::pow(1.0 / alphabet, static_cast<double>(x.size()));
    double p = 1.0 / alphabet; // uniform stationary start
    const double sw = (1.0 - hold_p) / (alphabet - 1);
    for (std::size_t i = 1; i < x.size(); ++i)
      p *= (x[i] == x[i - 1]) ? hold_p : sw;
    return p;
  }
};

/// Complete joint distribution over (X, deletion pattern) for block length n.
struct JointModel {
  struct Atom {
    SymbolSequence x;
    DeletionPattern pattern;
    double prob;
  };
  int n = 0;
  ChannelParams params;
  std::vector<Atom> atoms;
};

inline JointModel build_joint(const InputProcess& proc, int n, const ChannelParams& params,
                              double atom_budget = kDefaultAtomBudget) {
  params.validate();
  if (n < 0) throw std::invalid_argument("build_joint: n must be >= 0");
  const int q = params.alphabet_size();
  const double count = std::pow(static_cast<double>(q), n) * std::pow(2.0, n);
  if (count > atom_budget)
    throw budget_error("build_joint: (2K)^n * 2^n = " + std::to_string(count) +
                       " atoms exceeds budget " + std::to_string(atom_budget));

  JointModel j;
  j.n = n;
  j.params = params;
  j.atoms.reserve(static_cast<std::size_t>(count));

  SymbolSequence x(n, 1);
  const std::uint64_t npat = std::uint64_t{1} << n;
  while (true) {
    const double px = proc.probability(x, q);
    for (std::uint64_t mask = 0; mask < npat; ++mask) {
      DeletionPattern pat(n);
      int del = 0;
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) { pat[i] = true; ++del; }
      const double p = px * std::pow(params.d, del) * std::pow(1.0 - params.d, n - del);
      j.atoms.push_back({x, std::move(pat), p});
    }
    // odometer over {1,...,q}^n
    int i = n - 1;
    while (i >= 0 && x[i] == q) x[i--] = 1;
    if (i < 0) break;
    ++x[i];
  }
  return j;
}

namespace detail {

// symbols and labels are >= 1, so NUL terminates each component unambiguously
constexpr char kSep = '\0';

inline void encode_seq(const SymbolSequence& s, std::string& out) {
  for (int v : s) out.push_back(static_cast<char>(v));
  out.push_back(kSep);
}

inline void encode_labels(const std::vector<int>& s, std::string& out) {
  for (int v : s) out.push_back(static_cast<char>(v));
  out.push_back(kSep);
}

/// I(A;B|C) by direct summation over aggregated probability cells.
inline double conditional_mi(
    const std::vector<std::tuple<std::string, std::string, std::string, double>>& cells) {
  std::map<std::string, double> pabc, pac, pbc, pc;
  std::map<std::string, std::tuple<std::string, std::string, std::string>> parts;
  for (const auto& [a, b, c, p] : cells) {
    if (p <= 0.0) continue;
    pabc[a + b + c] += p;
    pac[a + c] += p;
    pbc[b + c] += p;
    pc[c] += p;
    parts.emplace(a + b + c, std::make_tuple(a, b, c));
  }
  double info = 0.0;
  for (const auto& [key, abc] : parts) {
    const double p = pabc.at(key);
    const auto& [a, b, c] = abc;
    info += p * std::log2(p * pc.at(c) / (pac.at(a + c) * pbc.at(b + c)));
  }
  return info;
}

} // namespace detail

/// Exact I(X;Y) in bits, from the aggregated joint over (X, Y).
inline double mutual_information(const JointModel& j) {
  std::map<std::string, double> px, py, pxy;
  std::map<std::string, std::pair<std::string, std::string>> parts;
  for (const auto& atom : j.atoms) {
    if (atom.prob <= 0.0) continue;
    std::string kx, ky;
    detail::encode_seq(atom.x, kx);
    detail::encode_seq(apply_pattern(atom.x, atom.pattern), ky);
    px[kx] += atom.prob;
    py[ky] += atom.prob;
    pxy[kx + ky] += atom.prob;
    parts.emplace(kx + ky, std::make_pair(kx, ky));
  }
  double info = 0.0;
  for (const auto& [key, xy] : parts) {
    const double p = pxy.at(key);
    info += p * std::log2(p / (px.at(xy.first) * py.at(xy.second)));
  }
  return info;
}

/// The chain-rule split of I(X;Y) into per-subchannel terms and the label
/// term: I_k = I(X; Y_k | Y_1..Y_{k-1}), I_F = I(X; F_y | Y_1..Y_K).
struct InfoDecomposition {
  double total = 0.0;                // I(X;Y)
  std::vector<double> per_channel;   // I_k
  double label_term = 0.0;           // I_F
  std::vector<double> subchannel_mi; // I(X_k;Y_k)
  std::vector<double> alpha;         // E{M_k}/(N(1-d))

  double term_sum() const {
    return std::accumulate(per_channel.begin(), per_channel.end(), label_term);
  }
};

inline InfoDecomposition decomposition_terms(const JointModel& j) {
  const int k = j.params.k;
  struct Keys {
    std::string x;
    std::vector<std::string> yk;
    std::string fy;
    double prob;
  };
  std::vector<Keys> keys;
  keys.reserve(j.atoms.size());
  std::vector<double> mean_mk(k, 0.0);
  for (const auto& atom : j.atoms) {
    Keys kk;
    kk.prob = atom.prob;
    detail::encode_seq(atom.x, kk.x);
    const SymbolSequence y = apply_pattern(atom.x, atom.pattern);
    const Decomposition dy = decompose(y, k);
    kk.yk.resize(k);
    for (int s = 0; s < k; ++s) {
      detail::encode_seq(dy.subsequences[s], kk.yk[s]);
      mean_mk[s] += atom.prob * static_cast<double>(dy.subsequences[s].size());
    }
    detail::encode_labels(dy.labels, kk.fy);
    keys.push_back(std::move(kk));
  }

  InfoDecomposition out;
  out.total = mutual_information(j);
  out.per_channel.resize(k);
  out.subchannel_mi.resize(k);
  out.alpha.resize(k, 0.0);

  std::vector<std::tuple<std::string, std::string, std::string, double>> cells;
  cells.reserve(keys.size());
  for (int s = 0; s < k; ++s) {
    cells.clear();
    for (const auto& kk : keys) {
      std::string prefix;
      for (int t = 0; t < s; ++t) prefix += kk.yk[t];
      cells.emplace_back(kk.x, kk.yk[s], prefix, kk.prob);
    }
    out.per_channel[s] = detail::conditional_mi(cells);
  }
  cells.clear();
  for (const auto& kk : keys) {
    std::string ally;
    for (int t = 0; t < k; ++t) ally += kk.yk[t];
    cells.emplace_back(kk.x, kk.fy, ally, kk.prob);
  }
  out.label_term = detail::conditional_mi(cells);

  // I(X_k;Y_k): unconditional MI per subchannel
  for (int s = 0; s < k; ++s) {
    cells.clear();
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto& atom = j.atoms[i];
      const Decomposition dx = decompose(atom.x, k);
      std::string kxk;
      detail::encode_seq(dx.subsequences[s], kxk);
      cells.emplace_back(kxk, keys[i].yk[s], std::string(), atom.prob);
    }
    out.subchannel_mi[s] = detail::conditional_mi(cells);
  }

  const double denom = j.n * (1.0 - j.params.d);
  if (denom > 0.0)
    for (int s = 0; s < k; ++s) out.alpha[s] = mean_mk[s] / denom;
  return out;
}

/// Exact I(X_k;Y_k) for one subchannel.
inline double subchannel_mi(const JointModel& j, int k_index) {
  const int k = j.params.k;
  if (k_index < 1 || k_index > k)
    throw std::invalid_argument("subchannel_mi: index out of range");
  std::vector<std::tuple<std::string, std::string, std::string, double>> cells;
  cells.reserve(j.atoms.size());
  for (const auto& atom : j.atoms) {
    const Decomposition dx = decompose(atom.x, k);
    const Decomposition dy = decompose(apply_pattern(atom.x, atom.pattern), k);
    std::string kx, ky;
    detail::encode_seq(dx.subsequences[k_index - 1], kx);
    detail::encode_seq(dy.subsequences[k_index - 1], ky);
    cells.emplace_back(std::move(kx), std::move(ky), std::string(), atom.prob);
  }
  return detail::conditional_mi(cells);
}

/// H(D_k | N_k = n_k) for an i.i.d. deletion process: entropy of
/// Binomial(n_k, d). Bounded by log2(n_k+1).
inline double deletion_count_entropy(int n_k, double d) {
  if (n_k < 0) throw std::invalid_argument("deletion_count_entropy: n_k must be >= 0");
  if (d <= 0.0 || d >= 1.0) return 0.0;
  double h = 0.0;
  for (int n = 0; n <= n_k; ++n) {
    const double logc = std::lgamma(n_k + 1.0) - std::lgamma(n + 1.0) - std::lgamma(n_k - n + 1.0);
    const double logp = logc + n * std::log(d) + (n_k - n) * std::log(1.0 - d);
    h -= std::exp(logp) * logp / std::numbers::ln2;
  }
  return h;
}

/// Both sides of log2 C(m; m_1,...,m_K) <= m log2 m - sum m_k log2 m_k.
inline std::pair<double, double> multinomial_log_bound(const std::vector<int>& m_vec) {
  if (m_vec.empty()) throw std::invalid_argument("multinomial_log_bound: empty vector");
  long long m = 0;
  for (int v : m_vec) {
    if (v < 1) throw std::invalid_argument("multinomial_log_bound: parts must be >= 1");
    m += v;
  }
  double lhs = std::lgamma(m + 1.0);
  double rhs = m * std::log2(static_cast<double>(m));
  for (int v : m_vec) {
    lhs -= std::lgamma(v + 1.0);
    rhs -= v * std::log2(static_cast<double>(v));
  }
  return {lhs / std::numbers::ln2, rhs};
}

/// Hessian quadratic form a' H a of g(m) = (sum m) log(sum m) - sum m_k log m_k,
/// equal to (sum a)^2 / (sum m) - sum a_k^2 / m_k. Nonpositive for all m > 0.
inline double g_quadratic_form(const std::vector<double>& m_vec, const std::vector<double>& a_vec) {
  if (m_vec.size() != a_vec.size() || m_vec.empty())
    throw std::invalid_argument("g_quadratic_form: vector length mismatch");
  double msum = 0.0, asum = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < m_vec.size(); ++i) {
    if (!(m_vec[i] > 0.0))
      throw std::invalid_argument("g_quadratic_form: m entries must be positive");
    msum += m_vec[i];
    asum += a_vec[i];
    diag += a_vec[i] * a_vec[i] / m_vec[i];
  }
  return asum * asum / msum - diag;
}

} // namespace delcap
