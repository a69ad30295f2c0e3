// 2K-ary deletion channel model: symbol sequences, deletion patterns, and the
// decomposition of the channel into K parallel binary subchannels with label
// vectors. All operations are pure functions over immutable values.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace delcap {

class budget_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class data_format_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One channel instance: alphabet {1,...,2K}, i.i.d. deletion probability d.
struct ChannelParams {
  int k = 1;     // number of binary subchannels; alphabet size is 2k
  double d = 0;  // deletion probability

  void validate() const {
    if (k < 1) throw std::invalid_argument("ChannelParams: k must be >= 1");
    if (!(d >= 0.0 && d <= 1.0))
      throw std::invalid_argument("ChannelParams: d must be in [0,1]");
  }
  int alphabet_size() const { return 2 * k; }
};

using SymbolSequence = std::vector<int>;   // symbols in {1,...,2K}
using DeletionPattern = std::vector<bool>; // true = symbol deleted

/// A sequence split into its K binary subchannel streams plus the label
/// vector recording which subchannel each original position belongs to.
/// Subchannel symbols are relabeled to {1,2}: 2k-1 -> 1, 2k -> 2.
struct Decomposition {
  std::vector<SymbolSequence> subsequences; // size K
  std::vector<int> labels;                  // values in {1,...,K}

  int k() const { return static_cast<int>(subsequences.size()); }
  std::size_t length(int sub) const { return subsequences[sub - 1].size(); }
};

inline void check_symbols(const SymbolSequence& x, int k) {
  const int q = 2 * k;
  for (int s : x)
    if (s < 1 || s > q)
      throw std::invalid_argument("symbol " + std::to_string(s) +
                                  " out of range {1,...," + std::to_string(q) + "}");
}

/// Route symbol s to subchannel ceil(s/2), relabeled to {1,2}; within-channel
/// order preserved.
inline Decomposition decompose(const SymbolSequence& x, int k) {
  if (k < 1) throw std::invalid_argument("decompose: k must be >= 1");
  check_symbols(x, k);
  Decomposition dec;
  dec.subsequences.resize(k);
  dec.labels.reserve(x.size());
  for (int s : x) {
    const int sub = (s + 1) / 2;
    dec.subsequences[sub - 1].push_back(((s - 1) % 2) + 1);
    dec.labels.push_back(sub);
  }
  return dec;
}

/// Inverse of decompose: interleave the subchannel streams back following the
/// label vector. Label multiset must match the subsequence lengths.
inline SymbolSequence recombine(const Decomposition& dec) {
  const int k = dec.k();
  std::vector<std::size_t> counts(k, 0);
  for (int lab : dec.labels) {
    if (lab < 1 || lab > k)
      throw std::invalid_argument("recombine: label out of range");
    ++counts[lab - 1];
  }
  for (int i = 0; i < k; ++i)
    if (counts[i] != dec.subsequences[i].size())
      throw std::invalid_argument("recombine: label count does not match subsequence length");
  std::vector<std::size_t> pos(k, 0);
  SymbolSequence x;
  x.reserve(dec.labels.size());
  for (int lab : dec.labels) {
    const int b = dec.subsequences[lab - 1][pos[lab - 1]++]; // in {1,2}
    x.push_back(2 * (lab - 1) + b);
  }
  return x;
}

/// Keep the positions whose flag is false, order preserved.
inline SymbolSequence apply_pattern(const SymbolSequence& x, const DeletionPattern& pat) {
  if (x.size() != pat.size())
    throw std::invalid_argument("apply_pattern: length mismatch");
  SymbolSequence y;
  y.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!pat[i]) y.push_back(x[i]);
  return y;
}

/// Seeded Monte Carlo pass through the channel; each position deleted
/// independently with probability d. The generator is per-call.
inline SymbolSequence transmit(const SymbolSequence& x, double d, std::uint64_t seed) {
  if (!(d >= 0.0 && d <= 1.0))
    throw std::invalid_argument("transmit: d must be in [0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SymbolSequence y;
  y.reserve(x.size());
  for (int s : x)
    if (!(unif(rng) < d)) y.push_back(s);
  return y;
}

/// Split a deletion pattern along the label vector: subpattern k holds the
/// flags of the positions labeled k, order preserved.
inline std::vector<DeletionPattern> split_pattern(const DeletionPattern& pat,
                                                  const std::vector<int>& labels, int k) {
  if (pat.size() != labels.size())
    throw std::invalid_argument("split_pattern: length mismatch");
  std::vector<DeletionPattern> out(k);
  for (std::size_t i = 0; i < pat.size(); ++i) {
    const int lab = labels[i];
    if (lab < 1 || lab > k)
      throw std::invalid_argument("split_pattern: label out of range");
    out[lab - 1].push_back(pat[i]);
  }
  return out;
}

} // namespace delcap
