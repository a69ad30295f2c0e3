#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "delcap/core.hpp"

using namespace delcap;

namespace {

// odometer over {1,...,q}^n; returns false when exhausted
bool next_sequence(SymbolSequence& x, int q) {
  int i = static_cast<int>(x.size()) - 1;
  while (i >= 0 && x[i] == q) x[i--] = 1;
  if (i < 0) return false;
  ++x[i];
  return true;
}

} // namespace

TEST_CASE("decompose routes symbols by pair") {
  const auto dec = decompose({1, 3, 2, 4}, 2);
  CHECK(dec.subsequences[0] == SymbolSequence{1, 2});
  CHECK(dec.subsequences[1] == SymbolSequence{1, 2}); // 3,4 relabeled to 1,2
  CHECK(dec.labels == std::vector<int>({1, 2, 1, 2}));
}

TEST_CASE("decompose of empty sequence") {
  const auto dec = decompose({}, 3);
  CHECK(dec.k() == 3);
  for (int s = 1; s <= 3; ++s) CHECK(dec.length(s) == 0);
  CHECK(dec.labels.empty());
}

TEST_CASE("decompose with K=1 is the identity stream") {
  const auto dec = decompose({2, 2, 1}, 1);
  CHECK(dec.subsequences[0] == SymbolSequence{2, 2, 1});
  CHECK(dec.labels == std::vector<int>({1, 1, 1}));
}

TEST_CASE("decompose rejects out-of-range symbols") {
  CHECK_THROWS_AS(decompose({1, 5}, 2), std::invalid_argument);
  CHECK_THROWS_AS(decompose({0}, 1), std::invalid_argument);
}

TEST_CASE("recombine inverts decompose") {
  const SymbolSequence x{1, 3, 2, 4};
  CHECK(recombine(decompose(x, 2)) == x);
}

TEST_CASE("recombine with single-subchannel traffic") {
  Decomposition dec;
  dec.subsequences = {{1, 2}, {}};
  dec.labels = {1, 1};
  CHECK(recombine(dec) == SymbolSequence{1, 2});
}

TEST_CASE("recombine rejects inconsistent label multiset") {
  Decomposition dec;
  dec.subsequences = {{1}, {1, 2}};
  dec.labels = {1, 2};
  CHECK_THROWS_AS(recombine(dec), std::invalid_argument);
}

TEST_CASE("apply_pattern basics") {
  CHECK(apply_pattern({1, 2, 3}, {false, true, false}) == SymbolSequence{1, 3});
  CHECK(apply_pattern({1, 2, 3}, {false, false, false}) == SymbolSequence{1, 2, 3});
  CHECK(apply_pattern({1, 2, 3}, {true, true, true}).empty());
  CHECK_THROWS_AS(apply_pattern({1, 2}, {true}), std::invalid_argument);
}

TEST_CASE("transmit endpoints") {
  const SymbolSequence x{1, 2, 1, 2, 2};
  CHECK(transmit(x, 0.0, 7) == x);
  CHECK(transmit(x, 1.0, 7).empty());
}

TEST_CASE("transmit empirical mean of M matches binomial sampling") {
  const int n = 10000;
  const double d = 0.3;
  const SymbolSequence x(n, 1);
  double sum = 0;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) sum += static_cast<double>(transmit(x, d, s).size());
  const double mean = sum / trials;
  const double se = std::sqrt(n * d * (1 - d) / trials);
  CHECK(std::abs(mean - n * (1 - d)) < 3 * se);
}

TEST_CASE("split_pattern routes flags by label") {
  const auto sub = split_pattern({true, false, false, true}, {1, 2, 1, 2}, 2);
  CHECK(sub[0] == DeletionPattern{true, false});
  CHECK(sub[1] == DeletionPattern{false, true});

  const auto none = split_pattern({false, false}, {1, 1}, 2);
  CHECK(none[0] == DeletionPattern{false, false});
  CHECK(none[1].empty());

  CHECK_THROWS_AS(split_pattern({true}, {1, 2}, 2), std::invalid_argument);
}

TEST_CASE("bijection and routing conservation, exhaustive small instances") {
  for (int k = 1; k <= 3; ++k) {
    const int q = 2 * k;
    for (int n = 0; n <= 4; ++n) {
      SymbolSequence x(n, 1);
      do {
        const auto dec = decompose(x, k);
        CHECK(recombine(dec) == x);
        std::size_t total = 0;
        for (int s = 1; s <= k; ++s) total += dec.length(s);
        CHECK(total == x.size());
      } while (next_sequence(x, q));
    }
  }
}

TEST_CASE("deletion commutes with decomposition, exhaustive N<=6 K<=3") {
  for (int k = 1; k <= 3; ++k) {
    const int q = 2 * k;
    for (int n = 1; n <= 6; ++n) {
      SymbolSequence x(n, 1);
      do {
        const auto dec_x = decompose(x, k);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
          DeletionPattern pat(n);
          for (int i = 0; i < n; ++i) pat[i] = (mask >> i) & 1;
          const auto dec_y = decompose(apply_pattern(x, pat), k);
          const auto subpats = split_pattern(pat, dec_x.labels, k);
          for (int s = 0; s < k; ++s)
            CHECK(dec_y.subsequences[s] == apply_pattern(dec_x.subsequences[s], subpats[s]));
        }
      } while (next_sequence(x, q));
    }
  }
}

TEST_CASE("output length distribution passes chi-squared GOF vs Binomial(N, 1-d)") {
  const int n = 8;
  const double d = 0.3;
  const int trials = 10000;
  std::vector<long> counts(n + 1, 0);
  for (int s = 0; s < trials; ++s) ++counts[transmit(SymbolSequence(n, 1), d, 1000 + s).size()];

  std::vector<double> expct(n + 1);
  for (int m = 0; m <= n; ++m) {
    double c = 1.0;
    for (int i = 0; i < m; ++i) c = c * (n - i) / (i + 1);
    expct[m] = trials * c * std::pow(1 - d, m) * std::pow(d, n - m);
  }
  // pool low-count bins (expected < 5) into the next bin
  std::vector<double> oe, ee;
  double co = 0, ce = 0;
  for (int m = 0; m <= n; ++m) {
    co += counts[m];
    ce += expct[m];
    if (ce >= 5.0) {
      oe.push_back(co);
      ee.push_back(ce);
      co = ce = 0;
    }
  }
  if (ce > 0) { oe.back() += co; ee.back() += ce; }
  double chi2 = 0;
  for (std::size_t i = 0; i < oe.size(); ++i)
    chi2 += (oe[i] - ee[i]) * (oe[i] - ee[i]) / ee[i];
  // critical values of chi2 at significance 0.01 for df = bins-1
  const double crit[] = {0, 6.635, 9.210, 11.345, 13.277, 15.086, 16.812, 18.475, 20.090};
  const std::size_t df = oe.size() - 1;
  REQUIRE(df >= 1);
  REQUIRE(df <= 8);
  CHECK(chi2 < crit[df]);
}

TEST_CASE("transmit is reproducible per seed") {
  const SymbolSequence x{1, 2, 3, 4, 1, 2, 3, 4};
  CHECK(transmit(x, 0.4, 42) == transmit(x, 0.4, 42));
}
