#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "delcap/exact_info.hpp"

using namespace delcap;

namespace {

double atom_sum(const JointModel& j) {
  double s = 0;
  for (const auto& a : j.atoms) s += a.prob;
  return s;
}

// independent 16-atom oracle for I(X;Y), n=2 binary d=0.5: grouping by the
// realized output string, written without the library's key machinery
double hand_mi_n2_binary_half() {
  std::map<std::vector<int>, std::map<std::vector<int>, double>> joint; // x -> y -> p
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      for (int mask = 0; mask < 4; ++mask) {
        std::vector<int> x{a, b}, y;
        if (!(mask & 1)) y.push_back(a);
        if (!(mask & 2)) y.push_back(b);
        joint[x][y] += 0.25 * 0.25;
      }
  std::map<std::vector<int>, double> py;
  for (const auto& [x, row] : joint)
    for (const auto& [y, p] : row) py[y] += p;
  double info = 0;
  for (const auto& [x, row] : joint)
    for (const auto& [y, p] : row)
      if (p > 0) info += p * std::log2(p / (0.25 * py.at(y)));
  return info;
}

} // namespace

TEST_CASE("build_joint n=1 K=1 d=0.5 gives four quarter atoms") {
  const auto j = build_joint(InputProcess::iid_uniform(), 1, {1, 0.5});
  REQUIRE(j.atoms.size() == 4);
  for (const auto& a : j.atoms) CHECK(a.prob == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("build_joint with d=0 zeroes every deleting atom") {
  const auto j = build_joint(InputProcess::iid_uniform(), 2, {1, 0.0});
  for (const auto& a : j.atoms) {
    bool any_del = false;
    for (bool f : a.pattern) any_del = any_del || f;
    if (any_del) CHECK(a.prob == 0.0);
  }
  CHECK(atom_sum(j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_joint n=3 K=2 enumerates 512 atoms summing to one") {
  const auto j = build_joint(InputProcess::iid_uniform(), 3, {2, 0.3});
  CHECK(j.atoms.size() == 512);
  CHECK(atom_sum(j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_joint enforces the atom budget") {
  CHECK_THROWS_AS(build_joint(InputProcess::iid_uniform(), 3, {2, 0.3}, 100.0), budget_error);
}

TEST_CASE("markov process probabilities normalize") {
  const auto proc = InputProcess::symmetric_markov(0.7);
  const auto j = build_joint(proc, 3, {2, 0.2});
  CHECK(atom_sum(j) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(InputProcess::symmetric_markov(0.0), std::invalid_argument);
  CHECK_THROWS_AS(InputProcess::symmetric_markov(1.0), std::invalid_argument);
}

TEST_CASE("single-symbol MI is an erasure channel") {
  for (int k : {1, 2, 3})
    for (double d : {0.0, 0.2, 0.5, 0.8}) {
      const auto j = build_joint(InputProcess::iid_uniform(), 1, {k, d});
      CHECK(mutual_information(j) ==
            doctest::Approx((1 - d) * std::log2(2.0 * k)).epsilon(1e-12));
    }
}

TEST_CASE("d=0 MI equals the uniform input entropy") {
  const auto j = build_joint(InputProcess::iid_uniform(), 3, {2, 0.0});
  CHECK(mutual_information(j) == doctest::Approx(3 * std::log2(4.0)).epsilon(1e-12));
}

TEST_CASE("n=2 binary d=0.5 MI matches the hand-enumerated oracle") {
  const auto j = build_joint(InputProcess::iid_uniform(), 2, {1, 0.5});
  const double got = mutual_information(j);
  CHECK(got == doctest::Approx(hand_mi_n2_binary_half()).epsilon(1e-12));
  CHECK(got == doctest::Approx(0.75).epsilon(1e-12)); // frozen regression constant
}

TEST_CASE("K=1 label term vanishes") {
  const auto j = build_joint(InputProcess::iid_uniform(), 3, {1, 0.4});
  const auto dec = decomposition_terms(j);
  CHECK(std::abs(dec.label_term) < 1e-12);
  CHECK(dec.total == doctest::Approx(dec.per_channel[0]).epsilon(1e-9));
}

TEST_CASE("d=1 decomposition terms all vanish") {
  const auto j = build_joint(InputProcess::iid_uniform(), 3, {2, 1.0});
  const auto dec = decomposition_terms(j);
  CHECK(std::abs(dec.total) < 1e-12);
  CHECK(std::abs(dec.label_term) < 1e-12);
  for (double v : dec.per_channel) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("chain rule holds on n=4 K=2 d=0.3") {
  const auto j = build_joint(InputProcess::iid_uniform(), 4, {2, 0.3});
  const auto dec = decomposition_terms(j);
  CHECK(dec.total == doctest::Approx(dec.term_sum()).epsilon(1e-9));
}

TEST_CASE("subchannel MI degenerates to total MI for K=1") {
  const auto j = build_joint(InputProcess::iid_uniform(), 3, {1, 0.35});
  CHECK(subchannel_mi(j, 1) == doctest::Approx(mutual_information(j)).epsilon(1e-12));
  CHECK_THROWS_AS(subchannel_mi(j, 2), std::invalid_argument);
}

TEST_CASE("d=0 subchannel MI equals the length-and-content entropy") {
  // X_k has length N_k ~ Binomial(3, 1/2), content uniform over 2^{N_k}
  const auto j = build_joint(InputProcess::iid_uniform(), 3, {2, 0.0});
  double expected = 0;
  const double pn[] = {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
  for (int nk = 0; nk <= 3; ++nk) expected += pn[nk] * (nk - std::log2(pn[nk]));
  CHECK(subchannel_mi(j, 1) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(subchannel_mi(j, 2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("I_k never exceeds I(X_k;Y_k) on n=4 K=2 d=0.5") {
  const auto j = build_joint(InputProcess::iid_uniform(), 4, {2, 0.5});
  const auto dec = decomposition_terms(j);
  for (int s = 0; s < 2; ++s) CHECK(dec.per_channel[s] <= dec.subchannel_mi[s] + 1e-9);
}

TEST_CASE("alpha terms sum to one and are symmetric for uniform input") {
  const auto j = build_joint(InputProcess::iid_uniform(), 4, {2, 0.3});
  const auto dec = decomposition_terms(j);
  CHECK(dec.alpha[0] + dec.alpha[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dec.alpha[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("deletion count entropy anchors") {
  CHECK(deletion_count_entropy(1, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(deletion_count_entropy(12, 0.0) == 0.0);
  CHECK(deletion_count_entropy(12, 1.0) == 0.0);
  const double h17 = deletion_count_entropy(17, 0.3);
  CHECK(h17 > 0.0);
  CHECK(h17 <= std::log2(18.0));
  CHECK_THROWS_AS(deletion_count_entropy(-1, 0.5), std::invalid_argument);
}

TEST_CASE("deletion count entropy matches a direct binomial sum") {
  for (int nk : {3, 17, 64})
    for (double d : {0.1, 0.3, 0.77}) {
      double h = 0;
      for (int n = 0; n <= nk; ++n) {
        double c = 1.0;
        for (int i = 0; i < n; ++i) c = c * (nk - i) / (i + 1);
        const double p = c * std::pow(d, n) * std::pow(1 - d, nk - n);
        if (p > 0) h -= p * std::log2(p);
      }
      CHECK(deletion_count_entropy(nk, d) == doctest::Approx(h).epsilon(1e-10));
    }
}

TEST_CASE("multinomial log bound anchors") {
  auto [lhs2, rhs2] = multinomial_log_bound({1, 1});
  CHECK(lhs2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rhs2 == doctest::Approx(2.0).epsilon(1e-12));

  auto [lhs1, rhs1] = multinomial_log_bound({7});
  CHECK(lhs1 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rhs1 == doctest::Approx(0.0).epsilon(1e-9));

  auto [lhs3, rhs3] = multinomial_log_bound({3, 2, 5});
  CHECK(lhs3 == doctest::Approx(std::log2(2520.0)).epsilon(1e-10)); // 10!/(3!2!5!)
  CHECK(rhs3 == doctest::Approx(10 * std::log2(10.0) - 3 * std::log2(3.0) - 2.0 -
                                5 * std::log2(5.0)).epsilon(1e-12));
  CHECK(lhs3 <= rhs3);
  CHECK_THROWS_AS(multinomial_log_bound({2, 0}), std::invalid_argument);
}

TEST_CASE("Hessian quadratic form anchors and property sweep") {
  CHECK(g_quadratic_form({2, 3}, {2, 3}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(g_quadratic_form({1, 1}, {1, -1}) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK_THROWS_AS(g_quadratic_form({1, 0}, {1, 1}), std::invalid_argument);

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_real_distribution<double> md(1e-3, 50.0), ad(-10.0, 10.0);
  for (int t = 0; t < 1000; ++t) {
    const int k = dim(rng);
    std::vector<double> m(k), a(k);
    for (auto& v : m) v = md(rng);
    for (auto& v : a) v = ad(rng);
    CHECK(g_quadratic_form(m, a) <= 1e-12);
  }
}
