#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "support/fixtures.hpp"

using namespace linf;

namespace {

SpacePtr mixed_space() {
  return make_space({{"a", 0, 1}, {"x", 1, 1}, {"y", -1, 2}, {"b", 2, 2}}, 3);
}

}  // namespace

TEST(Scalars, ParseAndPrint) {
  EXPECT_EQ(parse_scalar("-6/4"), Scalar(-3, 2));
  EXPECT_EQ(parse_scalar("+7"), Scalar(7));
  EXPECT_EQ(to_string(ratio(3, -6)), "-1/2");
  EXPECT_THROW(parse_scalar("1/0"), ArgumentError);
  EXPECT_THROW(parse_scalar("1.5"), ArgumentError);
  EXPECT_THROW(parse_scalar(""), ArgumentError);
  EXPECT_EQ(factorial(5), Scalar(120));
}

TEST(FilteredSpaceTest, RejectsBadGenerators) {
  EXPECT_THROW(make_space({{"a", 0, 0}}, 2), ArgumentError);
  EXPECT_THROW(make_space({{"a", 0, 2}}, 2), ArgumentError);
  EXPECT_THROW(make_space({{"a", 0, 1}, {"a", 1, 1}}, 2), ArgumentError);
  EXPECT_THROW(make_space({}, 0), ArgumentError);
}

TEST(FilteredSpaceTest, SelectAndBands) {
  auto s = mixed_space();
  EXPECT_EQ(s->select(0), std::vector<std::size_t>{0});
  EXPECT_EQ(s->select(1, 1, 1), std::vector<std::size_t>{1});
  EXPECT_TRUE(s->select(1, 2).empty());
  Element v;
  v.add(0, 1);
  v.add(2, 5);
  EXPECT_EQ(weight_band(*s, v, 2, 2), Element::unit(2, 5));
  EXPECT_EQ(min_weight(*s, v), 1);
  EXPECT_FALSE(homogeneous_of_degree(*s, v, 0));
}

TEST(FilteredSpaceTest, DirectSumPrimesCollisions) {
  auto a = make_space({{"e", 0, 1}}, 2);
  auto b = make_space({{"e", 0, 1}, {"f", 1, 2}}, 3);
  auto s = direct_sum_space(*a, *b);
  ASSERT_EQ(s->dim(), 3u);
  EXPECT_EQ(s->id(1), "e'");
  EXPECT_EQ(s->id(2), "f");
  EXPECT_EQ(s->bound(), 3);
}

TEST(KoszulSign, Transpositions) {
  std::vector<int> odd{1, 1}, mixed{1, 0}, even{0, 2};
  std::vector<std::size_t> swap{1, 0}, id{0, 1};
  EXPECT_EQ(koszul_sign(swap, odd), -1);
  EXPECT_EQ(koszul_sign(swap, mixed), 1);
  EXPECT_EQ(koszul_sign(swap, even), 1);
  EXPECT_EQ(koszul_sign(id, odd), 1);
  std::vector<std::size_t> bad{0, 0};
  EXPECT_THROW(koszul_sign(bad, odd), ArgumentError);
}

TEST(KoszulSign, CyclicOfThreeOdd) {
  std::vector<int> d{1, 1, 1};
  std::vector<std::size_t> cyc{1, 2, 0};
  EXPECT_EQ(koszul_sign(cyc, d), 1);  // two transpositions
}

TEST(KoszulSign, MultiplicativeOnRandomPermutations) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng() % 4;
    std::vector<int> deg(n);
    for (auto& d : deg) d = static_cast<int>(rng() % 3) - 1;
    std::vector<std::size_t> p(n), q(n);
    std::iota(p.begin(), p.end(), 0);
    std::iota(q.begin(), q.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    std::shuffle(q.begin(), q.end(), rng);
    // reorder by p, then reorder the result by q
    std::vector<int> deg_p(n);
    for (std::size_t i = 0; i < n; ++i) deg_p[i] = deg[p[i]];
    std::vector<std::size_t> pq(n);
    for (std::size_t i = 0; i < n; ++i) pq[i] = p[q[i]];
    EXPECT_EQ(koszul_sign(pq, deg), koszul_sign(p, deg) * koszul_sign(q, deg_p));
  }
}

TEST(Words, NormalizeSignsAndVanishing) {
  auto s = mixed_space();
  auto n = normalize_word(*s, std::vector<std::size_t>{2, 1});  // y x, both odd
  ASSERT_TRUE(n);
  EXPECT_EQ(n->word, (Word{1, 2}));
  EXPECT_EQ(n->sign, -1);
  auto m = normalize_word(*s, std::vector<std::size_t>{3, 0});
  ASSERT_TRUE(m);
  EXPECT_EQ(m->sign, 1);
  EXPECT_FALSE(normalize_word(*s, std::vector<std::size_t>{1, 1}));
  EXPECT_TRUE(normalize_word(*s, std::vector<std::size_t>{0, 0}));
  EXPECT_EQ(word_degree(*s, {1, 2}), 0);
  EXPECT_EQ(word_weight(*s, {1, 2}), 3);
}

TEST(Words, LiveWordsAreCanonicalAndBelowCap) {
  auto g = fx::G4();
  const auto& s = *g->space;
  auto words = live_words(s, s.bound());
  std::set<Word> seen;
  for (const auto& w : words) {
    EXPECT_TRUE(is_canonical(s, w));
    EXPECT_LT(word_weight(s, w), s.bound());
    EXPECT_TRUE(seen.insert(w).second);
  }
  // e, f weight 1; u, h weight 2; k, m weight 3: singles 6, pairs of weight <= 3:
  // ee ef ff (3) + e/f with u/h (4), triples eee eef eff fff (4)
  EXPECT_EQ(words.size(), 6u + 7u + 4u);
}

TEST(Words, ShufflesAndBlockPartitions) {
  EXPECT_EQ(shuffles(2, 1).size(), 3u);
  EXPECT_EQ(shuffles(2, 2).size(), 6u);
  // Stirling numbers of the second kind
  EXPECT_EQ(ordered_block_partitions(4, 2).size(), 7u);
  EXPECT_EQ(ordered_block_partitions(5, 3).size(), 25u);
  EXPECT_EQ(ordered_block_partitions(3, 3).size(), 1u);
  for (const auto& p : ordered_block_partitions(5, 3))
    for (std::size_t b = 1; b < p.size(); ++b) EXPECT_LT(p[b - 1].front(), p[b].front());
}

TEST(LinearAlgebra, RrefRankAndSolve) {
  Matrix a{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  EXPECT_EQ(rank(a), 2u);
  auto sol = rref_solve(a, {Scalar(1), Scalar(2), Scalar(0)});
  ASSERT_TRUE(sol.solution);
  EXPECT_EQ(a.multiply(*sol.solution), (std::vector<Scalar>{1, 2, 0}));
  EXPECT_FALSE(sol.unique());
  EXPECT_FALSE(rref_solve(a, {Scalar(1), Scalar(0), Scalar(0)}).solution);
  auto ns = null_space(a);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_EQ(a.multiply(ns[0]), (std::vector<Scalar>{0, 0, 0}));
}

TEST(LinearAlgebra, RandomSystemsRoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    Matrix a(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) a.set(i, j, Scalar(static_cast<long>(rng() % 7) - 3));
    std::vector<Scalar> x(c);
    for (auto& v : x) v = ratio(static_cast<long>(rng() % 5) - 2, static_cast<long>(1 + rng() % 3));
    auto b = a.multiply(x);
    auto sol = rref_solve(a, b);
    ASSERT_TRUE(sol.solution);
    EXPECT_EQ(a.multiply(*sol.solution), b);
    EXPECT_EQ(rank(a) + null_space(a).size(), c);
  }
}

TEST(LinearAlgebra, SubspaceCoordinates) {
  Element v1, v2;
  v1.add(0, 1);
  v1.add(1, 1);
  v2.add(1, 1);
  v2.add(2, 2);
  Subspace s({v1, v2});
  EXPECT_EQ(s.dim(), 2u);
  Element w = v1 * Scalar(3) - v2 * Scalar(1, 2);
  auto c = s.coordinates(w);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->coeff(0), Scalar(3));
  EXPECT_EQ(c->coeff(1), Scalar(-1, 2));
  EXPECT_FALSE(s.coordinates(Element::unit(2)));
  EXPECT_FALSE(s.insert(v1 + v2));
}

TEST(LinearMaps, FilteredInverse) {
  auto s = mixed_space();
  LinearMap f = LinearMap::identity(s);
  LinearMap g(s, s, 0);
  for (std::size_t i = 0; i < s->dim(); ++i) g.set_column(i, Element::unit(i) * Scalar(2));
  auto inv = filtered_inverse(g);
  ASSERT_TRUE(inv);
  EXPECT_EQ(compose(*inv, g), f);
  LinearMap z(s, s, 0);
  EXPECT_FALSE(filtered_inverse(z));
}

TEST(LinearMaps, ComposeChecksSpaces) {
  auto a = mixed_space();
  auto b = make_space({{"q", 0, 1}}, 2);
  LinearMap f(a, a, 0), g(b, b, 0);
  EXPECT_THROW(compose(g, f), ArgumentError);
}
