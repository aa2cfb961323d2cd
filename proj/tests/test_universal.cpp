#include "natmot/random.hpp"
#include "natmot/universal.hpp"

#include <gtest/gtest.h>

using namespace natmot;

TEST(UniversalExtension, Examples) {
  auto lattice = ToricOneMotive::from_strings(1, 0, {});
  auto E = universal_extension(lattice);
  EXPECT_EQ(E.vectorRank, 1u);
  EXPECT_EQ(E.V, (RatMatrix{{1}}));

  auto torus = ToricOneMotive::from_strings(0, 1, {{}});
  EXPECT_EQ(universal_extension(torus).vectorRank, 0u);

  auto M = ToricOneMotive::from_strings(1, 1, {{"5"}});
  auto F = universal_extension(M);
  EXPECT_EQ(F.V(0, 0), 1);
  EXPECT_EQ(F.W(0, 0), parse_qstar("5"));
  EXPECT_TRUE(is_universal(F));
}

TEST(UniversalityCriterion, Examples) {
  auto M = ToricOneMotive::from_strings(1, 1, {{"5"}});
  EXPECT_TRUE(is_universal(M, RatMatrix{{1}}, M.u));
  EXPECT_FALSE(is_universal(M, RatMatrix{{0}}, M.u));
  EXPECT_TRUE(is_universal(M, RatMatrix{{2}}, M.u));
  QStarMatrix other(1, 1);
  other(0, 0) = parse_qstar("3");
  EXPECT_FALSE(is_universal(M, RatMatrix{{1}}, other));
  EXPECT_THROW(is_universal(M, RatMatrix{{1, 0}}, M.u), ContractViolation);
}

TEST(UniversalityCriterion, LiftsDifferByInvertibleChange) {
  // Two universal lifts V1, V2 of the same u differ by V2 V1^-1, itself invertible.
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    std::size_t r = 1 + rng() % 3;
    auto M = random_motive(rng, r, rng() % 3, standard_entry_pool());
    auto V1 = to_rational(random_int_matrix(rng, r, r, 3));
    auto V2 = to_rational(random_int_matrix(rng, r, r, 3));
    bool u1 = is_universal(M, V1, M.u), u2 = is_universal(M, V2, M.u);
    EXPECT_EQ(u1, determinant(V1) != 0);
    if (u1 && u2) EXPECT_NE(determinant(V2) / determinant(V1), 0);
  }
}

TEST(DeRham, Dimensions) {
  EXPECT_EQ(de_rham(ToricOneMotive::from_strings(0, 0, {})).dim(), 0u);
  auto s = de_rham(ToricOneMotive::from_strings(2, 1, {{"2", "3"}}));
  EXPECT_EQ(s.dim(), 3u);
  EXPECT_EQ(s.weightMinus2Rank(), 1u);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"x1", "x2", "lt"}));
  auto l = de_rham(ToricOneMotive::from_strings(1, 0, {}));
  EXPECT_EQ(l.dim(), 1u);
  EXPECT_EQ(l.weightMinus2Rank(), 0u);
}

TEST(DeRham, AdditiveInWeightPieces) {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    std::size_t r = rng() % 4, d = rng() % 4;
    auto M = random_motive(rng, r, d, standard_entry_pool());
    auto lattice = ToricOneMotive(r, 0, QStarMatrix(0, r));
    auto torus = ToricOneMotive(0, d, QStarMatrix(d, 0));
    EXPECT_EQ(de_rham(M).dim(), de_rham(lattice).dim() + de_rham(torus).dim());
  }
}

TEST(DeRhamMap, BlockRuleAndFunctoriality) {
  auto M4 = ToricOneMotive::from_strings(1, 1, {{"8"}});
  auto M2 = ToricOneMotive::from_strings(1, 1, {{"2"}});
  MotiveMorphism f{M4, M2, IntMatrix{{3}}, IntMatrix{{1}}};
  EXPECT_EQ(de_rham_map(f), (RatMatrix{{3, 0}, {0, 1}}));
  EXPECT_EQ(de_rham_map(identity_morphism(M4)), RatMatrix::identity(2));
  EXPECT_THROW(de_rham_map({M2, M4, IntMatrix{{3}}, IntMatrix{{1}}}), ContractViolation);

  Rng rng(13);
  for (int i = 0; i < 40; ++i) {
    auto M1 = random_motive(rng, rng() % 3, rng() % 3, standard_entry_pool());
    auto g = random_valid_morphism(rng, M1, rng() % 3, rng() % 3);
    auto h = random_valid_morphism(rng, g.target, rng() % 3, rng() % 3);
    EXPECT_EQ(de_rham_map(compose(g, h)), de_rham_map(h) * de_rham_map(g));
    EXPECT_TRUE(preserves_weights(de_rham_map(g), de_rham(g.source), de_rham(g.target)));
    // The dual's de Rham map has the blocks swapped and transposed.
    auto dual = dual_morphism(g);
    EXPECT_EQ(de_rham_map(dual), to_rational(block_diag(g.fT.transpose(), g.fX.transpose())));
  }
}

TEST(LieDimension, BothCountsAgree) {
  EXPECT_TRUE(lie_dimension_check(ToricOneMotive(3, 0, QStarMatrix(0, 3))));
  EXPECT_TRUE(lie_dimension_check(ToricOneMotive(0, 0, QStarMatrix(0, 0))));
  Rng rng(1);
  EXPECT_TRUE(lie_dimension_check(random_motive(rng, 1, 5, standard_entry_pool())));
}
