#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ebt/presented_group.hpp"
#include "ebt/smith.hpp"

namespace ebt {
namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

void expect_valid_smith(const IntMatrix& a, const SmithForm<Integer>& f) {
  ASSERT_EQ(f.U * a * f.V, f.D(a.cols()));
  EXPECT_EQ(abs(determinant(f.U)), 1);
  EXPECT_EQ(abs(determinant(f.V)), 1);
  EXPECT_EQ(f.U * f.u_inverse, IntMatrix::identity(a.rows()));
  for (std::size_t i = 0; i + 1 < f.diag.size(); ++i) {
    EXPECT_GE(f.diag[i], 0);
    if (sgn(f.diag[i]) != 0) {
      EXPECT_TRUE(detail::divides(f.diag[i], f.diag[i + 1])) << f.diag[i] << " " << f.diag[i + 1];
    } else {
      EXPECT_EQ(f.diag[i + 1], 0) << "zeros must trail";
    }
  }
}

TEST(SmithNormalForm, EmptyMatrix) {
  const auto f = smith_normal_form(IntMatrix(0, 0));
  EXPECT_TRUE(f.diag.empty());
  EXPECT_EQ(f.rank, 0u);
}

TEST(SmithNormalForm, AlreadyDiagonal) {
  const IntMatrix a = IntMatrix::from_rows({{2, 0}, {0, 6}});
  const auto f = smith_normal_form(a);
  EXPECT_EQ(f.diag, (IntVector{2, 6}));
  EXPECT_EQ(f.U, IntMatrix::identity(2));
  EXPECT_EQ(f.V, IntMatrix::identity(2));
}

TEST(SmithNormalForm, RankOneMatrix) {
  // Row-reducing [[2,4],[4,8]] by hand: R2 -= 2 R1 gives [[2,4],[0,0]], then
  // C2 -= 2 C1 gives diag(2, 0).
  const IntMatrix a = IntMatrix::from_rows({{2, 4}, {4, 8}});
  const auto f = smith_normal_form(a);
  EXPECT_EQ(f.diag, (IntVector{2, 0}));
  EXPECT_EQ(f.rank, 1u);
  expect_valid_smith(a, f);
}

TEST(SmithNormalForm, FixesDivisibility) {
  const IntMatrix a = IntMatrix::from_rows({{2, 0}, {0, 3}});
  const auto f = smith_normal_form(a);
  EXPECT_EQ(f.diag, (IntVector{1, 6}));
  expect_valid_smith(a, f);
}

TEST(SmithNormalForm, MachineIntegerInstantiation) {
  const Matrix<std::int64_t> a = Matrix<std::int64_t>::from_rows({{4, 6}, {6, 9}, {2, 3}});
  const auto f = smith_normal_form(a);
  EXPECT_EQ(f.diag, (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(f.U * a * f.V, f.D(2));
}

TEST(SmithNormalForm, RandomMatricesSatisfyIdentity) {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<std::size_t> dim(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const IntMatrix a = random_matrix(rng, dim(rng), dim(rng), 9);
    const auto f = smith_normal_form(a);
    expect_valid_smith(a, f);
    EXPECT_EQ(f.rank, rank_fraction_free(a));
  }
}

TEST(SmithNormalForm, LowRankRandomMatrices) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const IntMatrix left = random_matrix(rng, 6, 2, 5);
    const IntMatrix right = random_matrix(rng, 2, 5, 5);
    const IntMatrix a = left * right;
    const auto f = smith_normal_form(a);
    expect_valid_smith(a, f);
    EXPECT_LE(f.rank, 2u);
    EXPECT_EQ(f.rank, rank_fraction_free(a));
  }
}

TEST(SmithNormalForm, Deterministic) {
  std::mt19937 rng(5);
  const IntMatrix a = random_matrix(rng, 6, 8, 20);
  const auto f1 = smith_normal_form(a);
  const auto f2 = smith_normal_form(a);
  EXPECT_EQ(f1.U, f2.U);
  EXPECT_EQ(f1.V, f2.V);
  EXPECT_EQ(f1.diag, f2.diag);
}

TEST(Cokernel, ZeroMatrix) {
  const auto c = cokernel_structure(IntMatrix(3, 2));
  EXPECT_EQ(c.rank, 3u);
  EXPECT_TRUE(c.torsion.empty());
}

TEST(Cokernel, Diagonal) {
  const IntMatrix a = IntMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 4}});
  const auto c = cokernel_structure(a);
  EXPECT_EQ(c.rank, 0u);
  EXPECT_EQ(c.torsion, (IntVector{4}));
}

TEST(Cokernel, InvariantUnderColumnPermutationAndCombinations) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const IntMatrix a = random_matrix(rng, 5, 4, 6);
    const auto base = cokernel_structure(a);

    std::vector<std::size_t> perm(a.cols());
    for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = j;
    std::shuffle(perm.begin(), perm.end(), rng);
    IntMatrix permuted(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i) permuted(i, j) = a(i, perm[j]);
    EXPECT_EQ(cokernel_structure(permuted), base);

    std::uniform_int_distribution<int> coef(-3, 3);
    IntMatrix extended(a.rows(), a.cols() + 2);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) extended(i, j) = a(i, j);
    for (std::size_t extra = 0; extra < 2; ++extra) {
      std::vector<int> c(a.cols());
      for (auto& x : c) x = coef(rng);
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) extended(i, a.cols() + extra) += c[j] * a(i, j);
    }
    EXPECT_EQ(cokernel_structure(extended), base);
  }
}

TEST(Cokernel, ColumnSpanMembership) {
  const IntMatrix a = IntMatrix::from_rows({{2, 0}, {0, 3}, {0, 0}});
  const auto f = smith_normal_form(a);
  EXPECT_TRUE(in_column_span(f, {4, 9, 0}));
  EXPECT_FALSE(in_column_span(f, {1, 0, 0}));
  EXPECT_FALSE(in_column_span(f, {0, 0, 1}));
  EXPECT_TRUE(solvable_mod(f, {1, 0, 0}, 3));
  EXPECT_FALSE(solvable_mod(f, {1, 0, 0}, 2));
  EXPECT_FALSE(solvable_mod(f, {0, 0, 1}, 5));
  EXPECT_TRUE(solvable_mod(f, {0, 0, 5}, 5));
}

std::shared_ptr<const PresentedAbelianGroup> z4_plus_z() {
  // generators x, y with 4x = 0: Z/4 + Z
  SparseMatrix rel;
  rel.rows = 2;
  rel.columns.push_back({{0, Integer(4)}});
  return std::make_shared<const PresentedAbelianGroup>(std::vector<std::string>{"x", "y"}, rel);
}

TEST(ClassOrder, Basics) {
  const auto g = z4_plus_z();
  EXPECT_EQ(g->rank(), 1u);
  EXPECT_EQ(g->torsion(), (IntVector{4}));
  EXPECT_EQ(class_order(GroupElementClass::zero(g)), Integer(1));
  EXPECT_EQ(class_order(GroupElementClass(g, {2, 0})), Integer(2));
  EXPECT_EQ(class_order(GroupElementClass(g, {1, 0})), Integer(4));
  EXPECT_FALSE(class_order(GroupElementClass(g, {1, 1})).has_value());
  EXPECT_EQ(order_to_string(class_order(GroupElementClass(g, {0, 3}))), "infinite");
}

TEST(ClassOrder, EqualityAndMismatchedGroups) {
  const auto g = z4_plus_z();
  const GroupElementClass x(g, {1, 2});
  EXPECT_TRUE(classes_equal(x, x));
  EXPECT_TRUE(classes_equal(x, GroupElementClass(g, {5, 2})));
  EXPECT_FALSE(classes_equal(x, GroupElementClass(g, {2, 2})));
  const auto other = z4_plus_z();
  EXPECT_THROW(classes_equal(x, GroupElementClass(other, {1, 2})), std::invalid_argument);
}

TEST(ClassOrder, OrderAnnihilatesProperty) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    SparseMatrix rel;
    rel.rows = 4;
    std::uniform_int_distribution<int> v(-6, 6);
    for (int c = 0; c < 5; ++c) {
      SparseColumn col;
      for (std::size_t r = 0; r < 4; ++r) {
        const int x = v(rng);
        if (x != 0) col.emplace_back(r, Integer(x));
      }
      rel.columns.push_back(col);
    }
    const auto g = std::make_shared<const PresentedAbelianGroup>(std::vector<std::string>{"a", "b", "c", "d"}, rel);
    for (int k = 0; k < 10; ++k) {
      const GroupElementClass x(g, {v(rng), v(rng), v(rng), v(rng)});
      const auto order = class_order(x);
      if (!order) continue;
      EXPECT_TRUE(x.scaled(*order).is_zero());
      if (*order > 1) {
        EXPECT_FALSE(x.scaled(*order - 1).is_zero());
      }
    }
  }
}

}  // namespace
}  // namespace ebt
