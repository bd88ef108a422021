#include <entsub/tensor_core.hpp>
#include <entsub/errors.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

#include <random>

using namespace entsub;

namespace {

CVector random_vector(std::size_t n, std::mt19937_64& rng) {
	std::normal_distribution<double> g;
	CVector v(static_cast<Eigen::Index>(n));
	for (auto& x : v) x = Complex(g(rng), g(rng));
	return v / v.norm();
}

} // namespace

TEST(TensorShape, RowMajorFirstFactorSlowest) {
	const TensorShape s{2, 3};
	EXPECT_EQ(s.total(), 6u);
	const std::vector<std::size_t> digits{1, 2};
	EXPECT_EQ(s.ravel(digits), 5u);
	EXPECT_EQ(s.digit(3, 0), 1u);
	EXPECT_EQ(s.digit(3, 1), 0u);
}

TEST(TensorShape, RavelUnravelRoundTrip) {
	std::mt19937_64 rng(7);
	for (int trial = 0; trial < 20; ++trial) {
		std::vector<std::size_t> dims;
		const int m = 1 + static_cast<int>(rng() % 4);
		for (int i = 0; i < m; ++i) dims.push_back(1 + rng() % 4);
		const TensorShape s(dims);
		for (std::size_t idx = 0; idx < s.total(); ++idx) {
			EXPECT_EQ(s.ravel(s.unravel(idx)), idx);
		}
	}
}

TEST(TensorShape, RejectsZeroDimension) {
	EXPECT_THROW(TensorShape({2, 0}), ParameterError);
	EXPECT_THROW(TensorShape(std::vector<std::size_t>{}), ParameterError);
}

TEST(Bipartition, Validation) {
	EXPECT_NO_THROW((Bipartition{{0}, {1, 2}}.validate(3)));
	EXPECT_THROW((Bipartition{{0}, {0, 1}}.validate(3)), ParameterError);
	EXPECT_THROW((Bipartition{{}, {0, 1}}.validate(2)), ParameterError);
	EXPECT_THROW((Bipartition{{0}, {1}}.validate(3)), ParameterError);
	const auto c = Bipartition::complement_of({2, 0}, 4);
	EXPECT_EQ(c.block_a, (std::vector<std::size_t>{0, 2}));
	EXPECT_EQ(c.block_b, (std::vector<std::size_t>{1, 3}));
}

TEST(Reshaper, ReshapeFlattenInverse) {
	std::mt19937_64 rng(11);
	const TensorShape s{2, 3, 2};
	for (const Bipartition& cut : {Bipartition{{0}, {1, 2}}, Bipartition{{1}, {0, 2}}, Bipartition{{0, 2}, {1}}}) {
		const BipartiteReshaper r(s, cut);
		const CVector v = random_vector(s.total(), rng);
		EXPECT_LT((r.flatten(r.reshape(v)) - v).norm(), 1e-15);
	}
}

TEST(Reshaper, ProductStateHasRankOne) {
	std::mt19937_64 rng(3);
	const CVector x = random_vector(3, rng), y = random_vector(4, rng);
	const BipartiteReshaper r(TensorShape{3, 4}, Bipartition{{0}, {1}});
	const CMatrix m = r.reshape(kron(x, y));
	Eigen::JacobiSVD<CMatrix> svd(m);
	EXPECT_NEAR(svd.singularValues()(0), 1.0, 1e-12);
	EXPECT_LT(svd.singularValues()(1), 1e-12);
}

TEST(Schmidt, ProductState) {
	CVector v = CVector::Zero(4);
	v(0) = 1;
	const auto s = schmidt(v, TensorShape{2, 2}, {{0}, {1}});
	EXPECT_NEAR(s.lambdas[0], 1.0, 1e-15);
	EXPECT_NEAR(s.lambdas[1], 0.0, 1e-15);
}

TEST(Schmidt, BellState) {
	CVector v = CVector::Zero(4);
	v(0) = v(3) = 1 / std::sqrt(2.0);
	const auto s = schmidt(v, TensorShape{2, 2}, {{0}, {1}});
	EXPECT_NEAR(s.lambdas[0], 0.5, 1e-15);
	EXPECT_NEAR(s.lambdas[1], 0.5, 1e-15);
}

TEST(Schmidt, RejectsNonUnitInput) {
	CVector v = CVector::Zero(4);
	v(0) = 2;
	EXPECT_THROW(schmidt(v, TensorShape{2, 2}, {{0}, {1}}), NormalizationError);
}

TEST(Schmidt, MatchesTwoQubitClosedForm) {
	std::mt19937_64 rng(5);
	for (int t = 0; t < 50; ++t) {
		const CVector v = random_vector(4, rng);
		const auto s = schmidt(v, TensorShape{2, 2}, {{0}, {1}});
		const auto [l0, l1] = oracle::two_qubit_schmidt(v);
		EXPECT_NEAR(s.lambdas[0], l0, 1e-12);
		EXPECT_NEAR(s.lambdas[1], l1, 1e-12);
	}
}

TEST(Schmidt, ProbabilityVectorAndCutSymmetry) {
	std::mt19937_64 rng(9);
	const TensorShape sh{2, 3, 2};
	for (int t = 0; t < 20; ++t) {
		const CVector v = random_vector(sh.total(), rng);
		const Bipartition cut{{0, 2}, {1}};
		const auto s = schmidt(v, sh, cut);
		const auto s2 = schmidt(v, sh, cut.swapped());
		double sum = 0;
		for (double l : s.lambdas) {
			EXPECT_GE(l, 0.0);
			sum += l;
		}
		EXPECT_NEAR(sum, 1.0, 1e-12);
		ASSERT_EQ(s.lambdas.size(), s2.lambdas.size());
		for (std::size_t i = 0; i < s.lambdas.size(); ++i) EXPECT_NEAR(s.lambdas[i], s2.lambdas[i], 1e-12);
	}
}

TEST(NullSpace, KnownRank) {
	CMatrix m(2, 4);
	m << 1, 1, 0, 0,
	     0, 0, 1, 1;
	const auto ns = null_space_orthonormal(m);
	EXPECT_EQ(ns.rank, 2u);
	ASSERT_EQ(ns.basis.cols(), 2);
	EXPECT_LT((m * ns.basis).norm(), 1e-14);
	EXPECT_LT((ns.basis.adjoint() * ns.basis - CMatrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(NullSpace, PhaseDoesNotChangeKernel) {
	std::mt19937_64 rng(13);
	std::normal_distribution<double> g;
	CMatrix m(3, 6);
	for (auto& x : m.reshaped()) x = g(rng);
	const auto real = null_space_orthonormal(m);
	const auto cplx = null_space_orthonormal(m * std::polar(1.0, 0.7));
	const CMatrix p1 = real.basis * real.basis.adjoint();
	const CMatrix p2 = cplx.basis * cplx.basis.adjoint();
	EXPECT_LT((p1 - p2).norm(), 1e-12);
	EXPECT_EQ(real.rank, 3u);
}

TEST(NullSpace, ProjectorRankMatchesOrbitCount) {
	for (auto [a, d] : std::vector<std::pair<unsigned, unsigned>>{{2, 4}, {3, 3}, {3, 4}, {4, 3}, {6, 2}}) {
		const CMatrix p = oracle::symmetric_projector(a, d);
		const auto ns = null_space_orthonormal(p);
		EXPECT_EQ(ns.rank, oracle::count_multiindices(a, d)) << a << " " << d;
		EXPECT_LT((p * ns.basis).norm(), 1e-12);
	}
}

TEST(Kron, VectorsAndMatrices) {
	CVector x(2), y(3);
	x << 1, 2;
	y << 3, 4, 5;
	const CVector k = kron(x, y);
	ASSERT_EQ(k.size(), 6);
	EXPECT_EQ(k(4), Complex(8));
	const CMatrix a = CMatrix::Identity(2, 2), b = CMatrix::Constant(2, 2, 2.0);
	const CMatrix kk = kron(a, b);
	EXPECT_EQ(kk(0, 1), Complex(2));
	EXPECT_EQ(kk(0, 2), Complex(0));
	const std::vector<CVector> f{x, y, x};
	EXPECT_EQ(kron_all(f).size(), 12);
}
