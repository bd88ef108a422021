#include <entsub/construction.hpp>
#include <entsub/io.hpp>

#include <gtest/gtest.h>

#include <cstring>
#include <limits>
#include <random>

using namespace entsub;

TEST(MatrixJson, BitIdenticalRoundTrip) {
	std::mt19937_64 rng(99);
	CMatrix m(5, 4);
	for (auto& x : m.reshaped()) {
		double re, im;
		std::uint64_t bits = rng();
		std::memcpy(&re, &bits, sizeof re);
		bits = rng();
		std::memcpy(&im, &bits, sizeof im);
		if (!std::isfinite(re)) re = 1.0;
		if (!std::isfinite(im)) im = -0.0;
		x = Complex(re, im);
	}
	m(0, 0) = Complex(std::numeric_limits<double>::denorm_min(), -std::numeric_limits<double>::max());
	m(0, 1) = Complex(-0.0, 0.1);
	const std::string text = matrix_to_json(m).dump();
	const CMatrix back = matrix_from_json(Json::parse(text));
	ASSERT_EQ(back.rows(), m.rows());
	ASSERT_EQ(back.cols(), m.cols());
	EXPECT_EQ(std::memcmp(back.data(), m.data(), sizeof(Complex) * static_cast<std::size_t>(m.size())), 0);
}

TEST(MatrixJson, RowMajorLayout) {
	CMatrix m(2, 2);
	m << 1, 2, 3, 4;
	const Json j = matrix_to_json(m);
	EXPECT_EQ(j["shape"], Json::array({2, 2}));
	EXPECT_EQ(j["entries"][1][0].get<double>(), 2.0);
	EXPECT_EQ(j["entries"][2][0].get<double>(), 3.0);
}

TEST(MatrixJson, RejectsBadInput) {
	CMatrix m = CMatrix::Zero(1, 1);
	m(0, 0) = std::numeric_limits<double>::quiet_NaN();
	EXPECT_THROW(matrix_to_json(m), ParameterError);
	EXPECT_THROW(matrix_from_json(Json::parse(R"({"shape":[1,2],"entries":[[1,0]]})")), ParameterError);
	EXPECT_THROW(matrix_from_json(Json::parse(R"({"shape":[1,1],"entries":[[1]]})")), ParameterError);
	EXPECT_THROW(matrix_from_json(Json::parse(R"({"entries":[]})")), ParameterError);
}

TEST(SubspaceJson, RoundTripKeepsTag) {
	const SubspaceBasis u = build_kernel_subspace(2, {2, 2}, {3, 3});
	const SubspaceBasis back = subspace_from_json(Json::parse(subspace_to_json(u).dump()));
	EXPECT_EQ(back.ambient, u.ambient);
	EXPECT_EQ(back.basis, u.basis);
	ASSERT_NE(kernel_tag_of(back.tag), nullptr);
	EXPECT_EQ(*kernel_tag_of(back.tag), *kernel_tag_of(u.tag));

	const SubspaceBasis c = build_uc(binomial_system(TensorShape{3, 3}));
	const SubspaceBasis cb = subspace_from_json(subspace_to_json(c));
	EXPECT_EQ(std::get<ConstraintTag>(cb.tag), std::get<ConstraintTag>(c.tag));
	EXPECT_DOUBLE_EQ(*certified_lower_bound(cb.tag), 1.0 / 6.0);
}

TEST(SubspaceJson, RejectsNonIsometry) {
	Json j = subspace_to_json(build_uc(ones_system(TensorShape{2, 2})));
	j["basis"]["entries"][1][0] = 3.0;
	EXPECT_THROW(subspace_from_json(j), ParameterError);
	Json k = subspace_to_json(build_uc(ones_system(TensorShape{2, 2})));
	k["ambient"] = Json::array({2, 3});
	EXPECT_THROW(subspace_from_json(k), ParameterError);
}

TEST(ReportJson, CertificateUsesStringsForIntegers) {
	const auto r = verify_certificate(2.0, BigInt(71), 2, CertificateMode::direct);
	const Json j = certificate_to_json(r);
	EXPECT_EQ(j["dim_exact"], "3676");
	EXPECT_EQ(j["n"], "71");
	EXPECT_EQ(j["evaluation"], "exact");
	EXPECT_TRUE(j["pass"].get<bool>());
}
