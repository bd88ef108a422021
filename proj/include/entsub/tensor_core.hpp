#pragma once

#include "combinatorics.hpp"
#include "errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace entsub {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kUnitTolerance = 1e-10;

/**
 * Dimensions (n_1, ..., n_m) of a tensor product space.
 *
 * Linear indices are row-major over (i_1, ..., i_m) with i_1 slowest.
 */
class TensorShape {
public:
	TensorShape() = default;
	explicit TensorShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
		if (dims_.empty()) {
			throw ParameterError("TensorShape: at least one factor required");
		}
		total_ = 1;
		for (std::size_t n : dims_) {
			if (n == 0) {
				throw ParameterError("TensorShape: factor dimensions must be positive");
			}
			if (total_ > static_cast<std::size_t>(-1) / n) {
				throw ResourceError("TensorShape: total dimension overflows size_t");
			}
			total_ *= n;
		}
		strides_.assign(dims_.size(), 1);
		for (std::size_t i = dims_.size() - 1; i > 0; --i) {
			strides_[i - 1] = strides_[i] * dims_[i];
		}
	}
	TensorShape(std::initializer_list<std::size_t> dims) : TensorShape(std::vector<std::size_t>(dims)) {}

	std::size_t factors() const { return dims_.size(); }
	std::size_t dim(std::size_t i) const { return dims_.at(i); }
	const std::vector<std::size_t>& dims() const { return dims_; }
	std::size_t total() const { return total_; }
	std::size_t stride(std::size_t i) const { return strides_.at(i); }

	std::size_t digit(std::size_t index, std::size_t factor) const {
		return (index / strides_[factor]) % dims_[factor];
	}

	std::vector<std::size_t> unravel(std::size_t index) const {
		std::vector<std::size_t> out(dims_.size());
		for (std::size_t i = 0; i < dims_.size(); ++i) {
			out[i] = digit(index, i);
		}
		return out;
	}

	std::size_t ravel(std::span<const std::size_t> digits) const {
		if (digits.size() != dims_.size()) {
			throw ParameterError("TensorShape::ravel: wrong number of digits");
		}
		std::size_t idx = 0;
		for (std::size_t i = 0; i < dims_.size(); ++i) {
			if (digits[i] >= dims_[i]) {
				throw ParameterError("TensorShape::ravel: digit out of range");
			}
			idx += digits[i] * strides_[i];
		}
		return idx;
	}

	friend bool operator==(const TensorShape& l, const TensorShape& r) { return l.dims_ == r.dims_; }

private:
	std::vector<std::size_t> dims_;
	std::vector<std::size_t> strides_;
	std::size_t total_ = 0;
};

/// Split of the factor indices {0, ..., m-1} into two disjoint non-empty blocks.
struct Bipartition {
	std::vector<std::size_t> block_a;
	std::vector<std::size_t> block_b;

	/// Factors in `block_a` against all remaining factors.
	static Bipartition complement_of(std::vector<std::size_t> block_a, std::size_t factors) {
		Bipartition cut;
		std::sort(block_a.begin(), block_a.end());
		for (std::size_t i = 0; i < factors; ++i) {
			if (!std::binary_search(block_a.begin(), block_a.end(), i)) {
				cut.block_b.push_back(i);
			}
		}
		cut.block_a = std::move(block_a);
		return cut;
	}

	Bipartition swapped() const { return {block_b, block_a}; }

	void validate(std::size_t factors) const {
		if (block_a.empty() || block_b.empty()) {
			throw ParameterError("Bipartition: both blocks must be non-empty");
		}
		std::vector<bool> seen(factors, false);
		for (const auto* blk : {&block_a, &block_b}) {
			for (std::size_t i : *blk) {
				if (i >= factors || seen[i]) {
					throw ParameterError("Bipartition: blocks must partition the factor indices");
				}
				seen[i] = true;
			}
		}
		if (block_a.size() + block_b.size() != factors) {
			throw ParameterError("Bipartition: blocks must cover every factor");
		}
	}
};

/// Maps linear tensor indices to (row, col) of the matrix reshaping under a bipartition.
class BipartiteReshaper {
public:
	BipartiteReshaper(const TensorShape& shape, const Bipartition& cut) {
		cut.validate(shape.factors());
		rows_ = 1;
		cols_ = 1;
		for (std::size_t i : cut.block_a) {
			rows_ *= shape.dim(i);
		}
		for (std::size_t i : cut.block_b) {
			cols_ *= shape.dim(i);
		}
		row_of_.resize(shape.total());
		col_of_.resize(shape.total());
		for (std::size_t idx = 0; idx < shape.total(); ++idx) {
			std::size_t r = 0;
			std::size_t c = 0;
			for (std::size_t i : cut.block_a) {
				r = r * shape.dim(i) + shape.digit(idx, i);
			}
			for (std::size_t i : cut.block_b) {
				c = c * shape.dim(i) + shape.digit(idx, i);
			}
			row_of_[idx] = r;
			col_of_[idx] = c;
		}
	}

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }

	CMatrix reshape(const CVector& psi) const {
		CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
		for (std::size_t idx = 0; idx < row_of_.size(); ++idx) {
			m(static_cast<Eigen::Index>(row_of_[idx]), static_cast<Eigen::Index>(col_of_[idx])) =
			    psi(static_cast<Eigen::Index>(idx));
		}
		return m;
	}

	/// Inverse of reshape.
	CVector flatten(const CMatrix& m) const {
		CVector v(static_cast<Eigen::Index>(row_of_.size()));
		for (std::size_t idx = 0; idx < row_of_.size(); ++idx) {
			v(static_cast<Eigen::Index>(idx)) =
			    m(static_cast<Eigen::Index>(row_of_[idx]), static_cast<Eigen::Index>(col_of_[idx]));
		}
		return v;
	}

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<std::size_t> row_of_;
	std::vector<std::size_t> col_of_;
};

/// Singular values with thin U and (thin or full) V.
template <class Mat>
struct SvdFactors {
	Eigen::VectorXd singular_values;
	Mat u;
	Mat v;
};

/// BDCSVD checked by reconstruction, with a two-sided Jacobi fallback.
template <class Mat>
SvdFactors<Mat> checked_svd(const Mat& m, bool full_v) {
	const unsigned opts = Eigen::ComputeThinU | (full_v ? Eigen::ComputeFullV : Eigen::ComputeThinV);
	const Eigen::Index k = std::min(m.rows(), m.cols());
	const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
	auto reconstruction_ok = [&](const SvdFactors<Mat>& f) {
		const Mat back = f.u * f.singular_values.asDiagonal() * f.v.leftCols(k).adjoint();
		return (m - back).norm() <= 1e-11 * scale;
	};
	{
		Eigen::BDCSVD<Mat> svd(m, opts);
		SvdFactors<Mat> f{svd.singularValues(), svd.matrixU(), svd.matrixV()};
		if (reconstruction_ok(f)) {
			return f;
		}
	}
	Eigen::JacobiSVD<Mat> svd(m, opts);
	return SvdFactors<Mat>{svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

/// Squared Schmidt coefficients, descending, of a unit vector across a bipartition.
struct SchmidtSpectrum {
	std::vector<double> lambdas;
	Bipartition cut;
};

inline SchmidtSpectrum schmidt(const CVector& psi, const TensorShape& shape, const Bipartition& cut,
                               double unit_tol = kUnitTolerance) {
	if (static_cast<std::size_t>(psi.size()) != shape.total()) {
		throw ParameterError("schmidt: vector length does not match the tensor shape");
	}
	const double norm = psi.norm();
	if (!std::isfinite(norm) || std::abs(norm - 1.0) > unit_tol) {
		throw NormalizationError("schmidt: input must have unit norm (got " + std::to_string(norm) + ")");
	}
	BipartiteReshaper reshaper(shape, cut);
	CMatrix m = reshaper.reshape(psi / norm);
	const Eigen::VectorXd sv = checked_svd(m, false).singular_values;
	SchmidtSpectrum out;
	out.cut = cut;
	out.lambdas.resize(static_cast<std::size_t>(sv.size()));
	for (Eigen::Index i = 0; i < sv.size(); ++i) {
		out.lambdas[static_cast<std::size_t>(i)] = sv(i) * sv(i);
	}
	std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
	return out;
}

/// Orthonormal kernel basis plus the numerical rank used to obtain it.
struct NullSpace {
	CMatrix basis;
	std::size_t rank = 0;
	std::vector<double> singular_values;
};

/**
 * Kernel of M via a full SVD.
 *
 * Singular values at or below tol * sigma_max count as zero, so
 * basis.cols() + rank == M.cols() always holds.
 */
inline NullSpace null_space_orthonormal(const CMatrix& m, double tol = kRankTolerance) {
	if (!(tol > 0)) {
		throw ParameterError("null_space_orthonormal: tol must be positive");
	}
	const Eigen::Index cols = m.cols();
	NullSpace out;
	if (m.rows() == 0 || cols == 0) {
		out.basis = CMatrix::Identity(cols, cols);
		return out;
	}
	CMatrix v;
	Eigen::VectorXd sv;
	if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
		// Real input: a real SVD gives the same kernel at a quarter of the cost.
		Eigen::MatrixXd mr = m.real();
		auto svd = checked_svd(mr, true);
		sv = svd.singular_values;
		v = svd.v.cast<Complex>();
	} else {
		auto svd = checked_svd(m, true);
		sv = std::move(svd.singular_values);
		v = std::move(svd.v);
	}
	const double smax = sv.size() > 0 ? sv(0) : 0.0;
	std::size_t rank = 0;
	for (Eigen::Index i = 0; i < sv.size(); ++i) {
		if (sv(i) > tol * smax) {
			++rank;
		}
	}
	out.rank = rank;
	out.singular_values.assign(sv.data(), sv.data() + sv.size());
	out.basis = v.rightCols(cols - static_cast<Eigen::Index>(rank));
	return out;
}

/// Kronecker product of vectors, first argument slowest.
inline CVector kron(const CVector& x, const CVector& y) {
	CVector out(x.size() * y.size());
	for (Eigen::Index i = 0; i < x.size(); ++i) {
		out.segment(i * y.size(), y.size()) = x(i) * y;
	}
	return out;
}

inline CVector kron_all(std::span<const CVector> factors) {
	if (factors.empty()) {
		throw ParameterError("kron_all: at least one factor required");
	}
	CVector out = factors[0];
	for (std::size_t i = 1; i < factors.size(); ++i) {
		out = kron(out, factors[i]);
	}
	return out;
}

inline CMatrix kron(const CMatrix& x, const CMatrix& y) {
	CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
	for (Eigen::Index i = 0; i < x.rows(); ++i) {
		for (Eigen::Index j = 0; j < x.cols(); ++j) {
			out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
		}
	}
	return out;
}

inline bool all_finite(const CMatrix& m) { return m.allFinite(); }

} // namespace entsub
