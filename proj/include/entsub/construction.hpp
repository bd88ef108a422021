#pragma once

#include "combinatorics.hpp"
#include "subspace.hpp"
#include "tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace entsub {

// ---------------------------------------------------------------------------
// Monomial basis and symmetric projectors
// ---------------------------------------------------------------------------

/**
 * Orthonormal monomial basis |alpha> of S^d(C^a), as vectors in (C^a)^{(x)d}.
 *
 * |alpha> has entry multinomial(alpha)^{-1/2} on every word whose letter counts
 * equal alpha, zero elsewhere. Order follows enumerate_multiindices(a, d).
 */
inline std::vector<CVector> monomial_basis(unsigned a, unsigned d, const Limits& limits = {}) {
	const auto alphas = enumerate_multiindices(a, d);
	const double ambient_d = std::pow(static_cast<double>(a), static_cast<double>(d));
	if (ambient_d > static_cast<double>(limits.max_ambient_dim)) {
		throw ResourceError("monomial_basis: a^d exceeds the ambient dimension cap");
	}
	const TensorShape words(std::vector<std::size_t>(d == 0 ? 1 : d, a));
	const std::size_t total = d == 0 ? 1 : words.total();

	std::vector<CVector> out(alphas.size(), CVector::Zero(static_cast<Eigen::Index>(total)));
	std::vector<double> weight(alphas.size());
	for (std::size_t k = 0; k < alphas.size(); ++k) {
		weight[k] = 1.0 / std::sqrt(to_double(alphas[k].multinomial()));
	}
	std::vector<unsigned> counts(a);
	for (std::size_t w = 0; w < total; ++w) {
		std::fill(counts.begin(), counts.end(), 0u);
		if (d > 0) {
			for (std::size_t pos = 0; pos < d; ++pos) {
				++counts[words.digit(w, pos)];
			}
		}
		const std::size_t k = multiindex_rank(MultiIndex(counts));
		out[k](static_cast<Eigen::Index>(w)) = weight[k];
	}
	return out;
}

/// Columns are the monomial basis vectors: the isometry S^d(C^a) -> (C^a)^{(x)d}.
inline CMatrix monomial_isometry(unsigned a, unsigned d, const Limits& limits = {}) {
	const auto vecs = monomial_basis(a, d, limits);
	CMatrix m(vecs.front().size(), static_cast<Eigen::Index>(vecs.size()));
	for (std::size_t k = 0; k < vecs.size(); ++k) {
		m.col(static_cast<Eigen::Index>(k)) = vecs[k];
	}
	return m;
}

/// (1/d!) sum_sigma U_sigma on (C^a)^{(x)d}, by explicit permutation averaging.
inline CMatrix symmetric_projector(unsigned a, unsigned d, const Limits& limits = {}) {
	if (a == 0 || d == 0) {
		throw ParameterError("symmetric_projector: a and d must be positive");
	}
	const double ambient_d = std::pow(static_cast<double>(a), static_cast<double>(d));
	if (ambient_d > static_cast<double>(limits.max_ambient_dim)) {
		throw ResourceError("symmetric_projector: a^d exceeds the ambient dimension cap");
	}
	const TensorShape words(std::vector<std::size_t>(d, a));
	const std::size_t total = words.total();
	limits.require_matrix(total, total, "symmetric_projector");

	std::vector<std::size_t> perm(d);
	std::vector<std::vector<std::size_t>> perms;
	std::iota(perm.begin(), perm.end(), 0);
	do {
		perms.push_back(perm);
	} while (std::next_permutation(perm.begin(), perm.end()));
	const double w = 1.0 / static_cast<double>(perms.size());

	CMatrix p = CMatrix::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
	std::vector<std::size_t> digits(d);
	std::vector<std::size_t> permuted(d);
	for (std::size_t src = 0; src < total; ++src) {
		digits = words.unravel(src);
		for (const auto& s : perms) {
			for (std::size_t pos = 0; pos < d; ++pos) {
				permuted[s[pos]] = digits[pos];
			}
			p(static_cast<Eigen::Index>(words.ravel(permuted)), static_cast<Eigen::Index>(src)) += w;
		}
	}
	return p;
}

/**
 * Pi_{a,d} on J_{a,d} = S^{d_1}(C^a) (x) ... (x) S^{d_m}(C^a) in product-of-monomial coordinates.
 *
 * `columns` holds the orthonormal vectors |beta^> spanning the image, one per
 * beta with |beta| = |d|: entry binom(|d|, beta)^{-1/2} C_alpha where the
 * columns alpha_i of alpha sum to beta, and C_alpha = prod_i binom(d_i, alpha_i)^{1/2}.
 */
struct BlockProjector {
	TensorShape shape; ///< (dim S^{d_1}, ..., dim S^{d_m})
	std::vector<MultiIndex> weights;
	CMatrix columns;

	CMatrix projector() const { return columns * columns.adjoint(); }
};

inline BlockProjector block_projector_factored(unsigned a, const std::vector<unsigned>& dvec,
                                               const Limits& limits = {}) {
	if (a == 0 || dvec.empty()) {
		throw ParameterError("block_projector: need a >= 1 and at least one degree");
	}
	std::vector<std::vector<MultiIndex>> factor_alphas;
	std::vector<std::size_t> dims;
	unsigned total_degree = 0;
	for (unsigned d : dvec) {
		if (d == 0) {
			throw ParameterError("block_projector: degrees must be positive");
		}
		factor_alphas.push_back(enumerate_multiindices(a, d));
		dims.push_back(factor_alphas.back().size());
		total_degree += d;
	}
	BlockProjector out{TensorShape(dims), enumerate_multiindices(a, total_degree), CMatrix()};
	limits.require_vector(out.shape.total(), "block_projector");
	limits.require_matrix(out.shape.total(), out.weights.size(), "block_projector");

	std::vector<std::vector<double>> sqrt_multinomial(dvec.size());
	for (std::size_t i = 0; i < dvec.size(); ++i) {
		for (const auto& alpha : factor_alphas[i]) {
			sqrt_multinomial[i].push_back(std::sqrt(to_double(alpha.multinomial())));
		}
	}
	std::vector<double> inv_sqrt_beta;
	for (const auto& beta : out.weights) {
		inv_sqrt_beta.push_back(1.0 / std::sqrt(to_double(beta.multinomial())));
	}

	out.columns = CMatrix::Zero(static_cast<Eigen::Index>(out.shape.total()),
	                            static_cast<Eigen::Index>(out.weights.size()));
	std::vector<unsigned> beta(a);
	for (std::size_t idx = 0; idx < out.shape.total(); ++idx) {
		std::fill(beta.begin(), beta.end(), 0u);
		double c_alpha = 1.0;
		for (std::size_t i = 0; i < dvec.size(); ++i) {
			const std::size_t k = out.shape.digit(idx, i);
			const auto& alpha = factor_alphas[i][k];
			for (std::size_t j = 0; j < a; ++j) {
				beta[j] += alpha.exponents[j];
			}
			c_alpha *= sqrt_multinomial[i][k];
		}
		const std::size_t b = multiindex_rank(MultiIndex(beta));
		out.columns(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(b)) = c_alpha * inv_sqrt_beta[b];
	}
	return out;
}

/// Dense Pi_{a,d} on J_{a,d} from the closed-form entry formula.
inline CMatrix block_projector(unsigned a, const std::vector<unsigned>& dvec, const Limits& limits = {}) {
	BlockProjector bp = block_projector_factored(a, dvec, limits);
	limits.require_matrix(bp.shape.total(), bp.shape.total(), "block_projector");
	return bp.projector();
}

/// Dense Pi_{a,d} as E^dagger Pi_sym(a, |d|) E with E the product of monomial isometries.
inline CMatrix block_projector_by_compression(unsigned a, const std::vector<unsigned>& dvec,
                                              const Limits& limits = {}) {
	if (dvec.empty()) {
		throw ParameterError("block_projector_by_compression: at least one degree required");
	}
	unsigned total_degree = 0;
	CMatrix e = monomial_isometry(a, dvec[0], limits);
	total_degree += dvec[0];
	for (std::size_t i = 1; i < dvec.size(); ++i) {
		e = kron(e, monomial_isometry(a, dvec[i], limits));
		total_degree += dvec[i];
	}
	const CMatrix sym = symmetric_projector(a, total_degree, limits);
	return e.adjoint() * sym * e;
}

// ---------------------------------------------------------------------------
// Coefficient-constrained subspaces U_{C,P}
// ---------------------------------------------------------------------------

/**
 * Constraints sum_{alpha in P_q} C_alpha psi_alpha = 0, one per cell of P.
 *
 * Coefficients and cells use 0-based linear indices into `shape`.
 */
struct ConstraintSystem {
	TensorShape shape;
	std::vector<double> coefficients;
	std::vector<std::vector<std::size_t>> cells;
	std::string coefficient_family = "custom";
	std::string partition_family = "custom";
	std::optional<KernelTag> equivalent_kernel;
};

/// Offending pair when P does not respect the coordinate orders.
struct PartitionOrderViolation {
	std::size_t index;       ///< alpha
	std::size_t lowered;     ///< alpha with one coordinate decreased
	std::size_t cell;        ///< cell of alpha
	std::size_t lower_cell;  ///< cell of the lowered index (must be < cell)
};

/// Structural checks on P; returns the first ordering violation if any.
inline std::optional<PartitionOrderViolation> check_partition(const ConstraintSystem& sys) {
	const std::size_t total = sys.shape.total();
	if (sys.coefficients.size() != total) {
		throw ParameterError("ConstraintSystem: need one coefficient per index of S");
	}
	for (double c : sys.coefficients) {
		if (!std::isfinite(c)) {
			throw ParameterError("ConstraintSystem: coefficients must be finite");
		}
	}
	constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
	std::vector<std::size_t> cell_of(total, kUnassigned);
	for (std::size_t q = 0; q < sys.cells.size(); ++q) {
		for (std::size_t idx : sys.cells[q]) {
			if (idx >= total || cell_of[idx] != kUnassigned) {
				throw ParameterError("ConstraintSystem: cells must be disjoint subsets of S");
			}
			cell_of[idx] = q;
		}
	}
	if (std::find(cell_of.begin(), cell_of.end(), kUnassigned) != cell_of.end()) {
		throw ParameterError("ConstraintSystem: cells must cover S");
	}
	// Lowering one coordinate by one step at a time reaches every gamma_i < alpha_i,
	// so checking single steps is equivalent to the full condition.
	for (std::size_t idx = 0; idx < total; ++idx) {
		for (std::size_t i = 0; i < sys.shape.factors(); ++i) {
			if (sys.shape.digit(idx, i) == 0) {
				continue;
			}
			const std::size_t lowered = idx - sys.shape.stride(i);
			if (cell_of[lowered] >= cell_of[idx]) {
				return PartitionOrderViolation{idx, lowered, cell_of[idx], cell_of[lowered]};
			}
		}
	}
	return std::nullopt;
}

/// Cells {alpha : |alpha| = k} in increasing k.
inline std::vector<std::vector<std::size_t>> level_set_partition(const TensorShape& shape) {
	std::size_t max_level = 0;
	for (std::size_t n : shape.dims()) {
		max_level += n - 1;
	}
	std::vector<std::vector<std::size_t>> cells(max_level + 1);
	for (std::size_t idx = 0; idx < shape.total(); ++idx) {
		std::size_t level = 0;
		for (std::size_t i = 0; i < shape.factors(); ++i) {
			level += shape.digit(idx, i);
		}
		cells[level].push_back(idx);
	}
	return cells;
}

inline ConstraintSystem ones_system(const TensorShape& shape) {
	return ConstraintSystem{shape, std::vector<double>(shape.total(), 1.0), level_set_partition(shape),
	                        "ones", "level-set", std::nullopt};
}

/**
 * Level-set system with C_alpha = prod_i binom(n_i - 1, alpha_i)^{1/2} (0-based alpha_i).
 *
 * This is the coordinate form of U_{2,(n_1-1,...,n_m-1)}.
 */
inline ConstraintSystem binomial_system(const TensorShape& shape) {
	std::vector<double> coeffs(shape.total());
	std::vector<unsigned> dvec;
	for (std::size_t n : shape.dims()) {
		dvec.push_back(static_cast<unsigned>(n - 1));
	}
	for (std::size_t idx = 0; idx < shape.total(); ++idx) {
		double c = 1.0;
		for (std::size_t i = 0; i < shape.factors(); ++i) {
			c *= std::sqrt(to_double(binomial(std::uint64_t{dvec[i]}, static_cast<unsigned>(shape.digit(idx, i)))));
		}
		coeffs[idx] = c;
	}
	std::optional<KernelTag> kernel;
	if (std::all_of(dvec.begin(), dvec.end(), [](unsigned d) { return d > 0; })) {
		kernel = KernelTag{2, dvec, shape.dims()};
	}
	return ConstraintSystem{shape, std::move(coeffs), level_set_partition(shape), "binomial", "level-set",
	                        std::move(kernel)};
}

/**
 * Weight-partition system describing ker(Pi_{a,d}) restricted to the first n_i
 * monomials of each factor.
 *
 * Index k of factor i is the k-th multi-index of enumerate_multiindices(a, d_i);
 * cells group indices by beta = alpha_1 + ... + alpha_m, in lexicographically
 * descending beta, and C_alpha = prod_i multinomial(alpha_i)^{1/2}.
 */
inline ConstraintSystem symmetric_kernel_system(unsigned a, const std::vector<unsigned>& dvec,
                                                const std::vector<std::size_t>& nvec) {
	if (dvec.size() != nvec.size() || dvec.empty()) {
		throw ParameterError("symmetric_kernel_system: dvec and nvec must have equal non-zero length");
	}
	std::vector<std::vector<MultiIndex>> factor_alphas;
	unsigned total_degree = 0;
	for (std::size_t i = 0; i < dvec.size(); ++i) {
		factor_alphas.push_back(enumerate_multiindices(a, dvec[i]));
		if (nvec[i] == 0 || nvec[i] > factor_alphas.back().size()) {
			throw ParameterError("symmetric_kernel_system: factor " + std::to_string(i) + " has n = " +
			                     std::to_string(nvec[i]) + " outside [1, dim S^d(C^a)]");
		}
		total_degree += dvec[i];
	}
	const TensorShape shape(nvec);
	const auto betas = enumerate_multiindices(a, total_degree);
	std::vector<std::vector<std::size_t>> by_beta(betas.size());
	std::vector<double> coeffs(shape.total());
	std::vector<unsigned> beta(a);
	for (std::size_t idx = 0; idx < shape.total(); ++idx) {
		std::fill(beta.begin(), beta.end(), 0u);
		double c = 1.0;
		for (std::size_t i = 0; i < dvec.size(); ++i) {
			const auto& alpha = factor_alphas[i][shape.digit(idx, i)];
			for (std::size_t j = 0; j < a; ++j) {
				beta[j] += alpha.exponents[j];
			}
			c *= std::sqrt(to_double(alpha.multinomial()));
		}
		coeffs[idx] = c;
		by_beta[multiindex_rank(MultiIndex(beta))].push_back(idx);
	}
	std::vector<std::vector<std::size_t>> cells;
	for (auto& cell : by_beta) {
		if (!cell.empty()) {
			cells.push_back(std::move(cell));
		}
	}
	return ConstraintSystem{shape, std::move(coeffs), std::move(cells), "symmetric-kernel", "weight",
	                        KernelTag{a, dvec, nvec}};
}

/// Rows of the constraint system, each scaled to unit Euclidean norm (all-zero rows dropped).
inline CMatrix constraint_matrix(const ConstraintSystem& sys) {
	std::vector<Eigen::Index> keep;
	CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(sys.cells.size()),
	                          static_cast<Eigen::Index>(sys.shape.total()));
	Eigen::Index row = 0;
	for (const auto& cell : sys.cells) {
		double norm2 = 0.0;
		for (std::size_t idx : cell) {
			norm2 += sys.coefficients[idx] * sys.coefficients[idx];
		}
		if (norm2 == 0.0) {
			continue;
		}
		const double inv = 1.0 / std::sqrt(norm2);
		for (std::size_t idx : cell) {
			m(row, static_cast<Eigen::Index>(idx)) = sys.coefficients[idx] * inv;
		}
		++row;
	}
	return m.topRows(row);
}

inline SubspaceBasis build_uc(const ConstraintSystem& sys, double tol = kRankTolerance) {
	if (auto bad = check_partition(sys)) {
		const auto a = sys.shape.unravel(bad->index);
		const auto b = sys.shape.unravel(bad->lowered);
		auto fmt = [](const std::vector<std::size_t>& v) {
			std::string s = "(";
			for (std::size_t i = 0; i < v.size(); ++i) {
				s += (i ? "," : "") + std::to_string(v[i] + 1);
			}
			return s + ")";
		};
		throw ParameterError("build_uc: partition does not respect the coordinate order: " + fmt(a) +
		                     " is in cell " + std::to_string(bad->cell) + " but " + fmt(b) + " is in cell " +
		                     std::to_string(bad->lower_cell));
	}
	NullSpace ns = null_space_orthonormal(constraint_matrix(sys), tol);
	return SubspaceBasis{sys.shape, std::move(ns.basis),
	                     ConstraintTag{sys.coefficient_family, sys.partition_family, sys.shape.dims(),
	                                   sys.equivalent_kernel}};
}

// ---------------------------------------------------------------------------
// Kernel subspaces U_{a,d}
// ---------------------------------------------------------------------------

enum class ProjectorRoute {
	automatic,           ///< dense projector when it fits the caps, factored otherwise
	dense_formula,       ///< null(Pi_J E_H) with Pi_J from the entry formula
	factored,            ///< null(V^T E_H) with V the orthonormal image columns
	permutation_average, ///< null(Pi_J E_H) with Pi_J compressed from the full symmetrizer
};

struct KernelOptions {
	ProjectorRoute route = ProjectorRoute::automatic;
	double tol = kRankTolerance;
	Limits limits{};
};

/// Lower bound prod n_i - dim S^{|d|}(C^a) on dim U_{a,d} (exact when the n_i are maximal).
inline BigInt kernel_dim_lower_bound(unsigned a, const std::vector<unsigned>& dvec,
                                     const std::vector<std::size_t>& nvec) {
	BigInt prod = 1;
	for (std::size_t n : nvec) {
		prod *= n;
	}
	const unsigned total = std::accumulate(dvec.begin(), dvec.end(), 0u);
	return prod - symmetric_dim(a, total);
}

inline SubspaceBasis build_kernel_subspace(unsigned a, const std::vector<unsigned>& dvec,
                                           const std::vector<std::size_t>& nvec,
                                           const KernelOptions& opt = {}) {
	if (a == 0 || dvec.empty() || dvec.size() != nvec.size()) {
		throw ParameterError("build_kernel_subspace: need a >= 1 and matching non-empty dvec/nvec");
	}
	std::vector<std::size_t> jdims;
	for (std::size_t i = 0; i < dvec.size(); ++i) {
		if (dvec[i] == 0) {
			throw ParameterError("build_kernel_subspace: factor " + std::to_string(i) + " has degree 0");
		}
		const BigInt sdim = symmetric_dim(a, dvec[i]);
		if (nvec[i] == 0 || BigInt(nvec[i]) > sdim) {
			throw ParameterError("build_kernel_subspace: factor " + std::to_string(i) + " has n = " +
			                     std::to_string(nvec[i]) + " but dim S^" + std::to_string(dvec[i]) + "(C^" +
			                     std::to_string(a) + ") = " + sdim.str());
		}
		jdims.push_back(sdim.convert_to<std::size_t>());
	}
	const TensorShape h(nvec);
	const TensorShape j(jdims);
	opt.limits.require_vector(j.total(), "build_kernel_subspace");

	// J index of each embedded basis vector: the first n_i monomials of each factor.
	std::vector<Eigen::Index> embed(h.total());
	for (std::size_t idx = 0; idx < h.total(); ++idx) {
		embed[idx] = static_cast<Eigen::Index>(j.ravel(h.unravel(idx)));
	}

	ProjectorRoute route = opt.route;
	if (route == ProjectorRoute::automatic) {
		const bool dense_fits = j.total() <= opt.limits.max_dense_entries / std::max<std::size_t>(j.total(), 1);
		route = dense_fits ? ProjectorRoute::dense_formula : ProjectorRoute::factored;
	}

	CMatrix constraints;
	if (route == ProjectorRoute::factored) {
		const BlockProjector bp = block_projector_factored(a, dvec, opt.limits);
		opt.limits.require_matrix(bp.weights.size(), h.total(), "build_kernel_subspace");
		constraints.resize(bp.columns.cols(), static_cast<Eigen::Index>(h.total()));
		for (std::size_t idx = 0; idx < h.total(); ++idx) {
			constraints.col(static_cast<Eigen::Index>(idx)) = bp.columns.row(embed[idx]).transpose();
		}
	} else {
		const CMatrix pj = route == ProjectorRoute::permutation_average
		                       ? block_projector_by_compression(a, dvec, opt.limits)
		                       : block_projector(a, dvec, opt.limits);
		constraints.resize(pj.rows(), static_cast<Eigen::Index>(h.total()));
		for (std::size_t idx = 0; idx < h.total(); ++idx) {
			constraints.col(static_cast<Eigen::Index>(idx)) = pj.col(embed[idx]);
		}
	}
	NullSpace ns = null_space_orthonormal(constraints, opt.tol);
	return SubspaceBasis{h, std::move(ns.basis), KernelTag{a, dvec, nvec}};
}

/// Result of comparing two subspaces through their projectors.
struct Equivalence {
	bool equivalent = false;
	double distance = 0.0; ///< ||Pi_A - Pi_B||_F
};

inline Equivalence equivalence_check(const SubspaceBasis& x, const SubspaceBasis& y, double tol = 1e-10) {
	if (!(x.ambient == y.ambient)) {
		throw ParameterError("equivalence_check: subspaces live in different ambient spaces");
	}
	const double dist = (x.projector() - y.projector()).norm();
	return Equivalence{dist <= tol, dist};
}

/// n_1...n_m - sum n_i + m - 1, the largest dimension of a completely entangled subspace.
inline BigInt max_entangled_dim(const std::vector<std::size_t>& nvec) {
	if (nvec.empty()) {
		throw ParameterError("max_entangled_dim: at least one factor required");
	}
	BigInt prod = 1;
	BigInt sum = 0;
	for (std::size_t n : nvec) {
		prod *= n;
		sum += n;
	}
	return prod - sum + static_cast<long>(nvec.size()) - 1;
}

} // namespace entsub
