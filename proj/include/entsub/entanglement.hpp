#pragma once

#include "construction.hpp"
#include "multistart.hpp"
#include "subspace.hpp"
#include "tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace entsub {

// ---------------------------------------------------------------------------
// Renyi entropies
// ---------------------------------------------------------------------------

/// Renyi p-entropy in bits; p = 1 is the Shannon limit, zero weights contribute nothing.
inline double renyi_entropy(std::span<const double> lambdas, double p) {
	if (!(p > 0) || !std::isfinite(p)) {
		throw ParameterError("renyi_entropy: p must be positive and finite");
	}
	if (p == 1.0) {
		double h = 0.0;
		for (double l : lambdas) {
			if (l > 0) {
				h -= l * std::log2(l);
			}
		}
		return h;
	}
	double s = 0.0;
	for (double l : lambdas) {
		if (l > 0) {
			s += std::pow(l, p);
		}
	}
	return std::log2(s) / (1.0 - p);
}

inline double renyi_entropy(const SchmidtSpectrum& spec, double p) { return renyi_entropy(spec.lambdas, p); }

/// (1/(1-p)) log2(E^p + (1-E)^p): lower bound on H_min,p(U) from E(U) >= E.
inline double hmin_lower_bound(double e_lower, double p) {
	if (!(e_lower > 0 && e_lower < 1)) {
		throw ParameterError("hmin_lower_bound: E must lie in (0, 1)");
	}
	if (!(p > 1) || !std::isfinite(p)) {
		throw ParameterError("hmin_lower_bound: p must exceed 1");
	}
	// p ln(1-E) + ln(1 + (E/(1-E))^p), accurate for tiny E.
	const double t = std::pow(e_lower / (1.0 - e_lower), p);
	const double ln_sum = p * std::log1p(-e_lower) + std::log1p(t);
	return ln_sum / ((1.0 - p) * std::numbers::ln2);
}

/// (p/(1-p)) log2(dim U / (n_A n_B)): upper bound on H_min,p(U (x) conj U).
inline double hmin_tensor_upper_bound(std::uint64_t dim_u, std::uint64_t n_a, std::uint64_t n_b, double p) {
	if (n_a == 0 || n_b == 0 || dim_u == 0 || dim_u > n_a * n_b) {
		throw ParameterError("hmin_tensor_upper_bound: need 1 <= dim U <= n_A n_B");
	}
	if (!(p > 1) || !std::isfinite(p)) {
		throw ParameterError("hmin_tensor_upper_bound: p must exceed 1");
	}
	const double ratio = static_cast<double>(dim_u) / (static_cast<double>(n_a) * static_cast<double>(n_b));
	return p / (1.0 - p) * std::log2(ratio);
}

// ---------------------------------------------------------------------------
// Geometric measure of entanglement
// ---------------------------------------------------------------------------

struct ProductState {
	std::vector<CVector> factors;

	CVector tensor() const { return kron_all(factors); }
};

struct TrialRecord {
	double objective = 0.0; ///< best <phi|Pi_U|phi> reached
	std::size_t sweeps = 0;
	bool converged = false;
	bool monotone = true;
	double worst_step = 0.0; ///< most negative single-update change (0 if monotone)
};

/// E(U) bracket: certified_lower <= E(U) <= numerical_upper.
struct EntanglementEstimate {
	std::optional<double> certified_lower;
	double numerical_upper = 1.0;
	ProductState best_product_state;
	std::size_t trials = 0;
	std::size_t converged_trials = 0;
	std::uint64_t seed = 0;
	std::vector<TrialRecord> trace;
};

struct GeometricMeasureOptions {
	std::size_t trials = 64;
	std::size_t max_iters = 500;
	double tol = 1e-12;
	std::uint64_t seed = 0;
	std::size_t threads = 1;
};

inline CVector random_unit_vector(std::size_t n, Rng& rng) {
	std::normal_distribution<double> gauss(0.0, 1.0);
	CVector v(static_cast<Eigen::Index>(n));
	for (Eigen::Index i = 0; i < v.size(); ++i) {
		const double re = gauss(rng);
		const double im = gauss(rng);
		v(i) = Complex(re, im);
	}
	return v / v.norm();
}

namespace detail {

/// Alternating maximization of ||B^dagger (phi_1 (x) ... (x) phi_m)||^2 from one start.
struct AlsRun {
	const SubspaceBasis& u;
	std::size_t max_iters;
	double tol;

	std::pair<TrialRecord, ProductState> operator()(Rng& rng) const {
		const TensorShape& shape = u.ambient;
		const std::size_t m = shape.factors();
		const auto n_total = static_cast<Eigen::Index>(shape.total());
		const Eigen::Index ell = u.basis.cols();

		ProductState phi;
		for (std::size_t i = 0; i < m; ++i) {
			phi.factors.push_back(random_unit_vector(shape.dim(i), rng));
		}

		TrialRecord rec;
		rec.objective = (u.basis.adjoint() * phi.tensor()).squaredNorm();
		double current = rec.objective;
		CVector weights(n_total);
		for (std::size_t sweep = 0; sweep < max_iters; ++sweep) {
			const double before = current;
			for (std::size_t i = 0; i < m; ++i) {
				// W(j, k) = sum over indices with digit_i = j of prod_{l != i} conj(phi_l) * u_k.
				CMatrix w = CMatrix::Zero(static_cast<Eigen::Index>(shape.dim(i)), ell);
				for (Eigen::Index idx = 0; idx < n_total; ++idx) {
					Complex c(1.0, 0.0);
					for (std::size_t l = 0; l < m; ++l) {
						if (l != i) {
							c *= std::conj(phi.factors[l](static_cast<Eigen::Index>(
							    shape.digit(static_cast<std::size_t>(idx), l))));
						}
					}
					weights(idx) = c;
				}
				for (Eigen::Index idx = 0; idx < n_total; ++idx) {
					const auto j = static_cast<Eigen::Index>(shape.digit(static_cast<std::size_t>(idx), i));
					w.row(j) += weights(idx) * u.basis.row(idx);
				}
				Eigen::SelfAdjointEigenSolver<CMatrix> eig(w * w.adjoint());
				const Eigen::Index top = eig.eigenvalues().size() - 1;
				const double value = eig.eigenvalues()(top);
				phi.factors[i] = eig.eigenvectors().col(top);
				const double delta = value - current;
				if (delta < -1e-12 * std::max(1.0, current)) {
					rec.monotone = false;
					rec.worst_step = std::min(rec.worst_step, delta);
				}
				current = value;
			}
			rec.sweeps = sweep + 1;
			if (current - before <= tol * std::max(current, std::numeric_limits<double>::min())) {
				rec.converged = true;
				break;
			}
		}
		// Recompute the objective from the final state rather than trusting the eigenvalue.
		rec.objective = std::min(1.0, (u.basis.adjoint() * phi.tensor()).squaredNorm());
		return {rec, std::move(phi)};
	}
};

} // namespace detail

/**
 * Multistart alternating eigen-optimization for max over product states of
 * <phi|Pi_U|phi>. numerical_upper = 1 - best overlap is an upper bound on E(U).
 */
inline EntanglementEstimate geometric_measure(const SubspaceBasis& u, const GeometricMeasureOptions& opt = {}) {
	if (u.dim() == 0) {
		throw ParameterError("geometric_measure: subspace must be non-zero");
	}
	if (opt.trials == 0) {
		throw ParameterError("geometric_measure: at least one trial required");
	}
	detail::AlsRun run{u, opt.max_iters, opt.tol};
	using Trial = std::pair<TrialRecord, ProductState>;
	auto results = run_indexed<Trial>(opt.trials, opt.threads, [&](std::size_t t) {
		Rng rng(derive_seed(opt.seed, t));
		return run(rng);
	});

	EntanglementEstimate est;
	est.trials = opt.trials;
	est.seed = opt.seed;
	std::size_t best = 0;
	for (std::size_t t = 0; t < results.size(); ++t) {
		est.trace.push_back(results[t].first);
		if (results[t].first.converged) {
			++est.converged_trials;
		}
		if (results[t].first.objective > results[best].first.objective) {
			best = t;
		}
	}
	est.numerical_upper = std::clamp(1.0 - results[best].first.objective, 0.0, 1.0);
	est.best_product_state = std::move(results[best].second);
	return est;
}

/// Records a certified lower bound, refusing one that exceeds the numerical upper bound.
inline void attach_certified_lower(EntanglementEstimate& est, double lower, double slack = 1e-9) {
	if (!(lower >= 0 && lower <= 1)) {
		throw ParameterError("attach_certified_lower: bound must lie in [0, 1]");
	}
	if (lower > est.numerical_upper + slack) {
		throw BoundViolation("certified lower bound " + std::to_string(lower) +
		                     " exceeds the numerical upper bound " + std::to_string(est.numerical_upper));
	}
	est.certified_lower = lower;
}

// ---------------------------------------------------------------------------
// Minimum output entropy
// ---------------------------------------------------------------------------

struct EntropyEstimate {
	double p = 2.0;
	double value_upper = 0.0; ///< best H_p found; an upper bound on H_min,p(U)
	CVector argmin_vector;
	std::optional<double> bound_lower;
	Bipartition cut;
	std::size_t trials = 0;
	std::uint64_t seed = 0;
};

struct EntropyOptions {
	std::size_t trials = 64;
	std::size_t max_iters = 500;
	double tol = 1e-12;
	std::uint64_t seed = 0;
	std::size_t threads = 1;
};

namespace detail {

/// H_p of B c across the cut and its Wirtinger gradient with respect to conj(c).
struct EntropyObjective {
	const SubspaceBasis& u;
	const BipartiteReshaper& reshaper;
	double p;

	double value(const CVector& c) const { return evaluate(c, nullptr); }

	double evaluate(const CVector& c, CVector* grad) const {
		const CVector psi = u.basis * c;
		const CMatrix x = reshaper.reshape(psi);
		const bool left = x.rows() <= x.cols();
		const CMatrix gram = left ? CMatrix(x * x.adjoint()) : CMatrix(x.adjoint() * x);
		Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
		Eigen::VectorXd lambdas = eig.eigenvalues().cwiseMax(0.0);
		const std::vector<double> lv(lambdas.data(), lambdas.data() + lambdas.size());
		const double h = renyi_entropy(lv, p);
		if (grad != nullptr) {
			Eigen::VectorXd dphi(lambdas.size());
			const double s = p == 1.0 ? 0.0 : [&] {
				double acc = 0.0;
				for (double l : lv) {
					acc += l > 0 ? std::pow(l, p) : 0.0;
				}
				return acc;
			}();
			for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
				const double l = std::max(lambdas(i), 1e-30);
				dphi(i) = p == 1.0 ? -(std::log(l) + 1.0) / std::numbers::ln2
				                   : p * std::pow(l, p - 1.0) / ((1.0 - p) * s * std::numbers::ln2);
			}
			const CMatrix fprime = eig.eigenvectors() * dphi.asDiagonal() * eig.eigenvectors().adjoint();
			const CMatrix gx = left ? CMatrix(fprime * x) : CMatrix(x * fprime);
			*grad = u.basis.adjoint() * reshaper.flatten(gx);
		}
		return h;
	}
};

/// Riemannian gradient descent with Armijo backtracking on the unit sphere of C^ell.
inline std::pair<double, CVector> minimize_entropy_from(const EntropyObjective& obj, CVector c,
                                                        std::size_t max_iters, double tol) {
	CVector grad;
	double f = obj.evaluate(c, &grad);
	double step = 1.0;
	for (std::size_t it = 0; it < max_iters; ++it) {
		const Complex radial = c.dot(grad); // c^dagger grad
		CVector g = grad - radial.real() * c;
		const double g2 = g.squaredNorm();
		if (g2 < 1e-28) {
			break;
		}
		bool accepted = false;
		CVector trial;
		double f_trial = f;
		for (int bt = 0; bt < 60; ++bt) {
			trial = c - step * g;
			trial /= trial.norm();
			f_trial = obj.value(trial);
			if (f_trial <= f - 1e-4 * 2.0 * step * g2) {
				accepted = true;
				break;
			}
			step *= 0.5;
		}
		if (!accepted) {
			break;
		}
		const double improvement = f - f_trial;
		c = trial;
		f = obj.evaluate(c, &grad);
		step = std::min(step * 2.0, 1e6);
		if (improvement <= tol * std::max(1.0, std::abs(f))) {
			break;
		}
	}
	return {f, c};
}

} // namespace detail

/**
 * Multistart local minimization of H_p over unit vectors of U.
 *
 * The returned value is an upper bound on H_min,p(U). When `e_lower` is a
 * certified lower bound on E(U) and p > 1, bound_lower carries hmin_lower_bound.
 */
inline EntropyEstimate min_output_entropy(const SubspaceBasis& u, double p, const Bipartition& cut,
                                          const EntropyOptions& opt = {},
                                          std::optional<double> e_lower = std::nullopt) {
	if (!(p > 0) || !std::isfinite(p)) {
		throw ParameterError("min_output_entropy: p must be positive and finite");
	}
	if (u.dim() == 0) {
		throw ParameterError("min_output_entropy: subspace must be non-zero");
	}
	if (opt.trials == 0) {
		throw ParameterError("min_output_entropy: at least one trial required");
	}
	const BipartiteReshaper reshaper(u.ambient, cut);
	const detail::EntropyObjective obj{u, reshaper, p};
	using Trial = std::pair<double, CVector>;
	auto results = run_indexed<Trial>(opt.trials, opt.threads, [&](std::size_t t) {
		Rng rng(derive_seed(opt.seed, t));
		CVector c0 = random_unit_vector(u.dim(), rng);
		return detail::minimize_entropy_from(obj, std::move(c0), opt.max_iters, opt.tol);
	});
	std::size_t best = 0;
	for (std::size_t t = 1; t < results.size(); ++t) {
		if (results[t].first < results[best].first) {
			best = t;
		}
	}
	EntropyEstimate est;
	est.p = p;
	est.value_upper = results[best].first;
	est.argmin_vector = u.basis * results[best].second;
	est.cut = cut;
	est.trials = opt.trials;
	est.seed = opt.seed;
	if (e_lower && p > 1 && *e_lower > 0 && *e_lower < 1) {
		est.bound_lower = hmin_lower_bound(*e_lower, p);
	}
	return est;
}

// ---------------------------------------------------------------------------
// U (x) conj(U)
// ---------------------------------------------------------------------------

/// (1/sqrt(l)) sum_k u_k (x) conj(u_k), laid out on (A A') x (B B').
struct CanonicalState {
	CVector state;
	TensorShape shape; ///< (n_A^2, n_B^2)
	Bipartition cut{{0}, {1}};
};

inline CanonicalState canonical_tensor_state(const SubspaceBasis& u, const Bipartition& cut,
                                             const Limits& limits = {}) {
	if (u.dim() == 0) {
		throw ParameterError("canonical_tensor_state: subspace must be non-zero");
	}
	const BipartiteReshaper reshaper(u.ambient, cut);
	const std::size_t na = reshaper.rows();
	const std::size_t nb = reshaper.cols();
	limits.require_vector(na * na * nb * nb, "canonical_tensor_state");

	const auto na_i = static_cast<Eigen::Index>(na);
	const auto nb_i = static_cast<Eigen::Index>(nb);
	// Matrix over rows (a, a') and columns (b, b').
	CMatrix big = CMatrix::Zero(na_i * na_i, nb_i * nb_i);
	for (Eigen::Index k = 0; k < u.basis.cols(); ++k) {
		const CMatrix x = reshaper.reshape(u.basis.col(k));
		for (Eigen::Index a = 0; a < na_i; ++a) {
			for (Eigen::Index ap = 0; ap < na_i; ++ap) {
				big.row(a * na_i + ap) += kron(CVector(x.row(a).transpose()), CVector(x.row(ap).adjoint())).transpose();
			}
		}
	}
	big /= std::sqrt(static_cast<double>(u.dim()));
	CanonicalState out{CVector(big.size()), TensorShape{na * na, nb * nb}, Bipartition{{0}, {1}}};
	for (Eigen::Index r = 0; r < big.rows(); ++r) {
		out.state.segment(r * big.cols(), big.cols()) = big.row(r).transpose();
	}
	return out;
}

// ---------------------------------------------------------------------------
// Product bounds on symmetric tensors
// ---------------------------------------------------------------------------

/**
 * ||Pi_{a,d}(psi_1 (x) ... (x) psi_m)|| / prod ||psi_i||, with each psi_i given in
 * the monomial coordinates of S^{d_i}(C^a).
 */
inline double product_projection_ratio(const BlockProjector& bp, std::span<const CVector> factors) {
	if (factors.size() != bp.shape.factors()) {
		throw ParameterError("product_projection_ratio: one factor per degree required");
	}
	double norms = 1.0;
	for (std::size_t i = 0; i < factors.size(); ++i) {
		if (static_cast<std::size_t>(factors[i].size()) != bp.shape.dim(i)) {
			throw ParameterError("product_projection_ratio: factor " + std::to_string(i) +
			                     " has the wrong dimension");
		}
		norms *= factors[i].norm();
	}
	if (norms == 0.0) {
		throw ParameterError("product_projection_ratio: factors must be non-zero");
	}
	return (bp.columns.adjoint() * kron_all(factors)).norm() / norms;
}

inline double product_projection_ratio(unsigned a, const std::vector<unsigned>& dvec,
                                       std::span<const CVector> factors) {
	return product_projection_ratio(block_projector_factored(a, dvec), factors);
}

struct ProductBoundReport {
	double bound = 0.0; ///< multinomial(|d|; d)^{-1/2}
	double min_ratio = std::numeric_limits<double>::infinity();
	std::size_t violations = 0;
	std::size_t samples = 0;
	std::uint64_t seed = 0;
};

/// Samples Gaussian symmetric tensors and counts ratios below the multinomial bound minus 1e-9.
inline ProductBoundReport multipartite_overlap_bound_check(unsigned a, const std::vector<unsigned>& dvec,
                                                           std::size_t samples, std::uint64_t seed,
                                                           std::size_t threads = 1) {
	const BlockProjector bp = block_projector_factored(a, dvec);
	ProductBoundReport rep;
	rep.bound = 1.0 / std::sqrt(to_double(multinomial(std::span<const unsigned>(dvec))));
	rep.samples = samples;
	rep.seed = seed;
	auto ratios = run_indexed<double>(samples, threads, [&](std::size_t s) {
		Rng rng(derive_seed(seed, s));
		std::vector<CVector> factors;
		for (std::size_t i = 0; i < dvec.size(); ++i) {
			factors.push_back(random_unit_vector(bp.shape.dim(i), rng));
		}
		return product_projection_ratio(bp, factors);
	});
	for (double r : ratios) {
		rep.min_ratio = std::min(rep.min_ratio, r);
		if (r < rep.bound - 1e-9) {
			++rep.violations;
		}
	}
	return rep;
}

inline ProductBoundReport beauzamy_sample_check(unsigned a, unsigned d1, unsigned d2, std::size_t samples,
                                                std::uint64_t seed, std::size_t threads = 1) {
	return multipartite_overlap_bound_check(a, {d1, d2}, samples, seed, threads);
}

} // namespace entsub
