#pragma once

#include "combinatorics.hpp"
#include "entanglement.hpp"
#include "multistart.hpp"
#include "subspace.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace entsub {

// ---------------------------------------------------------------------------
// Witness H = 1 - mu Pi_U, mu = (1 - E)^{-1}
// ---------------------------------------------------------------------------

struct WitnessReport {
	double e_lower = 0.0;
	double mu = 0.0;
	double spectral_norm = 0.0;       ///< computed from the spectrum
	std::size_t negative_count = 0;   ///< computed from the spectrum
	double negative_magnitude = 0.0;  ///< mu - 1 = E/(1-E)
	double claimed_magnitude_bound = 0.0;
	double spectrum_defect = 0.0;     ///< max distance of an eigenvalue from {1, 1 - mu}
	bool unit_norm_claim_applies = false; ///< E <= 1/2
	std::vector<double> eigenvalues;
};

struct Witness {
	CMatrix matrix;
	WitnessReport report;
};

inline Witness build_witness(const SubspaceBasis& u, double e_lower, const Limits& limits = {}) {
	if (!(e_lower > 0 && e_lower < 1)) {
		throw ParameterError("build_witness: E must lie in (0, 1)");
	}
	const std::size_t n = u.ambient.total();
	limits.require_matrix(n, n, "build_witness");
	Witness w;
	WitnessReport& rep = w.report;
	rep.e_lower = e_lower;
	rep.mu = 1.0 / (1.0 - e_lower);
	rep.negative_magnitude = rep.mu - 1.0;
	rep.claimed_magnitude_bound = e_lower;
	rep.unit_norm_claim_applies = e_lower <= 0.5;

	const auto ni = static_cast<Eigen::Index>(n);
	w.matrix = CMatrix::Identity(ni, ni) - rep.mu * u.projector();

	Eigen::SelfAdjointEigenSolver<CMatrix> eig(w.matrix, Eigen::EigenvaluesOnly);
	const Eigen::VectorXd& ev = eig.eigenvalues();
	rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
	for (double v : rep.eigenvalues) {
		rep.spectral_norm = std::max(rep.spectral_norm, std::abs(v));
		if (v < 0) {
			++rep.negative_count;
		}
		rep.spectrum_defect = std::max(rep.spectrum_defect, std::min(std::abs(v - 1.0), std::abs(v - (1.0 - rep.mu))));
	}
	return w;
}

/// <phi|W|phi> for a product state phi.
inline double witness_value(const CMatrix& witness, const CVector& phi) {
	return (phi.adjoint() * witness * phi)(0, 0).real();
}

struct ProductPositivityReport {
	double min_value = std::numeric_limits<double>::infinity();
	std::size_t samples = 0;
	std::size_t below_tolerance = 0; ///< samples with value < -1e-9
};

/// Samples Haar-like random product states and records the smallest witness expectation.
inline ProductPositivityReport witness_product_check(const CMatrix& witness, const TensorShape& shape,
                                                     std::size_t samples, std::uint64_t seed,
                                                     std::size_t threads = 1) {
	if (static_cast<std::size_t>(witness.rows()) != shape.total()) {
		throw ParameterError("witness_product_check: witness does not act on the given shape");
	}
	auto values = run_indexed<double>(samples, threads, [&](std::size_t s) {
		Rng rng(derive_seed(seed, s));
		ProductState phi;
		for (std::size_t i = 0; i < shape.factors(); ++i) {
			phi.factors.push_back(random_unit_vector(shape.dim(i), rng));
		}
		return witness_value(witness, phi.tensor());
	});
	ProductPositivityReport rep;
	rep.samples = samples;
	for (double v : values) {
		rep.min_value = std::min(rep.min_value, v);
		if (v < -1e-9) {
			++rep.below_tolerance;
		}
	}
	return rep;
}

// ---------------------------------------------------------------------------
// Robust mixed states
// ---------------------------------------------------------------------------

/// Which trace-norm radius to attach to rho = Pi_U / dim U.
enum class RadiusRule {
	certified,         ///< sqrt(E) for the certified E
	maximum_dimension, ///< m^{-(n-1)m/2}; needs a = 2, d_i = n - 1 with equal n_i
	general_epsilon,   ///< sqrt(eps m^{-m})
};

struct RobustState {
	CMatrix rho;
	std::optional<double> radius_trace_norm;
	RadiusRule rule = RadiusRule::certified;
	std::string warning;
};

inline RobustState build_robust_state(const SubspaceBasis& u, double e_lower,
                                      RadiusRule rule = RadiusRule::certified, const Limits& limits = {}) {
	if (!(e_lower > 0 && e_lower < 1)) {
		throw ParameterError("build_robust_state: E must lie in (0, 1)");
	}
	if (u.dim() == 0) {
		throw ParameterError("build_robust_state: subspace must be non-zero");
	}
	limits.require_matrix(u.ambient.total(), u.ambient.total(), "build_robust_state");
	RobustState st;
	st.rule = rule;
	st.rho = u.projector() / static_cast<double>(u.dim());

	const KernelTag* tag = kernel_tag_of(u.tag);
	if (tag == nullptr) {
		st.warning = "no construction provenance for this subspace; radius omitted";
		return st;
	}
	const double m = static_cast<double>(u.ambient.factors());
	switch (rule) {
	case RadiusRule::certified:
		st.radius_trace_norm = std::sqrt(e_lower);
		break;
	case RadiusRule::general_epsilon:
		st.radius_trace_norm = std::sqrt(e_lower * std::pow(m, -m));
		break;
	case RadiusRule::maximum_dimension: {
		const std::size_t n = u.ambient.dim(0);
		bool applies = tag->a == 2;
		for (std::size_t i = 0; i < u.ambient.factors(); ++i) {
			applies = applies && u.ambient.dim(i) == n && tag->dvec[i] + 1 == n;
		}
		if (!applies) {
			st.warning = "maximum-dimension radius needs a = 2 and d_i = n - 1 with equal n_i; radius omitted";
			return st;
		}
		st.radius_trace_norm = std::pow(m, -(static_cast<double>(n) - 1.0) * m / 2.0);
		break;
	}
	}
	return st;
}

struct PerturbationProbeReport {
	double radius = 0.0;
	std::size_t samples = 0;
	std::size_t certified = 0;        ///< witness value stayed negative
	double min_value = std::numeric_limits<double>::infinity();
	double max_value = -std::numeric_limits<double>::infinity();
	double unperturbed_value = 0.0;
};

/**
 * Sanity probe: Tr(W e^{iH} rho e^{-iH}) for random Hermitian H with ||H||_1 = radius.
 *
 * A finite sample cannot establish robustness; it only looks for counterexamples.
 */
inline PerturbationProbeReport witness_perturbation_probe(const CMatrix& rho, const CMatrix& witness, double radius,
                                                          std::size_t samples, std::uint64_t seed,
                                                          std::size_t threads = 1) {
	if (rho.rows() != witness.rows() || rho.cols() != witness.cols() || rho.rows() != rho.cols()) {
		throw ParameterError("witness_perturbation_probe: state and witness shapes differ");
	}
	if (!(radius >= 0)) {
		throw ParameterError("witness_perturbation_probe: radius must be non-negative");
	}
	const Eigen::Index n = rho.rows();
	PerturbationProbeReport rep;
	rep.radius = radius;
	rep.samples = samples;
	rep.unperturbed_value = (witness * rho).trace().real();
	auto values = run_indexed<double>(samples, threads, [&](std::size_t s) {
		if (radius == 0.0) {
			return rep.unperturbed_value;
		}
		Rng rng(derive_seed(seed, s));
		std::normal_distribution<double> gauss(0.0, 1.0);
		CMatrix g(n, n);
		for (Eigen::Index i = 0; i < n; ++i) {
			for (Eigen::Index j = 0; j < n; ++j) {
				const double re = gauss(rng);
				const double im = gauss(rng);
				g(i, j) = Complex(re, im);
			}
		}
		const CMatrix h = (g + g.adjoint()) / 2.0;
		Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
		const double trace_norm = eig.eigenvalues().cwiseAbs().sum();
		const Eigen::VectorXd theta = eig.eigenvalues() * (radius / trace_norm);
		Eigen::VectorXcd phases(n);
		for (Eigen::Index i = 0; i < n; ++i) {
			phases(i) = std::polar(1.0, theta(i));
		}
		const CMatrix unitary = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
		const CMatrix rotated = unitary * rho * unitary.adjoint();
		return (witness * rotated).trace().real();
	});
	for (double v : values) {
		rep.min_value = std::min(rep.min_value, v);
		rep.max_value = std::max(rep.max_value, v);
		if (v < 0) {
			++rep.certified;
		}
	}
	return rep;
}

} // namespace entsub
