#pragma once

#include "combinatorics.hpp"
#include "tensor_core.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace entsub {

/// U_{a,d} = ker(Pi_{a,d}) intersected with the embedded C^{n_1} x ... x C^{n_m}.
struct KernelTag {
	unsigned a = 0;
	std::vector<unsigned> dvec;
	std::vector<std::size_t> nvec;
	friend bool operator==(const KernelTag&, const KernelTag&) = default;
};

/// U_{C,P} from explicit coefficient constraints.
struct ConstraintTag {
	std::string coefficients; ///< "ones", "binomial", "symmetric-kernel" or "custom"
	std::string partition;    ///< "level-set", "weight" or "custom"
	std::vector<std::size_t> nvec;
	/// Set when the constraint system is known to cut out a kernel subspace.
	std::optional<KernelTag> equivalent_kernel;
	friend bool operator==(const ConstraintTag&, const ConstraintTag&) = default;
};

struct RawTag {
	std::string note;
	friend bool operator==(const RawTag&, const RawTag&) = default;
};

using ConstructionTag = std::variant<KernelTag, ConstraintTag, RawTag>;

/// Orthonormal basis (columns) of a subspace of a tensor product space.
struct SubspaceBasis {
	TensorShape ambient;
	CMatrix basis;
	ConstructionTag tag = RawTag{};

	std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }

	CMatrix projector() const { return basis * basis.adjoint(); }

	/// ||B^dagger B - I||_F.
	double isometry_defect() const {
		const auto k = basis.cols();
		return (basis.adjoint() * basis - CMatrix::Identity(k, k)).norm();
	}

	/// ||Pi_U - conj(Pi_U)||_F; zero iff the span is closed under complex conjugation.
	double conjugation_defect() const {
		CMatrix p = projector();
		return (p - p.conjugate()).norm();
	}
};

inline const KernelTag* kernel_tag_of(const ConstructionTag& tag) {
	if (const auto* k = std::get_if<KernelTag>(&tag)) {
		return k;
	}
	if (const auto* c = std::get_if<ConstraintTag>(&tag); c && c->equivalent_kernel) {
		return &*c->equivalent_kernel;
	}
	return nullptr;
}

/// E(U) >= multinomial(d_1 + ... + d_m; d_1, ..., d_m)^{-1} for kernel-type subspaces.
inline std::optional<double> certified_lower_bound(const ConstructionTag& tag) {
	const KernelTag* k = kernel_tag_of(tag);
	if (k == nullptr) {
		return std::nullopt;
	}
	return 1.0 / to_double(multinomial(std::span<const unsigned>(k->dvec)));
}

/// Wraps an arbitrary matrix whose columns span U, orthonormalizing them.
inline SubspaceBasis orthonormalize(const TensorShape& shape, const CMatrix& spanning,
                                    double tol = kRankTolerance) {
	if (static_cast<std::size_t>(spanning.rows()) != shape.total()) {
		throw ParameterError("orthonormalize: row count does not match the ambient dimension");
	}
	const auto svd = checked_svd(spanning, false);
	const auto& sv = svd.singular_values;
	Eigen::Index rank = 0;
	const double smax = sv.size() > 0 ? sv(0) : 0.0;
	for (Eigen::Index i = 0; i < sv.size(); ++i) {
		if (sv(i) > tol * smax) {
			++rank;
		}
	}
	return SubspaceBasis{shape, svd.u.leftCols(rank), RawTag{}};
}

} // namespace entsub
