#pragma once

#include "applications.hpp"
#include "certify.hpp"
#include "entanglement.hpp"
#include "subspace.hpp"
#include "tensor_core.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace entsub {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "entsub/1";

// ---------------------------------------------------------------------------
// Matrices: {shape: [r, c], entries: [[re, im], ...]} row-major
// ---------------------------------------------------------------------------

inline Json matrix_to_json(const CMatrix& m) {
	if (!m.allFinite()) {
		throw ParameterError("matrix_to_json: matrix has non-finite entries");
	}
	Json entries = Json::array();
	for (Eigen::Index r = 0; r < m.rows(); ++r) {
		for (Eigen::Index c = 0; c < m.cols(); ++c) {
			entries.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
		}
	}
	return Json{{"shape", {m.rows(), m.cols()}}, {"entries", std::move(entries)}};
}

inline Json vector_to_json(const CVector& v) { return matrix_to_json(CMatrix(v)); }

inline CMatrix matrix_from_json(const Json& j) {
	if (!j.is_object() || !j.contains("shape") || !j.contains("entries")) {
		throw ParameterError("matrix JSON: expected {shape, entries}");
	}
	const auto& shape = j.at("shape");
	if (!shape.is_array() || shape.size() != 2) {
		throw ParameterError("matrix JSON: shape must be [rows, cols]");
	}
	const auto rows = shape[0].get<Eigen::Index>();
	const auto cols = shape[1].get<Eigen::Index>();
	const auto& entries = j.at("entries");
	if (rows < 0 || cols < 0 || !entries.is_array() || static_cast<Eigen::Index>(entries.size()) != rows * cols) {
		throw ParameterError("matrix JSON: entry count does not match shape");
	}
	CMatrix m(rows, cols);
	std::size_t k = 0;
	for (Eigen::Index r = 0; r < rows; ++r) {
		for (Eigen::Index c = 0; c < cols; ++c, ++k) {
			const auto& e = entries[k];
			if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
				throw ParameterError("matrix JSON: each entry must be [re, im]");
			}
			m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
		}
	}
	return m;
}

// ---------------------------------------------------------------------------
// Subspaces
// ---------------------------------------------------------------------------

inline Json tag_to_json(const ConstructionTag& tag) {
	auto kernel_json = [](const KernelTag& k) {
		return Json{{"type", "kernel"}, {"a", k.a}, {"d", k.dvec}, {"n", k.nvec}};
	};
	if (const auto* k = std::get_if<KernelTag>(&tag)) {
		return kernel_json(*k);
	}
	if (const auto* c = std::get_if<ConstraintTag>(&tag)) {
		Json j{{"type", "constraints"}, {"coefficients", c->coefficients}, {"partition", c->partition}, {"n", c->nvec}};
		if (c->equivalent_kernel) {
			j["equivalent_kernel"] = kernel_json(*c->equivalent_kernel);
		}
		return j;
	}
	return Json{{"type", "raw"}, {"note", std::get<RawTag>(tag).note}};
}

inline KernelTag kernel_tag_from_json(const Json& j) {
	return KernelTag{j.at("a").get<unsigned>(), j.at("d").get<std::vector<unsigned>>(),
	                 j.at("n").get<std::vector<std::size_t>>()};
}

inline ConstructionTag tag_from_json(const Json& j) {
	const std::string type = j.value("type", "raw");
	if (type == "kernel") {
		return kernel_tag_from_json(j);
	}
	if (type == "constraints") {
		ConstraintTag c{j.at("coefficients").get<std::string>(), j.at("partition").get<std::string>(),
		                j.at("n").get<std::vector<std::size_t>>(), std::nullopt};
		if (j.contains("equivalent_kernel")) {
			c.equivalent_kernel = kernel_tag_from_json(j.at("equivalent_kernel"));
		}
		return c;
	}
	return RawTag{j.value("note", "")};
}

inline Json subspace_to_json(const SubspaceBasis& u) {
	return Json{{"format_version", kFormatVersion},
	            {"ambient", u.ambient.dims()},
	            {"dim", u.dim()},
	            {"construction", tag_to_json(u.tag)},
	            {"basis", matrix_to_json(u.basis)}};
}

inline SubspaceBasis subspace_from_json(const Json& j) {
	SubspaceBasis u;
	u.ambient = TensorShape(j.at("ambient").get<std::vector<std::size_t>>());
	u.basis = matrix_from_json(j.at("basis"));
	if (static_cast<std::size_t>(u.basis.rows()) != u.ambient.total()) {
		throw ParameterError("subspace JSON: basis rows do not match the ambient dimension");
	}
	if (j.contains("dim") && j.at("dim").get<std::size_t>() != u.dim()) {
		throw ParameterError("subspace JSON: dim does not match the basis");
	}
	if (u.isometry_defect() > 1e-8) {
		throw ParameterError("subspace JSON: basis columns are not orthonormal");
	}
	u.tag = j.contains("construction") ? tag_from_json(j.at("construction")) : ConstructionTag{RawTag{}};
	return u;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json cut_to_json(const Bipartition& cut) { return Json{{"A", cut.block_a}, {"B", cut.block_b}}; }

inline Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json estimate_to_json(const EntanglementEstimate& e) {
	Json trials = Json::array();
	for (const auto& t : e.trace) {
		trials.push_back(Json{{"objective", t.objective}, {"sweeps", t.sweeps}, {"converged", t.converged},
		                      {"monotone", t.monotone}});
	}
	Json factors = Json::array();
	for (const auto& f : e.best_product_state.factors) {
		factors.push_back(vector_to_json(f));
	}
	return Json{{"certified_lower", optional_number(e.certified_lower)},
	            {"numerical_upper", e.numerical_upper},
	            {"trials", e.trials},
	            {"converged_trials", e.converged_trials},
	            {"seed", e.seed},
	            {"best_product_state", std::move(factors)},
	            {"trial_trace", std::move(trials)}};
}

inline Json entropy_to_json(const EntropyEstimate& e) {
	return Json{{"p", e.p},
	            {"value_upper", e.value_upper},
	            {"bound_lower", optional_number(e.bound_lower)},
	            {"cut", cut_to_json(e.cut)},
	            {"trials", e.trials}};
}

inline Json certificate_to_json(const CertificateReport& r) {
	return Json{{"p", r.p},
	            {"d", r.d},
	            {"n", r.n.str()},
	            {"a", r.a ? Json(r.a->str()) : Json(nullptr)},
	            {"log2_a", r.log2_a},
	            {"epsilon", r.epsilon},
	            {"x", r.x},
	            {"t", r.t},
	            {"dim_exact", r.dim_exact ? Json(r.dim_exact->str()) : Json(nullptr)},
	            {"codim_ratio", r.codim_ratio},
	            {"upper_bound_bits", r.upper_bound_bits},
	            {"lower_bound_bits", r.lower_bound_bits},
	            {"margin_bits", r.margin_bits},
	            {"error_bound_bits", r.error_bound_bits},
	            {"threshold_bits", r.threshold_bits},
	            {"mode", to_string(r.mode)},
	            {"evaluation", to_string(r.evaluation)},
	            {"sufficient_checks",
	             {{"exp_x", r.sufficient.exp_x},
	              {"exp_x_limit", r.sufficient.exp_x_limit},
	              {"exp_x_ok", r.sufficient.exp_x_ok},
	              {"eps_power", r.sufficient.eps_power},
	              {"eps_power_limit", r.sufficient.eps_power_limit},
	              {"entropy_ok", r.sufficient.entropy_ok}}},
	            {"pass", r.pass}};
}

inline Json witness_report_to_json(const WitnessReport& r) {
	return Json{{"e_lower", r.e_lower},
	            {"mu", r.mu},
	            {"spectral_norm", r.spectral_norm},
	            {"negative_count", r.negative_count},
	            {"negative_magnitude", r.negative_magnitude},
	            {"claimed_magnitude_bound", r.claimed_magnitude_bound},
	            {"spectrum_defect", r.spectrum_defect},
	            {"unit_norm_claim_applies", r.unit_norm_claim_applies}};
}

inline Json product_bound_to_json(const ProductBoundReport& r) {
	return Json{{"bound", r.bound},
	            {"min_ratio", r.min_ratio},
	            {"violations", r.violations},
	            {"samples", r.samples},
	            {"seed", r.seed}};
}

inline Json read_json_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) {
		throw ParameterError("cannot open " + path);
	}
	return Json::parse(in);
}

} // namespace entsub
