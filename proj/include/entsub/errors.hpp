#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace entsub {

/// Invalid parameters (out-of-domain reals, malformed shapes, bad partitions).
class ParameterError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

/// Refusal to materialize an object above the configured size caps.
class ResourceError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Input vector is not of unit norm; the caller must normalize.
class NormalizationError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

/// A computed quantity contradicts a proven bound. Always a bug or a misapplied bound.
class BoundViolation : public std::logic_error {
public:
	using std::logic_error::logic_error;
};

/**
 * Size caps for dense objects.
 *
 * max_ambient_dim bounds the length of any dense state vector, max_dense_entries
 * bounds the number of entries of any dense matrix.
 */
struct Limits {
	std::size_t max_ambient_dim = std::size_t{1} << 24;
	std::size_t max_dense_entries = std::size_t{1} << 26;

	/// Defaults, overridden by ENTSUB_MAX_AMBIENT_DIM / ENTSUB_MAX_DENSE_ENTRIES when set.
	static Limits from_environment() {
		Limits lim;
		if (const char* s = std::getenv("ENTSUB_MAX_AMBIENT_DIM")) {
			lim.max_ambient_dim = std::stoull(s);
		}
		if (const char* s = std::getenv("ENTSUB_MAX_DENSE_ENTRIES")) {
			lim.max_dense_entries = std::stoull(s);
		}
		return lim;
	}

	void require_vector(std::size_t len, const std::string& what) const {
		if (len > max_ambient_dim) {
			throw ResourceError(what + ": dimension " + std::to_string(len) + " exceeds cap " +
			                    std::to_string(max_ambient_dim));
		}
	}

	void require_matrix(std::size_t rows, std::size_t cols, const std::string& what) const {
		if (cols != 0 && rows > max_dense_entries / cols) {
			throw ResourceError(what + ": " + std::to_string(rows) + "x" + std::to_string(cols) +
			                    " dense matrix exceeds cap of " + std::to_string(max_dense_entries) +
			                    " entries");
		}
	}
};

} // namespace entsub
