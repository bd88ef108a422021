#pragma once

#include "errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace entsub {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt factorial(unsigned n) {
	BigInt r = 1;
	for (unsigned k = 2; k <= n; ++k) {
		r *= k;
	}
	return r;
}

/// binom(n, k) for a possibly huge top argument.
inline BigInt binomial(const BigInt& n, unsigned k) {
	if (n < k) {
		return 0;
	}
	BigInt r = 1;
	for (unsigned j = 0; j < k; ++j) {
		r *= n - j;
		r /= j + 1; // exact: r is binom(n, j+1) after this step
	}
	return r;
}

inline BigInt binomial(std::uint64_t n, unsigned k) { return binomial(BigInt(n), k); }

/// (sum parts)! / prod(parts_i!), computed as a product of binomials.
inline BigInt multinomial(std::span<const unsigned> parts) {
	if (parts.empty()) {
		throw ParameterError("multinomial: parts must be non-empty");
	}
	BigInt r = 1;
	std::uint64_t running = 0;
	for (unsigned k : parts) {
		running += k;
		r *= binomial(running, k);
	}
	return r;
}

inline BigInt multinomial(std::initializer_list<unsigned> parts) {
	return multinomial(std::span<const unsigned>(parts.begin(), parts.size()));
}

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }

/// log2 of a positive big integer, accurate to a few ulps regardless of magnitude.
inline double log2_big(const BigInt& x) {
	if (x <= 0) {
		throw ParameterError("log2_big: argument must be positive");
	}
	const std::size_t bits = boost::multiprecision::msb(x) + 1;
	if (bits <= 900) {
		return std::log2(to_double(x));
	}
	const std::size_t shift = bits - 64;
	BigInt top = x >> shift;
	return std::log2(to_double(top)) + static_cast<double>(shift);
}

/// num/den rounded to double, without overflow or underflow of the intermediates.
inline double ratio_to_double(const BigInt& num, const BigInt& den) {
	if (den <= 0) {
		throw ParameterError("ratio_to_double: denominator must be positive");
	}
	if (num == 0) {
		return 0.0;
	}
	const bool neg = num < 0;
	BigInt an = neg ? BigInt(-num) : num;
	const long e = static_cast<long>(boost::multiprecision::msb(an)) -
	               static_cast<long>(boost::multiprecision::msb(den));
	const long shift = 64 - e;
	BigInt q = shift >= 0 ? BigInt((an << shift) / den) : BigInt(an / (den << -shift));
	double r = std::ldexp(to_double(q), static_cast<int>(-shift));
	return neg ? -r : r;
}

/// Smallest r with r^k >= x, exact.
inline BigInt integer_root_ceil(const BigInt& x, unsigned k) {
	if (k == 0) {
		throw ParameterError("integer_root_ceil: k must be positive");
	}
	if (x <= 1 || k == 1) {
		return x;
	}
	// Newton iteration for the floor root, starting above it.
	const std::size_t bits = boost::multiprecision::msb(x) + 1;
	BigInt y = BigInt(1) << ((bits + k - 1) / k);
	while (true) {
		BigInt next = ((k - 1) * y + x / boost::multiprecision::pow(y, k - 1)) / k;
		if (next >= y) {
			break;
		}
		y = next;
	}
	if (boost::multiprecision::pow(y, k) < x) {
		++y;
	}
	return y;
}

/**
 * Exponent vector alpha in Z_{>=0}^a with |alpha| = degree.
 *
 * Indexes the monomial basis of S^d(C^a).
 */
struct MultiIndex {
	std::vector<unsigned> exponents;
	unsigned degree = 0;

	MultiIndex() = default;
	explicit MultiIndex(std::vector<unsigned> exps) : exponents(std::move(exps)) {
		if (exponents.empty()) {
			throw ParameterError("MultiIndex: alphabet size must be at least 1");
		}
		degree = std::accumulate(exponents.begin(), exponents.end(), 0u);
	}

	std::size_t alphabet() const { return exponents.size(); }
	BigInt multinomial() const { return entsub::multinomial(std::span<const unsigned>(exponents)); }

	friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
	friend auto operator<=>(const MultiIndex& l, const MultiIndex& r) { return l.exponents <=> r.exponents; }
};

namespace detail {
inline void enumerate_rec(std::vector<unsigned>& cur, std::size_t pos, unsigned remaining,
                          std::vector<MultiIndex>& out) {
	if (pos + 1 == cur.size()) {
		cur[pos] = remaining;
		out.emplace_back(cur);
		return;
	}
	for (unsigned v = remaining + 1; v-- > 0;) {
		cur[pos] = v;
		enumerate_rec(cur, pos + 1, remaining - v, out);
	}
}
} // namespace detail

/// All alpha with |alpha| = d, lexicographically descending: (d,0,..) first, (..,0,d) last.
inline std::vector<MultiIndex> enumerate_multiindices(unsigned a, unsigned d) {
	if (a == 0) {
		throw ParameterError("enumerate_multiindices: alphabet size must be at least 1");
	}
	std::vector<MultiIndex> out;
	std::vector<unsigned> cur(a, 0);
	detail::enumerate_rec(cur, 0, d, out);
	return out;
}

/// dim S^d(C^a) = binom(a+d-1, d).
inline BigInt symmetric_dim(unsigned a, unsigned d) {
	if (a == 0) {
		throw ParameterError("symmetric_dim: alphabet size must be at least 1");
	}
	return binomial(std::uint64_t{a} + d - 1, d);
}

/// Position of alpha in enumerate_multiindices(a, |alpha|), computed by counting.
inline std::size_t multiindex_rank(const MultiIndex& alpha) {
	// Count the indices that come before alpha: at each position a larger exponent
	// with the same prefix precedes it.
	std::size_t rank = 0;
	unsigned remaining = alpha.degree;
	const std::size_t a = alpha.alphabet();
	for (std::size_t pos = 0; pos + 1 < a; ++pos) {
		const auto tail = static_cast<unsigned>(a - pos - 1);
		for (unsigned v = remaining; v > alpha.exponents[pos]; --v) {
			rank += symmetric_dim(tail, remaining - v).convert_to<std::size_t>();
		}
		remaining -= alpha.exponents[pos];
	}
	return rank;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

} // namespace entsub
