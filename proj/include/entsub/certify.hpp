#pragma once

#include "combinatorics.hpp"
#include "entanglement.hpp"
#include "errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cfloat>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace entsub {

using BigRational = boost::multiprecision::cpp_rational;

/// Degree and local dimension for the bipartite sub-additivity certificate.
struct CertificateParams {
	unsigned d = 0;
	BigInt n;
};

/**
 * d = ceil(4/(p-1)), n = (40 d 4^d)^d for 1 < p < 2; d = 3, n = 3e9 for p >= 2.
 *
 * The ceiling ignores a 1e-9 excess so that 4/(p-1) landing on an integer up to
 * rounding (p = 1.25, 1.5) is not bumped to the next degree.
 */
inline CertificateParams choose_params(double p) {
	if (!(p > 1) || !std::isfinite(p)) {
		throw ParameterError("choose_params: p must exceed 1");
	}
	if (p >= 2) {
		return {3, BigInt(3'000'000'000ULL)};
	}
	const double raw = 4.0 / (p - 1.0);
	const auto d = static_cast<unsigned>(std::ceil(raw - 1e-9));
	const BigInt base = BigInt(40) * d * boost::multiprecision::pow(BigInt(4), d);
	return {d, boost::multiprecision::pow(base, d)};
}

/// a = ceil((d! n)^{1/d}), the alphabet size making S^d(C^a) at least n-dimensional.
inline BigInt kernel_alphabet(const BigInt& n, unsigned d) {
	if (n < 1 || d == 0) {
		throw ParameterError("kernel_alphabet: need n >= 1 and d >= 1");
	}
	return integer_root_ceil(factorial(d) * n, d);
}

/// codim of U in C^n (x) C^n: binom(2d + a - 1, 2d).
inline BigInt kernel_codim(const BigInt& n, unsigned d) {
	return binomial(BigInt(2 * d) + kernel_alphabet(n, d) - 1, 2 * d);
}

/// n^2 - binom(2d + ceil((d! n)^{1/d}) - 1, 2d), exact.
inline BigInt dim_exact(const BigInt& n, unsigned d) { return n * n - kernel_codim(n, d); }

enum class CertificateMode { direct, sufficient };
enum class Evaluation { exact, big_integer_log, log_gamma };

inline const char* to_string(CertificateMode m) { return m == CertificateMode::direct ? "direct" : "sufficient"; }

inline const char* to_string(Evaluation e) {
	switch (e) {
	case Evaluation::exact: return "exact";
	case Evaluation::big_integer_log: return "big-integer-log";
	case Evaluation::log_gamma: return "log-gamma";
	}
	return "?";
}

/// e^x <= 1 + eps/2 and eps^{p-1} < p / 2^{p+2}.
struct SufficientChecks {
	double exp_x = 0.0;
	double exp_x_limit = 0.0;
	bool exp_x_ok = false;
	double eps_power = 0.0;
	double eps_power_limit = 0.0;
	bool entropy_ok = false;
};

struct CertificateReport {
	double p = 0.0;
	unsigned d = 0;
	BigInt n;
	std::optional<BigInt> a;         ///< absent in log-gamma evaluation
	double log2_a = 0.0;
	double epsilon = 0.0;            ///< binom(2d, d)^{-1}
	double x = 0.0;                  ///< 4 e d / n^{1/d}
	double t = 0.0;                  ///< (eps/(1-eps))^p
	std::optional<BigInt> dim_exact; ///< absent in log-gamma evaluation
	double codim_ratio = 0.0;        ///< 1 - dim/n^2
	double upper_bound_bits = 0.0;   ///< bound on H_min,p(U (x) U)
	double lower_bound_bits = 0.0;   ///< bound on H_min,p(U)
	double margin_bits = 0.0;        ///< 2 lower - upper
	double error_bound_bits = 0.0;
	double threshold_bits = 0.0;
	CertificateMode mode = CertificateMode::direct;
	Evaluation evaluation = Evaluation::exact;
	SufficientChecks sufficient;
	bool pass = false;
};

struct CertificateOptions {
	double margin_threshold = 1e-9;
	/// n^2 at or below this is treated as materializable (exact evaluation).
	std::size_t materializable_dim = std::size_t{1} << 24;
	/// Bit length of n above which the exact integer path is replaced by log-gamma.
	std::size_t max_exact_bits = 1u << 16;
};

namespace detail {

inline double lower_bound_bits(double eps, double p) { return hmin_lower_bound(eps, p); }

inline double upper_bound_bits_from_ratio(double codim_ratio, double p) {
	if (!(codim_ratio < 1.0)) {
		return std::numeric_limits<double>::infinity();
	}
	return p / (1.0 - p) * std::log1p(-codim_ratio) / std::numbers::ln2;
}

} // namespace detail

/**
 * Evaluates H_min,p(U (x) U) < 2 H_min,p(U) through the closed-form bounds for
 * U = U_{a,d} in C^n (x) C^n with E(U) >= binom(2d, d)^{-1}.
 *
 * Direct mode: pass iff margin = 2 lower - upper exceeds the threshold, with
 * the exact dimension in the upper bound. Sufficient mode additionally requires
 * the two closed-form sufficient conditions.
 */
inline CertificateReport verify_certificate(double p, const BigInt& n, unsigned d,
                                            CertificateMode mode = CertificateMode::direct,
                                            const CertificateOptions& opt = {}) {
	if (!(p > 1) || !std::isfinite(p)) {
		throw ParameterError("verify_certificate: p must exceed 1");
	}
	if (n < 2 || d == 0) {
		throw ParameterError("verify_certificate: need n >= 2 and d >= 1");
	}
	CertificateReport rep;
	rep.p = p;
	rep.d = d;
	rep.n = n;
	rep.mode = mode;

	const BigInt central = binomial(BigInt(2 * d), d);
	rep.epsilon = ratio_to_double(BigInt(1), central);
	if (!(rep.epsilon >= DBL_MIN)) {
		throw ResourceError("verify_certificate: binom(2d, d)^{-1} underflows double precision for d = " +
		                    std::to_string(d));
	}
	rep.t = std::pow(rep.epsilon / (1.0 - rep.epsilon), p);
	rep.lower_bound_bits = detail::lower_bound_bits(rep.epsilon, p);

	const double log2_n = log2_big(n);
	const std::size_t n_bits = boost::multiprecision::msb(n) + 1;
	const BigInt n2 = n * n;
	const double eps_mach = DBL_EPSILON;

	if (n_bits <= opt.max_exact_bits) {
		rep.evaluation = n2 <= opt.materializable_dim ? Evaluation::exact : Evaluation::big_integer_log;
		const BigInt a = kernel_alphabet(n, d);
		const BigInt codim = binomial(BigInt(2 * d) + a - 1, 2 * d);
		rep.a = a;
		rep.log2_a = log2_big(a);
		rep.dim_exact = n2 - codim;
		rep.codim_ratio = ratio_to_double(codim, n2);
		rep.upper_bound_bits = detail::upper_bound_bits_from_ratio(rep.codim_ratio, p);
		rep.error_bound_bits = 16 * eps_mach * (std::abs(rep.upper_bound_bits) + 2 * std::abs(rep.lower_bound_bits));
	} else {
		rep.evaluation = Evaluation::log_gamma;
		const double ln_n = log2_n * std::numbers::ln2;
		const double ln_dfact = std::lgamma(static_cast<double>(d) + 1.0);
		const double ln_a = (ln_dfact + ln_n) / d; // a = ceil(exp(ln_a)), a >= exp(ln_a)
		rep.log2_a = ln_a / std::numbers::ln2;
		const double a_real = std::exp(ln_a);
		// ln(codim/n^2) = sum_{j<2d} ln(a + j) - ln((2d)!) - 2 ln n
		double ln_r = -std::lgamma(2.0 * d + 1.0) - 2.0 * ln_n;
		for (unsigned j = 0; j < 2 * d; ++j) {
			ln_r += ln_a + std::log1p(j / a_real);
		}
		// a_real <= a < a_real + 1 shifts each ln(a + j) by less than 1/a_real.
		const double ln_err = 2.0 * d * (1.0 / a_real + 8 * eps_mach * std::abs(ln_a)) +
		                      8 * eps_mach * (2 * std::abs(ln_n) + std::lgamma(2.0 * d + 1.0));
		rep.codim_ratio = std::exp(ln_r);
		rep.upper_bound_bits = detail::upper_bound_bits_from_ratio(rep.codim_ratio, p);
		const double r_err = rep.codim_ratio * std::expm1(ln_err);
		const double up_err = p / (p - 1.0) / std::numbers::ln2 * r_err / (1.0 - rep.codim_ratio - r_err);
		rep.error_bound_bits =
		    up_err + 16 * eps_mach * (std::abs(rep.upper_bound_bits) + 2 * std::abs(rep.lower_bound_bits));
	}
	rep.margin_bits = 2.0 * rep.lower_bound_bits - rep.upper_bound_bits;
	rep.threshold_bits = rep.evaluation == Evaluation::exact
	                         ? std::max(opt.margin_threshold, 10.0 * rep.error_bound_bits)
	                         : 10.0 * rep.error_bound_bits;

	rep.x = 4.0 * std::numbers::e * d / std::exp2(log2_n / d);
	rep.sufficient.exp_x = std::exp(rep.x);
	rep.sufficient.exp_x_limit = 1.0 + rep.epsilon / 2.0;
	rep.sufficient.exp_x_ok = rep.sufficient.exp_x <= rep.sufficient.exp_x_limit;
	rep.sufficient.eps_power = std::pow(rep.epsilon, p - 1.0);
	rep.sufficient.eps_power_limit = p / std::exp2(p + 2.0);
	rep.sufficient.entropy_ok = rep.sufficient.eps_power < rep.sufficient.eps_power_limit;

	rep.pass = rep.margin_bits > rep.threshold_bits;
	if (mode == CertificateMode::sufficient) {
		rep.pass = rep.pass && rep.sufficient.exp_x_ok && rep.sufficient.entropy_ok;
	}
	return rep;
}

inline CertificateReport verify_certificate(double p, CertificateMode mode = CertificateMode::sufficient,
                                            const CertificateOptions& opt = {}) {
	const CertificateParams cp = choose_params(p);
	return verify_certificate(p, cp.n, cp.d, mode, opt);
}

/// Smallest n in [lo, hi] whose direct certificate passes for fixed (p, d), if any.
inline std::optional<BigInt> smallest_passing_n(double p, unsigned d, std::uint64_t lo, std::uint64_t hi,
                                                const CertificateOptions& opt = {}) {
	for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n) {
		if (verify_certificate(p, BigInt(n), d, CertificateMode::direct, opt).pass) {
			return BigInt(n);
		}
	}
	return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reference table of sufficient parameters
// ---------------------------------------------------------------------------

struct TableRow {
	double p;
	BigInt n;
	unsigned d;
	std::string quoted_dim;     ///< as published
	double quoted_value;
	bool quoted_exact;          ///< exact integer, otherwise an approximation
	unsigned quoted_sig_digits; ///< significant digits of an approximate quote
};

inline std::vector<TableRow> reference_table() {
	return {
	    {2.0, BigInt(71), 2, "3676", 3676.0, true, 4},
	    {1.5, BigInt(200), 2, "31145", 31145.0, true, 5},
	    {1.25, BigInt(70289), 3, "4.6e9", 4.6e9, false, 2},
	    {1.125, BigInt("1000000000000"), 5, "9.96e24", 9.96e24, false, 3},
	    {1.0625, BigInt("10000000000000000000000000000"), 9, "9.99978785e55", 9.99978785e55, false, 9},
	};
}

struct TableComparison {
	TableRow row;
	BigInt computed_dim;
	double relative_difference = 0.0; ///< |computed - quoted| / quoted
	bool agrees = false;              ///< exact match, or agreement to the quoted digits
	CertificateReport certificate;
};

inline TableComparison compare_table_row(const TableRow& row, const CertificateOptions& opt = {}) {
	TableComparison cmp{row, dim_exact(row.n, row.d), 0.0, false,
	                    verify_certificate(row.p, row.n, row.d, CertificateMode::direct, opt)};
	const double computed = to_double(cmp.computed_dim);
	cmp.relative_difference = std::abs(computed - row.quoted_value) / row.quoted_value;
	if (row.quoted_exact) {
		cmp.agrees = cmp.computed_dim == BigInt(row.quoted_dim);
	} else {
		// Half a unit in the last quoted digit.
		const double exponent = std::floor(std::log10(row.quoted_value));
		const double half_ulp = 0.5 * std::pow(10.0, exponent - (row.quoted_sig_digits - 1));
		cmp.agrees = std::abs(computed - row.quoted_value) <= half_ulp * (1 + 1e-12);
	}
	return cmp;
}

// ---------------------------------------------------------------------------
// Degree selection, tradeoff exponent, gap inequality
// ---------------------------------------------------------------------------

/// The double exactly, as a rational.
inline BigRational exact_rational(double v) {
	if (!std::isfinite(v)) {
		throw ParameterError("exact_rational: value must be finite");
	}
	int exp = 0;
	const double mant = std::frexp(v, &exp);
	const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
	BigRational r{BigInt(scaled)};
	exp -= 53;
	if (exp >= 0) {
		r *= BigRational(BigInt(1) << exp);
	} else {
		r /= BigRational(BigInt(1) << -exp);
	}
	return r;
}

struct DegreeChoice {
	unsigned d = 0;
	bool tight = false; ///< eps equals multinomial(md; d, ..., d)^{-1}
	BigInt multinomial;
};

inline BigInt equal_multinomial(unsigned m, unsigned d) {
	return multinomial(std::span<const unsigned>(std::vector<unsigned>(m, d)));
}

/**
 * The d with multinomial(md; d..d)^{-1} <= eps < multinomial(m(d-1); ..)^{-1}.
 *
 * The right inequality is vacuous at d = 1. Comparisons are exact.
 */
inline DegreeChoice epsilon_to_d(const BigRational& eps, unsigned m) {
	if (!(eps > 0 && eps < 1)) {
		throw ParameterError("epsilon_to_d: eps must lie in (0, 1)");
	}
	if (m == 0) {
		throw ParameterError("epsilon_to_d: m must be positive");
	}
	for (unsigned d = 1;; ++d) {
		const BigInt mult = equal_multinomial(m, d);
		const BigRational prod = eps * BigRational(mult);
		if (prod >= 1) {
			return {d, prod == 1, mult};
		}
	}
}

/**
 * Floating-point entry point; eps within relative 1e-12 of a multinomial
 * inverse counts as equal to it, so eps = 1/6 selects the tight degree.
 */
inline DegreeChoice epsilon_to_d(double eps, unsigned m) {
	if (!(eps > 0 && eps < 1)) {
		throw ParameterError("epsilon_to_d: eps must lie in (0, 1)");
	}
	if (m == 0) {
		throw ParameterError("epsilon_to_d: m must be positive");
	}
	const BigRational exact = exact_rational(eps);
	for (unsigned d = 1;; ++d) {
		const BigInt mult = equal_multinomial(m, d);
		const BigRational prod = exact * BigRational(mult);
		const double rel = std::abs(prod.convert_to<double>() - 1.0);
		if (rel <= 1e-12) {
			return {d, true, mult};
		}
		if (prod >= 1) {
			return {d, false, mult};
		}
	}
}

struct TradeoffPoint {
	unsigned m = 0;
	double alpha = 0.0;
	double f_value = 0.0;
};

/// f_m(alpha) = m + 2 alpha ln(1/m + e m^{-m/(2 alpha)}) / ln m.
inline TradeoffPoint tradeoff_f(unsigned m, double alpha) {
	if (m < 2) {
		throw ParameterError("tradeoff_f: m must be at least 2");
	}
	if (!(alpha > 0 && alpha < m)) {
		throw ParameterError("tradeoff_f: alpha must lie in (0, m)");
	}
	const double md = m;
	const double inner = 1.0 / md + std::numbers::e * std::pow(md, -md / (2.0 * alpha));
	return {m, alpha, md + 2.0 * alpha * std::log(inner) / std::log(md)};
}

/// Binary entropy in bits, h(0) = h(1) = 0.
inline double binary_entropy(double x) {
	if (!(x >= 0 && x <= 1)) {
		throw ParameterError("binary_entropy: x must lie in [0, 1]");
	}
	if (x == 0 || x == 1) {
		return 0.0;
	}
	return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

struct GapCheck {
	double lhs_bits = 0.0;
	double rhs_bits = 0.0;
	bool satisfied = false;
};

/// 2 (1 - l/n^2) log n + h(l/n^2) < -2 log(1 - E).
inline GapCheck hastings_gap_check(std::uint64_t n, std::uint64_t ell, double e_lower) {
	if (n == 0 || ell < 1 || ell > n * n) {
		throw ParameterError("hastings_gap_check: need 1 <= l <= n^2");
	}
	if (!(e_lower > 0 && e_lower < 1)) {
		throw ParameterError("hastings_gap_check: E must lie in (0, 1)");
	}
	const double frac = static_cast<double>(ell) / (static_cast<double>(n) * static_cast<double>(n));
	GapCheck g;
	g.lhs_bits = 2.0 * (1.0 - frac) * std::log2(static_cast<double>(n)) + binary_entropy(frac);
	g.rhs_bits = -2.0 * std::log2(1.0 - e_lower);
	g.satisfied = g.lhs_bits < g.rhs_bits;
	return g;
}

} // namespace entsub
