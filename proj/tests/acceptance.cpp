// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <entsub/entsub.hpp>

#include "cli_runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <unistd.h>

using namespace entsub;

namespace {

struct Outcome {
	bool pass = false;
	std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
	const auto t0 = std::chrono::steady_clock::now();
	Outcome o;
	try {
		o = body();
	} catch (const std::exception& e) {
		o = {false, std::string("exception: ") + e.what()};
	}
	const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	const bool in_time = secs < budget_s;
	const bool pass = o.pass && in_time;
	failures += !pass;
	std::printf("criterion %d [PRIMARY] %s: %s (%s; %.3f s of %.0f s)\n", id, name.c_str(), pass ? "PASS" : "FAIL",
	            o.detail.c_str(), secs, budget_s);
	std::fflush(stdout);
}

std::string fmt(double v) {
	std::ostringstream s;
	s.precision(10);
	s << v;
	return s.str();
}

SubspaceBasis u22() { return build_kernel_subspace(2, {2, 2}, {3, 3}); }

} // namespace

int main() {
	criterion(1, "table reproduction (exact integers)", 1.0, [] {
		const BigInt a = dim_exact(BigInt(71), 2), b = dim_exact(BigInt(200), 2);
		return Outcome{a == 3676 && b == 31145, "dim_exact(71,2)=" + a.str() + ", dim_exact(200,2)=" + b.str()};
	});

	criterion(2, "certificate verification", 10.0, [] {
		const auto r2 = verify_certificate(2.0, BigInt(71), 2, CertificateMode::direct);
		const auto r15 = verify_certificate(1.5, BigInt(200), 2, CertificateMode::direct);
		bool grid = true;
		std::string modes;
		for (double p : {1.1, 1.25, 1.5, 2.0, 3.0, 10.0}) {
			const auto r = verify_certificate(p, CertificateMode::sufficient);
			grid = grid && r.pass;
			modes += fmt(p) + ":" + to_string(r.evaluation) + (r.pass ? "/pass " : "/FAIL ");
		}
		const bool margin_ok = std::abs(r2.margin_bits - 0.0279) <= 1e-4;
		return Outcome{r2.pass && margin_ok && r15.pass && grid,
		               "p=2 margin " + fmt(r2.margin_bits) + ", p=1.5 margin " + fmt(r15.margin_bits) +
		                   ", sufficient grid " + modes};
	});

	criterion(3, "dimension formulas", 30.0, [] {
		bool ok = true;
		std::string detail;
		for (std::size_t n : {2u, 3u, 4u}) {
			for (std::size_t m : {2u, 3u}) {
				const std::vector<std::size_t> nvec(m, n);
				std::size_t power = 1;
				for (std::size_t i = 0; i < m; ++i) power *= n;
				const std::size_t expected = power - m * (n - 1) - 1;
				const auto uc = build_uc(binomial_system(TensorShape(nvec)));
				const auto ker = build_kernel_subspace(2, std::vector<unsigned>(m, static_cast<unsigned>(n - 1)), nvec);
				ok = ok && uc.dim() == expected && ker.dim() == expected;
				detail += "(" + std::to_string(n) + "," + std::to_string(m) + ")=" + std::to_string(uc.dim()) + "/" +
				          std::to_string(ker.dim()) + " ";
			}
		}
		return Outcome{ok, detail + "[uc/kernel]"};
	});

	criterion(4, "coordinate/kernel equivalence", 10.0, [] {
		bool ok = true;
		std::string detail;
		const std::vector<std::pair<unsigned, std::vector<unsigned>>> cases{{2, {2, 2}}, {2, {1, 1, 1}}, {3, {1, 1}}};
		for (const auto& [a, dvec] : cases) {
			std::vector<std::size_t> nvec;
			for (unsigned d : dvec) nvec.push_back(symmetric_dim(a, d).convert_to<std::size_t>());
			const auto coord = build_uc(symmetric_kernel_system(a, dvec, nvec));
			const auto ker = build_kernel_subspace(a, dvec, nvec);
			const double dist = (coord.projector() - ker.projector()).norm();
			ok = ok && dist < 1e-10;
			detail += "a=" + std::to_string(a) + " dist " + fmt(dist) + " ";
		}
		return Outcome{ok, detail};
	});

	criterion(5, "product bound property suite", 60.0, [] {
		const auto bi = beauzamy_sample_check(2, 3, 3, 10000, 0, 1);
		const auto tri = multipartite_overlap_bound_check(2, {1, 1, 1}, 10000, 1, 1);
		const std::vector<CVector> f{CVector::Unit(2, 0), CVector::Unit(2, 1)};
		const double eq = product_projection_ratio(2, {1, 1}, f);
		const bool ok = bi.violations == 0 && std::abs(bi.bound - 1 / std::sqrt(20.0)) < 1e-15 && tri.violations == 0 &&
		                std::abs(tri.bound - 1 / std::sqrt(6.0)) < 1e-15 && std::abs(eq - 1 / std::sqrt(2.0)) < 1e-12;
		return Outcome{ok, std::to_string(bi.violations) + " of 10000 bipartite violations (min " + fmt(bi.min_ratio) +
		                       "), " + std::to_string(tri.violations) + " tripartite (min " + fmt(tri.min_ratio) +
		                       "), equality ratio " + fmt(eq)};
	});

	criterion(6, "entanglement sandwich", 60.0, [] {
		const auto u = u22();
		const auto est = geometric_measure(u, {64, 500, 1e-12, 0, 1});
		const auto h = min_output_entropy(u, 2.0, {{0}, {1}}, {64, 500, 1e-12, 1, 1}, 1.0 / 6.0);
		const double target = std::log2(36.0 / 26.0);
		const bool ok = est.numerical_upper >= 1.0 / 6.0 - 1e-9 && h.value_upper >= target - 1e-6;
		return Outcome{ok, "E upper " + fmt(est.numerical_upper) + " >= 1/6, H2 upper " + fmt(h.value_upper) +
		                       " >= log2(36/26) = " + fmt(target)};
	});

	criterion(7, "tensor-state entropy witness", 10.0, [] {
		const auto singlet = build_uc(ones_system(TensorShape{2, 2}));
		const auto u = u22();
		bool ok = true;
		std::string detail;
		for (const SubspaceBasis* s : {&singlet, &u}) {
			const auto cs = canonical_tensor_state(*s, {{0}, {1}});
			const auto spec = schmidt(cs.state, cs.shape, cs.cut);
			for (double p : {1.5, 2.0, 3.0}) {
				const double hp = renyi_entropy(spec, p);
				const double bound = hmin_tensor_upper_bound(s->dim(), s->ambient.dim(0), s->ambient.dim(1), p);
				ok = ok && hp <= bound + 1e-9;
				if (s == &singlet && p == 2.0) {
					ok = ok && std::abs(hp - 2.0) < 1e-12 && bound == 4.0;
				}
				detail += "dim" + std::to_string(s->dim()) + ",p" + fmt(p) + ":" + fmt(hp) + "<=" + fmt(bound) + " ";
			}
		}
		return Outcome{ok, detail};
	});

	criterion(8, "witness spectra", 30.0, [] {
		const auto u = u22();
		const Witness w = build_witness(u, 1.0 / 6.0);
		std::size_t neg = 0, one = 0;
		for (double v : w.report.eigenvalues) {
			neg += std::abs(v + 0.2) < 1e-10;
			one += std::abs(v - 1.0) < 1e-10;
		}
		const auto pos = witness_product_check(w.matrix, u.ambient, 10000, 0, 1);
		const bool ok = neg == 4 && one == 5 && std::abs(w.report.spectral_norm - 1.0) < 1e-10 && pos.min_value >= -1e-9;
		return Outcome{ok, std::to_string(neg) + " x -0.2, " + std::to_string(one) + " x 1.0, norm " +
		                       fmt(w.report.spectral_norm) + ", min product value " + fmt(pos.min_value)};
	});

	criterion(9, "determinism across thread counts", 120.0, [] {
		const std::string path =
		    (std::filesystem::temp_directory_path() / ("entsub_accept_" + std::to_string(::getpid()) + ".json")).string();
		const auto c = cli::run("construct --kernel --a 2 --d 2,2 --n 3,3 -o \"" + path + "\"");
		if (c.status != 0) return Outcome{false, "construct failed: " + c.out};
		const std::string base = "measure --subspace \"" + path + "\" --p 1.5,2,3 --trials 32 --seed 12345";
		const auto t1 = cli::run(base + " --threads 1");
		const auto t1b = cli::run(base + " --threads 1");
		const auto t2 = cli::run(base + " --threads 2");
		const auto t4 = cli::run(base + " --threads 4");
		std::filesystem::remove(path);
		const bool ok = t1.status == 0 && t1.out == t1b.out && cli::numeric_part(t1) == cli::numeric_part(t2) &&
		                cli::numeric_part(t1) == cli::numeric_part(t4);
		return Outcome{ok, "threads 1/1/2/4 outputs " + std::string(ok ? "byte-identical" : "differ") + " outside metadata"};
	});

	std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failures);
	return failures == 0 ? 0 : 1;
}
