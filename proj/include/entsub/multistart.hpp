#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace entsub {

/// splitmix64 finalizer; derives independent per-trial seeds from (master, counter).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
	std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (counter + 1);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

/**
 * Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware concurrency).
 *
 * Results land in slot i, so any reduction over the returned vector is
 * independent of scheduling.
 */
template <class Result, class Fn>
std::vector<Result> run_indexed(std::size_t count, std::size_t threads, Fn&& fn) {
	std::vector<Result> out(count);
	if (threads == 0) {
		threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
	}
	threads = std::min(threads, count);
	if (threads <= 1) {
		for (std::size_t i = 0; i < count; ++i) {
			out[i] = fn(i);
		}
		return out;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr error;
	std::mutex error_mutex;
	std::vector<std::thread> pool;
	pool.reserve(threads);
	for (std::size_t t = 0; t < threads; ++t) {
		pool.emplace_back([&] {
			for (std::size_t i = next++; i < count; i = next++) {
				try {
					out[i] = fn(i);
				} catch (...) {
					std::lock_guard lock(error_mutex);
					if (!error) {
						error = std::current_exception();
					}
				}
			}
		});
	}
	for (auto& th : pool) {
		th.join();
	}
	if (error) {
		std::rethrow_exception(error);
	}
	return out;
}

} // namespace entsub
