#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "ffm/lfun.hpp"

namespace ffm::moments {

using ffpoly::Polynomial;
using lfun::LPolynomial;
using lfun::QuadraticAlgebraic;

// d_4 over monic polynomials of degree <= max_degree, indexed by integer code.
class D4Table {
 public:
  D4Table(std::uint32_t q, unsigned max_degree);

  std::uint32_t q() const noexcept { return q_; }
  unsigned max_degree() const noexcept { return max_degree_; }
  std::uint64_t operator[](std::uint64_t code) const { return values_[code]; }
  const std::vector<std::uint32_t>& values() const noexcept { return values_; }

 private:
  std::uint32_t q_;
  unsigned max_degree_;
  std::vector<std::uint32_t> values_;
};

// Layers e_n = sum_{f in M_n} d_4(f) chi_D(f), n <= 4g, for D in H_{2g+1}.
class AfeKernel {
 public:
  AfeKernel(std::uint32_t q, unsigned g);

  std::uint32_t q() const noexcept { return q_; }
  unsigned g() const noexcept { return g_; }
  std::vector<std::int64_t> layers(const Polynomial& D) const;
  // Shared instance per (q, g).
  static std::shared_ptr<const AfeKernel> get(std::uint32_t q, unsigned g);

 private:
  std::uint32_t q_;
  unsigned g_;
  unsigned d_;
  std::uint64_t residues_;
  D4Table d4_;
  std::vector<std::uint32_t> add_;  // digit-wise sums of residue codes; empty when too large
};

struct AfeRecord {
  QuadraticAlgebraic lhs;
  QuadraticAlgebraic rhs;
  bool equal;
  std::vector<std::int64_t> layers;
  // Layers agree with the coefficients of L(u)^4.
  bool layers_match_power;
};

AfeRecord afe_check(const Polynomial& D);
AfeRecord afe_check(const AfeKernel& kernel, const LPolynomial& L);

struct AfeSweep {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::uint64_t layer_mismatches = 0;
  std::vector<std::uint64_t> failing_codes;
};

AfeSweep afe_sweep(std::uint32_t q, unsigned g);

struct SweepOptions {
  std::filesystem::path cache_dir;  // empty: no persistence
  unsigned shards = 1;
  unsigned workers = 1;
  // Stop after this many freshly computed shards (simulates an interrupted run).
  std::optional<unsigned> stop_after;
};

// Every D in H_{2g+1} once, in code order.
std::vector<LPolynomial> ensemble_sweep(std::uint32_t q, unsigned g, const SweepOptions& options = {});

// Per-shard cache file name inside the cache directory.
std::filesystem::path shard_path(const std::filesystem::path& dir, std::uint32_t q, unsigned g, unsigned shard,
                                 unsigned shards);

struct MomentReport {
  std::uint32_t q;
  unsigned g;
  unsigned k;
  QuadraticAlgebraic exact_sum;
  long double float_value;
  std::uint64_t ensemble_size;
  std::optional<long double> theory_polynomial;
  std::optional<long double> theory_conjecture;
  double elapsed_seconds;
};

// sum over the given L of L(1/2)^k, exactly.
QuadraticAlgebraic exact_power_sum(const std::vector<LPolynomial>& ensemble, unsigned k);
MomentReport kth_moment(const std::vector<LPolynomial>& ensemble, std::uint32_t q, unsigned g, unsigned k);
MomentReport kth_moment(std::uint32_t q, unsigned g, unsigned k, const SweepOptions& options = {});

struct ShiftedMomentPoint {
  long double theta;
  long double k;
  long double value;
  long double M;
  long double V;
};

ShiftedMomentPoint shifted_moment(const std::vector<LPolynomial>& ensemble, unsigned g, long double theta, long double k);

long double main_term_direct(std::uint32_t q, unsigned g, unsigned y);

struct DistributionStats {
  long double theta;
  std::uint64_t samples;
  std::uint64_t excluded;
  long double mean;
  long double variance;
  long double M;
  long double V;
  std::vector<long double> bin_edges;
  std::vector<std::uint64_t> counts;
  std::vector<long double> log_values;
};

DistributionStats distribution_stats(const std::vector<LPolynomial>& ensemble, unsigned g, long double theta,
                                     unsigned bins = 20);

}  // namespace ffm::moments
