#include "ffm/moments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "ffm/bounds.hpp"
#include "ffm/characters.hpp"

namespace ffm::moments {

using ffpoly::ipow;
using lfun::BigInt;
using lfun::Rational;

namespace {

constexpr const char* kCacheMagic = "FFMCACHE";
constexpr int kCacheVersion = 1;
constexpr std::uint64_t kMaxAddTable = 16'000'000;

std::vector<std::uint64_t> convolve(std::uint32_t q, unsigned max_degree, const std::vector<std::uint64_t>& a,
                                    const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> out(a.size(), 0);
  for (unsigned i = 0; i <= max_degree; ++i) {
    const std::uint64_t lo_i = ipow(q, i);
    for (std::uint64_t x = lo_i; x < 2 * lo_i; ++x) {
      if (!a[x]) continue;
      for (unsigned j = 0; i + j <= max_degree; ++j) {
        const std::uint64_t lo_j = ipow(q, j);
        for (std::uint64_t y = lo_j; y < 2 * lo_j; ++y)
          if (b[y]) out[ffpoly::multiply_codes(q, x, y)] += a[x] * b[y];
      }
    }
  }
  return out;
}

// Coefficients 0..n of L(u)^4.
std::vector<std::int64_t> fourth_power_coeffs(const std::vector<std::int64_t>& c, unsigned n) {
  std::vector<std::int64_t> p(n + 1, 0);
  p[0] = 1;
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<std::int64_t> next(n + 1, 0);
    for (unsigned i = 0; i <= n; ++i)
      for (unsigned j = 0; j < c.size() && i + j <= n; ++j) next[i + j] += p[i] * c[j];
    p = std::move(next);
  }
  return p;
}

void require_even_k(unsigned k) {
  if (k % 2) throw InvalidArgument("odd moments are not defined here; k must be even");
}

std::vector<std::int64_t> coefficients_for(const lfun::PrimeCharacterCache& cache, const Polynomial& D, unsigned g,
                                           bool full) {
  return full ? cache.euler_coefficients(D, 2 * g) : cache.via_functional_equation(D).coeffs();
}

}  // namespace

// ---------------------------------------------------------------- d4

D4Table::D4Table(std::uint32_t q, unsigned max_degree) : q_(q), max_degree_(max_degree) {
  ffpoly::check_budget(q, max_degree);
  const std::uint64_t size = 2 * ipow(q, max_degree);
  std::vector<std::uint64_t> one(size, 0);
  for (unsigned i = 0; i <= max_degree; ++i)
    for (std::uint64_t x = ipow(q, i); x < 2 * ipow(q, i); ++x) one[x] = 1;
  const auto d2 = convolve(q, max_degree, one, one);
  const auto d4 = convolve(q, max_degree, d2, d2);
  values_.assign(d4.begin(), d4.end());
}

// ---------------------------------------------------------------- AFE

AfeKernel::AfeKernel(std::uint32_t q, unsigned g)
    : q_(q), g_(g), d_(2 * g + 1), residues_(ipow(q, 2 * g + 1)), d4_(q, 4 * g) {
  if (g < 1) throw InvalidArgument("genus must be positive");
  characters::require_q_1_mod_4(q);
  if (residues_ * residues_ <= kMaxAddTable) {
    add_.resize(residues_ * residues_);
    std::vector<std::uint32_t> rd(d_), ld(d_);
    for (std::uint64_t r = 0; r < residues_; ++r) {
      std::uint64_t t = r;
      for (unsigned j = 0; j < d_; ++j, t /= q) rd[j] = static_cast<std::uint32_t>(t % q);
      for (std::uint64_t lo = 0; lo < residues_; ++lo) {
        std::uint64_t s = lo, out = 0, place = 1;
        for (unsigned j = 0; j < d_; ++j, s /= q, place *= q) out += ((rd[j] + s % q) % q) * place;
        add_[r * residues_ + lo] = static_cast<std::uint32_t>(out);
      }
    }
  }
}

std::shared_ptr<const AfeKernel> AfeKernel::get(std::uint32_t q, unsigned g) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, std::shared_ptr<const AfeKernel>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{q, g}];
  if (!slot) slot = std::make_shared<const AfeKernel>(q, g);
  return slot;
}

std::vector<std::int64_t> AfeKernel::layers(const Polynomial& D) const {
  if (D.modulus() != q_ || static_cast<unsigned>(D.deg()) != d_) throw InvalidArgument("discriminant does not match kernel");
  // chi_D(f) = (f/D) for monic f since q = 1 mod 4.
  const characters::ResidueCharacter chi(D);
  const auto& map = chi.residue_map();
  const auto& d4 = d4_.values();
  std::vector<std::int64_t> e(4 * g_ + 1, 0);
  for (unsigned n = 0; n < d_ && n <= 4 * g_; ++n) {
    std::int64_t s = 0;
    for (std::uint64_t f = ipow(q_, n); f < 2 * ipow(q_, n); ++f) s += static_cast<std::int64_t>(d4[f]) * chi[f];
    e[n] = s;
  }
  for (unsigned n = d_; n <= 4 * g_; ++n) {
    std::int64_t s = 0;
    const std::uint64_t hlo = ipow(q_, n - d_);
    for (std::uint64_t hi = hlo; hi < 2 * hlo; ++hi) {
      const std::uint64_t base = hi * residues_;
      const std::uint64_t r = map.reduce(base);
      const std::uint32_t* dd = d4.data() + base;
      if (!add_.empty()) {
        const std::uint32_t* row = add_.data() + r * residues_;
        for (std::uint64_t lo = 0; lo < residues_; ++lo) s += static_cast<std::int64_t>(dd[lo]) * chi[row[lo]];
      } else {
        for (std::uint64_t lo = 0; lo < residues_; ++lo) s += static_cast<std::int64_t>(dd[lo]) * chi[map.add(r, lo)];
      }
    }
    e[n] = s;
  }
  return e;
}

AfeRecord afe_check(const AfeKernel& kernel, const LPolynomial& L) {
  const std::uint32_t q = kernel.q();
  const unsigned g = kernel.g();
  if (static_cast<unsigned>(L.g()) != g) throw InvalidArgument("genus does not match kernel");
  const auto e = kernel.layers(L.D());
  const auto [A, B] = lfun::scaled_value_at_half(L);
  // (A + B sqrt q)^4 = q^{4g} L(1/2)^4
  const BigInt a(A), b(B);
  const BigInt a2 = a * a + q * b * b, b2 = 2 * a * b;
  const BigInt la = a2 * a2 + q * b2 * b2, lb = 2 * a2 * b2;
  BigInt ra = 0, rb = 0;
  for (unsigned n = 0; n <= 4 * g; ++n) {
    const int mult = n < 4 * g ? 2 : 1;
    if (n % 2 == 0)
      ra += mult * BigInt(e[n]) * BigInt(ipow(q, 4 * g - n / 2));
    else
      rb += mult * BigInt(e[n]) * BigInt(ipow(q, 4 * g - (n + 1) / 2));
  }
  const Rational scale(BigInt(ipow(q, 4 * g)));
  AfeRecord rec{QuadraticAlgebraic(q, Rational(la) / scale, Rational(lb) / scale),
                QuadraticAlgebraic(q, Rational(ra) / scale, Rational(rb) / scale), la == ra && lb == rb, e, false};
  rec.layers_match_power = fourth_power_coeffs(L.coeffs(), 4 * g) == e;
  return rec;
}

AfeRecord afe_check(const Polynomial& D) {
  lfun::validate_discriminant(D);
  const unsigned g = static_cast<unsigned>(D.deg() - 1) / 2;
  ffpoly::check_budget(D.modulus(), 4 * g);
  return afe_check(*AfeKernel::get(D.modulus(), g), lfun::compute_L(D));
}

AfeSweep afe_sweep(std::uint32_t q, unsigned g) {
  ffpoly::check_budget(q, 4 * g);
  const auto kernel = AfeKernel::get(q, g);
  AfeSweep out;
  for (const auto& L : ensemble_sweep(q, g)) {
    const auto rec = afe_check(*kernel, L);
    ++out.cases;
    if (!rec.equal) {
      ++out.failures;
      out.failing_codes.push_back(L.D().code());
    }
    if (!rec.layers_match_power) ++out.layer_mismatches;
  }
  return out;
}

// ---------------------------------------------------------------- sweep and cache

std::filesystem::path shard_path(const std::filesystem::path& dir, std::uint32_t q, unsigned g, unsigned shard,
                                 unsigned shards) {
  std::ostringstream name;
  name << "lpoly_q" << q << "_g" << g << "_" << shard << "of" << shards << ".csv";
  return dir / name.str();
}

namespace {

void write_shard(const std::filesystem::path& path, std::uint32_t q, unsigned g, const std::vector<LPolynomial>& ls) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw CacheError("cannot write cache file " + tmp.string());
    out << kCacheMagic << ',' << kCacheVersion << ',' << q << ',' << g << '\n';
    for (const auto& L : ls) {
      out << L.D().code() << ',' << g;
      for (auto c : L.coeffs()) out << ',' << c;
      out << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

std::vector<LPolynomial> read_shard(const std::filesystem::path& path, std::uint32_t q, unsigned g,
                                    const std::vector<Polynomial>& expected) {
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line)) throw CacheError("empty cache file " + path.string());
  std::ostringstream header;
  header << kCacheMagic << ',' << kCacheVersion << ',' << q << ',' << g;
  if (line != header.str()) throw CacheError("cache header mismatch in " + path.string() + ": " + line);
  std::vector<LPolynomial> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::int64_t> fields;
    while (std::getline(ls, tok, ',')) fields.push_back(std::stoll(tok));
    if (fields.size() != 2 * g + 3 || fields[1] != static_cast<std::int64_t>(g))
      throw CacheError("malformed cache record in " + path.string());
    const std::size_t i = out.size();
    if (i >= expected.size() || expected[i].code() != static_cast<std::uint64_t>(fields[0]))
      throw CacheError("cache records do not match the ensemble in " + path.string());
    out.emplace_back(expected[i], std::vector<std::int64_t>(fields.begin() + 2, fields.end()));
  }
  if (out.size() != expected.size()) throw CacheError("truncated cache file " + path.string());
  return out;
}

}  // namespace

std::vector<LPolynomial> ensemble_sweep(std::uint32_t q, unsigned g, const SweepOptions& options) {
  if (g < 1) throw InvalidArgument("genus must be positive");
  characters::require_q_1_mod_4(q);
  ffpoly::check_budget(q, 2 * g + 1);
  const unsigned shards = std::max(1u, options.shards);
  const unsigned workers = std::max(1u, std::min(options.workers, shards));
  const bool full = g <= 2;
  const auto ds = ffpoly::enumerate(ffpoly::SetKind::Squarefree, q, 2 * g + 1);
  const lfun::PrimeCharacterCache cache(q, full ? 2 * g : g, 2 * g + 1);
  if (!options.cache_dir.empty()) std::filesystem::create_directories(options.cache_dir);

  std::vector<std::vector<LPolynomial>> parts(shards);
  std::vector<char> done(shards, 0);
  std::atomic<unsigned> next{0}, fresh{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto work = [&] {
    try {
      for (unsigned s; (s = next++) < shards;) {
        const std::size_t lo = ds.size() * s / shards, hi = ds.size() * (s + 1) / shards;
        const std::vector<Polynomial> slice(ds.begin() + static_cast<std::ptrdiff_t>(lo),
                                            ds.begin() + static_cast<std::ptrdiff_t>(hi));
        if (!options.cache_dir.empty()) {
          const auto path = shard_path(options.cache_dir, q, g, s, shards);
          if (std::filesystem::exists(path)) {
            parts[s] = read_shard(path, q, g, slice);
            done[s] = 1;
            continue;
          }
        }
        if (options.stop_after && fresh.fetch_add(1) >= *options.stop_after) continue;
        for (const auto& D : slice) parts[s].emplace_back(D, coefficients_for(cache, D, g, full));
        if (!options.cache_dir.empty()) write_shard(shard_path(options.cache_dir, q, g, s, shards), q, g, parts[s]);
        done[s] = 1;
      }
    } catch (...) {
      std::lock_guard lock(err_mu);
      if (!err) err = std::current_exception();
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  std::vector<LPolynomial> out;
  out.reserve(ds.size());
  for (unsigned s = 0; s < shards; ++s)
    if (done[s])
      for (auto& L : parts[s]) out.push_back(std::move(L));
  return out;
}

// ---------------------------------------------------------------- moments

QuadraticAlgebraic exact_power_sum(const std::vector<LPolynomial>& ensemble, unsigned k) {
  require_even_k(k);
  if (ensemble.empty()) throw InvalidArgument("empty ensemble");
  const std::uint32_t q = ensemble.front().q();
  const unsigned g = static_cast<unsigned>(ensemble.front().g());
  BigInt sa = 0, sb = 0;
  for (const auto& L : ensemble) {
    if (L.q() != q || static_cast<unsigned>(L.g()) != g) throw InvalidArgument("mixed ensemble");
    const auto [A, B] = lfun::scaled_value_at_half(L);
    BigInt pa = 1, pb = 0;
    for (unsigned i = 0; i < k; ++i) {
      const BigInt na = pa * A + q * pb * B, nb = pa * B + pb * A;
      pa = na;
      pb = nb;
    }
    sa += pa;
    sb += pb;
  }
  BigInt scale = 1;
  for (unsigned i = 0; i < g * k; ++i) scale *= q;
  return QuadraticAlgebraic(q, Rational(sa, scale), Rational(sb, scale));
}

MomentReport kth_moment(const std::vector<LPolynomial>& ensemble, std::uint32_t q, unsigned g, unsigned k) {
  require_even_k(k);
  const auto t0 = std::chrono::steady_clock::now();
  MomentReport r{q, g, k, QuadraticAlgebraic(q), 0, ensemble.size(), std::nullopt, std::nullopt, 0};
  r.exact_sum = exact_power_sum(ensemble, k);
  r.float_value = r.exact_sum.to_long_double();
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

MomentReport kth_moment(std::uint32_t q, unsigned g, unsigned k, const SweepOptions& options) {
  require_even_k(k);
  const auto t0 = std::chrono::steady_clock::now();
  auto r = kth_moment(ensemble_sweep(q, g, options), q, g, k);
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

ShiftedMomentPoint shifted_moment(const std::vector<LPolynomial>& ensemble, unsigned g, long double theta, long double k) {
  const auto mv = bounds::MV_values(theta, g);
  ShiftedMomentPoint p{theta, k, 0, mv.M, mv.V};
  for (const auto& L : ensemble) {
    const lfun::Complex u = std::polar(1.0L / std::sqrt(static_cast<long double>(L.q())), theta);
    p.value += std::pow(std::abs(L.evaluate(u)), k);
  }
  return p;
}

long double main_term_direct(std::uint32_t q, unsigned g, unsigned y) {
  if (y > g) throw InvalidArgument("main term needs y <= g");
  characters::require_q_1_mod_4(q);
  ffpoly::check_budget(q, 2 * g);
  const long double Q = q;
  long double total = 0;
  ffpoly::for_each(ffpoly::SetKind::MonicUpTo, q, 2 * g, [&](const Polynomial& l) {
    long double weight = 1;  // d4(l^2) phi(l^2) / |l|^3
    std::vector<unsigned> prime_degrees;
    for (const auto& [P, e] : ffpoly::factor(l).factors) {
      const unsigned k = 2 * e;
      weight *= static_cast<long double>((k + 1) * (k + 2) * (k + 3) / 6);
      weight *= 1 - std::pow(Q, -P.deg());
      prime_degrees.push_back(static_cast<unsigned>(P.deg()));
    }
    weight /= std::pow(Q, l.deg());
    // number of C | l^infty by degree, up to y
    std::vector<long double> cnt(y + 1, 0);
    cnt[0] = 1;
    for (unsigned d : prime_degrees)
      for (unsigned n = d; n <= y; ++n) cnt[n] += cnt[n - d];
    long double csum = 0;
    for (unsigned n = 0; n <= y; ++n) csum += cnt[n] * std::pow(Q, -2.0L * n);
    total += weight * csum;
  });
  return std::pow(Q, 2 * g + 1) * (1 - 1 / Q) * total;
}

DistributionStats distribution_stats(const std::vector<LPolynomial>& ensemble, unsigned g, long double theta,
                                     unsigned bins) {
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  const auto mv = bounds::MV_values(theta, g);
  DistributionStats s{theta, 0, 0, 0, 0, mv.M, mv.V, {}, {}, {}};
  for (const auto& L : ensemble) {
    const lfun::Complex u = std::polar(1.0L / std::sqrt(static_cast<long double>(L.q())), theta);
    const long double m = std::abs(L.evaluate(u));
    if (m <= 1e-12L) {
      ++s.excluded;
      continue;
    }
    s.log_values.push_back(std::log(m));
  }
  s.samples = s.log_values.size();
  if (s.samples == 0) return s;
  for (auto v : s.log_values) s.mean += v;
  s.mean /= s.samples;
  for (auto v : s.log_values) s.variance += (v - s.mean) * (v - s.mean);
  s.variance /= s.samples;
  const auto [mn, mx] = std::minmax_element(s.log_values.begin(), s.log_values.end());
  const long double lo = *mn, hi = *mx > *mn ? *mx : *mn + 1;
  s.counts.assign(bins, 0);
  for (unsigned i = 0; i <= bins; ++i) s.bin_edges.push_back(lo + (hi - lo) * i / bins);
  for (auto v : s.log_values) {
    unsigned b = static_cast<unsigned>((v - lo) / (hi - lo) * bins);
    ++s.counts[std::min(b, bins - 1)];
  }
  return s;
}

}  // namespace ffm::moments
