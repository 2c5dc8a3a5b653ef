#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace lockwork {

/// splitmix64 generator. Bounded draws are done here (not via <random>
/// distributions) so results are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  bool bit() { return next() >> 63; }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
      std::uint64_t v = next();
      if (v < limit) return v % n;
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  /// k distinct elements drawn uniformly, in draw order.
  template <class T>
  std::vector<T> sample(std::vector<T> pool, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + below(pool.size() - i)]);
    pool.resize(k);
    return pool;
  }

  /// Independent stream derived from this seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x632be59bd9b4e019ull * (stream + 1)));
    return r.next();
  }

 private:
  std::uint64_t s_;
};

}  // namespace lockwork
