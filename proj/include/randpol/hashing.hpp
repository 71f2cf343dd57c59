#ifndef RANDPOL_HASHING_HPP_
#define RANDPOL_HASHING_HPP_

#include <cstdint>
#include <cstring>
#include <string>

namespace randpol {

// 64-bit FNV-1a, used for frozen-parameter checksums, config hashes and
// checkpoint integrity checks.
class Fnv1a {
 public:
  static constexpr std::uint64_t kOffset = 1469598103934665603ULL;
  static constexpr std::uint64_t kPrime = 1099511628211ULL;

  void update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= static_cast<std::uint64_t>(p[i]);
      hash_ *= kPrime;
    }
  }

  void update_double(double v) { update(&v, sizeof(v)); }
  void update_u64(std::uint64_t v) { update(&v, sizeof(v)); }
  void update_string(const std::string& s) { update(s.data(), s.size()); }

  std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = kOffset;
};

inline std::uint64_t fnv1a_bytes(const void* data, std::size_t n) {
  Fnv1a h;
  h.update(data, n);
  return h.digest();
}

}  // namespace randpol

#endif  // RANDPOL_HASHING_HPP_
