#include "ladder/basis.hpp"

#include <bit>
#include <stdexcept>

namespace ladder {

namespace {

std::vector<std::uint64_t> pascal_table(int n) {
  std::vector<std::uint64_t> t((n + 1) * (n + 1), 0);
  for (int i = 0; i <= n; ++i) {
    t[i * (n + 1)] = 1;
    for (int k = 1; k <= i; ++k) {
      t[i * (n + 1) + k] =
          t[(i - 1) * (n + 1) + k - 1] + (k <= i - 1 ? t[(i - 1) * (n + 1) + k] : 0);
    }
  }
  return t;
}

}  // namespace

SectorBasis::SectorBasis(int n_sites, int sz_twice, std::vector<std::uint64_t> states)
    : n_sites_(n_sites),
      sz_twice_(sz_twice),
      n_up_((n_sites + sz_twice) / 2),
      states_(std::move(states)),
      binom_(pascal_table(n_sites)) {}

std::uint64_t SectorBasis::binomial(int n, int k) const {
  if (k < 0 || k > n) return 0;
  return binom_[n * (n_sites_ + 1) + k];
}

bool SectorBasis::contains(std::uint64_t bits) const {
  return std::popcount(bits) == n_up_ && (n_sites_ >= 64 || bits < (1ull << n_sites_));
}

Eigen::Index SectorBasis::rank(std::uint64_t bits) const {
  if (!contains(bits)) {
    throw std::invalid_argument("SectorBasis::rank: state not in sector");
  }
  // colex rank of the set-bit combination == position in ascending numeric order
  std::uint64_t r = 0;
  int t = 0;
  std::uint64_t b = bits;
  while (b != 0) {
    int p = std::countr_zero(b);
    ++t;
    r += binomial(p, t);
    b &= b - 1;
  }
  return static_cast<Eigen::Index>(r);
}

SectorBasis enumerate_sector(int n_sites, int sz_twice) {
  if (n_sites < 1 || n_sites > 62) {
    throw std::invalid_argument("enumerate_sector: n_sites out of range [1,62]");
  }
  if (sz_twice < -n_sites || sz_twice > n_sites) {
    throw std::invalid_argument("enumerate_sector: |sz_twice| exceeds n_sites");
  }
  if ((n_sites + sz_twice) % 2 != 0) {
    throw std::invalid_argument("enumerate_sector: n_sites + sz_twice must be even");
  }
  const int n_up = (n_sites + sz_twice) / 2;

  std::vector<std::uint64_t> states;
  if (n_up == 0 || n_up == n_sites) {
    states.push_back(n_up == 0 ? 0 : (1ull << n_sites) - 1);
    return SectorBasis(n_sites, sz_twice, std::move(states));
  }

  // Gosper's hack walks the fixed-popcount words in ascending order
  const std::uint64_t limit = 1ull << n_sites;
  std::uint64_t v = (1ull << n_up) - 1;
  while (v < limit) {
    states.push_back(v);
    std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
  }
  return SectorBasis(n_sites, sz_twice, std::move(states));
}

}  // namespace ladder
