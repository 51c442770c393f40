#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace ladder {

// Computational-basis states of fixed total Sz. Bit i of a state word is
// the spin on site i (1 = up, 0 = down), so sz_twice = 2*popcount - n_sites.
// States are kept sorted ascending; rank() inverts state() via the
// combinatorial number system, no search.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int sz_twice, std::vector<std::uint64_t> states);

  int n_sites() const { return n_sites_; }
  int sz_twice() const { return sz_twice_; }
  int n_up() const { return n_up_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(states_.size()); }

  // unrank: k-th state in ascending order
  std::uint64_t state(Eigen::Index k) const { return states_[k]; }
  const std::vector<std::uint64_t>& states() const { return states_; }

  // rank of a state word; throws if the word is not in this sector
  Eigen::Index rank(std::uint64_t bits) const;

  bool contains(std::uint64_t bits) const;

 private:
  int n_sites_;
  int sz_twice_;
  int n_up_;
  std::vector<std::uint64_t> states_;
  std::vector<std::uint64_t> binom_;  // (n_sites+1)^2 Pascal table, row-major

  std::uint64_t binomial(int n, int k) const;
};

SectorBasis enumerate_sector(int n_sites, int sz_twice);

}  // namespace ladder
