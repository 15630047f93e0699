#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace barrierwalk {

class LatticeStepDistribution;

inline constexpr std::size_t kDefaultMaxKeys = 10'000'000;

// Masses on a window of consecutive keys of L_n = {offset + key * lambda}.
// Keys outside [key_min, key_max()] carry zero mass.
struct LatticeTable {
  int n = 0;
  double offset = 0.0;
  double lambda = 1.0;
  std::int64_t key_min = 0;
  std::vector<double> mass;
  double defect = 0.0;  // mass dropped by tail truncation while building

  bool empty() const noexcept { return mass.empty(); }
  std::int64_t key_max() const noexcept { return key_min + static_cast<std::int64_t>(mass.size()) - 1; }
  double value(std::int64_t key) const noexcept {
    return offset + static_cast<double>(key) * lambda;
  }
  double at(std::int64_t key) const noexcept {
    if (key < key_min || key > key_max()) return 0.0;
    return mass[static_cast<std::size_t>(key - key_min)];
  }
  double total() const noexcept;
  // Key carrying the largest mass (first one on ties); requires a non-empty table.
  std::int64_t argmax_key() const noexcept;
};

using DensityTable = LatticeTable;

// Unit mass at key 0 of L_0.
LatticeTable point_mass_at_origin(const LatticeStepDistribution& dist);

// One more step: table on L_k to table on L_{k+1}. Throws SizeOverflow when
// the result would exceed max_keys.
LatticeTable add_step(const LatticeTable& table, const LatticeStepDistribution& dist,
                      std::size_t max_keys = kDefaultMaxKeys);

// Law of the sum of two independent lattice variables with the same span.
LatticeTable convolve(const LatticeTable& a, const LatticeTable& b,
                      std::size_t max_keys = kDefaultMaxKeys);

// Drops whole keys from the chosen ends while the dropped mass stays within
// budget; exact zeros at the ends are always dropped. Returns the dropped mass,
// which is also added to table.defect.
double trim_tails(LatticeTable& table, double budget, bool lower, bool upper);

// Keeps keys in [lo, hi] (inclusive) and returns the mass of the discarded part.
double clip_keys(LatticeTable& table, std::int64_t lo, std::int64_t hi);

// CSV with header "x,mass", x = offset + key * lambda at 17 significant digits.
void write_csv(const LatticeTable& table, std::ostream& out);

}  // namespace barrierwalk
