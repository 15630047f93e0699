#include "barrierwalk/lattice_table.hpp"

#include <algorithm>
#include <ostream>

#include "barrierwalk/distributions.hpp"
#include "barrierwalk/error.hpp"
#include "barrierwalk/format.hpp"

namespace barrierwalk {

double LatticeTable::total() const noexcept {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

std::int64_t LatticeTable::argmax_key() const noexcept {
  auto it = std::max_element(mass.begin(), mass.end());
  return key_min + (it - mass.begin());
}

LatticeTable point_mass_at_origin(const LatticeStepDistribution& dist) {
  LatticeTable t;
  t.n = 0;
  t.offset = 0.0;
  t.lambda = dist.lambda();
  t.key_min = 0;
  t.mass = {1.0};
  return t;
}

LatticeTable add_step(const LatticeTable& table, const LatticeStepDistribution& dist,
                      std::size_t max_keys) {
  LatticeTable out;
  out.n = table.n + 1;
  out.offset = static_cast<double>(out.n) * dist.gamma();
  out.lambda = dist.lambda();
  out.defect = table.defect;
  if (table.empty()) {
    out.key_min = table.key_min + dist.min_key();
    return out;
  }
  const auto width = static_cast<std::size_t>(dist.max_key() - dist.min_key());
  const std::size_t size = table.mass.size() + width;
  if (size > max_keys) {
    throw Error(Errc::SizeOverflow, "table of " + std::to_string(size) + " keys exceeds cap of " +
                                        std::to_string(max_keys));
  }
  out.key_min = table.key_min + dist.min_key();
  out.mass.assign(size, 0.0);
  for (const auto& atom : dist.atoms()) {
    const auto shift = static_cast<std::size_t>(atom.key - dist.min_key());
    const double p = atom.prob;
    double* dst = out.mass.data() + shift;
    const double* src = table.mass.data();
    for (std::size_t i = 0; i < table.mass.size(); ++i) dst[i] += p * src[i];
  }
  return out;
}

LatticeTable convolve(const LatticeTable& a, const LatticeTable& b, std::size_t max_keys) {
  if (a.lambda != b.lambda) throw Error(Errc::InvalidArgument, "convolution of tables with different spans");
  LatticeTable out;
  out.n = a.n + b.n;
  out.offset = a.offset + b.offset;
  out.lambda = a.lambda;
  out.key_min = a.key_min + b.key_min;
  out.defect = a.defect + b.defect;
  if (a.empty() || b.empty()) return out;
  const std::size_t size = a.mass.size() + b.mass.size() - 1;
  if (size > max_keys) throw Error(Errc::SizeOverflow, "convolution exceeds key cap");
  out.mass.assign(size, 0.0);
  for (std::size_t j = 0; j < b.mass.size(); ++j) {
    const double p = b.mass[j];
    if (p == 0.0) continue;
    double* dst = out.mass.data() + j;
    for (std::size_t i = 0; i < a.mass.size(); ++i) dst[i] += p * a.mass[i];
  }
  return out;
}

double trim_tails(LatticeTable& table, double budget, bool lower, bool upper) {
  auto& m = table.mass;
  double dropped = 0.0;
  std::size_t lo = 0;
  std::size_t hi = m.size();
  if (lower) {
    while (lo < hi && (m[lo] == 0.0 || dropped + m[lo] <= budget)) dropped += m[lo++];
  }
  if (upper) {
    while (hi > lo && (m[hi - 1] == 0.0 || dropped + m[hi - 1] <= budget)) dropped += m[--hi];
  }
  if (lo > 0 || hi < m.size()) {
    m.erase(m.begin() + static_cast<std::ptrdiff_t>(hi), m.end());
    m.erase(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(lo));
    table.key_min += static_cast<std::int64_t>(lo);
  }
  table.defect += dropped;
  return dropped;
}

double clip_keys(LatticeTable& table, std::int64_t lo, std::int64_t hi) {
  if (table.empty()) return 0.0;
  double removed = 0.0;
  if (hi < lo || hi < table.key_min || lo > table.key_max()) {
    removed = table.total();
    table.mass.clear();
    table.key_min = lo;
    return removed;
  }
  const std::int64_t new_lo = std::max(lo, table.key_min);
  const std::int64_t new_hi = std::min(hi, table.key_max());
  const auto first = static_cast<std::size_t>(new_lo - table.key_min);
  const auto last = static_cast<std::size_t>(new_hi - table.key_min);
  for (std::size_t i = 0; i < first; ++i) removed += table.mass[i];
  for (std::size_t i = last + 1; i < table.mass.size(); ++i) removed += table.mass[i];
  table.mass.erase(table.mass.begin() + static_cast<std::ptrdiff_t>(last + 1), table.mass.end());
  table.mass.erase(table.mass.begin(), table.mass.begin() + static_cast<std::ptrdiff_t>(first));
  table.key_min = new_lo;
  return removed;
}

void write_csv(const LatticeTable& table, std::ostream& out) {
  out << "x,mass\n";
  for (std::size_t i = 0; i < table.mass.size(); ++i) {
    const auto key = table.key_min + static_cast<std::int64_t>(i);
    out << format_double(table.value(key)) << ',' << format_double(table.mass[i]) << '\n';
  }
}

}  // namespace barrierwalk
