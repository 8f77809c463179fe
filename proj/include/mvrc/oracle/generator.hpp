#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "mvrc/oracle/schedule.hpp"

namespace mvrc::oracle {

struct GeneratorConfig {
  std::size_t exhaustive_threshold = 5000;  // enumerate every interleaving up to this many
  std::size_t samples = 256;                // random interleavings drawn above the threshold
  std::uint64_t seed = 1;
};

struct GenerationReport {
  std::size_t candidates = 0;
  std::size_t accepted = 0;
  std::map<Rejection, std::size_t> rejected;
  bool exhaustive = false;
};

// Multinomial count of unit interleavings, saturating at `cap`.
inline std::size_t interleaving_count(const std::vector<Transaction>& txns, std::size_t cap) {
  std::size_t total = 0;
  long double count = 1;
  for (const auto& t : txns) {
    for (std::size_t k = 1; k <= t.unit_count(); ++k) {
      ++total;
      count = count * static_cast<long double>(total) / static_cast<long double>(k);
    }
    if (count > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(count + 0.5L);
}

// Streams the schedules allowed under read committed that arise from
// interleaving the transactions' chunks. `visit` receives each accepted
// schedule and returns false to stop early.
template <class Visit>
GenerationReport generate_mvrc_schedules(const TransactionSet& txns, const SharedUniverse& universe,
                                         const GeneratorConfig& config, Visit&& visit) {
  GenerationReport report;
  const auto& ts = *txns;
  const auto initial = default_visibility(ts, *universe);
  std::size_t total_units = 0;
  for (const auto& t : ts) total_units += t.unit_count();

  bool stop = false;
  auto consider = [&](const std::vector<std::size_t>& units) {
    ++report.candidates;
    auto made = Schedule::make(txns, interleave(ts, units), initial, universe);
    if (auto* r = std::get_if<Rejection>(&made)) {
      ++report.rejected[*r];
      return;
    }
    ++report.accepted;
    if (!visit(std::get<Schedule>(made))) stop = true;
  };

  if (interleaving_count(ts, config.exhaustive_threshold) <= config.exhaustive_threshold) {
    report.exhaustive = true;
    std::vector<std::size_t> remaining(ts.size());
    for (std::size_t t = 0; t < ts.size(); ++t) remaining[t] = ts[t].unit_count();
    std::vector<std::size_t> units;
    units.reserve(total_units);
    auto rec = [&](auto&& self) -> void {
      if (stop) return;
      if (units.size() == total_units) {
        consider(units);
        return;
      }
      for (std::size_t t = 0; t < ts.size() && !stop; ++t) {
        if (!remaining[t]) continue;
        --remaining[t];
        units.push_back(t);
        self(self);
        units.pop_back();
        ++remaining[t];
      }
    };
    rec(rec);
    return report;
  }

  // Choosing the next transaction with probability proportional to its
  // remaining units draws interleavings uniformly.
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = 0; i < config.samples && !stop; ++i) {
    std::vector<std::size_t> remaining(ts.size());
    for (std::size_t t = 0; t < ts.size(); ++t) remaining[t] = ts[t].unit_count();
    std::vector<std::size_t> units;
    units.reserve(total_units);
    for (std::size_t left = total_units; left > 0; --left) {
      std::size_t pick = std::uniform_int_distribution<std::size_t>(0, left - 1)(rng);
      std::size_t t = 0;
      while (pick >= remaining[t]) pick -= remaining[t++];
      --remaining[t];
      units.push_back(t);
    }
    consider(units);
  }
  return report;
}

}  // namespace mvrc::oracle
