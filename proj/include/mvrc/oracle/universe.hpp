#pragma once

#include <compare>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvrc/workload.hpp"

namespace mvrc::oracle {

struct TupleId {
  std::size_t relation = 0;
  std::size_t index = 0;

  auto operator<=>(const TupleId&) const = default;
};

// A finite set of tuples per relation together with one function per foreign key.
class Universe {
 public:
  Universe() = default;

  Universe(const Schema& schema, std::size_t tuples_per_relation)
      : Universe(schema, std::vector<std::size_t>(schema.relations.size(), tuples_per_relation)) {}

  Universe(const Schema& schema, std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.size() != schema.relations.size()) throw std::invalid_argument("one size per relation expected");
    offsets_.resize(sizes_.size());
    std::size_t total = 0;
    for (std::size_t r = 0; r < sizes_.size(); ++r) {
      offsets_[r] = total;
      total += sizes_[r];
    }
    total_ = total;
    for (const auto& fk : schema.foreign_keys) {
      const auto dom = schema.relation_index(fk.domain_relation);
      const auto rng = schema.relation_index(fk.range_relation);
      if (!dom || !rng) throw std::invalid_argument("foreign key " + fk.name + " refers to unknown relations");
      Function f{*dom, *rng, std::vector<std::size_t>(sizes_[*dom], 0)};
      for (std::size_t i = 0; i < f.images.size(); ++i) f.images[i] = sizes_[*rng] ? i % sizes_[*rng] : 0;
      functions_.push_back(std::move(f));
    }
  }

  std::size_t relation_count() const { return sizes_.size(); }
  std::size_t size(std::size_t relation) const { return sizes_.at(relation); }
  std::size_t tuple_count() const { return total_; }
  std::size_t global(TupleId t) const { return offsets_.at(t.relation) + t.index; }
  bool contains(TupleId t) const { return t.relation < sizes_.size() && t.index < sizes_[t.relation]; }

  std::size_t fk_count() const { return functions_.size(); }
  std::size_t fk_domain(std::size_t fk) const { return functions_.at(fk).domain; }
  std::size_t fk_range(std::size_t fk) const { return functions_.at(fk).range; }

  TupleId image(std::size_t fk, TupleId t) const {
    const auto& f = functions_.at(fk);
    if (t.relation != f.domain) throw std::invalid_argument("tuple outside the foreign key domain");
    return {f.range, f.images.at(t.index)};
  }

  void set_image(std::size_t fk, TupleId from, TupleId to) {
    auto& f = functions_.at(fk);
    if (from.relation != f.domain || to.relation != f.range) throw std::invalid_argument("foreign key type mismatch");
    f.images.at(from.index) = to.index;
  }

  template <class Rng>
  void randomize_images(Rng& rng) {
    for (auto& f : functions_) {
      if (sizes_[f.range] == 0) continue;
      std::uniform_int_distribution<std::size_t> pick(0, sizes_[f.range] - 1);
      for (auto& i : f.images) i = pick(rng);
    }
  }

 private:
  struct Function {
    std::size_t domain;
    std::size_t range;
    std::vector<std::size_t> images;
  };

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
  std::vector<Function> functions_;
};

inline std::string tuple_name(const Schema& schema, TupleId t) {
  return schema.relations.at(t.relation).name + "#" + std::to_string(t.index + 1);
}

}  // namespace mvrc::oracle
