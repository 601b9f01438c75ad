#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "icdof/error.hpp"

namespace icdof {

/// Formal symbol standing for an algebraically independent real number.
/// Generators are interned by name: two generators are equal iff their
/// names are equal.
class Generator {
 public:
  static Generator named(std::string_view name);

  std::uint32_t id() const noexcept { return id_; }
  const std::string& name() const;

  friend bool operator==(Generator a, Generator b) noexcept { return a.id_ == b.id_; }
  friend auto operator<=>(Generator a, Generator b) noexcept { return a.id_ <=> b.id_; }

 private:
  explicit Generator(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
  friend class SymbolTable;
};

/// One factor g^e of a monomial.
struct Power {
  std::uint32_t generator;
  std::uint32_t exponent;
  friend bool operator==(const Power&, const Power&) = default;
};

namespace detail {

struct PowerVectorHash {
  std::size_t operator()(const std::vector<Power>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Power& p : v) {
      h ^= (std::uint64_t(p.generator) << 32) | p.exponent;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/*
 * Process-wide intern tables for generator names and monomials.
 *
 * Monomials are stored once, as exponent vectors sorted by generator id with
 * no zero exponents, and handed out as dense 32-bit indices. Index 0 is the
 * constant monomial. Tables only grow; every access is guarded, so interning
 * from several threads is safe. Entries live in deques, which keep element
 * addresses stable while the table grows.
 */
class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  std::uint32_t intern_generator(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = generator_ids_.find(std::string(name)); it != generator_ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = generator_ids_.try_emplace(std::string(name), 0);
    if (inserted) {
      it->second = static_cast<std::uint32_t>(generator_names_.size());
      generator_names_.emplace_back(name);
    }
    return it->second;
  }

  const std::string& generator_name(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return generator_names_.at(id);
  }

  std::uint32_t intern_monomial(std::vector<Power> powers) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = monomial_ids_.find(powers); it != monomial_ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = monomial_ids_.try_emplace(powers, 0);
    if (inserted) {
      it->second = static_cast<std::uint32_t>(monomials_.size());
      std::uint32_t degree = 0;
      for (const Power& p : powers) degree += p.exponent;
      monomials_.push_back(Entry{std::move(powers), degree});
    }
    return it->second;
  }

  std::span<const Power> powers(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    const auto& v = monomials_.at(id).powers;
    return {v.data(), v.size()};
  }

  std::uint32_t degree(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return monomials_.at(id).degree;
  }

  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) {
    if (a == 0) return b;
    if (b == 0) return a;
    const std::uint64_t key = a < b ? (std::uint64_t(a) << 32) | b : (std::uint64_t(b) << 32) | a;
    {
      std::shared_lock lock(mutex_);
      if (auto it = products_.find(key); it != products_.end()) return it->second;
    }
    std::vector<Power> merged;
    {
      std::shared_lock lock(mutex_);
      const auto& pa = monomials_.at(a).powers;
      const auto& pb = monomials_.at(b).powers;
      merged.reserve(pa.size() + pb.size());
      std::size_t i = 0, j = 0;
      while (i < pa.size() || j < pb.size()) {
        if (j == pb.size() || (i < pa.size() && pa[i].generator < pb[j].generator)) {
          merged.push_back(pa[i++]);
        } else if (i == pa.size() || pb[j].generator < pa[i].generator) {
          merged.push_back(pb[j++]);
        } else {
          merged.push_back(Power{pa[i].generator, pa[i].exponent + pb[j].exponent});
          ++i;
          ++j;
        }
      }
    }
    const std::uint32_t id = intern_monomial(std::move(merged));
    std::unique_lock lock(mutex_);
    products_.emplace(key, id);
    return id;
  }

 private:
  struct Entry {
    std::vector<Power> powers;
    std::uint32_t degree;
  };

  SymbolTable() { monomials_.push_back(Entry{{}, 0}); monomial_ids_.emplace(std::vector<Power>{}, 0); }

  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::uint32_t> generator_ids_;
  std::deque<std::string> generator_names_;
  std::unordered_map<std::vector<Power>, std::uint32_t, detail::PowerVectorHash> monomial_ids_;
  std::deque<Entry> monomials_;
  std::unordered_map<std::uint64_t, std::uint32_t> products_;
};

inline Generator Generator::named(std::string_view name) {
  if (name.empty()) fail(ErrorCode::invalid_argument, "empty generator name");
  return Generator(SymbolTable::instance().intern_generator(name));
}

inline const std::string& Generator::name() const { return SymbolTable::instance().generator_name(id_); }

/// Product of generator powers; a 4-byte handle into the intern table.
/// Equality is structural (same exponent map), ordering is by intern index.
class Monomial {
 public:
  Monomial() = default;  // the constant monomial 1

  explicit Monomial(Generator g, std::uint32_t exponent = 1) {
    if (exponent > 0) id_ = SymbolTable::instance().intern_monomial({Power{g.id(), exponent}});
  }

  /// Builds from (generator, exponent) pairs; zero exponents are dropped,
  /// repeated generators are merged.
  static Monomial from_powers(std::span<const std::pair<Generator, std::uint32_t>> factors) {
    std::map<std::uint32_t, std::uint32_t> exps;
    for (const auto& [g, e] : factors) {
      if (e > 0) exps[g.id()] += e;
    }
    std::vector<Power> powers;
    for (const auto& [g, e] : exps) powers.push_back(Power{g, e});
    Monomial m;
    m.id_ = SymbolTable::instance().intern_monomial(std::move(powers));
    return m;
  }

  static Monomial from_id(std::uint32_t id) {
    Monomial m;
    m.id_ = id;
    return m;
  }

  std::uint32_t id() const noexcept { return id_; }
  bool is_constant() const noexcept { return id_ == 0; }
  std::uint32_t degree() const { return SymbolTable::instance().degree(id_); }
  std::span<const Power> powers() const { return SymbolTable::instance().powers(id_); }

  std::uint32_t exponent_of(Generator g) const {
    for (const Power& p : powers()) {
      if (p.generator == g.id()) return p.exponent;
    }
    return 0;
  }

  friend Monomial operator*(Monomial a, Monomial b) {
    return from_id(SymbolTable::instance().multiply(a.id_, b.id_));
  }

  friend bool operator==(Monomial a, Monomial b) noexcept { return a.id_ == b.id_; }
  friend auto operator<=>(Monomial a, Monomial b) noexcept { return a.id_ <=> b.id_; }

  /// "1", "g1", "g1^2*g2". Factors listed by generator name.
  std::string str() const {
    if (is_constant()) return "1";
    std::vector<std::pair<std::string, std::uint32_t>> named;
    for (const Power& p : powers()) named.emplace_back(SymbolTable::instance().generator_name(p.generator), p.exponent);
    std::sort(named.begin(), named.end());
    std::string out;
    for (const auto& [name, e] : named) {
      if (!out.empty()) out += '*';
      out += name;
      if (e > 1) out += '^' + std::to_string(e);
    }
    return out;
  }

 private:
  std::uint32_t id_ = 0;
};

/// Graded lexicographic order on generator names: higher total degree first,
/// then larger exponent on the lexicographically smaller name first. Used for
/// display and serialization, never for storage.
inline bool graded_lex_before(Monomial a, Monomial b) {
  if (a == b) return false;
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da > db;
  auto named = [](Monomial m) {
    std::vector<std::pair<std::string, std::uint32_t>> v;
    for (const Power& p : m.powers()) v.emplace_back(SymbolTable::instance().generator_name(p.generator), p.exponent);
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto na = named(a);
  const auto nb = named(b);
  const std::size_t n = std::min(na.size(), nb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (na[i].first != nb[i].first) return na[i].first < nb[i].first;
    if (na[i].second != nb[i].second) return na[i].second > nb[i].second;
  }
  return na.size() < nb.size();
}

}  // namespace icdof
