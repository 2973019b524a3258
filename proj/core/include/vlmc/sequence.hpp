#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vlmc {

/// Size of the alphabet A = {0, 1}. Kept as a named constant so the bound
/// formulas read with |A| spelled out.
inline constexpr int kAlphabetSize = 2;

enum class Symbol : std::uint8_t { Zero = 0, One = 1 };

inline constexpr Symbol kSymbols[kAlphabetSize] = {Symbol::Zero, Symbol::One};

constexpr Symbol complement(Symbol s) noexcept {
  return s == Symbol::Zero ? Symbol::One : Symbol::Zero;
}

constexpr int index(Symbol s) noexcept { return static_cast<int>(s); }

constexpr Symbol symbol_from_bit(unsigned bit) noexcept {
  return (bit & 1u) ? Symbol::One : Symbol::Zero;
}

constexpr char to_char(Symbol s) noexcept { return s == Symbol::One ? '1' : '0'; }

/// Finite binary string. The rightmost element is the most recent symbol,
/// so w = w_{-j} ... w_{-1} is stored left to right in that order.
class Sequence {
 public:
  Sequence() = default;
  explicit Sequence(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  explicit Sequence(std::span<const Symbol> symbols)
      : symbols_(symbols.begin(), symbols.end()) {}

  /// Parses a string over {'0','1'}. The token "-" denotes the empty string.
  /// Throws FormatError on any other character.
  static Sequence parse(std::string_view text);

  /// Low `length` bits of `bits`, most significant first; bit 0 is the most
  /// recent symbol.
  static Sequence from_bits(std::uint64_t bits, std::size_t length);

  std::size_t length() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol back() const { return symbols_.back(); }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  /// Bit packing matching from_bits. Requires length() <= 64.
  std::uint64_t bits() const;

  /// suf(w): drops the leftmost (oldest) symbol. suf of a length-1 string is
  /// the empty string. Undefined on the empty string (throws).
  Sequence suffix() const;

  /// The rightmost k symbols.
  Sequence last(std::size_t k) const;

  Sequence prepend(Symbol s) const;
  Sequence append(Symbol s) const;
  Sequence complemented() const;

  /// s.is_suffix_of(w) is s ⪯ w (equality allowed).
  bool is_suffix_of(const Sequence& w) const noexcept;
  bool is_proper_suffix_of(const Sequence& w) const noexcept {
    return length() < w.length() && is_suffix_of(w);
  }

  /// "0"/"1" characters; the empty string prints as "-".
  std::string str() const;

  friend auto operator<=>(const Sequence&, const Sequence&) = default;
  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Orders by length first, then lexicographically. Used for stable output.
struct ShortlexLess {
  bool operator()(const Sequence& a, const Sequence& b) const noexcept {
    if (a.length() != b.length()) return a.length() < b.length();
    return a < b;
  }
};

/// True when `s` is a suffix (⪯) of the window `past`.
bool ends_with(std::span<const Symbol> past, const Sequence& s) noexcept;

}  // namespace vlmc
