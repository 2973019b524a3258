#include "vlmc/sequence.hpp"

#include <algorithm>

#include "vlmc/errors.hpp"

namespace vlmc {

Sequence Sequence::parse(std::string_view text) {
  if (text == "-") return Sequence{};
  std::vector<Symbol> out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '0') {
      out.push_back(Symbol::Zero);
    } else if (c == '1') {
      out.push_back(Symbol::One);
    } else {
      throw FormatError("invalid symbol '" + std::string(1, c) + "' in sequence \"" +
                        std::string(text) + "\"");
    }
  }
  return Sequence(std::move(out));
}

Sequence Sequence::from_bits(std::uint64_t bits, std::size_t length) {
  std::vector<Symbol> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    out[length - 1 - i] = symbol_from_bit(static_cast<unsigned>(bits >> i));
  }
  return Sequence(std::move(out));
}

std::uint64_t Sequence::bits() const {
  if (length() > 64) throw ValidationError("sequence too long to pack into 64 bits");
  std::uint64_t b = 0;
  for (Symbol s : symbols_) b = (b << 1) | static_cast<std::uint64_t>(index(s));
  return b;
}

Sequence Sequence::suffix() const {
  if (empty()) throw ValidationError("suffix of the empty sequence is undefined");
  return Sequence(std::span<const Symbol>(symbols_).subspan(1));
}

Sequence Sequence::last(std::size_t k) const {
  k = std::min(k, length());
  return Sequence(std::span<const Symbol>(symbols_).last(k));
}

Sequence Sequence::prepend(Symbol s) const {
  std::vector<Symbol> out;
  out.reserve(length() + 1);
  out.push_back(s);
  out.insert(out.end(), symbols_.begin(), symbols_.end());
  return Sequence(std::move(out));
}

Sequence Sequence::append(Symbol s) const {
  std::vector<Symbol> out = symbols_;
  out.push_back(s);
  return Sequence(std::move(out));
}

Sequence Sequence::complemented() const {
  std::vector<Symbol> out = symbols_;
  for (Symbol& s : out) s = complement(s);
  return Sequence(std::move(out));
}

bool Sequence::is_suffix_of(const Sequence& w) const noexcept {
  return ends_with(w.symbols(), *this);
}

std::string Sequence::str() const {
  if (empty()) return "-";
  std::string out;
  out.reserve(length());
  for (Symbol s : symbols_) out.push_back(to_char(s));
  return out;
}

bool ends_with(std::span<const Symbol> past, const Sequence& s) noexcept {
  if (s.length() > past.size()) return false;
  return std::equal(s.symbols().begin(), s.symbols().end(), past.end() - s.length());
}

}  // namespace vlmc
