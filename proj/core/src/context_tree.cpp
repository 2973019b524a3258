#include "vlmc/context_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "vlmc/errors.hpp"

namespace vlmc {
namespace {

double parse_probability(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw FormatError("line " + std::to_string(line_no) + ": invalid probability \"" +
                      std::string(token) + "\"");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Packs (length, bits) into one key; length <= 62 so both fit.
std::uint64_t suffix_key(std::span<const Symbol> w) {
  std::uint64_t b = 0;
  for (Symbol s : w) b = (b << 1) | static_cast<std::uint64_t>(index(s));
  return b;
}

}  // namespace

ContextTree ContextTree::parse(std::string_view text, Completeness completeness) {
  std::vector<ContextEntry> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 3) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": expected `<context> <p0> <p1>`, got " +
                        std::to_string(tokens.size()) + " fields");
    }
    ContextEntry e{Sequence::parse(tokens[0]),
                   {parse_probability(tokens[1], line_no), parse_probability(tokens[2], line_no)}};
    entries.push_back(std::move(e));
  }
  return from_entries(std::move(entries), completeness, kParseTolerance);
}

ContextTree ContextTree::from_entries(std::vector<ContextEntry> entries,
                                      Completeness completeness, double tolerance) {
  if (entries.empty()) throw ValidationError("context tree has no contexts");

  for (auto& e : entries) {
    const std::string name = e.context.str();
    if (e.context.length() > kMaxTreeHeight) {
      throw ValidationError("context " + name + " longer than the supported height " +
                            std::to_string(kMaxTreeHeight));
    }
    for (double p : e.row) {
      if (!(p >= 0.0) || p > 1.0) {
        throw ValidationError("context " + name + ": probability outside [0, 1]");
      }
      if (p == 0.0) {
        throw ValidationError("context " + name + ": non-nullness violated (zero probability)");
      }
    }
    const double sum = e.row[0] + e.row[1];
    if (std::abs(sum - 1.0) > tolerance) {
      throw ValidationError("context " + name + ": row sums to " + format_double(sum) +
                            ", not 1");
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
      e.row[0] /= sum;
      e.row[1] /= sum;
    }
  }

  std::sort(entries.begin(), entries.end(),
            [](const ContextEntry& a, const ContextEntry& b) {
              return ShortlexLess{}(a.context, b.context);
            });

  ContextTree tree;
  for (const auto& e : entries) tree.height_ = std::max(tree.height_, e.context.length());
  tree.by_length_.resize(tree.height_ + 1);

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& w = entries[i].context;
    auto& slot = tree.by_length_[w.length()];
    if (!slot.emplace(suffix_key(w.symbols()), i).second) {
      throw ValidationError("duplicate context " + w.str());
    }
  }

  for (const auto& e : entries) {
    const auto sym = e.context.symbols();
    for (std::size_t l = 0; l < sym.size(); ++l) {
      const auto& slot = tree.by_length_[l];
      if (auto it = slot.find(suffix_key(sym.last(l))); it != slot.end()) {
        throw ValidationError("suffix property violated: " + entries[it->second].context.str() +
                              " is a suffix of " + e.context.str());
      }
    }
  }

  // Kraft equality on the reversed (prefix-free) code characterizes completeness.
  std::uint64_t kraft = 0;
  for (const auto& e : entries) kraft += std::uint64_t{1} << (tree.height_ - e.context.length());
  tree.complete_ = kraft == (std::uint64_t{1} << tree.height_);

  // A context w is replaceable by suf(w) unless another context also ends in suf(w).
  std::map<std::pair<std::size_t, std::uint64_t>, std::size_t> ending_count;
  for (const auto& e : entries) {
    const auto sym = e.context.symbols();
    for (std::size_t l = 0; l <= sym.size(); ++l) ++ending_count[{l, suffix_key(sym.last(l))}];
  }
  tree.irreducible_ = true;
  for (const auto& e : entries) {
    const auto sym = e.context.symbols();
    if (sym.empty()) continue;
    const std::size_t l = sym.size() - 1;
    if (ending_count[{l, suffix_key(sym.last(l))}] < 2) {
      tree.irreducible_ = false;
      break;
    }
  }

  if (completeness == Completeness::Required && !tree.complete_) {
    throw ValidationError("context tree is incomplete: some pasts of length " +
                          std::to_string(tree.height_) + " have no context");
  }

  tree.entries_ = std::move(entries);
  return tree;
}

std::string ContextTree::serialize() const {
  std::string out;
  for (const auto& e : entries_) {
    out += e.context.str();
    out += ' ';
    out += format_double(e.row[0]);
    out += ' ';
    out += format_double(e.row[1]);
    out += '\n';
  }
  return out;
}

std::set<Sequence> ContextTree::context_set() const {
  std::set<Sequence> out;
  for (const auto& e : entries_) out.insert(e.context);
  return out;
}

std::optional<std::size_t> ContextTree::find_suffix_context(std::span<const Symbol> w) const {
  const std::size_t max_len = std::min(height_, w.size());
  for (std::size_t l = 0; l <= max_len; ++l) {
    const auto& slot = by_length_[l];
    if (slot.empty()) continue;
    if (auto it = slot.find(suffix_key(w.last(l))); it != slot.end()) return it->second;
  }
  return std::nullopt;
}

const ContextEntry& ContextTree::longest_context(std::span<const Symbol> past) const {
  if (past.size() < height_) {
    throw ValidationError("past of length " + std::to_string(past.size()) +
                          " is shorter than the tree height " + std::to_string(height_));
  }
  auto idx = find_suffix_context(past);
  if (!idx) throw ValidationError("no context matches the given past");
  return entries_[*idx];
}

std::string ContextTree::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return out;
}

bool operator==(const ContextTree& a, const ContextTree& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    if (a.entries_[i].context != b.entries_[i].context) return false;
    if (a.entries_[i].row != b.entries_[i].row) return false;
  }
  return true;
}

TreeConstants compute_constants(const ContextTree& tree) {
  TreeConstants c;
  c.alpha = std::numeric_limits<double>::infinity();
  for (const auto& e : tree.entries()) c.alpha = std::min({c.alpha, e.row[0], e.row[1]});

  // Contexts sharing a suffix u of length k form a group; within a group the
  // sup of |1 - x/y| over ordered pairs is max/min - 1 for each symbol.
  const std::size_t h = tree.height();
  c.beta_seq.assign(h, 0.0);
  for (std::size_t k = 0; k < h; ++k) {
    std::map<std::uint64_t, std::array<std::array<double, 2>, kAlphabetSize>> groups;
    for (const auto& e : tree.entries()) {
      if (e.context.length() < k) continue;
      const auto key = suffix_key(e.context.symbols().last(k));
      auto [it, fresh] = groups.try_emplace(key);
      for (int a = 0; a < kAlphabetSize; ++a) {
        auto& mm = it->second[static_cast<std::size_t>(a)];
        const double p = e.row[static_cast<std::size_t>(a)];
        if (fresh) {
          mm = {p, p};
        } else {
          mm[0] = std::min(mm[0], p);
          mm[1] = std::max(mm[1], p);
        }
      }
    }
    double sup = 0.0;
    for (const auto& [key, per_symbol] : groups) {
      for (const auto& mm : per_symbol) sup = std::max(sup, mm[1] / mm[0] - 1.0);
    }
    c.beta_seq[k] = sup;
  }

  for (double b : c.beta_seq) {
    c.beta_sum += b;
    c.beta_star *= 1.0 + b;
  }
  c.c_const = 1.0 + 4.0 * c.beta_sum * c.beta_star / c.alpha;
  return c;
}

std::set<Sequence> truncate(const std::set<Sequence>& contexts, std::size_t k) {
  std::set<Sequence> out;
  for (const auto& w : contexts) out.insert(w.length() <= k ? w : w.last(k));
  return out;
}

std::set<Sequence> truncate(const ContextTree& tree, std::size_t k) {
  return truncate(tree.context_set(), k);
}

std::size_t min_valid_depth(const ContextTree& tree, std::size_t k) {
  std::size_t depth = 0;
  for (const auto& w : truncate(tree, k)) {
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    for (const auto& e : tree.entries()) {
      if (w.is_suffix_of(e.context)) shortest = std::min(shortest, e.context.length());
    }
    depth = std::max(depth, shortest);
  }
  return depth;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace vlmc
