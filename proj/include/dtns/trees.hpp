/**
 * @file trees.hpp
 * @brief Bounded explicit expansion of the trees T_{mu,a} and T_{mu,b|a},
 *        DOT/TSV export and the brute-force representation oracle.
 *
 * Level convention: level 0 is the seed row b|a, level l spells
 * mu^l(b)|mu^l(a). Right-subtree columns start at 0, left-subtree columns
 * end at -1. Nothing here uses iterate-length arithmetic, so the oracle is
 * independent of the descent in numeration.hpp.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dtns/bigint.hpp"
#include "dtns/core.hpp"
#include "dtns/error.hpp"
#include "dtns/numeration.hpp"

namespace dtns {

inline constexpr std::size_t kDefaultNodeCap = 1'000'000;

struct TreeNode {
  std::int64_t column = 0;
  Letter letter = 0;
  std::int64_t parent = -1;  ///< index into the previous row, -1 on the seed row
  Digit edge = 0;            ///< child index under the parent; the sign digit on the seed row
};

struct TreeSlice {
  std::vector<std::vector<TreeNode>> levels;
  std::vector<std::string> names;  ///< letter names, for export

  std::size_t node_count() const {
    std::size_t total = 0;
    for (const auto& row : levels) total += row.size();
    return total;
  }
};

/// Rows 0..depth of the tree of ns. Throws CapExceeded past `cap` nodes.
inline TreeSlice expand(const NumerationSystem& ns, std::size_t depth, std::size_t cap = kDefaultNodeCap) {
  const auto& sub = ns.substitution();
  TreeSlice slice;
  slice.names.assign(sub.alphabet().begin(), sub.alphabet().end());
  std::vector<TreeNode> row;
  if (ns.has_left()) row.push_back({-1, ns.left(), -1, 1});
  if (ns.has_right()) row.push_back({0, ns.right(), -1, 0});
  std::size_t total = row.size();
  slice.levels.push_back(row);
  for (std::size_t level = 1; level <= depth; ++level) {
    const auto& prev = slice.levels.back();
    std::vector<TreeNode> next;
    std::size_t left_count = 0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
      const Word& img = sub.image(prev[i].letter);
      total += img.size();
      if (total > cap) throw Error(ErrorCode::CapExceeded, "tree expansion exceeds " + std::to_string(cap) + " nodes");
      for (std::size_t j = 0; j < img.size(); ++j) {
        next.push_back({0, img[j], static_cast<std::int64_t>(i), static_cast<Digit>(j)});
      }
      if (prev[i].column < 0) left_count += img.size();
    }
    // Columns follow from the position of the split between the two subtrees.
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i].column = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(left_count);
    }
    slice.levels.push_back(std::move(next));
  }
  return slice;
}

namespace detail {

inline std::string dot_id(std::size_t level, std::int64_t column) {
  return "\"L" + std::to_string(level) + "C" + std::to_string(column) + "\"";
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// Graphviz digraph with node ids `L<level>C<column>` and digit-labelled edges.
inline std::string to_dot(const TreeSlice& slice) {
  std::ostringstream out;
  out << "digraph T {\n  node [shape=circle];\n";
  for (std::size_t level = 0; level < slice.levels.size(); ++level) {
    for (const auto& node : slice.levels[level]) {
      out << "  " << detail::dot_id(level, node.column) << " [label=\"" << detail::dot_escape(slice.names.at(node.letter))
          << "\"];\n";
    }
  }
  for (std::size_t level = 1; level < slice.levels.size(); ++level) {
    const auto& prev = slice.levels[level - 1];
    for (const auto& node : slice.levels[level]) {
      out << "  " << detail::dot_id(level - 1, prev[static_cast<std::size_t>(node.parent)].column) << " -> "
          << detail::dot_id(level, node.column) << " [label=\"" << node.edge << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

/// Tab-separated dump with header `level column letter parent_edge`.
inline std::string to_tsv(const TreeSlice& slice) {
  std::ostringstream out;
  out << "level\tcolumn\tletter\tparent_edge\n";
  for (std::size_t level = 0; level < slice.levels.size(); ++level) {
    for (const auto& node : slice.levels[level]) {
      out << level << '\t' << node.column << '\t' << slice.names.at(node.letter) << '\t' << node.edge << '\n';
    }
  }
  return out.str();
}

/// Letters of row `level`, left subtree first.
inline Word row_word(const TreeSlice& slice, std::size_t level) {
  Word w;
  for (const auto& node : slice.levels.at(level)) w.push_back(node.letter);
  return w;
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

namespace detail {

struct OracleNode {
  Letter letter;
  std::uint32_t parent;
  Digit edge;
};

// Windowed expansion of one subtree. For the right subtree only the first
// `width` nodes of every row are kept, for the left subtree the last
// `width`; every kept node has its parent kept as well. Rows are produced
// until a level k = r (mod p) holds `width` nodes.
class WindowedSubtree {
 public:
  WindowedSubtree(const NumerationSystem& ns, bool left, std::size_t width, std::size_t cap)
      : ns_(ns), left_(left), width_(width), cap_(cap) {
    rows_.push_back({{left ? ns.left() : ns.right(), 0, 0}});
    total_ = 1;
  }

  // Smallest level k = r (mod p) whose row has more than `index` nodes.
  std::size_t level_for(std::size_t index) {
    const std::size_t p = ns_.period();
    std::size_t k = ns_.residue();
    for (;; k += p) {
      while (rows_.size() <= k) grow();
      if (row_size(k) > index) return k;
    }
  }

  // Digits of the path to the node `index` positions from the subtree's
  // inner edge (column index for the right side, -1-column for the left).
  std::vector<Digit> path(std::size_t level, std::size_t index) const {
    std::vector<Digit> digits(level);
    const auto& row = rows_[level];
    std::size_t pos = left_ ? row.size() - 1 - index : index;
    for (std::size_t l = level; l > 0; --l) {
      const OracleNode& node = rows_[l][pos];
      digits[l - 1] = node.edge;
      pos = node.parent;
    }
    return digits;
  }

 private:
  std::size_t row_size(std::size_t level) const { return rows_[level].size(); }

  void grow() {
    const auto& sub = ns_.substitution();
    const auto& prev = rows_.back();
    std::vector<OracleNode> next;
    if (!left_) {
      for (std::size_t i = 0; i < prev.size() && next.size() < width_; ++i) {
        const Word& img = sub.image(prev[i].letter);
        for (std::size_t j = 0; j < img.size() && next.size() < width_; ++j) {
          next.push_back({img[j], static_cast<std::uint32_t>(i), static_cast<Digit>(j)});
        }
      }
    } else {
      // Build right to left, then reverse.
      for (std::size_t i = prev.size(); i-- > 0 && next.size() < width_;) {
        const Word& img = sub.image(prev[i].letter);
        for (std::size_t j = img.size(); j-- > 0 && next.size() < width_;) {
          next.push_back({img[j], static_cast<std::uint32_t>(i), static_cast<Digit>(j)});
        }
      }
      std::reverse(next.begin(), next.end());
    }
    total_ += next.size();
    if (total_ > cap_) throw Error(ErrorCode::CapExceeded, "oracle expansion exceeds " + std::to_string(cap_) + " nodes");
    rows_.push_back(std::move(next));
  }

  const NumerationSystem& ns_;
  bool left_;
  std::size_t width_;
  std::size_t cap_;
  std::size_t total_ = 0;
  std::vector<std::vector<OracleNode>> rows_;
};

inline std::size_t oracle_width(const BigInt& magnitude, std::size_t cap) {
  if (magnitude >= cap) throw Error(ErrorCode::CapExceeded, "integer too large for explicit expansion");
  return static_cast<std::size_t>(magnitude);
}

}  // namespace detail

/**
 * Brute-force rep: expands the relevant subtree level by level and returns
 * the path to column n on the earliest level k = r (mod p) containing it.
 */
inline DigitWord oracle_rep(const NumerationSystem& ns, const BigInt& n, std::size_t cap = kDefaultNodeCap) {
  if (n >= 0) {
    ns.right();
    const std::size_t index = detail::oracle_width(n, cap);
    detail::WindowedSubtree tree(ns, false, index + 1, cap);
    const std::size_t k = tree.level_for(index);
    return {0, tree.path(k, index)};
  }
  ns.left();
  const std::size_t index = detail::oracle_width(-n - 1, cap);
  detail::WindowedSubtree tree(ns, true, index + 1, cap);
  const std::size_t k = tree.level_for(index);
  return {1, tree.path(k, index)};
}

/// oracle_rep for every n in [lo, hi] within the domain, expanding each side once.
inline std::map<BigInt, DigitWord> oracle_rep_range(const NumerationSystem& ns, const BigInt& lo, const BigInt& hi,
                                                    std::size_t cap = kDefaultNodeCap) {
  std::map<BigInt, DigitWord> out;
  if (hi >= 0 && ns.has_right()) {
    const BigInt start = lo > 0 ? lo : BigInt(0);
    const std::size_t top = detail::oracle_width(hi, cap);
    detail::WindowedSubtree tree(ns, false, top + 1, cap);
    for (BigInt n = start; n <= hi; ++n) {
      const auto index = static_cast<std::size_t>(n);
      out.emplace(n, DigitWord{0, tree.path(tree.level_for(index), index)});
    }
  }
  if (lo < 0 && ns.has_left()) {
    const BigInt end = hi < 0 ? hi : BigInt(-1);
    const std::size_t top = detail::oracle_width(-lo - 1, cap);
    detail::WindowedSubtree tree(ns, true, top + 1, cap);
    for (BigInt n = end; n >= lo; --n) {
      const auto index = static_cast<std::size_t>(-n - 1);
      out.emplace(n, DigitWord{1, tree.path(tree.level_for(index), index)});
    }
  }
  return out;
}

}  // namespace dtns
