#include "rwb/constructions.hpp"

namespace rwb {

namespace {

bool is_prefix(const TreeNode& p, const TreeNode& s) {
  return p.size() <= s.size() && std::equal(p.begin(), p.end(), s.begin());
}

}  // namespace

TreeFamily tree_refine(const TreeFamily& fam) {
  TreeFamily out;
  out.branching = fam.branching;
  out.depth = fam.depth;
  std::set<TreeNode> seen;  // nodes of every earlier tree
  for (const std::set<TreeNode>& tree : fam.trees) {
    // Fresh nodes of this tree, then their minimal elements under the
    // prefix order.
    std::vector<TreeNode> fresh;
    for (const TreeNode& node : tree)
      if (!seen.count(node)) fresh.push_back(node);
    std::set<TreeNode> fresh_set(fresh.begin(), fresh.end());
    for (const TreeNode& s : fresh) {
      bool minimal = true;
      TreeNode p = s;
      while (!p.empty() && minimal) {
        p.pop_back();
        if (fresh_set.count(p)) minimal = false;
      }
      if (!minimal) continue;
      // The branches through s: the stem down to the root plus the full
      // subtree above s. Keeping the stem makes the branch set of the new
      // tree a literal subset of the old one.
      std::set<TreeNode> t;
      TreeNode stem;
      t.insert(stem);
      for (unsigned v : s) {
        stem.push_back(v);
        t.insert(stem);
      }
      for (const TreeNode& node : tree)
        if (is_prefix(s, node)) t.insert(node);
      out.trees.push_back(std::move(t));
    }
    seen.insert(tree.begin(), tree.end());
  }
  return out;
}

}  // namespace rwb
