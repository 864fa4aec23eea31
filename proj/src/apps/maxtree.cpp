#include "optikit/apps.hpp"

#include <bit>
#include <limits>

namespace optikit {

MaxTree::MaxTree(long leaves) : n_(leaves) {
  if (leaves < 1) throw InputError("maxtree: need at least one leaf");
  p_ = static_cast<long>(std::bit_ceil(static_cast<unsigned long>(leaves)));
  q_ = std::countr_zero(static_cast<unsigned long>(p_));
}

MaxTree::Entry MaxTree::fresh(long id) const {
  const int depth = std::bit_width(static_cast<unsigned long>(id)) - 1;
  const long span = p_ >> depth;
  const long lo = (id - (1L << depth)) * span;
  if (lo < n_) return {0.0, lo};
  return {-std::numeric_limits<double>::infinity(), -1};
}

MaxTree::Entry MaxTree::node(long id) const {
  if (id >= p_) {
    const long i = id - p_;
    if (i >= n_) return {-std::numeric_limits<double>::infinity(), -1};
    auto it = leaves_.find(i);
    return {it == leaves_.end() ? 0.0 : it->second, i};
  }
  auto it = nodes_.find(id);
  return it == nodes_.end() ? fresh(id) : it->second;
}

double MaxTree::leaf(long i) const {
  if (i < 0 || i >= n_) throw InputError("maxtree: leaf index out of range");
  return node(p_ + i).v;
}

int MaxTree::update(long leaf, double value) {
  if (leaf < 0 || leaf >= n_) throw InputError("maxtree: leaf index out of range");
  if (value == 0.0)
    leaves_.erase(leaf);
  else
    leaves_[leaf] = value;
  int writes = 0;
  for (long id = (p_ + leaf) / 2; id >= 1; id /= 2) {
    Entry l = node(2 * id), r = node(2 * id + 1);
    Entry e = l.v >= r.v ? l : r;
    Entry old = node(id);
    if (old.v == e.v && old.i == e.i) break;  // nothing above can change
    Entry f = fresh(id);
    if (f.v == e.v && f.i == e.i)
      nodes_.erase(id);
    else
      nodes_[id] = e;
    ++writes;
  }
  return writes;
}

double MaxTree::max() const { return node(1).v; }
long MaxTree::argmax() const { return node(1).i; }

}  // namespace optikit
