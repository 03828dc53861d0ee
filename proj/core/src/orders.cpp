#include "rwb/orders.hpp"

#include <algorithm>
#include <sstream>

namespace rwb {

Cmp zvec_cmp(const ZVec& x, const ZVec& y) {
  // Walk both supports from the top; the largest differing index decides.
  auto ix = x.entries.rbegin(), iy = y.entries.rbegin();
  while (ix != x.entries.rend() || iy != y.entries.rend()) {
    size_t top_x = ix != x.entries.rend() ? ix->first : 0;
    size_t top_y = iy != y.entries.rend() ? iy->first : 0;
    long long vx = 0, vy = 0;
    size_t idx;
    if (ix != x.entries.rend() && (iy == y.entries.rend() || top_x > top_y)) {
      idx = top_x;
      vx = ix->second;
    } else if (iy != y.entries.rend() && (ix == x.entries.rend() || top_y > top_x)) {
      idx = top_y;
      vy = iy->second;
    } else {
      idx = top_x;
      vx = ix->second;
      vy = iy->second;
    }
    (void)idx;
    if (vx != vy) return vx < vy ? Cmp::LT : Cmp::GT;
    if (ix != x.entries.rend() && ix->first == idx) ++ix;
    if (iy != y.entries.rend() && iy->first == idx) ++iy;
  }
  return Cmp::EQ;
}

std::string zvec_to_string(const ZVec& z) {
  std::string s = "z:[";
  bool first = true;
  for (auto& [i, v] : z.entries) {
    if (!first) s += ",";
    first = false;
    s += "i" + std::to_string(i) + "=" + std::to_string(v);
  }
  return s + "]";
}

std::optional<ZVec> zvec_parse(const std::string& s) {
  if (s.rfind("z:[", 0) != 0 || s.back() != ']') return std::nullopt;
  std::string body = s.substr(3, s.size() - 4);
  ZVec z;
  if (body.empty()) return z;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.size() < 4 || item[0] != 'i') return std::nullopt;
    auto eq = item.find('=');
    if (eq == std::string::npos) return std::nullopt;
    try {
      size_t i = std::stoul(item.substr(1, eq - 1));
      long long v = std::stoll(item.substr(eq + 1));
      if (v == 0) return std::nullopt;
      z.set(i, v);
    } catch (...) {
      return std::nullopt;
    }
  }
  return z;
}

ShiftWord ShiftWord::inverse() const {
  ShiftWord w;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it)
    w.letters.push_back({it->index, -it->direction});
  return w;
}

size_t ShiftWord::fixed_from() const {
  size_t m = 0;
  for (auto& l : letters) m = std::max(m, l.index + 1);
  return m;
}

ZVec apply_shift(const ShiftWord& w, const ZVec& x) {
  ZVec z = x;
  for (auto& l : w.letters) {
    auto top = z.top_index();
    if (!top || *top <= l.index) z.set(l.index, z.at(l.index) + l.direction);
  }
  return z;
}

bool SubsetPattern::operator==(const SubsetPattern& o) const {
  SubsetPattern a = *this, b = o;
  a.normalize();
  b.normalize();
  return a.finite == b.finite && a.tail == b.tail;
}

void SubsetPattern::normalize() {
  if (!tail) return;
  for (auto it = finite.begin(); it != finite.end();)
    it = (*it >= *tail) ? finite.erase(it) : ++it;
  while (*tail > 0 && finite.count(*tail - 1)) {
    finite.erase(*tail - 1);
    --*tail;
  }
}

std::string pattern_to_string(const SubsetPattern& a) {
  SubsetPattern p = a;
  p.normalize();
  std::string s = "{";
  bool first = true;
  for (size_t n : p.finite) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(n);
  }
  s += "}";
  if (p.tail) s += "+tail(" + std::to_string(*p.tail) + ")";
  return s;
}

std::optional<SubsetPattern> pattern_parse(const std::string& s) {
  if (s.empty() || s[0] != '{') return std::nullopt;
  auto close = s.find('}');
  if (close == std::string::npos) return std::nullopt;
  SubsetPattern p;
  std::string body = s.substr(1, close - 1);
  if (!body.empty()) {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        p.finite.insert(std::stoul(item));
      } catch (...) {
        return std::nullopt;
      }
    }
  }
  std::string rest = s.substr(close + 1);
  if (!rest.empty()) {
    if (rest.rfind("+tail(", 0) != 0 || rest.back() != ')') return std::nullopt;
    try {
      p.tail = std::stoul(rest.substr(6, rest.size() - 7));
    } catch (...) {
      return std::nullopt;
    }
  }
  p.normalize();
  return p;
}

bool subset_fin(const SubsetPattern& a, const SubsetPattern& b) {
  if (a.tail && !b.tail) return false;
  return true;  // finitely many exceptions are always allowed below any bound
}

size_t subset_fin_threshold(const SubsetPattern& a, const SubsetPattern& b) {
  // Least n0 with a \ n0 contained in b. Beyond max(tails, finite parts)
  // membership is tail-determined, so a finite scan suffices.
  size_t bound = 0;
  if (a.tail) bound = std::max(bound, *a.tail);
  if (b.tail) bound = std::max(bound, *b.tail);
  if (!a.finite.empty()) bound = std::max(bound, *a.finite.rbegin() + 1);
  size_t n0 = 0;
  for (size_t n = 0; n < bound; ++n)
    if (a.contains(n) && !b.contains(n)) n0 = n + 1;
  return n0;
}

bool astar_member(const SubsetPattern& a, const ZVec& z) {
  if (zvec_cmp(z, ZVec{}) != Cmp::GT) return true;
  if (z.entries.size() == 1) {
    auto& [n, v] = *z.entries.begin();
    if (v == 1) return a.contains(n);
  }
  return false;
}

bool sigma_preserves_star(const SubsetPattern& a, const SubsetPattern& b, const ShiftWord& w) {
  // The image of the star coding is the down-set of w(0) plus the images of
  // the markers. The down-set lands inside the target's down-set iff
  // w(0) <= 0.
  if (zvec_cmp(apply_shift(w, ZVec{}), ZVec{}) == Cmp::GT) return false;

  size_t n0 = w.fixed_from();
  // Markers below the fixed index: check the image pointwise.
  for (size_t n = 0; n < n0; ++n) {
    if (!a.contains(n)) continue;
    if (!astar_member(b, apply_shift(w, ZVec::unit(n)))) return false;
  }
  // Markers at or beyond the fixed index are fixed by w (their top
  // coordinate blocks every letter), so the image is in the target iff the
  // index is in b.
  if (a.tail) {
    if (!b.tail) return false;
    for (size_t n = std::max(*a.tail, n0); n < *b.tail; ++n)
      if (!b.contains(n)) return false;
  }
  for (size_t n : a.finite)
    if (n >= n0 && !b.contains(n)) return false;
  return true;
}

Cmp ord_cmp(const OrdinalCNF& a, const OrdinalCNF& b) {
  size_t k = std::min(a.terms.size(), b.terms.size());
  for (size_t i = 0; i < k; ++i) {
    if (a.terms[i].first != b.terms[i].first)
      return a.terms[i].first < b.terms[i].first ? Cmp::LT : Cmp::GT;
    if (a.terms[i].second != b.terms[i].second)
      return a.terms[i].second < b.terms[i].second ? Cmp::LT : Cmp::GT;
  }
  if (a.terms.size() != b.terms.size())
    return a.terms.size() < b.terms.size() ? Cmp::LT : Cmp::GT;
  return Cmp::EQ;
}

OrdinalCNF ord_add(const OrdinalCNF& a, const OrdinalCNF& b) {
  if (b.is_zero()) return a;
  size_t lead = b.terms.front().first;
  OrdinalCNF r;
  // Terms of a with exponent above b's leading exponent survive; a term
  // with the same exponent merges coefficients; everything below is
  // absorbed.
  for (auto& t : a.terms) {
    if (t.first > lead) r.terms.push_back(t);
    else break;
  }
  r.terms.push_back(b.terms.front());
  if (!a.terms.empty()) {
    for (auto& t : a.terms) {
      if (t.first == lead) r.terms.back().second += t.second;
      if (t.first <= lead) break;
    }
  }
  for (size_t i = 1; i < b.terms.size(); ++i) r.terms.push_back(b.terms[i]);
  return r;
}

OrdinalCNF ord_succ(const OrdinalCNF& a) { return ord_add(a, OrdinalCNF::finite(1)); }

bool ord_is_limit(const OrdinalCNF& a) {
  return !a.is_zero() && a.terms.back().first > 0;
}

std::string ord_to_string(const OrdinalCNF& a) {
  if (a.is_zero()) return "0";
  std::string s;
  for (auto& [e, c] : a.terms) {
    if (!s.empty()) s += "+";
    if (e == 0) {
      s += std::to_string(c);
    } else {
      s += (e == 1) ? "w" : "w^" + std::to_string(e);
      if (c != 1) s += "*" + std::to_string(c);
    }
  }
  return s;
}

std::optional<OrdinalCNF> ord_parse(const std::string& s) {
  if (s == "0") return OrdinalCNF::zero();
  OrdinalCNF o;
  std::stringstream ss(s);
  std::string term;
  long long prev_exp = -1;
  while (std::getline(ss, term, '+')) {
    size_t e = 0;
    unsigned long long c = 1;
    try {
      if (term.rfind("w^", 0) == 0) {
        auto star = term.find('*');
        e = std::stoul(term.substr(2, star == std::string::npos ? std::string::npos : star - 2));
        if (star != std::string::npos) c = std::stoull(term.substr(star + 1));
      } else if (term.rfind("w", 0) == 0) {
        e = 1;
        auto star = term.find('*');
        if (star != std::string::npos) c = std::stoull(term.substr(star + 1));
        else if (term != "w") return std::nullopt;
      } else {
        e = 0;
        c = std::stoull(term);
      }
    } catch (...) {
      return std::nullopt;
    }
    if (c == 0) return std::nullopt;
    if (prev_exp >= 0 && (long long)e >= prev_exp) return std::nullopt;
    prev_exp = (long long)e;
    o.terms.push_back({e, c});
  }
  if (o.terms.empty()) return std::nullopt;
  return o;
}

}  // namespace rwb
