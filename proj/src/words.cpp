#include "raagdiv/words.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace raagdiv {

std::vector<Letter> GroupElement::letters() const {
  std::vector<Letter> out;
  out.reserve(codes_.size());
  for (char c : codes_) out.push_back(Letter::from_code(static_cast<std::uint8_t>(c)));
  return out;
}

Raag::Raag(DefiningGraph graph) : graph_(std::move(graph)), id_(graph_.fingerprint()) {
  blocks_.resize(graph_.size());
  for (int g = 0; g < graph_.size(); ++g) {
    blocks_[g] = graph_.all_vertices() & ~graph_.neighbors(g);
  }
}

GroupElement Raag::wrap(std::string codes) const {
  GroupElement x;
  x.codes_ = std::move(codes);
  x.group_ = id_;
  int h = 0;
  for (char c : x.codes_) h += (c & 1) ? -1 : 1;
  x.height_ = h;
  return x;
}

void Raag::check(const GroupElement& x) const {
  if (x.group_ != id_ && !(x.group_ == 0 && x.codes_.empty())) {
    throw std::invalid_argument("group element belongs to a different graph");
  }
}

GroupElement Raag::identity() const { return wrap({}); }

GroupElement Raag::generator(int gen, int power) const {
  if (gen < 0 || gen >= rank()) throw std::out_of_range("generator index");
  return wrap(std::string(static_cast<std::size_t>(std::abs(power)),
                          static_cast<char>(Letter(gen, power).code())));
}

void Raag::append(std::string& w, Letter l) const {
  const VertexMask block = blocks_[l.gen()];
  int stop = -1;
  for (int j = static_cast<int>(w.size()) - 1; j >= 0; --j) {
    const Letter c = Letter::from_code(static_cast<std::uint8_t>(w[j]));
    if (c == l.inverse()) {
      // w[j] commutes with everything after it, so it is maximal in the
      // dependence order; deleting it leaves a shortlex normal form.
      w.erase(static_cast<std::size_t>(j), 1);
      return;
    }
    if ((block >> c.gen()) & 1U) {
      stop = j;
      break;
    }
  }
  std::size_t pos = w.size();
  for (std::size_t i = static_cast<std::size_t>(stop + 1); i < w.size(); ++i) {
    if (l.code() < static_cast<std::uint8_t>(w[i])) {
      pos = i;
      break;
    }
  }
  w.insert(pos, 1, static_cast<char>(l.code()));
}

void Raag::sort_shortlex(std::string& w) const {
  // Lexicographically least linear extension of the dependence order: pick
  // the smallest letter with no unemitted, non-commuting predecessor.
  std::string out;
  out.reserve(w.size());
  std::vector<bool> used(w.size(), false);
  for (std::size_t step = 0; step < w.size(); ++step) {
    VertexMask blocked = 0;
    int best = -1;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (used[i]) continue;
      const Letter c = Letter::from_code(static_cast<std::uint8_t>(w[i]));
      if (!((blocked >> c.gen()) & 1U) &&
          (best < 0 || c.code() < static_cast<std::uint8_t>(w[best]))) {
        best = static_cast<int>(i);
      }
      blocked |= blocks_[c.gen()];
    }
    used[best] = true;
    out.push_back(w[best]);
  }
  w = std::move(out);
}

GroupElement Raag::normalize(std::span<const Letter> raw) const {
  std::string w;
  for (Letter l : raw) {
    if (l.gen() >= rank()) throw std::out_of_range("letter outside the generating set");
    append(w, l);
  }
  return wrap(std::move(w));
}

GroupElement Raag::multiply(const GroupElement& x, const GroupElement& y) const {
  check(x);
  check(y);
  std::string w = x.codes_;
  for (char c : y.codes_) append(w, Letter::from_code(static_cast<std::uint8_t>(c)));
  return wrap(std::move(w));
}

GroupElement Raag::multiply(const GroupElement& x, Letter l) const {
  check(x);
  std::string w = x.codes_;
  append(w, l);
  return wrap(std::move(w));
}

GroupElement Raag::power_step(const GroupElement& x, Letter d, int power) const {
  check(x);
  std::string w = x.codes_;
  const Letter l = power >= 0 ? d : d.inverse();
  for (int i = 0; i < std::abs(power); ++i) append(w, l);
  return wrap(std::move(w));
}

GroupElement Raag::inverse(const GroupElement& x) const {
  check(x);
  std::string w(x.codes_.rbegin(), x.codes_.rend());
  for (char& c : w) c = static_cast<char>(c ^ 1);
  sort_shortlex(w);
  return wrap(std::move(w));
}

GroupElement Raag::abs_value(const GroupElement& x) const {
  check(x);
  std::string w = x.codes_;
  for (char& c : w) c = static_cast<char>(c & ~1);
  sort_shortlex(w);
  return wrap(std::move(w));
}

std::vector<GroupElement> Raag::neighbors(const GroupElement& x) const {
  std::vector<GroupElement> out;
  out.reserve(2 * static_cast<std::size_t>(rank()));
  for (int g = 0; g < rank(); ++g) {
    out.push_back(multiply(x, Letter(g, 1)));
    out.push_back(multiply(x, Letter(g, -1)));
  }
  return out;
}

GroupElement Raag::parse(std::string_view text) const {
  std::vector<Letter> raw;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "1" && raw.empty()) continue;
    std::string name = tok;
    int power = 1;
    if (auto caret = tok.rfind('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      const std::string p = tok.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), power);
      if (ec != std::errc() || ptr != p.data() + p.size()) {
        throw InputError("'" + tok + "'", "bad exponent");
      }
    }
    const int gen = graph_.index_of(name);
    if (gen < 0) throw InputError("'" + tok + "'", "unknown generator");
    for (int i = 0; i < std::abs(power); ++i) raw.emplace_back(gen, power);
  }
  return normalize(raw);
}

std::string Raag::format(Letter l) const {
  return graph_.name(l.gen()) + (l.positive() ? "" : "^-1");
}

std::string Raag::format(const GroupElement& x) const {
  std::string out;
  for (int i = 0; i < x.length(); ++i) {
    if (i) out += ' ';
    out += format(x.letter(i));
  }
  return out;
}

std::vector<int> complement_walk(const DefiningGraph& g) {
  const DefiningGraph c = complement(g);
  if (components(c).size() != 1) {
    throw std::invalid_argument("complement of the defining graph is disconnected");
  }
  std::vector<int> walk;
  std::vector<bool> seen(g.size(), false);
  // Recursive doubling of the DFS tree: record a vertex on entry and after
  // returning from each child.
  auto visit = [&](auto&& self, int v) -> void {
    seen[v] = true;
    walk.push_back(v);
    for (int u = 0; u < g.size(); ++u) {
      if (c.adjacent(v, u) && !seen[u]) {
        self(self, u);
        walk.push_back(v);
      }
    }
  };
  visit(visit, 0);
  walk.pop_back();  // closed: the final return to the root is implicit
  if (walk.empty()) walk.push_back(0);
  return walk;
}

GroupElement eta_geodesic(const Raag& raag, long t) {
  const std::vector<int> w = complement_walk(raag.graph());
  const long n = static_cast<long>(w.size());
  std::vector<Letter> raw;
  if (t >= 0) {
    for (long i = 0; i < t; ++i) raw.emplace_back(w[i % n], 1);
  } else {
    for (long i = 1; i <= -t; ++i) {
      raw.emplace_back(w[((n - i) % n + n) % n], -1);
    }
  }
  return raag.normalize(raw);
}

}  // namespace raagdiv
