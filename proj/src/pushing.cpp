#include "raagdiv/pushing.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

namespace raagdiv {

std::vector<GroupElement> path_vertices(const Raag& raag, const EdgePath& p) {
  std::vector<GroupElement> out{p.start};
  out.reserve(p.steps.size() + 1);
  for (Direction d : p.steps) out.push_back(raag.multiply(out.back(), d));
  return out;
}

GroupElement path_end(const Raag& raag, const EdgePath& p) {
  GroupElement x = p.start;
  for (Direction d : p.steps) x = raag.multiply(x, d);
  return x;
}

int path_min_length(const Raag& raag, const EdgePath& p) {
  int m = p.start.length();
  GroupElement x = p.start;
  for (Direction d : p.steps) {
    x = raag.multiply(x, d);
    m = std::min(m, x.length());
  }
  return m;
}

GroupElement push_edge(const Raag& raag, const GroupElement& v, Direction d, int r) {
  const GroupElement vd = raag.multiply(v, d);
  if (v.length() > r || vd.length() > r) {
    throw std::invalid_argument("push_edge: edge not inside the ball");
  }
  const int t = r - v.length();
  if (vd.length() > v.length()) return raag.power_step(v, d, t);
  return raag.power_step(v, d, -t);
}

GroupElement scale_direction(const Raag& raag, const GroupElement& v, Direction d, int t) {
  return raag.power_step(v, d, t);
}

namespace {

std::vector<int> link_distances(const DefiningGraph& g, int from) {
  const int n = 2 * g.size();
  std::vector<int> dist(n, -1);
  std::deque<int> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int w = 0; w < n; ++w) {
      if (dist[w] < 0 && g.adjacent(u / 2, w / 2)) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<Direction> link_route(const DefiningGraph& g, Direction d1, Direction d2) {
  const int target = d2.code();
  const auto dist = link_distances(g, target);
  if (dist[d1.code()] < 0) throw std::invalid_argument("link_route: disconnected link");
  // Walk downhill from d1, choosing the smallest code at each step.
  std::vector<Direction> route{d1};
  int cur = d1.code();
  while (cur != target) {
    for (int w = 0; w < 2 * g.size(); ++w) {
      if (dist[w] == dist[cur] - 1 && g.adjacent(cur / 2, w / 2)) {
        cur = w;
        break;
      }
    }
    route.push_back(Direction::from_code(static_cast<std::uint8_t>(cur)));
  }
  return route;
}

int link_diameter(const DefiningGraph& g) {
  int diam = 0;
  for (int s = 0; s < 2 * g.size(); ++s) {
    for (int d : link_distances(g, s)) {
      if (d < 0) return -1;
      diam = std::max(diam, d);
    }
  }
  return diam;
}

int push_path_constant(const DefiningGraph& g) { return 2 * link_diameter(g); }

EdgePath avoidant_connect(const Raag& raag, const GroupElement& v, Direction d1,
                          Direction d2, int r) {
  if (v.length() > r) throw std::invalid_argument("avoidant_connect: |v| > r");
  EdgePath out{push_edge(raag, v, d1, r), {}};
  if (d1 == d2) return out;
  const int t = r - v.length();
  // Orient each direction so that it points away from the identity.
  auto outward = [&](Direction d) {
    return raag.multiply(v, d).length() > v.length() ? d : d.inverse();
  };
  if (t == 0 || outward(d1) == outward(d2)) return out;
  const auto route = link_route(raag.graph(), d1, d2);
  for (std::size_t j = 0; j + 1 < route.size(); ++j) {
    const Direction from = outward(route[j]);
    const Direction to = outward(route[j + 1]);
    if (from == to) continue;
    for (int i = 0; i < t; ++i) {
      out.steps.push_back(to);
      out.steps.push_back(from.inverse());
    }
  }
  return out;
}

EdgePath push_path(const Raag& raag, const EdgePath& p, int r) {
  const auto verts = path_vertices(raag, p);
  if (verts.front().length() < r || verts.back().length() < r) {
    throw std::invalid_argument("push_path: endpoints inside the ball");
  }
  EdgePath out{p.start, {}};
  const std::size_t m = p.steps.size();
  std::size_t i = 0;
  while (i < m) {
    if (verts[i + 1].length() >= r) {
      out.steps.push_back(p.steps[i]);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (verts[j + 1].length() < r) ++j;
    for (std::size_t l = i + 1; l <= j; ++l) {
      const EdgePath link =
          avoidant_connect(raag, verts[l], p.steps[l - 1].inverse(), p.steps[l], r);
      out.steps.insert(out.steps.end(), link.steps.begin(), link.steps.end());
    }
    i = j + 1;
  }
  return out;
}

EdgePath path_through_identity(const Raag& raag, const GroupElement& x,
                               const GroupElement& y) {
  EdgePath p{x, {}};
  for (int i = x.length() - 1; i >= 0; --i) p.steps.push_back(x.letter(i).inverse());
  for (int i = 0; i < y.length(); ++i) p.steps.push_back(y.letter(i));
  (void)raag;
  return p;
}

namespace {

std::pair<GroupElement, GroupElement> split_element(const Raag& raag, const GroupElement& x,
                                                    VertexMask a) {
  std::vector<Letter> h, k;
  for (Letter l : x.letters()) ((a >> l.gen()) & 1U ? h : k).push_back(l);
  return {raag.normalize(h), raag.normalize(k)};
}

void append_word(std::vector<Direction>& steps, const GroupElement& w) {
  for (int i = 0; i < w.length(); ++i) steps.push_back(w.letter(i));
}

void append_inverse(std::vector<Direction>& steps, const GroupElement& w) {
  for (int i = w.length() - 1; i >= 0; --i) steps.push_back(w.letter(i).inverse());
}

// A geodesic extension of w inside the factor with generator set `factor`,
// of the given length.
GroupElement extension(const Raag& raag, const GroupElement& w, VertexMask factor, int len) {
  const Letter l = w.is_identity() ? Letter(std::countr_zero(factor), 1)
                                   : w.letter(w.length() - 1);
  return raag.generator(l.gen(), l.sign() * len);
}

}  // namespace

EdgePath product_avoidant_path(const Raag& raag, const GroupElement& x,
                               const GroupElement& y, int r,
                               const std::pair<VertexMask, VertexMask>& split) {
  const auto& g = raag.graph();
  const auto [a, b] = split;
  bool valid = a != 0 && b != 0 && (a & b) == 0 && (a | b) == g.all_vertices();
  for (int u = 0; valid && u < g.size(); ++u) {
    if ((a >> u) & 1U) valid = (g.neighbors(u) & b) == b;
  }
  if (!valid) throw std::invalid_argument("product_avoidant_path: split invalid");
  if (x.length() != r || y.length() != r) {
    throw std::invalid_argument("product_avoidant_path: endpoints not on S_r");
  }
  EdgePath p{x, {}};
  if (x == y) return p;
  const auto [h1, k1] = split_element(raag, x, a);
  const auto [h2, k2] = split_element(raag, y, a);
  const GroupElement u = extension(raag, h1, a, r - h1.length());
  const GroupElement v = extension(raag, k2, b, r - k2.length());
  const GroupElement h1u = raag.multiply(h1, u);
  const GroupElement k2v = raag.multiply(k2, v);
  append_word(p.steps, u);        // (h1,k1)   -> (h1u,k1)
  append_inverse(p.steps, k1);    //           -> (h1u,e)
  append_word(p.steps, k2v);      //           -> (h1u,k2v)
  append_inverse(p.steps, h1u);   //           -> (e,k2v)
  append_word(p.steps, h2);       //           -> (h2,k2v)
  append_inverse(p.steps, v);     //           -> (h2,k2)
  return p;
}

GroupElement height_push_vertex(const Raag& raag, const GroupElement& v, Direction d) {
  if (v.height() == 0) {
    throw std::invalid_argument("height_push_vertex: vertex already at height 0");
  }
  return raag.power_step(v, Letter(d.gen(), 1), -v.height());
}

}  // namespace raagdiv
