#pragma once

#include <utility>
#include <vector>

#include "raagdiv/graph.hpp"
#include "raagdiv/words.hpp"

namespace raagdiv {

/// An edge path: a start vertex and a sequence of steps (right
/// multiplication by one letter each).
struct EdgePath {
  GroupElement start;
  std::vector<Direction> steps;

  int length() const { return static_cast<int>(steps.size()); }
};

/// Vertices visited by the path, start included.
std::vector<GroupElement> path_vertices(const Raag& raag, const EdgePath& p);
GroupElement path_end(const Raag& raag, const EdgePath& p);
/// Minimum word length over the path's vertices.
int path_min_length(const Raag& raag, const EdgePath& p);

/// The point where the ray extending the edge (v, v·d) away from the
/// identity meets S_r. Requires |v|, |v·d| <= r.
GroupElement push_edge(const Raag& raag, const GroupElement& v, Direction d, int r);

/// v·d^t.
GroupElement scale_direction(const Raag& raag, const GroupElement& v, Direction d, int t);

/// Shortest path in the 1-skeleton of S(L) from d1 to d2, endpoints
/// included. (±â, ±b̂) are adjacent iff ab is an edge of Γ.
std::vector<Direction> link_route(const DefiningGraph& g, Direction d1, Direction d2);

/// Diameter of the 1-skeleton of S(L); -1 if it is disconnected.
int link_diameter(const DefiningGraph& g);

/// r-avoidant path between push_edge(v,d1,r) and push_edge(v,d2,r), built
/// from one staircase of length <= 2(r-|v|) per link edge on the route.
EdgePath avoidant_connect(const Raag& raag, const GroupElement& v, Direction d1,
                          Direction d2, int r);

/// Replaces each maximal excursion of p into the open ball B_r by pushed
/// edges joined with avoidant_connect. Endpoints must have length >= r.
EdgePath push_path(const Raag& raag, const EdgePath& p, int r);

/// Length constant C with |push_path(p,r)| <= C·r·|p|: 2·diam S(L).
int push_path_constant(const DefiningGraph& g);

/// The straight path from x through the identity to y (geodesic from x to
/// e, then from e to y).
EdgePath path_through_identity(const Raag& raag, const GroupElement& x,
                               const GroupElement& y);

/// The seven-waypoint path for a direct product H×K. `split` is a join
/// decomposition (A,B) of Γ; |x| = |y| = r. Length <= 6r.
EdgePath product_avoidant_path(const Raag& raag, const GroupElement& x,
                               const GroupElement& y, int r,
                               const std::pair<VertexMask, VertexMask>& split);

/// The height-retraction image v·a^{-h(v)} of the link vertex v·d. Requires
/// h(v) != 0; lands in h^{-1}(0).
GroupElement height_push_vertex(const Raag& raag, const GroupElement& v, Direction d);

}  // namespace raagdiv
