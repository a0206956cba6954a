#pragma once

// Exact convex hulls and containment in dimension 2 and 3. Every sign test
// goes through rational predicates, so hulls, vertex sets and membership are
// exact even on degenerate (coincident, collinear, coplanar) inputs.

#include <array>
#include <map>
#include <unordered_map>
#include <vector>

#include "ccp/exact.hpp"
#include "ccp/types.hpp"

namespace ccp {

/// Convex hull. rank is the affine rank of the point set: 0 a point,
/// 1 a segment, 2 a polygon, 3 a full-dimensional polytope.
/// vertices are the extreme points: for rank 2 an ordered ring
/// (counterclockwise in 2D, counterclockwise around the plane normal for a
/// planar set in 3D), otherwise lexicographically sorted. faces triangulate
/// the boundary for rank 3, each oriented so the hull lies on the
/// nonpositive side of orient3d.
struct Hull {
  int dim = 2;
  int rank = 0;
  std::vector<Point> vertices;
  std::vector<std::array<Point, 3>> faces;
};

namespace geo_detail {

inline bool lex_less(const Point& a, const Point& b) {
  for (int i = 0; i < a.dim; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

inline std::vector<Point> dedupe(const std::vector<Point>& pts) {
  std::vector<Point> out;
  for (const Point& p : pts) {
    bool seen = false;
    for (const Point& q : out)
      if (q == p) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(p);
  }
  return out;
}

inline int orient2d_xy(const std::array<double, 2>& a, const std::array<double, 2>& b,
                       const std::array<double, 2>& c) {
  using exact::Q;
  Q ux = Q(b[0]) - Q(a[0]), uy = Q(b[1]) - Q(a[1]);
  Q vx = Q(c[0]) - Q(a[0]), vy = Q(c[1]) - Q(a[1]);
  return exact::sign(ux * vy - uy * vx);
}

/// Monotone chain over planar coordinates. Returns the affine rank and the
/// hull as indices into coords: rank 0 one index, rank 1 the two endpoints,
/// rank 2 a strictly convex counterclockwise ring.
struct ChainResult {
  int rank = 0;
  std::vector<int> ring;
};

inline ChainResult monotone_chain(const std::vector<std::array<double, 2>>& coords) {
  std::vector<int> idx(coords.size());
  for (size_t i = 0; i < coords.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    return coords[static_cast<size_t>(i)] < coords[static_cast<size_t>(j)];
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](int i, int j) {
                          return coords[static_cast<size_t>(i)] ==
                                 coords[static_cast<size_t>(j)];
                        }),
            idx.end());

  ChainResult res;
  if (idx.size() == 1) {
    res.rank = 0;
    res.ring = {idx[0]};
    return res;
  }

  auto build = [&](const std::vector<int>& order) {
    std::vector<int> h;
    for (int i : order) {
      while (h.size() >= 2 &&
             orient2d_xy(coords[static_cast<size_t>(h[h.size() - 2])],
                         coords[static_cast<size_t>(h[h.size() - 1])],
                         coords[static_cast<size_t>(i)]) <= 0)
        h.pop_back();
      h.push_back(i);
    }
    return h;
  };
  std::vector<int> lower = build(idx);
  std::vector<int> rev(idx.rbegin(), idx.rend());
  std::vector<int> upper = build(rev);

  std::vector<int> ring(lower.begin(), lower.end() - 1);
  ring.insert(ring.end(), upper.begin(), upper.end() - 1);
  if (ring.size() == 2) {
    res.rank = 1;
    res.ring = ring;
    return res;
  }
  res.rank = 2;
  res.ring = ring;
  return res;
}

inline bool chain_contains(const std::vector<std::array<double, 2>>& ring,
                           const std::array<double, 2>& q) {
  for (size_t i = 0; i < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % ring.size()];
    if (orient2d_xy(a, b, q) < 0) return false;
  }
  return true;
}

/// Exact point-on-segment test in any dimension. A zero-length segment
/// (a == b) contains exactly the point a.
inline bool on_segment(const Point& a, const Point& b, const Point& q) {
  using namespace exact;
  Vec3q u = sub(to_q3(b), to_q3(a));
  Vec3q w = sub(to_q3(q), to_q3(a));
  if (is_zero(u)) return is_zero(w);
  if (!is_zero(cross(u, w))) return false;
  Q t = dot(w, u);
  return sgn(t) >= 0 && t <= dot(u, u);
}

inline Hull hull2(const std::vector<Point>& pts) {
  std::vector<std::array<double, 2>> coords;
  coords.reserve(pts.size());
  for (const Point& p : pts) coords.push_back({p[0], p[1]});
  ChainResult ch = monotone_chain(coords);
  Hull h;
  h.dim = 2;
  h.rank = ch.rank;
  for (int i : ch.ring) h.vertices.push_back(pts[static_cast<size_t>(i)]);
  return h;
}

inline bool contains2(const Hull& h, const Point& q) {
  if (h.rank == 0) return h.vertices[0] == q;
  if (h.rank == 1) return on_segment(h.vertices[0], h.vertices[1], q);
  std::vector<std::array<double, 2>> ring;
  for (const Point& v : h.vertices) ring.push_back({v[0], v[1]});
  return chain_contains(ring, {q[0], q[1]});
}

/// Axis to drop when projecting a plane with exact normal n to 2D: the one
/// with the largest |n_i|, so the projection is a bijection on the plane.
inline int dominant_axis(const exact::Vec3q& n) {
  exact::Q a0 = abs(n[0]), a1 = abs(n[1]), a2 = abs(n[2]);
  if (a0 >= a1 && a0 >= a2) return 0;
  if (a1 >= a2) return 1;
  return 2;
}

inline std::array<double, 2> drop_axis(const Point& p, int axis) {
  std::array<double, 2> r{};
  int k = 0;
  for (int i = 0; i < 3; ++i)
    if (i != axis) r[static_cast<size_t>(k++)] = p[i];
  return r;
}

/// Finds four affinely independent points: returns the affine rank and up to
/// rank+1 witness indices into pts.
inline std::pair<int, std::array<int, 4>> affine_basis(const std::vector<Point>& pts) {
  using namespace exact;
  std::array<int, 4> w{0, -1, -1, -1};
  int n = static_cast<int>(pts.size());
  int rank = 0;
  for (int i = 1; i < n && rank == 0; ++i)
    if (!(pts[static_cast<size_t>(i)] == pts[0])) {
      w[1] = i;
      rank = 1;
    }
  if (rank == 0) return {0, w};
  Vec3q a = to_q3(pts[0]);
  Vec3q u = sub(to_q3(pts[static_cast<size_t>(w[1])]), a);
  for (int i = w[1] + 1; i < n && rank == 1; ++i)
    if (!is_zero(cross(u, sub(to_q3(pts[static_cast<size_t>(i)]), a)))) {
      w[2] = i;
      rank = 2;
    }
  if (rank == 1) return {1, w};
  for (int i = w[2] + 1; i < n && rank == 2; ++i)
    if (orient3d(pts[0], pts[static_cast<size_t>(w[1])], pts[static_cast<size_t>(w[2])],
                 pts[static_cast<size_t>(i)]) != 0) {
      w[3] = i;
      rank = 3;
    }
  return {rank, w};
}

inline Hull hull_rank0(const std::vector<Point>& pts) {
  Hull h;
  h.dim = pts[0].dim;
  h.rank = 0;
  h.vertices = {pts[0]};
  return h;
}

inline Hull hull_rank1(const std::vector<Point>& pts, int w1) {
  using namespace exact;
  Hull h;
  h.dim = pts[0].dim;
  h.rank = 1;
  Vec3q a = to_q3(pts[0]);
  Vec3q d = sub(to_q3(pts[static_cast<size_t>(w1)]), a);
  size_t lo = 0, hi = 0;
  Q tlo(0), thi(0);
  for (size_t i = 1; i < pts.size(); ++i) {
    Q t = dot(sub(to_q3(pts[i]), a), d);
    if (t < tlo) {
      tlo = t;
      lo = i;
    }
    if (t > thi) {
      thi = t;
      hi = i;
    }
  }
  Point va = pts[lo], vb = pts[hi];
  if (lex_less(vb, va)) std::swap(va, vb);
  h.vertices = {va, vb};
  return h;
}

/// Planar point set in 3D: hull is a convex ring inside the common plane.
inline Hull hull_rank2_planar(const std::vector<Point>& pts, int w1, int w2) {
  using namespace exact;
  Vec3q a = to_q3(pts[0]);
  Vec3q n = cross(sub(to_q3(pts[static_cast<size_t>(w1)]), a),
                  sub(to_q3(pts[static_cast<size_t>(w2)]), a));
  int axis = dominant_axis(n);
  std::vector<std::array<double, 2>> coords;
  coords.reserve(pts.size());
  for (const Point& p : pts) coords.push_back(drop_axis(p, axis));
  ChainResult ch = monotone_chain(coords);
  Hull h;
  h.dim = 3;
  h.rank = 2;
  for (int i : ch.ring) h.vertices.push_back(pts[static_cast<size_t>(i)]);
  return h;
}

struct TriFace {
  int a, b, c;
  bool alive = true;
};

inline bool face_degenerate(const std::vector<Point>& pts, int a, int b, int c) {
  using namespace exact;
  return is_zero(cross(sub(to_q3(pts[static_cast<size_t>(b)]), to_q3(pts[static_cast<size_t>(a)])),
                       sub(to_q3(pts[static_cast<size_t>(c)]), to_q3(pts[static_cast<size_t>(a)]))));
}

/// Extracts the minimal vertex set from a triangulated boundary: a corner is
/// extreme exactly when the normals of its incident faces span rank 3 (three
/// independent supporting planes meet only at a vertex).
inline std::vector<Point> extreme_corners(const std::vector<Point>& pts,
                                          const std::vector<std::array<int, 3>>& tris) {
  using namespace exact;
  std::map<int, std::vector<Vec3q>> normals;
  for (const auto& t : tris) {
    Vec3q n = cross(sub(to_q3(pts[static_cast<size_t>(t[1])]), to_q3(pts[static_cast<size_t>(t[0])])),
                    sub(to_q3(pts[static_cast<size_t>(t[2])]), to_q3(pts[static_cast<size_t>(t[0])])));
    for (int v : t) normals[v].push_back(n);
  }
  std::vector<Point> out;
  for (auto& [v, ns] : normals) {
    // Exact rank of the 3xk normal matrix by Gaussian elimination.
    std::vector<Vec3q> rows = ns;
    int rank = 0;
    for (int col = 0; col < 3 && rank < static_cast<int>(rows.size()); ++col) {
      int pivot = -1;
      for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (sgn(rows[static_cast<size_t>(r)][static_cast<size_t>(col)]) != 0) {
          pivot = r;
          break;
        }
      if (pivot < 0) continue;
      std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(pivot)]);
      for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
        Q f = rows[static_cast<size_t>(r)][static_cast<size_t>(col)] /
              rows[static_cast<size_t>(rank)][static_cast<size_t>(col)];
        for (int cc = col; cc < 3; ++cc)
          rows[static_cast<size_t>(r)][static_cast<size_t>(cc)] -=
              f * rows[static_cast<size_t>(rank)][static_cast<size_t>(cc)];
      }
      ++rank;
    }
    if (rank == 3) out.push_back(pts[static_cast<size_t>(v)]);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

inline Hull finalize_hull3(const std::vector<Point>& pts,
                           const std::vector<std::array<int, 3>>& tris) {
  std::vector<std::array<int, 3>> kept;
  for (const auto& t : tris)
    if (!face_degenerate(pts, t[0], t[1], t[2])) kept.push_back(t);
  Hull h;
  h.dim = 3;
  h.rank = 3;
  h.vertices = extreme_corners(pts, kept);
  for (const auto& t : kept)
    h.faces.push_back({pts[static_cast<size_t>(t[0])], pts[static_cast<size_t>(t[1])],
                       pts[static_cast<size_t>(t[2])]});
  return h;
}

/// Support-plane enumeration: slower but immune to insertion-order issues.
/// Used as the fallback when the incremental construction detects trouble.
inline Hull brute_hull3(const std::vector<Point>& pts) {
  using namespace exact;
  int n = static_cast<int>(pts.size());
  std::map<std::vector<int>, bool> seen;  // facet cluster -> handled
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (face_degenerate(pts, i, j, k)) continue;
        bool pos = false, neg = false;
        std::vector<int> cluster;
        for (int x = 0; x < n; ++x) {
          int s = orient3d(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)],
                           pts[static_cast<size_t>(k)], pts[static_cast<size_t>(x)]);
          if (s > 0) pos = true;
          else if (s < 0) neg = true;
          else cluster.push_back(x);
          if (pos && neg) break;
        }
        if (pos && neg) continue;
        if (seen.count(cluster)) continue;
        seen[cluster] = true;
        // Triangulate the facet polygon: planar hull of the cluster, fan
        // from its first ring vertex, oriented away from an interior point.
        std::vector<Point> cpts;
        for (int x : cluster) cpts.push_back(pts[static_cast<size_t>(x)]);
        auto [crank, cw] = affine_basis(cpts);
        if (crank != 2)
          throw std::logic_error("facet cluster must be planar of rank 2");
        Hull ring = hull_rank2_planar(cpts, cw[1], cw[2]);
        int inside = -1;
        for (int x = 0; x < n; ++x)
          if (orient3d(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)],
                       pts[static_cast<size_t>(k)], pts[static_cast<size_t>(x)]) != 0) {
            inside = x;
            break;
          }
        // Map ring points back to indices in pts.
        auto index_of = [&](const Point& p) {
          for (int x : cluster)
            if (pts[static_cast<size_t>(x)] == p) return x;
          throw std::logic_error("facet ring point not found");
        };
        int v0 = index_of(ring.vertices[0]);
        for (size_t t = 1; t + 1 < ring.vertices.size(); ++t) {
          int v1 = index_of(ring.vertices[t]);
          int v2 = index_of(ring.vertices[t + 1]);
          if (orient3d(pts[static_cast<size_t>(v0)], pts[static_cast<size_t>(v1)],
                       pts[static_cast<size_t>(v2)],
                       pts[static_cast<size_t>(inside)]) > 0)
            std::swap(v1, v2);
          tris.push_back({v0, v1, v2});
        }
      }
  return finalize_hull3(pts, tris);
}

inline Hull hull3_incremental(const std::vector<Point>& pts,
                              const std::array<int, 4>& w) {
  int n = static_cast<int>(pts.size());
  int a = 0, b = w[1], c = w[2], d = w[3];
  if (exact::orient3d(pts[static_cast<size_t>(a)], pts[static_cast<size_t>(b)],
                      pts[static_cast<size_t>(c)], pts[static_cast<size_t>(d)]) > 0)
    std::swap(b, c);
  std::vector<TriFace> faces;
  auto add_face = [&](int x, int y, int z, int opp) {
    if (exact::orient3d(pts[static_cast<size_t>(x)], pts[static_cast<size_t>(y)],
                        pts[static_cast<size_t>(z)], pts[static_cast<size_t>(opp)]) > 0)
      std::swap(y, z);
    faces.push_back(TriFace{x, y, z});
  };
  add_face(a, b, c, d);
  add_face(a, b, d, c);
  add_face(a, c, d, b);
  add_face(b, c, d, a);

  for (int q = 0; q < n; ++q) {
    if (q == a || q == b || q == c || q == d) continue;
    const Point& pq = pts[static_cast<size_t>(q)];
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      const TriFace& t = faces[static_cast<size_t>(f)];
      if (!t.alive) continue;
      if (exact::orient3d(pts[static_cast<size_t>(t.a)], pts[static_cast<size_t>(t.b)],
                          pts[static_cast<size_t>(t.c)], pq) > 0)
        visible.push_back(f);
    }
    if (visible.empty()) continue;

    // Twin lookup over directed edges of alive faces.
    std::map<std::pair<int, int>, int> owner;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      const TriFace& t = faces[static_cast<size_t>(f)];
      if (!t.alive) continue;
      owner[{t.a, t.b}] = f;
      owner[{t.b, t.c}] = f;
      owner[{t.c, t.a}] = f;
    }
    std::vector<bool> vis(faces.size(), false);
    for (int f : visible) vis[static_cast<size_t>(f)] = true;

    std::vector<std::pair<int, int>> horizon;
    for (int f : visible) {
      const TriFace& t = faces[static_cast<size_t>(f)];
      for (auto [u, v] : {std::pair{t.a, t.b}, std::pair{t.b, t.c}, std::pair{t.c, t.a}}) {
        auto it = owner.find({v, u});
        if (it == owner.end() || !vis[static_cast<size_t>(it->second)])
          horizon.push_back({u, v});
      }
    }
    // The horizon must be one closed loop; degenerate visibility splits are
    // rare and handed to the brute construction.
    std::map<int, int> next;
    bool ok = !horizon.empty();
    for (auto [u, v] : horizon)
      if (!next.emplace(u, v).second) ok = false;
    if (ok) {
      int start = horizon[0].first, cur = start;
      size_t steps = 0;
      do {
        auto it = next.find(cur);
        if (it == next.end()) {
          ok = false;
          break;
        }
        cur = it->second;
        ++steps;
      } while (cur != start && steps <= horizon.size());
      if (steps != horizon.size() || cur != start) ok = false;
    }
    if (!ok) return brute_hull3(pts);

    for (int f : visible) faces[static_cast<size_t>(f)].alive = false;
    for (auto [u, v] : horizon) faces.push_back(TriFace{u, v, q});
  }

  std::vector<std::array<int, 3>> tris;
  for (const TriFace& t : faces)
    if (t.alive) tris.push_back({t.a, t.b, t.c});
  // Full exact validation; any escape hatch goes to the brute construction.
  for (const auto& t : tris)
    for (int x = 0; x < n; ++x)
      if (exact::orient3d(pts[static_cast<size_t>(t[0])], pts[static_cast<size_t>(t[1])],
                          pts[static_cast<size_t>(t[2])], pts[static_cast<size_t>(x)]) > 0)
        return brute_hull3(pts);
  return finalize_hull3(pts, tris);
}

inline bool contains3(const Hull& h, const Point& q) {
  if (h.rank == 0) return h.vertices[0] == q;
  if (h.rank == 1) return on_segment(h.vertices[0], h.vertices[1], q);
  if (h.rank == 2) {
    using namespace exact;
    const Point& v0 = h.vertices[0];
    const Point& v1 = h.vertices[1];
    const Point& v2 = h.vertices[2];
    if (orient3d(v0, v1, v2, q) != 0) return false;
    Vec3q n = cross(sub(to_q3(v1), to_q3(v0)), sub(to_q3(v2), to_q3(v0)));
    int axis = dominant_axis(n);
    std::vector<std::array<double, 2>> ring;
    for (const Point& v : h.vertices) ring.push_back(drop_axis(v, axis));
    std::array<double, 2> qq = drop_axis(q, axis);
    // The projected ring is convex but its turning sign depends on the
    // dropped axis; normalize to counterclockwise before the edge walk.
    int turn = orient2d_xy(ring[0], ring[1], ring[2]);
    if (turn < 0) std::reverse(ring.begin(), ring.end());
    return chain_contains(ring, qq);
  }
  for (const auto& f : h.faces)
    if (exact::orient3d(f[0], f[1], f[2], q) > 0) return false;
  return true;
}

}  // namespace geo_detail

/// Convex hull of a nonempty point set (all points of equal dimension).
inline Hull hull(const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("hull: empty point set");
  int dim = points[0].dim;
  for (const Point& p : points)
    if (p.dim != dim) throw std::invalid_argument("hull: mixed dimensions");
  std::vector<Point> pts = geo_detail::dedupe(points);
  if (dim == 2) return geo_detail::hull2(pts);
  auto [rank, w] = geo_detail::affine_basis(pts);
  if (rank == 0) return geo_detail::hull_rank0(pts);
  if (rank == 1) return geo_detail::hull_rank1(pts, w[1]);
  if (rank == 2) return geo_detail::hull_rank2_planar(pts, w[2], w[1]);
  return geo_detail::hull3_incremental(pts, w);
}

/// Closed containment: boundary points are inside.
inline bool contains(const Hull& h, const Point& q) {
  if (q.dim != h.dim) throw std::invalid_argument("contains: dimension mismatch");
  return h.dim == 2 ? geo_detail::contains2(h, q) : geo_detail::contains3(h, q);
}

/// Indices in S whose points are extreme points of conv{points[s] : s in S}.
/// Coincident extreme points are represented by their lowest index.
inline IndexSet vertex_indices(const std::vector<Point>& points, const IndexSet& S) {
  if (S.empty()) return {};
  std::vector<Point> sel;
  for (int s : S) sel.push_back(points[static_cast<size_t>(s)]);
  Hull h = hull(sel);
  IndexSet out;
  for (const Point& v : h.vertices) {
    for (int s : S)
      if (points[static_cast<size_t>(s)] == v) {
        out.push_back(s);
        break;
      }
  }
  return set_normalized(std::move(out));
}

/// All scenario indices (over the whole set, not only S) whose points lie in
/// conv{points[s] : s in S}.
inline IndexSet enclosed_indices(const std::vector<Point>& points, const IndexSet& S) {
  if (S.empty()) return {};
  std::vector<Point> sel;
  for (int s : S) sel.push_back(points[static_cast<size_t>(s)]);
  Hull h = hull(sel);
  IndexSet out;
  for (int s = 0; s < static_cast<int>(points.size()); ++s)
    if (contains(h, points[static_cast<size_t>(s)])) out.push_back(s);
  return out;
}

}  // namespace ccp
