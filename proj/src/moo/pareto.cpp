#include "schedlab/moo/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace schedlab::moo {

bool dominates(const Objectives& a, const Objectives& b) {
    const bool ge = a.thp >= b.thp && a.jfi >= b.jfi && a.pdr <= b.pdr;
    const bool strict = a.thp > b.thp || a.jfi > b.jfi || a.pdr < b.pdr;
    return ge && strict;
}

std::vector<std::vector<size_t>> fast_nondominated_sort(std::span<const Objectives> objs) {
    const size_t n = objs.size();
    if (n == 0) throw std::invalid_argument("fast_nondominated_sort: empty input");

    std::vector<std::vector<size_t>> dominated_by(n);  // S_p: everyone p dominates
    std::vector<size_t> domination_count(n, 0);        // n_p: how many dominate p
    std::vector<std::vector<size_t>> fronts(1);

    for (size_t p = 0; p < n; ++p) {
        for (size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(objs[p], objs[q]))
                dominated_by[p].push_back(q);
            else if (dominates(objs[q], objs[p]))
                ++domination_count[p];
        }
        if (domination_count[p] == 0) fronts[0].push_back(p);
    }

    size_t i = 0;
    while (!fronts[i].empty()) {
        std::vector<size_t> next;
        for (size_t p : fronts[i]) {
            for (size_t q : dominated_by[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        ++i;
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();  // the loop always leaves one empty front at the tail
    return fronts;
}

std::vector<double> crowding_distance(std::span<const Objectives> front) {
    const size_t n = front.size();
    if (n == 0) throw std::invalid_argument("crowding_distance: empty front");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }

    const auto component = [](const Objectives& o, int m) {
        return m == 0 ? o.thp : m == 1 ? o.jfi : o.pdr;
    };
    std::vector<size_t> order(n);
    for (int m = 0; m < 3; ++m) {
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return component(front[a], m) < component(front[b], m);
        });
        const double lo = component(front[order.front()], m);
        const double hi = component(front[order.back()], m);
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (hi <= lo) continue;  // zero range: no interior contribution
        for (size_t j = 1; j + 1 < n; ++j) {
            if (std::isinf(dist[order[j]])) continue;
            dist[order[j]] +=
                (component(front[order[j + 1]], m) - component(front[order[j - 1]], m)) / (hi - lo);
        }
    }
    return dist;
}

std::vector<size_t> crowded_truncate(std::span<const Objectives> objs, size_t limit) {
    std::vector<size_t> survivors;
    if (limit == 0) return survivors;
    const auto fronts = fast_nondominated_sort(objs);
    survivors.reserve(std::min(limit, objs.size()));
    for (const auto& front : fronts) {
        if (survivors.size() + front.size() <= limit) {
            survivors.insert(survivors.end(), front.begin(), front.end());
            if (survivors.size() == limit) break;
            continue;
        }
        // Splitting front: keep the most crowded-out first.
        std::vector<Objectives> fobjs;
        fobjs.reserve(front.size());
        for (size_t idx : front) fobjs.push_back(objs[idx]);
        const auto dist = crowding_distance(fobjs);
        std::vector<size_t> pos(front.size());
        std::iota(pos.begin(), pos.end(), size_t{0});
        std::sort(pos.begin(), pos.end(), [&](size_t a, size_t b) {
            if (dist[a] != dist[b]) return dist[a] > dist[b];
            return front[a] < front[b];
        });
        const size_t want = limit - survivors.size();
        for (size_t j = 0; j < want; ++j) survivors.push_back(front[pos[j]]);
        break;
    }
    return survivors;
}

double hypervolume3(std::span<const Objectives> points) {
    if (points.empty()) return 0.0;
    // Maximize-all coordinates relative to the (0, 0, 1) reference:
    // x = thp, y = jfi, z = 1 - pdr, each clamped at 0.
    struct P {
        double x, y, z;
    };
    std::vector<P> pts;
    pts.reserve(points.size());
    for (const auto& o : points) {
        pts.push_back({std::max(o.thp, 0.0), std::max(o.jfi, 0.0), std::max(1.0 - o.pdr, 0.0)});
    }
    std::sort(pts.begin(), pts.end(), [](const P& a, const P& b) { return a.z > b.z; });

    // Slice along z: between consecutive z levels the cross-section is the
    // union of [0,x]x[0,y] rectangles of the points above the slice.
    std::vector<P> seen;
    double volume = 0.0;
    const auto staircase_area = [](std::vector<P>& v) {
        std::sort(v.begin(), v.end(), [](const P& a, const P& b) { return a.x > b.x; });
        double area = 0.0, y_max = 0.0;
        for (const auto& p : v) {
            if (p.y > y_max) {
                area += p.x * (p.y - y_max);
                y_max = p.y;
            }
        }
        return area;
    };
    for (size_t i = 0; i < pts.size(); ++i) {
        seen.push_back(pts[i]);
        const double z_next = (i + 1 < pts.size()) ? pts[i + 1].z : 0.0;
        const double dz = pts[i].z - z_next;
        if (dz <= 0.0) continue;
        std::vector<P> tmp = seen;
        volume += staircase_area(tmp) * dz;
    }
    return volume;
}

double weighted_score(const Objectives& obj, double thp_ref, const Weights& w) {
    const double thp_norm = thp_ref > 0.0 ? obj.thp / thp_ref : 0.0;
    return w.alpha * thp_norm + w.beta * obj.jfi - w.delta * obj.pdr;
}

size_t weighted_select(std::span<const Objectives> objs, const Weights& w) {
    if (objs.empty()) throw std::invalid_argument("weighted_select: empty set");
    double thp_ref = 0.0;
    for (const auto& o : objs) thp_ref = std::max(thp_ref, o.thp);
    size_t best = 0;
    double best_score = weighted_score(objs[0], thp_ref, w);
    for (size_t i = 1; i < objs.size(); ++i) {
        const double s = weighted_score(objs[i], thp_ref, w);
        if (s > best_score) {  // strict >: ties keep the lowest index
            best = i;
            best_score = s;
        }
    }
    return best;
}

}  // namespace schedlab::moo
