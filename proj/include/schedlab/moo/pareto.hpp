#ifndef SCHEDLAB_MOO_PARETO_HPP
#define SCHEDLAB_MOO_PARETO_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "schedlab/objectives.hpp"

namespace schedlab::moo {

// Orientation everywhere in this module: maximize THP, maximize JFI,
// minimize PDR.

// True iff a is at least as good as b in every objective and strictly
// better in at least one.
bool dominates(const Objectives& a, const Objectives& b);

// Deb's fast nondominated sort: front 0 is the nondominated set, front i+1 is
// nondominated once fronts <= i are removed. Every index appears exactly once.
std::vector<std::vector<size_t>> fast_nondominated_sort(std::span<const Objectives> objs);

// Crowding distance of each member of one front (given by its objectives
// only). Boundary members per objective get +inf; interior members accumulate
// normalized neighbor gaps; an objective with zero range contributes nothing.
std::vector<double> crowding_distance(std::span<const Objectives> front);

// NSGA-II survival: fill by whole fronts, filter the splitting front by
// descending crowding distance (ties to the lower index). Returns the indices
// of min(limit, n) survivors, fronts in order.
std::vector<size_t> crowded_truncate(std::span<const Objectives> objs, size_t limit);

// Hypervolume dominated by the set w.r.t. the reference point
// (THP=0, JFI=0, PDR=1), i.e. the worst corner. Coordinates are clamped at the
// reference. Used as a monotonicity witness for elitist search.
double hypervolume3(std::span<const Objectives> points);

// Preference weights shared by the genie selectors, the Eq. 2-style weighted
// KPI score, and the comparison tables.
struct Weights {
    double alpha = 1.0;  // THP
    double beta = 1.0;   // JFI
    double delta = 1.0;  // PDR (subtracted)
};

// alpha*(thp/thp_ref) + beta*jfi - delta*pdr; thp_ref <= 0 zeroes the THP term.
double weighted_score(const Objectives& obj, double thp_ref, const Weights& w);

// Index of the maximum weighted score with THP normalized by the best THP in
// the set itself; ties go to the lowest index. Set must be nonempty.
size_t weighted_select(std::span<const Objectives> objs, const Weights& w);

}  // namespace schedlab::moo

#endif
