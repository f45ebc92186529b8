#ifndef SCHEDLAB_OBJECTIVES_HPP
#define SCHEDLAB_OBJECTIVES_HPP

namespace schedlab {

// The three scheduling KPIs over a window. Orientation everywhere in this
// project: maximize thp, maximize jfi, minimize pdr.
struct Objectives {
    double thp = 0.0;  // bits/s
    double jfi = 0.0;  // unitless, in [1/K, 1] once anything was served
    double pdr = 0.0;  // dropped packets / arrived packets

    bool operator==(const Objectives&) const = default;
};

}  // namespace schedlab

#endif
