#pragma once

#include "ntzone/simulate.hpp"

#include <string>
#include <vector>

namespace ntzone {

// All CSV produced by the tools flows through these builders: header row,
// comma separated, LF line endings, every number printed with %.17g so the
// exact double round-trips.
std::string g17(double v);

struct BoundaryRow {
    double wealth = 0.0, lower = 0.0, upper = 0.0, merton = 0.0, equiv_prop_cost = 0.0;
};
std::string boundaries_csv(const std::vector<BoundaryRow>& rows);

// d == 2 ellipsoid boundary: angle (radians) and the two risky weights.
struct EllipsoidRow {
    double angle = 0.0, w1 = 0.0, w2 = 0.0;
};
std::string ellipsoid_csv(const std::vector<EllipsoidRow>& rows);

std::string simulate_csv(double lambda, const SimResult& r);
std::string scaling_csv(const ScalingStudy& s);
std::string sweep_csv(const WidthSweep& s);

} // namespace ntzone
