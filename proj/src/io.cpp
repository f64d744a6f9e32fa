#include "ntzone/io.hpp"

#include <cstdio>
#include <sstream>

namespace ntzone {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::string boundaries_csv(const std::vector<BoundaryRow>& rows) {
    std::ostringstream out;
    out << "wealth,lower,upper,merton,equiv_prop_cost\n";
    for (const auto& r : rows)
        out << g17(r.wealth) << ',' << g17(r.lower) << ',' << g17(r.upper) << ','
            << g17(r.merton) << ',' << g17(r.equiv_prop_cost) << '\n';
    return out.str();
}

std::string ellipsoid_csv(const std::vector<EllipsoidRow>& rows) {
    std::ostringstream out;
    out << "angle,w1,w2\n";
    for (const auto& r : rows)
        out << g17(r.angle) << ',' << g17(r.w1) << ',' << g17(r.w2) << '\n';
    return out.str();
}

static void result_row(std::ostringstream& out, double lambda, const SimResult& r) {
    out << g17(lambda) << ',' << g17(r.welfare_loss) << ',' << g17(r.std_error) << ','
        << g17(r.trades_per_year) << ',' << g17(r.liquidation_fraction) << '\n';
}

std::string simulate_csv(double lambda, const SimResult& r) {
    std::ostringstream out;
    out << "lambda,loss,stderr,trades_per_year,liq_frac\n";
    result_row(out, lambda, r);
    return out.str();
}

std::string scaling_csv(const ScalingStudy& s) {
    std::ostringstream out;
    out << "lambda,loss,stderr,trades_per_year,liq_frac\n";
    for (const auto& pt : s.points) result_row(out, pt.lambda, pt.result);
    return out.str();
}

std::string sweep_csv(const WidthSweep& s) {
    std::ostringstream out;
    out << "multiplier,loss,stderr,trades_per_year,liq_frac,loss_minus_base,diff_stderr\n";
    for (const auto& pt : s.points)
        out << g17(pt.multiplier) << ',' << g17(pt.result.welfare_loss) << ','
            << g17(pt.result.std_error) << ',' << g17(pt.result.trades_per_year) << ','
            << g17(pt.result.liquidation_fraction) << ',' << g17(pt.loss_minus_base) << ','
            << g17(pt.diff_std_error) << '\n';
    return out.str();
}

} // namespace ntzone
