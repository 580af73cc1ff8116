#include "lans/root_finding.hpp"

#include <cmath>
#include <sstream>

#include "lans/error.hpp"

namespace lans {

RootResult solve_bracketed(const std::function<double(double)>& f, Bracket b, double xtol,
                           double ftol, std::size_t max_iter) {
    if ((b.f_lo > 0.0) == (b.f_hi > 0.0) && b.f_lo != 0.0 && b.f_hi != 0.0) {
        std::ostringstream os;
        os.precision(17);
        os << "no sign change in bracket [" << b.lo << ", " << b.hi << "]";
        throw SolverFailure(os.str());
    }
    RootResult res;
    if (b.f_lo == 0.0 || b.f_hi == 0.0) {
        res.x = b.f_lo == 0.0 ? b.lo : b.hi;
        return res;
    }
    double a = b.lo, fa = b.f_lo, c = b.hi, fc = b.f_hi;
    int side = 0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        double x = (fa * c - fc * a) / (fa - fc);
        if (!(x > std::min(a, c) && x < std::max(a, c))) x = 0.5 * (a + c);
        const double fx = f(x);
        res.iterations = it;
        res.history.push_back(std::abs(fx));
        res.x = x;
        res.fx = fx;
        if (std::abs(fx) <= ftol || fx == 0.0) return res;
        if ((fx > 0.0) == (fc > 0.0)) {
            c = x;
            fc = fx;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = x;
            fa = fx;
            if (side == 1) fc *= 0.5;
            side = 1;
        }
        if (std::abs(c - a) <= xtol) return res;
    }
    throw SolverFailure("root finding did not converge");
}

} // namespace lans
