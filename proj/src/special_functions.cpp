#include "vofde/special_functions.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "vofde/errors.hpp"
#include "text.hpp"

namespace vofde {

double gamma(double s)
{
    if (!std::isfinite(s) || s <= 0.0)
        throw DomainError("gamma: argument must be finite and positive, got " + detail::str(s));
    return std::tgamma(s);
}

double lower_incomplete_gamma(double s, double x)
{
    if (!std::isfinite(s) || s <= 0.0)
        throw DomainError("lower_incomplete_gamma: s must be finite and positive, got " +
                          detail::str(s));
    if (!std::isfinite(x) || x < 0.0)
        throw DomainError("lower_incomplete_gamma: x must be finite and non-negative, got " +
                          detail::str(x));
    if (x == 0.0)
        return 0.0;
    try {
        return boost::math::tgamma_lower(s, x);
    } catch (const boost::math::evaluation_error& e) {
        throw ConvergenceError(std::string("lower_incomplete_gamma: ") + e.what());
    } catch (const std::domain_error& e) {
        throw DomainError(std::string("lower_incomplete_gamma: ") + e.what());
    }
}

}  // namespace vofde
