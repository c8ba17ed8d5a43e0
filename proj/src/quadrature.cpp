#include "anderson/quadrature.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace anderson::quadrature {

double finite(const Integrand& f, double a, double b, double rel_tol) {
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule.integrate([&f](double x) { return f(x); }, a, b, rel_tol);
}

double smooth(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, max_depth,
                                                                          rel_tol);
}

double half_line(const Integrand& f, double a, double rel_tol) {
    thread_local boost::math::quadrature::exp_sinh<double> rule(9);
    if (a == 0.0) return rule.integrate([&f](double x) { return f(x); }, rel_tol);
    return rule.integrate([&](double x) { return f(x + a); }, rel_tol);
}

double fourier_sin(const Integrand& f, double omega, double rel_tol) {
    boost::math::quadrature::ooura_fourier_sin<double> rule(rel_tol);
    return rule.integrate(f, omega).first;
}

double fourier_cos(const Integrand& f, double omega, double rel_tol) {
    boost::math::quadrature::ooura_fourier_cos<double> rule(rel_tol);
    return rule.integrate(f, omega).first;
}

}  // namespace anderson::quadrature
