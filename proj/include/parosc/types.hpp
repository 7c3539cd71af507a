#ifndef PAROSC_TYPES_HPP
#define PAROSC_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace parosc {

using Real = double;
using Complex = std::complex<double>;
using VecX = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;
using MatX = Eigen::MatrixXd;
using MatXc = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// A computation failed numerically (solver blow-up, quadrature that did not
// converge, a grid that cannot resolve the requested state).  Distinct from
// std::invalid_argument, which flags malformed inputs before any numerics run.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parosc

#endif  // PAROSC_TYPES_HPP
