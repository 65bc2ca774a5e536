#ifndef TORX_LINALG_HPP
#define TORX_LINALG_HPP

#include <Eigen/Dense>
#include <complex>

namespace torx {

using cdouble = std::complex<double>;

// one torus layer = 12 atoms; all block algebra is fixed-size
inline constexpr int kBlock = 12;

using Block = Eigen::Matrix<cdouble, kBlock, kBlock>;
using MatrixXc = Eigen::MatrixXcd;

inline double max_abs(const MatrixXc& m) {
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

} // namespace torx

#endif
