#pragma once

#include <Eigen/Dense>
#include <complex>
#include <unsupported/Eigen/FFT>

namespace pufsim {

template <class Scalar>
using ComplexGrid = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

// Reusable 2D FFT workspace (plans and scratch survive across calls).
// Column-major layout makes column transforms contiguous; rows are handled
// by transposing. inv() includes the 1/(rows*cols) scaling.
template <class Scalar>
class Fft2 {
 public:
  void fwd(ComplexGrid<Scalar>& a) { transform(a, true); }
  void inv(ComplexGrid<Scalar>& a) { transform(a, false); }

 private:
  void transform(ComplexGrid<Scalar>& a, bool forward) {
    const Eigen::Index n = a.rows();
    const Eigen::Index mcols = a.cols();
    tmp_.resize(n, mcols);
    for (Eigen::Index c = 0; c < mcols; ++c) {
      if (forward)
        fft_.fwd(tmp_.col(c).data(), a.col(c).data(), static_cast<int>(n));
      else
        fft_.inv(tmp_.col(c).data(), a.col(c).data(), static_cast<int>(n));
    }
    a = tmp_.transpose();
    tmp_.resize(mcols, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      if (forward)
        fft_.fwd(tmp_.col(c).data(), a.col(c).data(), static_cast<int>(mcols));
      else
        fft_.inv(tmp_.col(c).data(), a.col(c).data(), static_cast<int>(mcols));
    }
    a = tmp_.transpose();
  }

  Eigen::FFT<Scalar> fft_;
  ComplexGrid<Scalar> tmp_;
};

}  // namespace pufsim
