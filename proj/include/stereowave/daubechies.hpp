#pragma once

#include <Eigen/Dense>

namespace stereowave {

//! Compactly supported Daubechies scaling family of order N. The low-pass
//! filter h_0..h_{2N-1} is normalized so that sum h_k = sqrt(2), and the
//! support convention is supp phi = supp psi = [0, 2N-1].
class WaveletFamily {
 public:
  //! Standard DB-N filter, 2 <= N <= 10.
  static WaveletFamily daubechies(int order);

  int order() const { return order_; }
  int support_end() const { return 2 * order_ - 1; }
  const Eigen::VectorXd& lowpass() const { return lowpass_; }

  //! High-pass filter g_k = (-1)^k h_{2N-1-k}; gives supp psi = [0, 2N-1].
  Eigen::VectorXd highpass() const;

 private:
  WaveletFamily(int order, Eigen::VectorXd lowpass)
      : order_(order), lowpass_(std::move(lowpass)) {}

  int order_;
  Eigen::VectorXd lowpass_;
};

//! Values of the scaling function and wavelet on the dyadic grid of step
//! 2^-depth over [0, 2N-1], produced by the cascade refinement. Immutable
//! after construction; evaluation is pure and thread-safe.
class WaveletTable {
 public:
  //! Integer values of phi come from the refinement eigenproblem (eigenvalue
  //! one, normalized so that sum_k phi(k) = 1); dyadic nodes are filled by
  //! repeated refinement; psi is filled through the high-pass filter.
  static WaveletTable cascade(const WaveletFamily& family, int depth);

  const WaveletFamily& family() const { return family_; }
  int depth() const { return depth_; }
  const Eigen::VectorXd& phi_values() const { return phi_; }
  const Eigen::VectorXd& psi_values() const { return psi_; }

  //! phi(t), linear interpolation between dyadic nodes, 0 outside (0, 2N-1).
  double phi(double t) const { return eval(phi_, t); }
  //! psi(t), same grid and interpolation.
  double psi(double t) const { return eval(psi_, t); }

  //! Either univariate factor: use_wavelet selects psi over phi.
  double factor(bool use_wavelet, double t) const {
    return eval(use_wavelet ? psi_ : phi_, t);
  }

  //! Length of the smallest interval outside which |phi| stays below
  //! rel_threshold * max|phi|.
  double effective_support_length(double rel_threshold) const;

 private:
  WaveletTable(WaveletFamily family, int depth, Eigen::VectorXd phi, Eigen::VectorXd psi)
      : family_(std::move(family)), depth_(depth), phi_(std::move(phi)), psi_(std::move(psi)) {}

  double eval(const Eigen::VectorXd& values, double t) const;

  WaveletFamily family_;
  int depth_;
  Eigen::VectorXd phi_;
  Eigen::VectorXd psi_;
};

//! Tensor wavelet psi^e_I(x) = 2^{jd/2} prod_i psi^{e_i}(2^j x_i - k_i)
//! read from the table; exactly 0 outside the support box. e, k and x must
//! have the same length d.
double eval_scaled(const WaveletTable& table, const Eigen::VectorXi& e, int level,
                   const Eigen::VectorXi& k, const Eigen::VectorXd& x);

}  // namespace stereowave
