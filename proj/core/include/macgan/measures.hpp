#pragma once

#include <optional>
#include <span>

#include "macgan/types.hpp"

namespace macgan {

// ---------------------------------------------------------------------------
// Trace-form compactness and alignment.
// ---------------------------------------------------------------------------

/// (1/2n) (tr(Z Z^T) - tr(Z C Z^T)).
double l_tr(const FeatureBatch& z, const RelationMatrix& c);

/// dL_Tr/dZ = (1/2n) (2Z - Z (C + C^T)).
Matrix l_tr_grad(const FeatureBatch& z, const RelationMatrix& c);

struct MacResult {
  double value = 0.0;
  Matrix grad_real;  // d x n
  Matrix grad_gen;   // d x n'
};

/// Alignment between real (Z, C) and generated (Z', C') representations:
///
///   L_Tr(Z~, C~) - L_Tr(Z, C) / 2 - L_Tr(Z', C') / 2,   Z~ = [Z | Z'].
///
/// The joint term is normalized by 1 / (n + n'), which is 1 / (2n) for the
/// equal-batch case; the marginal terms use their own 1 / (2n).
double l_mac(const FeatureBatch& z_real, const FeatureBatch& z_gen, const RelationMatrix& c,
             const RelationMatrix& c_prime, const RelationMatrix& c_joint);

/// Value and gradients of l_mac with respect to Z and Z'.
MacResult l_mac_grads(const FeatureBatch& z_real, const FeatureBatch& z_gen,
                      const RelationMatrix& c, const RelationMatrix& c_prime,
                      const RelationMatrix& c_joint);

// ---------------------------------------------------------------------------
// Log-det coding-rate forms.
// ---------------------------------------------------------------------------

enum class RateScale {
  PerSample,  // 1/2 log det(I + alpha Z Z^T)
  BitCount,   // (n + d)/2 log det(I + alpha Z Z^T)
};

/// Rate constants for a batch of n samples in d dimensions.
struct RateParams {
  double epsilon = 0.5;

  double alpha(std::size_t d, std::size_t n) const;
  double alpha_class(std::size_t d, double class_trace) const;
  static double gamma_class(double class_trace, std::size_t n);
};

/// Coding rate of Z at distortion eps, alpha = d / (n eps^2). Natural log.
double coding_rate(const FeatureBatch& z, double eps, RateScale scale = RateScale::PerSample);

/// Gradient of the PerSample coding rate: alpha (I + alpha Z Z^T)^-1 Z.
Matrix coding_rate_grad(const FeatureBatch& z, double eps);

/// Expansion minus per-class compression:
///
///   1/2 log det(I + alpha Z Z^T)
///     - sum_j gamma_j / 2 log det(I + alpha_j Z C^j Z^T)
///
/// with alpha_j = d / (tr(C^j) eps^2), gamma_j = tr(C^j) / n. Each C^j must be
/// a diagonal n x n membership matrix with non-negative entries and positive
/// trace.
double coding_rate_decomposed(const FeatureBatch& z, std::span<const Matrix> memberships,
                              double eps);

/// Same quantity with the diagonals of all C^j stacked as rows of a k x n
/// matrix (row j = diag(C^j)).
double coding_rate_partitioned(const Matrix& z, const Matrix& membership_rows, double eps);
Matrix coding_rate_partitioned_grad(const Matrix& z, const Matrix& membership_rows, double eps);

/// Membership rows for the classes present in `labels`, in ascending label
/// order.
Matrix membership_rows_from_labels(std::span<const int> labels);
/// Every sample forms its own class.
Matrix singleton_membership_rows(std::size_t n);
/// Diagonal membership matrices C^j from stacked rows.
std::vector<Matrix> membership_matrices(const Matrix& membership_rows);

/// Log-det counterpart of l_mac: R(Z~) - R(Z)/2 - R(Z')/2 where R is
/// coding_rate_partitioned with each batch's own alpha and gamma_j.
MacResult l_mac_logdet(const Matrix& z_real, const Matrix& z_gen, const Matrix& rows_real,
                       const Matrix& rows_gen, const Matrix& rows_joint, double eps);

/// |(alpha/2) tr(Z Z^T) - 1/2 log det(I + alpha Z Z^T)|; alpha defaults to 1/n.
double taylor_gap(const FeatureBatch& z, std::optional<double> alpha = std::nullopt);

/// 1/2 log det(I + a W W^T) evaluated on the smaller Gram side.
double half_logdet_gram(const Matrix& w, double a);

}  // namespace macgan
