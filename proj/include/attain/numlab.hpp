#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "attain/classify.hpp"
#include "attain/sequence.hpp"
#include "attain/shift.hpp"

namespace attain {

namespace tolerance {
inline constexpr double kJacobiOffDiagonal = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kReconstruction = 1e-10;
inline constexpr double kOrthonormalPivot = 1e-10;
inline constexpr double kVerification = 1e-8;
inline constexpr double kWitnessEscape = 1e-12;
}  // namespace tolerance

/// Real symmetric N x N matrix; symmetry is checked exactly on construction.
class TruncatedMatrix {
 public:
  explicit TruncatedMatrix(Eigen::MatrixXd values);
  static TruncatedMatrix diagonal(const Eigen::VectorXd& diag);

  Eigen::Index size() const { return values_.rows(); }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }
  /// True when every off-diagonal entry is exactly zero.
  bool is_diagonal() const { return diagonal_; }

 private:
  Eigen::MatrixXd values_;
  bool diagonal_ = false;
};

/// m <= N spanning vectors stored as the columns of an N x m matrix.
class SubspaceBasis {
 public:
  explicit SubspaceBasis(Eigen::MatrixXd vectors);

  Eigen::Index ambient_dimension() const { return vectors_.rows(); }
  Eigen::Index dimension() const { return vectors_.cols(); }
  const Eigen::MatrixXd& vectors() const { return vectors_; }

 private:
  Eigen::MatrixXd vectors_;
};

/// Leading N x N corner of diag(entry(1), entry(2), ...).
TruncatedMatrix truncate_diagonal(const SequenceSpec& seq, std::size_t n);

struct ShiftTruncation {
  Eigen::MatrixXd shift;   ///< T_N, weights |w_k| on the subdiagonal
  TruncatedMatrix gram;    ///< T_N^T T_N
};

/// Phases are not materialized; the subdiagonal carries |w_k|.
ShiftTruncation truncate_shift(const WeightedShift& shift, std::size_t n);

/// Leading N x N corner of alpha I + K + F.
TruncatedMatrix truncate_composite(const CompositeOperator& op, std::size_t n);

/// alpha I + K + F restricted to the coordinates of supp F, in the given order.
TruncatedMatrix composite_block(const CompositeOperator& op, const std::vector<Index>& indices);

struct SymmetricEigen {
  Eigen::VectorXd eigenvalues;   ///< ascending
  Eigen::MatrixXd eigenvectors;  ///< orthogonal, column i pairs with eigenvalues[i]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-12. Throws Error(NoConvergence) after 100 sweeps.
SymmetricEigen jacobi_eigenvalues(const TruncatedMatrix& m);

/// Q diag(sqrt(max(lambda, 0))) Q^T. Eigenvalues in [-tol, 0) are clamped;
/// anything lower raises Error(NotPositiveSemidefinite).
TruncatedMatrix matrix_sqrt(const TruncatedMatrix& m, double tol);

/// Modified Gram-Schmidt. Throws Error(RankDeficient) when a vector's residual
/// falls below the pivot tolerance relative to its original norm.
Eigen::MatrixXd orthonormalize(const SubspaceBasis& basis,
                               double pivot_tol = tolerance::kOrthonormalPivot);

struct RestrictedNorm {
  double norm = 0.0;
  Eigen::VectorXd maximizer;
};

/// sup{ |M x| : x in span(basis), |x| <= 1 } together with a unit vector attaining it.
RestrictedNorm norm_on_subspace(const TruncatedMatrix& m, const SubspaceBasis& basis);

struct WitnessCheck {
  std::vector<double> norms;
  std::vector<double> predicted;
  double sup = 0.0;
  bool strictly_increasing = false;
  bool below_sup = false;
  double max_deviation = 0.0;

  bool passed() const { return strictly_increasing && below_sup; }
};

/// Restricted norms nu_1..nu_{m_max} over growing witness subspaces inside the
/// N-truncation. Throws Error(PredictionMismatch) if some |nu_m - predicted_m|
/// exceeds tol, Error(WitnessOutOfRange) if the basis does not fit in N.
WitnessCheck verify_witness_numeric(const SequenceSpec& seq, const Witness& witness,
                                    std::size_t m_max, std::size_t n, double tol,
                                    double escape_margin = tolerance::kWitnessEscape);

/// Number of eigenvalues strictly below threshold - tol.
std::size_t spectral_count_below(const TruncatedMatrix& m, double threshold, double tol);

}  // namespace attain
