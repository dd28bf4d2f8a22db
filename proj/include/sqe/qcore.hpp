#pragma once

// Dense complex linear algebra and entropy primitives on small multipartite
// systems. All entropies are in bits.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sqe {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

using Labels = std::vector<std::string>;

/// Absolute tolerance on eigenvalues, traces and Hermiticity.
inline constexpr double kStateTolerance = 1e-9;

/// Thrown whenever an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered tensor factorization: one dimension and one unique label per factor.
class SubsystemDims {
 public:
  SubsystemDims() = default;
  SubsystemDims(std::vector<int> dims, std::vector<std::string> labels);

  [[nodiscard]] const std::vector<int>& dims() const { return dims_; }
  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] std::size_t size() const { return dims_.size(); }
  [[nodiscard]] int total() const;
  [[nodiscard]] bool contains(const std::string& label) const;
  /// Position of `label`; throws ValidationError if absent.
  [[nodiscard]] std::size_t index_of(const std::string& label) const;
  [[nodiscard]] int dim_of(const std::string& label) const { return dims_[index_of(label)]; }

  /// Factors restricted to `keep`, in the ambient order.
  [[nodiscard]] SubsystemDims restricted_to(const Labels& keep) const;

  friend bool operator==(const SubsystemDims&, const SubsystemDims&) = default;

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
};

/// Positive semidefinite, unit-trace Hermitian matrix over a factorization.
class DensityOperator {
 public:
  /// Validates Hermiticity, spectrum and trace to kStateTolerance.
  DensityOperator(CMatrix matrix, SubsystemDims dims);

  [[nodiscard]] const CMatrix& matrix() const { return matrix_; }
  [[nodiscard]] const SubsystemDims& dims() const { return dims_; }

  static DensityOperator maximally_mixed(SubsystemDims dims);

 private:
  struct Unchecked {};
  DensityOperator(Unchecked, CMatrix matrix, SubsystemDims dims)
      : matrix_(std::move(matrix)), dims_(std::move(dims)) {}
  friend DensityOperator partial_trace(const DensityOperator&, const Labels&);
  friend class PureState;

  CMatrix matrix_;
  SubsystemDims dims_;
};

/// Unit-norm state vector over a factorization.
class PureState {
 public:
  PureState(CVector amplitudes, SubsystemDims dims);

  [[nodiscard]] const CVector& amplitudes() const { return amplitudes_; }
  [[nodiscard]] const SubsystemDims& dims() const { return dims_; }
  [[nodiscard]] DensityOperator density() const;
  /// Reduced density operator on `keep`, computed without forming the full projector.
  [[nodiscard]] DensityOperator reduced(const Labels& keep) const;

  /// Sum_i |i>|i> / sqrt(d) on two factors of dimension d.
  static PureState maximally_entangled(int d, const std::string& first, const std::string& second);

 private:
  CVector amplitudes_;
  SubsystemDims dims_;
};

/// Rectangular matrix with V^dagger V = I mapping input factors to output factors.
class IsometryMatrix {
 public:
  IsometryMatrix(CMatrix matrix, SubsystemDims input_dims, SubsystemDims output_dims);

  [[nodiscard]] const CMatrix& matrix() const { return matrix_; }
  [[nodiscard]] const SubsystemDims& input_dims() const { return input_dims_; }
  [[nodiscard]] const SubsystemDims& output_dims() const { return output_dims_; }

 private:
  CMatrix matrix_;
  SubsystemDims input_dims_;
  SubsystemDims output_dims_;
};

/// CPTP map in Kraus form, each operator out_dim x in_dim.
class FiniteChannel {
 public:
  FiniteChannel(std::vector<CMatrix> kraus, int in_dim, int out_dim);

  [[nodiscard]] const std::vector<CMatrix>& kraus() const { return kraus_; }
  [[nodiscard]] int in_dim() const { return in_dim_; }
  [[nodiscard]] int out_dim() const { return out_dim_; }
  [[nodiscard]] int env_dim() const { return static_cast<int>(kraus_.size()); }

  /// Sum_k K rho K^dagger.
  [[nodiscard]] CMatrix apply(const CMatrix& rho) const;

  /// Kraus operators K_i (x) L_j, environment index i * M.env_dim() + j.
  [[nodiscard]] static FiniteChannel tensor(const FiniteChannel& n, const FiniteChannel& m);
  static FiniteChannel identity(int dim);

 private:
  std::vector<CMatrix> kraus_;
  int in_dim_;
  int out_dim_;
};

// Entropies.

double shannon_entropy(std::span<const double> probs);
double binary_entropy(double p);
/// Entropy of a bosonic thermal state with mean photon number x.
double bosonic_g(double x);
double von_neumann_entropy(const DensityOperator& rho);
/// Entropy of the spectrum of a Hermitian PSD matrix, validated like a state.
double spectrum_entropy(const CMatrix& hermitian);

DensityOperator partial_trace(const DensityOperator& rho, const Labels& keep);

PureState purify(const DensityOperator& rho);
IsometryMatrix kraus_to_isometry(const FiniteChannel& channel);

/// Applies `iso` to the factor `on`; the output factors of `iso` take its place.
PureState apply_isometry(const PureState& state, const IsometryMatrix& iso, const std::string& on);

double conditional_entropy(const DensityOperator& rho, const Labels& target,
                           const Labels& given);
double conditional_entropy(const PureState& psi, const Labels& target,
                           const Labels& given);
double conditional_mutual_information(const DensityOperator& rho, const Labels& a,
                                      const Labels& b,
                                      const Labels& c);

/// Tensor product of two states; labels must be disjoint.
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
PureState tensor(const PureState& a, const PureState& b);

}  // namespace sqe
