#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hent {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Raised before allocation when a request exceeds the dense-ED budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// ---------------------------------------------------------------------------
// Region: a contiguous, non-empty block of sites [first, first + count).
// Sites are 0-based; site k lives on bit k of a basis index.
// ---------------------------------------------------------------------------

class Region {
 public:
  Region(int first, int count) : first_(first), count_(count) {
    if (first < 0 || count <= 0)
      throw InvalidArgument("Region: need first >= 0 and count >= 1");
  }

  static Region from_sites(const std::vector<int>& sites) {
    if (sites.empty()) throw InvalidArgument("Region: empty site list");
    for (std::size_t i = 1; i < sites.size(); ++i)
      if (sites[i] != sites[i - 1] + 1)
        throw InvalidArgument("Region: sites must be sorted and contiguous");
    return Region(sites.front(), static_cast<int>(sites.size()));
  }

  // First `count` sites of the chain.
  static Region prefix(int count) { return Region(0, count); }

  int first() const noexcept { return first_; }
  int count() const noexcept { return count_; }
  int end() const noexcept { return first_ + count_; }
  bool contains(int site) const noexcept { return site >= first_ && site < end(); }

  // Throws unless the region is a proper subset of an n-site chain.
  void validate(int n_sites) const {
    if (end() > n_sites)
      throw InvalidArgument("Region: extends past the end of the chain");
    if (count_ >= n_sites)
      throw InvalidArgument("Region: must be a proper subset of the chain");
  }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  int first_;
  int count_;
};

// ---------------------------------------------------------------------------
// PureState: 2^n complex amplitudes, little-endian site ordering.
// ---------------------------------------------------------------------------

class PureState {
 public:
  PureState() = default;

  PureState(int n_qubits, CVector amplitudes)
      : n_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 0 || n_qubits > 40)
      throw InvalidArgument("PureState: qubit count out of range");
    if (amps_.size() != (Eigen::Index{1} << n_qubits))
      throw InvalidArgument("PureState: amplitude count must equal 2^n");
  }

  static PureState basis(int n_qubits, std::uint64_t index) {
    CVector v = CVector::Zero(Eigen::Index{1} << n_qubits);
    if (static_cast<Eigen::Index>(index) >= v.size())
      throw InvalidArgument("PureState::basis: index out of range");
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(n_qubits, std::move(v));
  }

  static PureState zeros(int n_qubits) { return basis(n_qubits, 0); }

  int qubits() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  const CVector& amplitudes() const noexcept { return amps_; }
  CVector& amplitudes() noexcept { return amps_; }

  double norm() const { return amps_.norm(); }
  bool normalized(double tol = 1e-10) const { return std::abs(norm() - 1.0) <= tol; }

  PureState& normalize() {
    const double nrm = norm();
    if (nrm == 0.0) throw InvalidArgument("PureState: cannot normalize zero vector");
    amps_ /= nrm;
    return *this;
  }

  cplx inner(const PureState& other) const {
    if (other.n_ != n_) throw InvalidArgument("PureState::inner: size mismatch");
    return amps_.dot(other.amps_);  // conjugates *this
  }

 private:
  int n_ = 0;
  CVector amps_ = CVector::Ones(1);
};

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidArgument("DensityMatrix: not square");
  }

  const CMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  double hermiticity_residual() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }
  double trace_residual() const { return std::abs(m_.trace() - cplx(1.0)); }
  double purity() const { return m_.cwiseAbs2().sum(); }

  // Hermitian, unit trace, PSD within tolerance.
  bool valid(double tol = 1e-10) const {
    if (hermiticity_residual() > tol || trace_residual() > tol) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
  }

 private:
  CMatrix m_;
};

// ---------------------------------------------------------------------------
// SchmidtSpectrum
// ---------------------------------------------------------------------------

struct SchmidtSpectrum {
  std::vector<double> weights;            // descending
  std::optional<CMatrix> left_vectors;    // columns are states on the cut side
  Region cut{0, 1};
  std::optional<int> truncated_rank;      // set when only the top-k were computed
  bool degenerate = false;                // adjacent leading weights within 1e-9
  double max_residual = 0.0;              // eigenpair residual (matrix-free path)
  int iterations = 0;

  double leading() const { return weights.empty() ? 0.0 : weights.front(); }
  double total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

}  // namespace hent
