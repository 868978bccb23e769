/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef MASQKD_QUANTUM_HPP_
#define MASQKD_QUANTUM_HPP_

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace masqkd {

using cplx = std::complex<double>;

/// Numerical tolerance for all structural invariants (normalization,
/// unitarity, hermiticity, positivity).
inline constexpr double kTol = 1e-9;

//============================================================================
// StateVector
//============================================================================

/// Exact pure state over an ordered list of small subsystems.
///
/// Each subsystem has dimension 2 or 4; the amplitude layout is row-major
/// with the last subsystem varying fastest. A state with no subsystems is
/// the scalar state (single amplitude 1), which is what remains after every
/// subsystem has been measured away. Total dimension is capped at 16.
/// Instances are immutable after construction and validated on construction:
/// finite amplitudes, unit norm within kTol.
class StateVector {
 public:
  /// Scalar state.
  StateVector();

  StateVector(std::vector<int> dims, std::vector<cplx> amps);

  /// Canonical single- and two-qubit states. Recognized labels:
  /// "0", "1", "+", "-", "Phi+", "Phi-", "Psi+", "Psi-".
  static StateVector basis_state(std::string_view label);

  const std::vector<int>& dims() const { return dims_; }
  const std::vector<cplx>& amps() const { return amps_; }
  int subsystem_count() const { return static_cast<int>(dims_.size()); }
  int total_dim() const { return static_cast<int>(amps_.size()); }
  double norm() const;

  bool operator==(const StateVector&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<cplx> amps_;
};

/// Kronecker product; dims are concatenated (a first).
StateVector tensor(const StateVector& a, const StateVector& b);

/// Inserts a fresh subsystem (single-subsystem `factor`) at `position` in
/// `state`'s subsystem list.
StateVector insert_subsystem(const StateVector& state, int position,
                             const StateVector& factor);

//============================================================================
// Gate
//============================================================================

/// A dim x dim unitary (dim 2 or 4), validated U†U = I within kTol.
class Gate {
 public:
  Gate(int dim, std::vector<cplx> matrix);
  int dim() const { return dim_; }
  const std::vector<cplx>& matrix() const { return m_; }

 private:
  int dim_;
  std::vector<cplx> m_;
};

namespace gates {
/// H = (1/sqrt2) [[1,1],[1,-1]]
const Gate& hadamard();
/// sigma_z = [[1,0],[0,-1]]
const Gate& sigma_z();
}  // namespace gates

/// Applies `gate` to subsystem `target`; norm-preserving.
StateVector apply_gate(const StateVector& state, const Gate& gate, int target);

//============================================================================
// Measurement
//============================================================================

/// An orthonormal measurement basis with a fixed outcome index order:
///   Z    -> (|0>, |1>)
///   X    -> (|+>, |->)
///   Bell -> (Phi+, Phi-, Psi+, Psi-)
/// The fixed order makes transcripts reproducible: Born sampling walks the
/// cumulative probabilities in index order.
struct Basis {
  enum class Kind { Z, X, Bell };

  Kind kind;
  int dim;
  std::vector<std::vector<cplx>> vectors;

  static const Basis& z();
  static const Basis& x();
  static const Basis& bell();

  /// Human-readable outcome label ("0", "+", "Phi-", ...).
  const char* label(int index) const;

  /// The basis vector as a standalone state (Bell vectors become two-qubit
  /// states); used by callers that re-prepare the collapsed state.
  StateVector state(int index) const;
};

struct MeasurementOutcome {
  int index;               // outcome label in basis index order
  double probability;      // Born probability of this outcome
  StateVector post_state;  // remaining subsystems after the collapse
};

/// All outcome probabilities, in basis index order (sums to 1 within kTol).
std::vector<double> outcome_probabilities(const StateVector& state,
                                          const Basis& basis,
                                          std::span<const int> targets);

/// Born-rule measurement of `targets` (strictly increasing subsystem
/// indices whose dimensions multiply to basis.dim). The outcome is selected
/// by walking cumulative probabilities in basis index order until they
/// exceed `rand` (in [0,1)); identical inputs give identical outcomes.
/// The measured subsystems are removed from the returned post-state; callers
/// that resend re-attach `basis.state(index)` via insert_subsystem().
MeasurementOutcome measure(const StateVector& state, const Basis& basis,
                           std::span<const int> targets, double rand);

//============================================================================
// DensityMatrix and functionals
//============================================================================

/// Dense Hermitian density operator, dim <= 4. Validated on construction:
/// Hermitian and unit trace within kTol, eigenvalues >= -kTol.
class DensityMatrix {
 public:
  DensityMatrix(int dim, std::vector<cplx> matrix);
  static DensityMatrix from_pure(const StateVector& s);

  int dim() const { return dim_; }
  const std::vector<cplx>& matrix() const { return m_; }
  cplx at(int r, int c) const { return m_[r * dim_ + c]; }

  bool operator==(const DensityMatrix&) const = default;

 private:
  int dim_;
  std::vector<cplx> m_;
};

/// Reduced state of the kept subsystems (strictly increasing indices,
/// nonempty, combined dimension <= 4).
DensityMatrix partial_trace(const StateVector& state,
                            std::span<const int> keep);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(int dim,
                                          const std::vector<cplx>& matrix);

/// Von Neumann entropy in bits: -sum lambda log2 lambda (0 log 0 := 0).
double vn_entropy(const DensityMatrix& rho);

/// Optimal success probability of distinguishing rho0 (prior p0) from rho1:
/// 1/2 + 1/2 * || p0 rho0 - (1-p0) rho1 ||_1.
double helstrom_success(const DensityMatrix& rho0, const DensityMatrix& rho1,
                        double p0);

}  // namespace masqkd

#endif  // MASQKD_QUANTUM_HPP_
