#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace seqlocal {

using Complex = std::complex<double>;

/// Dense row-major complex matrix, sized for the small local dimensions used here (<= 64).
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Row-major nested initializer, e.g. {{1, 0}, {0, -1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v);  ///< |u><v|

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  bool is_hermitian(double tol) const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Re Tr[A B] without forming the product.
double real_trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product A (x) B.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { A, B };

/// Traces out subsystem `traced` of an operator on C^dims[0] (x) C^dims[1].
ComplexMatrix partial_trace(const ComplexMatrix& m, std::array<std::size_t, 2> dims, Subsystem traced);

struct EigenDecomposition {
  std::vector<double> values;  ///< descending
  ComplexMatrix vectors;       ///< column k is the eigenvector of values[k]
};

/// Cyclic complex Jacobi. Throws StructuralError unless `m` is square and Hermitian within 1e-10.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// U diag(f(lambda)) U^dagger.
ComplexMatrix reconstruct(const EigenDecomposition& e);

/// The +-1 observable sign(M) of a Hermitian M; zero eigenvalues map to +1.
ComplexMatrix matrix_sign(const ComplexMatrix& m);

/// Pauli matrices.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace seqlocal
