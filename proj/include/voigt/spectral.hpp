#pragma once

// Fourier representation of real periodic fields on [0, 2pi)^2.
//
// A field is stored by its coefficients f_k in the expansion
//     f(x) = sum_k f_k exp(i k.x),   k_j in {-M/2+1, ..., M/2}.
// Only the half plane k1 >= 0 is stored (the layout of a real-to-complex
// FFT); the remaining coefficients follow from f_{-k} = conj(f_k).
// Rows are indexed by k2 in FFT order, columns by k1 = 0..M/2.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace voigt {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
/// Area of the torus, (2 pi)^2.
inline constexpr double kTorusArea = kTwoPi * kTwoPi;

class GridSpec {
 public:
  /// Grid with the default two-thirds dealiasing cutoff.
  explicit GridSpec(int size);
  GridSpec(int size, int dealias_cutoff);

  /// Largest cutoff K with 3K < M, so quadratic products never alias into
  /// retained modes.
  static int default_cutoff(int size);

  int size() const noexcept { return size_; }
  int dealias_cutoff() const noexcept { return cutoff_; }
  int nyquist() const noexcept { return size_ / 2; }
  int rows() const noexcept { return size_; }
  int cols() const noexcept { return size_ / 2 + 1; }
  std::size_t real_count() const noexcept {
    return static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_);
  }
  std::size_t spectral_count() const noexcept {
    return static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols());
  }
  double spacing() const noexcept { return kTwoPi / size_; }

  /// Wave number stored at FFT index `index` along an axis.
  int wavenumber(int index) const noexcept {
    return index <= size_ / 2 ? index : index - size_;
  }
  /// FFT index of wave number k (k taken modulo M).
  int index_of(int k) const noexcept { return ((k % size_) + size_) % size_; }

  bool operator==(const GridSpec&) const = default;

 private:
  int size_;
  int cutoff_;
};

class SpectralField {
 public:
  explicit SpectralField(const GridSpec& grid);
  SpectralField(const GridSpec& grid, std::vector<Complex> coeffs);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }

  Complex& at(int row, int col) { return coeffs_[offset(row, col)]; }
  const Complex& at(int row, int col) const { return coeffs_[offset(row, col)]; }

  /// Coefficient of wave vector (k1, k2), for either sign of k1.
  Complex mode(int k1, int k2) const;
  /// Sets the coefficient at k and its conjugate partner at -k.
  void set_mode(int k1, int k2, Complex value);

  /// Mean value f_{(0,0)}.
  double mean() const noexcept { return coeffs_.front().real(); }
  void zero_mean() noexcept { coeffs_.front() = 0.0; }

  /// Calls fn(k1, k2, weight, coeff) for every stored coefficient. `weight`
  /// is the number of full-plane modes the stored entry stands for (1 on the
  /// self-conjugate columns k1 = 0 and k1 = M/2, 2 elsewhere).
  template <class Fn>
  void for_each_mode(Fn&& fn) const {
    const int n_rows = grid_.rows();
    const int n_cols = grid_.cols();
    for (int r = 0; r < n_rows; ++r) {
      const int k2 = grid_.wavenumber(r);
      for (int c = 0; c < n_cols; ++c) {
        const double w = (c == 0 || c == n_cols - 1) ? 1.0 : 2.0;
        fn(c, k2, w, coeffs_[static_cast<std::size_t>(r) * n_cols + c]);
      }
    }
  }

  /// Same traversal with mutable coefficients.
  template <class Fn>
  void transform_modes(Fn&& fn) {
    const int n_rows = grid_.rows();
    const int n_cols = grid_.cols();
    for (int r = 0; r < n_rows; ++r) {
      const int k2 = grid_.wavenumber(r);
      for (int c = 0; c < n_cols; ++c) {
        fn(c, k2, coeffs_[static_cast<std::size_t>(r) * n_cols + c]);
      }
    }
  }

  /// Largest |f_k - conj(f_{-k})| over the self-conjugate columns.
  double hermitian_defect() const;
  /// Averages each self-conjugate pair so the symmetry holds exactly.
  void symmetrize();
  double max_abs_coeff() const;
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  bool operator==(const SpectralField&) const = default;

 private:
  std::size_t offset(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(grid_.cols()) +
           static_cast<std::size_t>(col);
  }
  void require_same_grid(const SpectralField& other) const;

  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

/// Divergence-free velocity field (u1, u2).
struct VelocityPair {
  SpectralField u1;
  SpectralField u2;
};

enum class Axis { x1 = 1, x2 = 2 };

/// Real M x M samples at x = (2 pi i / M, 2 pi j / M), stored j-major with
/// the x1 index i fastest.
SpectralField forward_transform(std::span<const double> values, const GridSpec& grid);
std::vector<double> inverse_transform(const SpectralField& f);

/// Spectral partial derivative; the Nyquist line k_j = M/2 is zeroed.
SpectralField derivative(const SpectralField& f, Axis axis);
SpectralField laplacian(const SpectralField& f);
/// (I - alpha Laplacian)^{-1}: each coefficient divided by 1 + alpha |k|^2.
SpectralField helmholtz_filter(const SpectralField& f, double alpha);
/// Zero-mean solution g of Laplacian(g) = f.
SpectralField inverse_laplacian(const SpectralField& f);

/// Velocity u = (-d2 psi, d1 psi) with Laplacian(psi) = omega.
VelocityPair biot_savart(const SpectralField& omega);
/// Scalar curl d1 u2 - d2 u1.
SpectralField curl(const VelocityPair& u);
SpectralField divergence(const VelocityPair& u);
/// Removes the gradient part of (v1, v2) mode by mode.
VelocityPair leray_project(const SpectralField& v1, const SpectralField& v2);

/// Zeroes every mode with max(|k1|, |k2|) above the grid's dealias cutoff.
SpectralField dealias(const SpectralField& f);

/// Zero-pads or truncates the spectrum onto another grid size.
SpectralField resample(const SpectralField& f, const GridSpec& target);

/// L2(T^2) inner product (f, g) computed through Parseval.
double inner_product(const SpectralField& f, const SpectralField& g);

/// Pointwise product of the real-space fields, transformed back. No
/// dealiasing is applied.
SpectralField pseudo_product(const SpectralField& f, const SpectralField& g);

}  // namespace voigt
