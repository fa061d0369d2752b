#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cogradar {

using Vec = std::vector<double>;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Small dense row-major matrix. Only the sizes the simulator needs
/// (2x2, 2x4, 4x2, 4x4) are exercised, so there is no blocking or BLAS.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);
  static Mat diag(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool operator==(const Mat&) const = default;

  template <class Archive>
  void save(Archive& ar) const {
    ar(rows_, cols_, data_);
  }
  template <class Archive>
  void load(Archive& ar) {
    ar(rows_, cols_, data_);
    if (data_.size() != rows_ * cols_) throw DimensionError("Mat: corrupt serialized shape");
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_vec(const Mat& a, std::span<const double> x);
Mat transpose(const Mat& a);
Mat add(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);
Mat scale(const Mat& a, double s);

/// Replaces `a` with (a + aᵀ)/2. The result is exactly symmetric.
void symmetrize(Mat& a);

double trace(const Mat& a);
double max_abs(const Mat& a);

/// Lower-triangular L with L·Lᵀ == a. Throws SingularMatrixError when a
/// pivot is not strictly positive.
Mat cholesky(const Mat& a);

/// Inverse of a symmetric positive definite matrix via Cholesky.
Mat invert_spd(const Mat& a);

/// Splitmix64 step; used for seed derivation everywhere a child seed is
/// needed (env streams, per-episode seeds).
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** generator with Box-Muller normals. Equal seeds give equal
/// sequences; the full state is a plain value so it can be checkpointed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);

  struct State {
    std::array<std::uint64_t, 4> s{};
    bool has_spare = false;
    double spare = 0.0;
    bool operator==(const State&) const = default;

    template <class Archive>
    void serialize(Archive& ar) {
      ar(s, has_spare, spare);
    }
  };

  const State& state() const { return state_; }
  void set_state(const State& st) { state_ = st; }

 private:
  State state_;
};

/// mean + L·u with L a Cholesky-type factor of `cov` and u standard normal.
/// Accepts positive semidefinite covariances (zero pivots are skipped).
/// Always consumes exactly mean.size() normals from `rng`.
Vec sample_gaussian(std::span<const double> mean, const Mat& cov, RngStream& rng);

}  // namespace cogradar
