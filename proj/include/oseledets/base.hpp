#pragma once

// Invertible ergodic driving systems and two-sided orbit windows.
//
// A window stores the states sigma^n(omega) for n in [-n_past, n_future].
// Random drivers draw the symbol at each offset from a counter-based
// pseudo-random function of (seed, offset), so backward offsets cost the
// same as forward ones and any window can be regenerated bit-for-bit.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace oseledets {

/// A point of the base space. Discrete drivers use `symbol`, the rotation
/// uses `phase` in [0,1).
struct BaseState {
  int symbol = 0;
  double phase = 0.0;

  friend bool operator==(const BaseState&, const BaseState&) = default;
};

inline constexpr double kGoldenAngle = 0.6180339887498948482;  // (sqrt 5 - 1)/2

struct FiniteCycle {
  int period = 1;
  int initial = 0;
};

/// x -> x + angle mod 1. Irrationality of `angle` is the caller's
/// responsibility; it cannot be checked in floating point.
struct IrrationalRotation {
  double angle = kGoldenAngle;
  /// Negative means "draw the initial phase from the seed".
  double initial_phase = -1.0;
};

/// Two-sided i.i.d. shift on symbols {0, ..., p.size()-1}.
struct BernoulliShift {
  std::vector<double> probabilities;
};

/// Two-sided stationary Markov shift. Backward steps use the time-reversed
/// chain with respect to the stationary law.
struct MarkovShift {
  Eigen::MatrixXd transition;
  /// Law of the state at offset 0; empty means the stationary law.
  Eigen::VectorXd initial;
};

using Driver = std::variant<FiniteCycle, IrrationalRotation, BernoulliShift, MarkovShift>;

/// Throws ParameterError if the driver violates its invariants.
void validate(const Driver& driver);

std::string driver_name(const Driver& driver);

/// FiniteCycle and IrrationalRotation; the shift-consistency invariant is
/// only meaningful for these.
bool is_deterministic(const Driver& driver);

/// One application of sigma for deterministic drivers.
BaseState driver_step(const Driver& driver, const BaseState& state);

/// Size of the symbol alphabet (0 for the rotation).
int alphabet_size(const Driver& driver);

/// Stationary law of a row-stochastic matrix.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition);

namespace detail {
/// Counter-based uniform variate in [0,1) for (seed, stream, offset).
double uniform_at(std::uint64_t seed, std::uint64_t stream, std::int64_t offset);
/// Standard normal variate for (seed, stream, index), by Box-Muller.
double normal_at(std::uint64_t seed, std::uint64_t stream, std::int64_t index);
/// rows x cols matrix of normal_at(seed, stream, .) entries, column-major.
Eigen::MatrixXd normal_matrix(std::uint64_t seed, std::uint64_t stream, Eigen::Index rows, Eigen::Index cols);
}  // namespace detail

class OrbitWindow {
 public:
  OrbitWindow(Driver driver, std::uint64_t seed, std::shared_ptr<const std::vector<BaseState>> states,
              std::ptrdiff_t origin);

  /// State at offset n relative to the window origin. Throws RangeError.
  const BaseState& state(std::ptrdiff_t n) const;
  bool contains(std::ptrdiff_t n) const noexcept;

  std::ptrdiff_t first_offset() const noexcept { return -origin_; }
  std::ptrdiff_t last_offset() const noexcept {
    return static_cast<std::ptrdiff_t>(states_->size()) - 1 - origin_;
  }
  std::size_t size() const noexcept { return states_->size(); }

  std::uint64_t seed() const noexcept { return seed_; }
  const Driver& driver() const noexcept { return driver_; }

  /// Throws RangeError unless [first, last] lies inside the window.
  void require(std::ptrdiff_t first, std::ptrdiff_t last) const;

  friend OrbitWindow shift_view(const OrbitWindow& orbit, std::ptrdiff_t k);

 private:
  Driver driver_;
  std::uint64_t seed_;
  std::shared_ptr<const std::vector<BaseState>> states_;
  std::ptrdiff_t origin_;
};

OrbitWindow generate_orbit(const Driver& driver, std::uint64_t seed, std::size_t n_past,
                           std::size_t n_future);

/// Re-bases the window so that sigma^k(omega) becomes offset 0.
OrbitWindow shift_view(const OrbitWindow& orbit, std::ptrdiff_t k);

enum class Direction { forward, backward };

using Observable = std::function<double(const BaseState&)>;

/// (1/n) sum_{i<n} f(sigma^{+-i} omega).
double birkhoff_average(const OrbitWindow& orbit, const Observable& f, std::size_t n,
                        Direction direction = Direction::forward);

}  // namespace oseledets
