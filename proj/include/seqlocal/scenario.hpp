#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace seqlocal {

inline constexpr double kDefaultTol = 1e-9;
/// Histories whose probability falls below this are treated as never occurring.
inline constexpr double kZeroHistoryThreshold = 1e-12;

enum class Party { Alice = 0, Bob = 1 };

/// Bipartite sequential scenario: `steps` time steps, `settings` inputs and `outcomes`
/// outputs per party per step.
///
/// Tensor layout (outcome-minor, setting-major):
///   index = outcome_index + outcome_blocks() * setting_index
///   outcome_index = sum_j (a_j + O b_j) (O^2)^j,  setting_index = sum_j (x_j + S y_j) (S^2)^j
/// so for the default scenario outcome_index = a1 + 2 b1 + 4 a2 + 8 b2.
struct Scenario {
  std::size_t steps = 2;
  std::size_t settings = 2;
  std::size_t outcomes = 2;

  /// Throws StructuralError unless steps >= 1, settings >= 2, outcomes >= 2.
  void check() const;

  /// Number of outcome tuples, (O^2)^L.
  std::size_t outcome_blocks() const;
  /// Number of setting tuples, (S^2)^L.
  std::size_t setting_blocks() const;
  std::size_t size() const { return outcome_blocks() * setting_blocks(); }

  /// 2-2-2 per step: the setting where CHSH machinery applies.
  bool is_binary() const { return settings == 2 && outcomes == 2; }

  /// Outcome (resp. setting) slot k = 2*step + party has stride O^k (resp. S^k).
  std::size_t outcome_stride(std::size_t step, Party p) const;
  std::size_t setting_stride(std::size_t step, Party p) const;

  Scenario with_steps(std::size_t l) const { return {l, settings, outcomes}; }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// One time step of a history: outcomes (a, b) obtained for settings (x, y).
struct StepRecord {
  int a = 0;
  int b = 0;
  int x = 0;
  int y = 0;

  friend auto operator<=>(const StepRecord&, const StepRecord&) = default;
};

/// Conditioning record X^(l) = (a_1 b_1 x_1 y_1, ..., a_{l-1} b_{l-1} x_{l-1} y_{l-1}).
class History {
 public:
  History() = default;
  explicit History(std::vector<StepRecord> steps) : steps_(std::move(steps)) {}
  History(int a, int b, int x, int y) : steps_{{a, b, x, y}} {}

  std::size_t length() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  const StepRecord& operator[](std::size_t i) const { return steps_[i]; }
  const std::vector<StepRecord>& steps() const { return steps_; }

  History extended(const StepRecord& r) const;

  /// Throws StructuralError if any entry is outside the scenario's ranges.
  void check(const Scenario& s) const;

  /// "a1,b1,x1,y1;a2,b2,x2,y2" with bits comma-joined per step; empty history is "".
  std::string key() const;
  static History parse(std::string_view key);

  /// Every history of the given length, in lexicographic order.
  static std::vector<History> all(const Scenario& s, std::size_t length);

  friend auto operator<=>(const History&, const History&) = default;

 private:
  std::vector<StepRecord> steps_;
};

}  // namespace seqlocal
