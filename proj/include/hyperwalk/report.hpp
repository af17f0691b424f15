#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace hyperwalk {

enum class Verdict {
  Pass,
  Fail,
  /// The hypothesis never held, so nothing was asserted.
  Vacuous,
  /// A precondition (e.g. a witness) could not be established.
  Inconclusive,
  /// Passed on the checked range, which is a truncation of an infinite one.
  ConditionalPass,
};

std::string to_string(Verdict v);

/// Outcome of a sampled or exhaustive check of an inequality.
struct CheckReport {
  Verdict verdict = Verdict::Vacuous;
  std::size_t checked = 0;
  std::size_t hypothesis_met = 0;
  std::size_t violations = 0;
  /// Smallest observed slack (lhs - rhs of the asserted inequality);
  /// +inf when nothing was asserted.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<std::string> witnesses;
  std::vector<std::string> notes;

  bool ok() const { return verdict == Verdict::Pass || verdict == Verdict::Vacuous || verdict == Verdict::ConditionalPass; }

  /// Records one asserted inequality with slack `margin` (violated when
  /// margin < -tol); keeps at most kMaxWitnesses witnesses. `witness` is a
  /// callable returning a description, only invoked on violation.
  template <class F>
  void assert_margin(double margin, double tol, F&& witness) {
    if (margin < worst_margin) worst_margin = margin;
    if (margin < -tol) {
      ++violations;
      if (witnesses.size() < kMaxWitnesses) witnesses.push_back(witness());
    }
  }
  /// Records a predicate check; `margin` is informational.
  template <class F>
  void assert_holds(bool holds, double margin, F&& witness) {
    if (margin < worst_margin) worst_margin = margin;
    if (!holds) {
      ++violations;
      if (witnesses.size() < kMaxWitnesses) witnesses.push_back(witness());
    }
  }
  /// Recomputes the verdict from the counters.
  void finish();
  /// Folds another report into this one.
  void absorb(const CheckReport& other);

  std::string summary() const;

  static constexpr std::size_t kMaxWitnesses = 8;
};

}  // namespace hyperwalk
