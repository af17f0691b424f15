#include "hyperwalk/report.hpp"

#include <algorithm>
#include <sstream>

namespace hyperwalk {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Vacuous:
      return "vacuous";
    case Verdict::Inconclusive:
      return "inconclusive";
    case Verdict::ConditionalPass:
      return "conditional-pass";
  }
  return "unknown";
}

void CheckReport::finish() {
  if (hypothesis_met > 0) std::erase(notes, std::string("hypothesis not met"));
  if (violations > 0) {
    verdict = Verdict::Fail;
  } else if (verdict == Verdict::Inconclusive || verdict == Verdict::ConditionalPass) {
    // keep
  } else if (hypothesis_met == 0) {
    verdict = Verdict::Vacuous;
  } else {
    verdict = Verdict::Pass;
  }
}

void CheckReport::absorb(const CheckReport& other) {
  checked += other.checked;
  hypothesis_met += other.hypothesis_met;
  violations += other.violations;
  worst_margin = std::min(worst_margin, other.worst_margin);
  for (const auto& w : other.witnesses) {
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(w);
  }
  for (const auto& n : other.notes) {
    if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
  }
  if (other.verdict == Verdict::Inconclusive) verdict = Verdict::Inconclusive;
}

std::string CheckReport::summary() const {
  std::ostringstream os;
  os << to_string(verdict) << ": checked=" << checked << " hypothesis_met=" << hypothesis_met
     << " violations=" << violations << " worst_margin=" << worst_margin;
  for (const auto& w : witnesses) os << "\n  witness: " << w;
  for (const auto& n : notes) os << "\n  note: " << n;
  return os.str();
}

}  // namespace hyperwalk
