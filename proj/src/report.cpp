#include "dsp/report.hpp"

#include <sstream>

namespace dsp {

bool CheckReport::pass() const {
  if (!precondition_met) return false;
  for (const auto& s : squares)
    if (!s.pass) return false;
  return true;
}

void CheckReport::add(std::string desc, bool ok, std::optional<std::string> witness) {
  squares.push_back({std::move(desc), ok, ok ? std::nullopt : std::move(witness)});
}

void CheckReport::absorb(const CheckReport& other, const std::string& prefix) {
  for (const auto& s : other.squares) squares.push_back({prefix + s.desc, s.pass, s.witness});
  for (const auto& n : other.notes) notes.push_back(prefix + n);
  if (!other.precondition_met) {
    precondition_met = false;
    notes.push_back(prefix + "precondition unmet");
  }
}

const SquareRecord* CheckReport::first_failure() const {
  for (const auto& s : squares)
    if (!s.pass) return &s;
  return nullptr;
}

std::string CheckReport::caveat() const {
  std::ostringstream os;
  os << "verified up to simplicial level " << level;
  if (grade_bound >= 0) os << " and grade " << grade_bound;
  return os.str();
}

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["space"] = space;
  j["level"] = level;
  j["grade_bound"] = grade_bound;
  j["check"] = check;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : squares) {
    nlohmann::ordered_json e;
    e["desc"] = s.desc;
    e["pass"] = s.pass;
    if (s.witness)
      e["witness"] = *s.witness;
    else
      e["witness"] = nullptr;
    arr.push_back(std::move(e));
  }
  j["squares"] = std::move(arr);
  j["pass"] = pass();
  return j;
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  os << check << " on " << space << " (" << caveat() << "): " << (pass() ? "PASS" : "FAIL") << "\n";
  for (const auto& s : squares) {
    os << "  [" << (s.pass ? "ok" : "FAIL") << "] " << s.desc;
    if (s.witness) os << "\n        witness: " << *s.witness;
    os << "\n";
  }
  for (const auto& n : notes) os << "  note: " << n << "\n";
  return os.str();
}

}  // namespace dsp
