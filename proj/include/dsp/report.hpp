#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace dsp {

struct SquareRecord {
  std::string desc;
  bool pass = true;
  std::optional<std::string> witness;
};

// Result of an axiom check: one record per square, overall verdict is the conjunction.
struct CheckReport {
  std::string check;
  std::string space;
  int level = -1;
  int grade_bound = -1;
  std::vector<SquareRecord> squares;
  std::vector<std::string> notes;
  bool precondition_met = true;

  bool pass() const;
  void add(std::string desc, bool ok, std::optional<std::string> witness = std::nullopt);
  // Appends other's squares, prefixing their descriptions.
  void absorb(const CheckReport& other, const std::string& prefix);
  const SquareRecord* first_failure() const;
  std::string caveat() const;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

}  // namespace dsp
