// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file report.hpp
 * @brief Structured record of one certified claim.
 */

#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fermicert {

enum class Relation { LessEqual, Equal };

struct VerificationReport {
  std::string claim;                                        // e.g. "lemma3", "theorem1"
  std::vector<std::pair<std::string, std::string>> inputs;  // echo of the instance
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::LessEqual;
  bool pass = false;
  double wall_seconds = 0.0;
  std::vector<std::string> notes;

  /// pass <=> lhs <= rhs + tol (inequalities) or |lhs - rhs| <= tol (equalities).
  void decide() {
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) {
      pass = false;
      return;
    }
    pass = (relation == Relation::LessEqual) ? (lhs <= rhs + tolerance) : (std::abs(lhs - rhs) <= tolerance);
  }

  void add_input(std::string key, std::string value) { inputs.emplace_back(std::move(key), std::move(value)); }
  void add_input(std::string key, double value) { inputs.emplace_back(std::move(key), format_number(value)); }
  void add_input(std::string key, int value) { inputs.emplace_back(std::move(key), std::to_string(value)); }

  std::string input(const std::string& key) const {
    for (const auto& [k, v] : inputs)
      if (k == key) return v;
    return {};
  }

  static std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "[" << (pass ? "PASS" : "FAIL") << "] " << claim;
    for (const auto& [k, v] : inputs) os << ' ' << k << '=' << v;
    char buf[160];
    std::snprintf(buf, sizeof buf, "  lhs=%.12e %s rhs=%.12e (tol %.1e)", lhs,
                  relation == Relation::LessEqual ? "<=" : "==", rhs, tolerance);
    os << buf;
    std::snprintf(buf, sizeof buf, "  [%.3fs]", wall_seconds);
    os << buf;
    for (const auto& n : notes) os << "\n    note: " << n;
    return os.str();
  }
};

/// Scoped wall-clock timer that writes into a report on destruction.
class ReportTimer {
 public:
  explicit ReportTimer(VerificationReport& r) : report_(r), start_(std::chrono::steady_clock::now()) {}
  ~ReportTimer() {
    report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  ReportTimer(const ReportTimer&) = delete;
  ReportTimer& operator=(const ReportTimer&) = delete;

 private:
  VerificationReport& report_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace fermicert
