#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ordzero/errors.hpp"

namespace ordzero {

/// Prescribed periods p_n and rates m_n, indexed from start_index.
///
/// Normalisation raises rates minimally so that d_n = m_n + p_n is strictly
/// increasing; the coefficient exponents are l_n = d_n^2 + 1.
class Schedule {
 public:
  Schedule() = default;

  Schedule(std::vector<int> periods, std::vector<int> rates, int start_index = 2)
      : start_index_(start_index), periods_(std::move(periods)), original_rates_(std::move(rates)) {
    if (periods_.size() != original_rates_.size())
      throw ScheduleError("periods and rates must have the same length (" +
                          std::to_string(periods_.size()) + " vs " +
                          std::to_string(original_rates_.size()) + ")");
    if (start_index_ < 1) throw ScheduleError("start_index must be >= 1");
    for (std::size_t i = 0; i < periods_.size(); ++i) {
      if (periods_[i] < 1) throw ScheduleError("period at position " + std::to_string(i) + " < 1");
      if (original_rates_[i] < 1) throw ScheduleError("rate at position " + std::to_string(i) + " < 1");
    }
    normalize();
  }

  std::size_t size() const { return periods_.size(); }
  bool empty() const { return periods_.empty(); }
  int start_index() const { return start_index_; }
  int end_index() const { return start_index_ + static_cast<int>(size()); }
  bool contains(int n) const { return n >= start_index_ && n < end_index(); }

  const std::vector<int>& periods() const { return periods_; }
  /// Rates after normalisation (these define the lattice and P_n).
  const std::vector<int>& rates() const { return rates_; }
  const std::vector<int>& original_rates() const { return original_rates_; }
  /// d_n = m_n + p_n, the degree the coefficient rule is written against.
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<int>& exponents() const { return exponents_; }

  int period(int n) const { return periods_.at(pos(n)); }
  int rate(int n) const { return rates_.at(pos(n)); }
  int original_rate(int n) const { return original_rates_.at(pos(n)); }
  int degree_sum(int n) const { return degrees_.at(pos(n)); }
  /// Number of linear factors of P_n, m_n * p_n.
  int factor_count(int n) const { return rate(n) * period(n); }
  int exponent(int n) const { return exponents_.at(pos(n)); }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (int n = start_index_; n < end_index(); ++n) out.push_back(n);
    return out;
  }

  bool was_renormalized() const { return rates_ != original_rates_; }

 private:
  std::size_t pos(int n) const {
    if (!contains(n)) throw ScheduleError("level " + std::to_string(n) + " is not scheduled");
    return static_cast<std::size_t>(n - start_index_);
  }

  void normalize() {
    rates_ = original_rates_;
    degrees_.clear();
    exponents_.clear();
    int prev = 0;
    for (std::size_t i = 0; i < periods_.size(); ++i) {
      if (rates_[i] + periods_[i] <= prev) rates_[i] = prev + 1 - periods_[i];
      prev = rates_[i] + periods_[i];
      degrees_.push_back(prev);
      exponents_.push_back(prev * prev + 1);
    }
  }

  int start_index_ = 2;
  std::vector<int> periods_;
  std::vector<int> original_rates_;
  std::vector<int> rates_;
  std::vector<int> degrees_;
  std::vector<int> exponents_;
};

}  // namespace ordzero
