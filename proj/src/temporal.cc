#include "flexplan/temporal.h"

#include <algorithm>
#include <cmath>

namespace flexplan {

const MilestoneYear& TemporalScope::Year(int year) const {
  for (const MilestoneYear& y : years) {
    if (y.year == year) return y;
  }
  throw std::out_of_range("year " + std::to_string(year) +
                          " is not a milestone year");
}

const RepresentativePeriod& TemporalScope::Period(int year,
                                                  int rep_period) const {
  const MilestoneYear& y = Year(year);
  if (rep_period < 1 || rep_period > static_cast<int>(y.rep_periods.size())) {
    throw std::out_of_range("representative period " +
                            std::to_string(rep_period) + " not defined for " +
                            std::to_string(year));
  }
  return y.rep_periods[rep_period - 1];
}

bool TemporalScope::HasYear(int year) const {
  return std::any_of(years.begin(), years.end(),
                     [year](const MilestoneYear& y) { return y.year == year; });
}

std::vector<int> TemporalScope::YearLabels() const {
  std::vector<int> labels;
  labels.reserve(years.size());
  for (const MilestoneYear& y : years) labels.push_back(y.year);
  return labels;
}

BlockPartition::BlockPartition(int horizon, std::vector<Block> blocks)
    : horizon_(horizon), blocks_(std::move(blocks)) {
  if (horizon_ < 1) throw TemporalError("horizon must be at least one hour");
  int next = 1;
  for (const Block& b : blocks_) {
    if (b.first_hour != next || b.duration() < 1) {
      throw TemporalError("blocks must be contiguous and non-empty");
    }
    next = b.last_hour + 1;
  }
  if (next != horizon_ + 1) {
    throw TemporalError("blocks must cover the horizon exactly");
  }
}

int BlockPartition::max_duration() const {
  int d = 0;
  for (const Block& b : blocks_) d = std::max(d, b.duration());
  return d;
}

BlockPartition UniformPartition(int block_hours, int horizon) {
  if (block_hours < 1 || horizon < 1) {
    throw TemporalError("block length and horizon must be positive");
  }
  std::vector<Block> blocks;
  blocks.reserve((horizon + block_hours - 1) / block_hours);
  for (int start = 1; start <= horizon; start += block_hours) {
    blocks.push_back({start, std::min(start + block_hours - 1, horizon)});
  }
  return BlockPartition(horizon, std::move(blocks));
}

BlockPartition ConstraintPartition(std::span<const BlockPartition> incident) {
  if (incident.empty()) {
    throw TemporalError("constraint partition needs at least one input");
  }
  const int horizon = incident.front().horizon();
  int duration = 0;
  for (const BlockPartition& p : incident) {
    if (p.horizon() != horizon) {
      throw TemporalError("inconsistent temporal scope: horizons " +
                          std::to_string(horizon) + " and " +
                          std::to_string(p.horizon()));
    }
    duration = std::max(duration, p.max_duration());
  }
  return UniformPartition(duration, horizon);
}

MappingMatrix BuildMappingMatrix(const BlockPartition& target,
                                 const BlockPartition& source) {
  if (target.horizon() != source.horizon()) {
    throw TemporalError("inconsistent temporal scope: horizons " +
                        std::to_string(target.horizon()) + " and " +
                        std::to_string(source.horizon()));
  }
  MappingMatrix m(target, source);
  m.rows_.resize(target.size());
  // Both partitions are sorted, so a single sweep finds every overlap.
  int tau = 0;
  for (int p = 0; p < target.size(); ++p) {
    const Block& row_block = target.block(p);
    while (tau < source.size() &&
           source.block(tau).last_hour < row_block.first_hour) {
      ++tau;
    }
    for (int j = tau; j < source.size(); ++j) {
      const Block& col_block = source.block(j);
      if (col_block.first_hour > row_block.last_hour) break;
      const int overlap =
          std::min(row_block.last_hour, col_block.last_hour) -
          std::max(row_block.first_hour, col_block.first_hour) + 1;
      m.rows_[p].push_back({j, Rational(overlap, col_block.duration())});
    }
  }
  return m;
}

Rational MappingMatrix::at(int p, int tau) const {
  for (const Entry& e : rows_.at(p)) {
    if (e.col == tau) return e.value;
  }
  return Rational(0);
}

int MappingMatrix::nonzeros() const {
  int n = 0;
  for (const auto& r : rows_) n += static_cast<int>(r.size());
  return n;
}

std::vector<std::vector<double>> MappingMatrix::ToDense() const {
  std::vector<std::vector<double>> dense(rows(), std::vector<double>(cols()));
  for (int p = 0; p < rows(); ++p) {
    for (const Entry& e : rows_[p]) dense[p][e.col] = e.value.ToDouble();
  }
  return dense;
}

OmegaSet OmegaSupport(const MappingMatrix& m, std::string_view entity) {
  OmegaSet omega;
  for (int p = 0; p < m.rows(); ++p) {
    for (const MappingMatrix::Entry& e : m.row(p)) {
      if (e.value.IsPositive()) omega.insert({std::string(entity), p, e.col});
    }
  }
  return omega;
}

double DiscountFactor(const TemporalScope& scope, int year) {
  if (!scope.HasYear(year)) {
    throw std::out_of_range("year " + std::to_string(year) +
                            " is not a milestone year");
  }
  const int offset = year - scope.years.front().year;
  return 1.0 / std::pow(1.0 + scope.interest_rate, offset);
}

}  // namespace flexplan
