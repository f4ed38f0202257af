#ifndef FLEXPLAN_TEMPORAL_H_
#define FLEXPLAN_TEMPORAL_H_

#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flexplan/rational.h"

namespace flexplan {

// Raised when partitions that must share a horizon do not, or when a block
// layout does not tile its horizon.
class TemporalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RepresentativePeriod {
  int hours = 1;
  double weight = 1.0;
  bool operator==(const RepresentativePeriod&) const = default;
};

struct MilestoneYear {
  int year = 0;
  double weight = 1.0;
  std::vector<RepresentativePeriod> rep_periods;
  bool operator==(const MilestoneYear&) const = default;
};

// Milestone years in increasing order, each with its representative periods.
// Representative periods are numbered from 1 within their year.
struct TemporalScope {
  std::vector<MilestoneYear> years;
  double interest_rate = 0.0;

  const MilestoneYear& Year(int year) const;
  const RepresentativePeriod& Period(int year, int rep_period) const;
  bool HasYear(int year) const;
  std::vector<int> YearLabels() const;

  bool operator==(const TemporalScope&) const = default;
};

// Inclusive hour range, 1-based.
struct Block {
  int first_hour = 1;
  int last_hour = 1;
  int duration() const { return last_hour - first_hour + 1; }
  bool operator==(const Block&) const = default;
};

// Contiguous blocks covering hours [1, horizon] without gaps or overlap.
class BlockPartition {
 public:
  // Throws TemporalError unless `blocks` tile [1, horizon].
  BlockPartition(int horizon, std::vector<Block> blocks);

  int horizon() const { return horizon_; }
  std::span<const Block> blocks() const { return blocks_; }
  const Block& block(int index) const { return blocks_.at(index); }
  int size() const { return static_cast<int>(blocks_.size()); }
  int max_duration() const;

  bool operator==(const BlockPartition&) const = default;

 private:
  int horizon_;
  std::vector<Block> blocks_;
};

// Blocks of `block_hours`, the last one truncated when the horizon is not a
// multiple. Both arguments must be at least 1.
BlockPartition UniformPartition(int block_hours, int horizon);

// Uniform partition at the coarsest block duration found in `incident`.
// Throws TemporalError for an empty list or mismatched horizons.
BlockPartition ConstraintPartition(std::span<const BlockPartition> incident);

// Sparse overlap operator from `source` blocks (columns, tau) onto `target`
// blocks (rows, p). Entry (p, tau) = overlap_hours(p, tau) / duration(tau).
//
// Every column sums to one, and for every row the entries weighted by source
// duration add up to the row block's duration. Indices are 0-based.
class MappingMatrix {
 public:
  struct Entry {
    int col;
    Rational value;
  };

  const BlockPartition& target() const { return target_; }
  const BlockPartition& source() const { return source_; }
  int rows() const { return target_.size(); }
  int cols() const { return source_.size(); }

  // Zero when the blocks do not overlap.
  Rational at(int p, int tau) const;
  // Nonzero entries of row p in increasing column order.
  std::span<const Entry> row(int p) const { return rows_.at(p); }
  int nonzeros() const;

  // Dense row-major copy in double precision, for hand-off to solvers.
  std::vector<std::vector<double>> ToDense() const;

 private:
  friend MappingMatrix BuildMappingMatrix(const BlockPartition&,
                                          const BlockPartition&);
  MappingMatrix(BlockPartition target, BlockPartition source)
      : target_(std::move(target)), source_(std::move(source)) {}

  BlockPartition target_;
  BlockPartition source_;
  std::vector<std::vector<Entry>> rows_;
};

MappingMatrix BuildMappingMatrix(const BlockPartition& target,
                                 const BlockPartition& source);

struct OmegaTriple {
  std::string entity;
  int p = 0;
  int tau = 0;
  auto operator<=>(const OmegaTriple&) const = default;
};
using OmegaSet = std::set<OmegaTriple>;

// Index triples at the strictly positive entries of `m`.
OmegaSet OmegaSupport(const MappingMatrix& m, std::string_view entity);

// 1 / (1 + IR)^(year - first milestone year). Throws std::out_of_range for a
// year that is not a milestone.
double DiscountFactor(const TemporalScope& scope, int year);

}  // namespace flexplan

#endif  // FLEXPLAN_TEMPORAL_H_
