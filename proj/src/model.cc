#include "flexplan/model.h"

#include <algorithm>
#include <charconv>
#include <set>

namespace flexplan {
namespace {

std::vector<std::string_view> SplitFields(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find("__", start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 2;
  }
}

int ParseIndex(std::string_view text, std::string_view whole) {
  int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ModelError("malformed index '" + std::string(text) + "' in name '" +
                     std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string_view ToString(VariableKind kind) {
  switch (kind) {
    case VariableKind::kFlow: return "flow";
    case VariableKind::kStorageLevel: return "storage_level";
    case VariableKind::kReserve: return "reserve";
    case VariableKind::kUnitsOn: return "units_on";
    case VariableKind::kUnitsInvested: return "units_invested";
  }
  return "unknown";
}

std::optional<VariableKind> ParseVariableKind(std::string_view text) {
  for (VariableKind k :
       {VariableKind::kFlow, VariableKind::kStorageLevel,
        VariableKind::kReserve, VariableKind::kUnitsOn,
        VariableKind::kUnitsInvested}) {
    if (ToString(k) == text) return k;
  }
  return std::nullopt;
}

VariableRef VariableRef::Flow(int year, std::string from, std::string to,
                              int k, int block) {
  return {VariableKind::kFlow, year, std::move(from), std::move(to), k, block};
}

VariableRef VariableRef::StorageLevel(int year, std::string asset, int k,
                                      int block) {
  return {VariableKind::kStorageLevel, year, std::move(asset), "", k, block};
}

VariableRef VariableRef::Reserve(int year, std::string asset,
                                 std::string reserve, int k, int block) {
  return {VariableKind::kReserve, year, std::move(asset), std::move(reserve),
          k, block};
}

VariableRef VariableRef::UnitsOn(int year, std::string asset, int k,
                                 int block) {
  return {VariableKind::kUnitsOn, year, std::move(asset), "", k, block};
}

VariableRef VariableRef::UnitsInvested(int year, std::string asset) {
  return {VariableKind::kUnitsInvested, year, std::move(asset), "", 0, 0};
}

std::string VariableName(const VariableRef& ref) {
  std::string name(ToString(ref.kind));
  name += "__" + std::to_string(ref.year) + "__" + SanitizeId(ref.asset);
  if (ref.kind == VariableKind::kFlow || ref.kind == VariableKind::kReserve) {
    name += "__" + SanitizeId(ref.second);
  }
  if (ref.kind != VariableKind::kUnitsInvested) {
    name += "__" + std::to_string(ref.rep_period) + "__" +
            std::to_string(ref.block);
  }
  return name;
}

VariableRef ParseVariableName(std::string_view name) {
  const std::vector<std::string_view> parts = SplitFields(name);
  const std::optional<VariableKind> kind = ParseVariableKind(parts.front());
  if (!kind) {
    throw ModelError("unknown variable kind in '" + std::string(name) + "'");
  }
  const bool two_ids =
      *kind == VariableKind::kFlow || *kind == VariableKind::kReserve;
  const std::size_t expected = *kind == VariableKind::kUnitsInvested ? 3
                               : two_ids                            ? 6
                                                                    : 5;
  if (parts.size() != expected) {
    throw ModelError("variable name '" + std::string(name) +
                     "' has the wrong number of fields");
  }
  VariableRef ref;
  ref.kind = *kind;
  ref.year = ParseIndex(parts[1], name);
  ref.asset = std::string(parts[2]);
  std::size_t next = 3;
  if (two_ids) ref.second = std::string(parts[next++]);
  if (*kind != VariableKind::kUnitsInvested) {
    ref.rep_period = ParseIndex(parts[next], name);
    ref.block = ParseIndex(parts[next + 1], name);
  }
  return ref;
}

std::string ToString(const ConstraintName& name) {
  std::string out = name.family + "__" + std::to_string(name.year) + "__" +
                    SanitizeId(name.entity);
  if (name.rep_period != 0 || name.block != 0) {
    out += "__" + std::to_string(name.rep_period) + "__" +
           std::to_string(name.block);
  }
  return out;
}

ConstraintName ParseConstraintName(std::string_view text) {
  const std::vector<std::string_view> parts = SplitFields(text);
  if (parts.size() != 3 && parts.size() != 5) {
    throw ModelError("constraint name '" + std::string(text) +
                     "' has the wrong number of fields");
  }
  ConstraintName name;
  name.family = std::string(parts[0]);
  name.year = ParseIndex(parts[1], text);
  name.entity = std::string(parts[2]);
  if (parts.size() == 5) {
    name.rep_period = ParseIndex(parts[3], text);
    name.block = ParseIndex(parts[4], text);
  }
  return name;
}

Rational LinearConstraint::coef(const VariableRef& var) const {
  for (const Term& t : terms) {
    if (t.var == var) return t.coef;
  }
  return Rational(0);
}

int ModelInstance::AddVariable(const Variable& v) {
  auto [it, inserted] =
      index_.emplace(v.ref, static_cast<int>(variables_.size()));
  if (inserted) variables_.push_back(v);
  return it->second;
}

void ModelInstance::AddConstraint(LinearConstraint c) {
  constraints_.push_back(std::move(c));
}

void ModelInstance::SortVariables() {
  std::sort(variables_.begin(), variables_.end(),
            [](const Variable& a, const Variable& b) { return a.ref < b.ref; });
  index_.clear();
  for (int i = 0; i < static_cast<int>(variables_.size()); ++i) {
    index_.emplace(variables_[i].ref, i);
  }
}

std::optional<int> ModelInstance::IndexOf(const VariableRef& ref) const {
  auto it = index_.find(ref);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Variable& ModelInstance::variable(const VariableRef& ref) const {
  auto it = index_.find(ref);
  if (it == index_.end()) {
    throw ModelError("unregistered variable " + VariableName(ref));
  }
  return variables_[it->second];
}

void ModelInstance::CheckConsistency() const {
  std::set<std::string> names;
  for (const LinearConstraint& c : constraints_) {
    const std::string name = ToString(c.name);
    if (!names.insert(name).second) {
      throw ModelError("duplicate constraint name " + name);
    }
    std::set<VariableRef> seen;
    for (const Term& t : c.terms) {
      if (!index_.contains(t.var)) {
        throw ModelError("constraint " + name + " uses unregistered " +
                         VariableName(t.var));
      }
      if (!seen.insert(t.var).second) {
        throw ModelError("constraint " + name + " repeats " +
                         VariableName(t.var));
      }
    }
  }
  for (const ObjectiveTerm& t : objective_.terms) {
    if (!index_.contains(t.var)) {
      throw ModelError("objective uses unregistered " + VariableName(t.var));
    }
  }
}

}  // namespace flexplan
