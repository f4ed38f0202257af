#ifndef FLEXPLAN_SRC_CSV_H_
#define FLEXPLAN_SRC_CSV_H_

#include <filesystem>
#include <string>
#include <vector>

namespace flexplan::csv {

struct Row {
  int line = 0;
  std::vector<std::string> fields;
};

struct Table {
  std::string file;
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Index of `name` in the header, or -1.
  int Column(const std::string& name) const;
};

// Header row plus data rows; blank lines are skipped. Double-quoted fields
// may contain commas and doubled quotes. Throws IoError / ParseError.
Table Read(const std::filesystem::path& path);

// Quotes a field only when it contains a comma, quote or newline.
std::string Escape(const std::string& field);

}  // namespace flexplan::csv

#endif  // FLEXPLAN_SRC_CSV_H_
