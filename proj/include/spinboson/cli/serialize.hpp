// serialize.hpp — deterministic artifact encoding: CSV with fixed column
// order and 17-significant-digit floats, or the JSON equivalent. Output bytes
// depend only on the data, never on thread count or timing.
#pragma once

#include <string>
#include <vector>

namespace spinboson::cli {

enum class OutputFormat { Csv, Json };

struct Table {
  std::string name;  // artifact stem, e.g. "coefficients"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// %.17g; NaN always "nan" (sign stripped), infinities "inf"/"-inf".
std::string format_double(double v);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

struct Artifact {
  std::string filename;
  std::string bytes;
};

Artifact encode(const Table& t, OutputFormat format);

// Creates the directory if needed and writes every file.
void write_artifacts(const std::string& out_dir, const std::vector<Artifact>& files);

}  // namespace spinboson::cli
