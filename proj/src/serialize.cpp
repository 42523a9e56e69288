#include "spinboson/cli/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "spinboson/types.hpp"

namespace spinboson::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  out.reserve(t.rows.size() * t.columns.size() * 16 + 64);
  for (size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  j["columns"] = t.columns;
  auto& data = j["data"];
  data = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) data.push_back(row);
  return j.dump() + "\n";
}

Artifact encode(const Table& t, OutputFormat format) {
  if (format == OutputFormat::Csv) return {t.name + ".csv", to_csv(t)};
  return {t.name + ".json", to_json(t)};
}

void write_artifacts(const std::string& out_dir, const std::vector<Artifact>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec && !fs::is_directory(out_dir))
    throw ConfigError("cannot create output directory '" + out_dir + "': " + ec.message());
  for (const auto& f : files) {
    const fs::path path = fs::path(out_dir) / f.filename;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out.write(f.bytes.data(), static_cast<std::streamsize>(f.bytes.size()));
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
  }
}

}  // namespace spinboson::cli
