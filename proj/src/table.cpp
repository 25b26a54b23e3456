#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "uamo/harness.hpp"

namespace uamo {

void ResultTable::add_column(std::string name, std::string unit) {
  if (!rows.empty()) throw InvalidParameter("columns must be declared before rows");
  columns.push_back({std::move(name), std::move(unit)});
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw InvalidParameter("row width " + std::to_string(row.size()) + " does not match " +
                           std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : metadata)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  metadata.emplace_back(key, value);
}

void ResultTable::set_meta(const std::string& key, double value) { set_meta(key, format_double(value)); }

std::string ResultTable::meta(const std::string& key) const {
  for (const auto& kv : metadata)
    if (kv.first == key) return kv.second;
  return {};
}

long ResultTable::column_index(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return static_cast<long>(i);
  return -1;
}

std::vector<double> ResultTable::column(const std::string& name) const {
  const long c = column_index(name);
  if (c < 0) throw InvalidParameter("no column named " + name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[static_cast<size_t>(c)]);
  return out;
}

bool same_table(const ResultTable& a, const ResultTable& b) {
  if (a.columns != b.columns || a.metadata != b.metadata || a.rows.size() != b.rows.size()) return false;
  for (size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].size() != b.rows[i].size()) return false;
    if (std::memcmp(a.rows[i].data(), b.rows[i].data(), a.rows[i].size() * sizeof(double)) != 0) {
      for (size_t j = 0; j < a.rows[i].size(); ++j) {
        const double x = a.rows[i][j], y = b.rows[i][j];
        if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
      }
    }
  }
  return true;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string header_cell(const Column& c) { return c.unit.empty() ? c.name : c.name + "[" + c.unit + "]"; }

Column parse_header_cell(const std::string& s) {
  const auto open = s.find('[');
  if (open == std::string::npos || s.back() != ']') return {s, ""};
  return {s.substr(0, open), s.substr(open + 1, s.size() - open - 2)};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw InvalidParameter("malformed number in table: " + s);
  return v;
}

}  // namespace

std::string emit_csv(const ResultTable& t) {
  std::ostringstream os;
  for (const auto& [k, v] : t.metadata) {
    if (k.find('=') != std::string::npos || k.find('\n') != std::string::npos || v.find('\n') != std::string::npos)
      throw InvalidParameter("metadata key or value not representable in CSV: " + k);
    os << "# " << k << '=' << v << '\n';
  }
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << header_cell(t.columns[i]);
  os << '\n';
  for (const auto& r : t.rows) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
  return os.str();
}

ResultTable parse_csv(const std::string& text) {
  ResultTable t;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0 && !header) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw InvalidParameter("metadata line without '=': " + line);
      t.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
    } else if (!header) {
      for (const auto& cell : split(line, ',')) t.columns.push_back(parse_header_cell(cell));
      header = true;
    } else if (!line.empty()) {
      std::vector<double> row;
      for (const auto& cell : split(line, ',')) row.push_back(parse_number(cell));
      t.add_row(std::move(row));
    }
  }
  if (!header) throw InvalidParameter("table has no header row");
  return t;
}

std::string emit_json(const ResultTable& t) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) j["metadata"][k] = v;
  j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : t.columns) j["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    auto row = nlohmann::ordered_json::array();
    // Non-finite values are stored as strings since JSON has no literal for them.
    for (double v : r) {
      if (std::isfinite(v)) row.push_back(v);
      else row.push_back(format_double(v));
    }
    j["rows"].push_back(std::move(row));
  }
  return j.dump(1) + "\n";
}

ResultTable parse_json(const std::string& text) {
  const auto j = nlohmann::ordered_json::parse(text);
  ResultTable t;
  for (const auto& [k, v] : j.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
  for (const auto& c : j.at("columns")) t.columns.push_back({c.at("name").get<std::string>(), c.at("unit").get<std::string>()});
  for (const auto& r : j.at("rows")) {
    std::vector<double> row;
    for (const auto& v : r) row.push_back(v.is_string() ? parse_number(v.get<std::string>()) : v.get<double>());
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace uamo
