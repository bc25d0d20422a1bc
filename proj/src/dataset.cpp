#include "iwal/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>

namespace iwal {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

DataError line_error(std::size_t line, const std::string& what) {
  return DataError("line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size() ||
      !std::isfinite(value)) {
    throw line_error(line, "cannot parse number '" + std::string(token) + "'");
  }
  return value;
}

double map_label(double raw) {
  return raw > 0.0 ? 1.0 : -1.0;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(DataFormat format) {
  return format == DataFormat::csv ? "csv" : "svmlight";
}

DataFormat parse_data_format(std::string_view name) {
  if (name == "csv") return DataFormat::csv;
  if (name == "svmlight" || name == "libsvm") return DataFormat::svmlight;
  throw ConfigError("unknown dataset format '" + std::string(name) + "'");
}

std::vector<LabeledExample> parse_dataset(std::istream& in, DataFormat format) {
  std::vector<LabeledExample> data;
  std::string raw_line;
  std::size_t line = 0;

  if (format == DataFormat::csv) {
    Eigen::Index width = -1;
    std::vector<double> fields;
    while (std::getline(in, raw_line)) {
      ++line;
      const auto text = trim(raw_line);
      if (text.empty() || text.front() == '#') continue;
      fields.clear();
      std::size_t pos = 0;
      while (true) {
        const auto comma = text.find(',', pos);
        fields.push_back(parse_number(text.substr(pos, comma - pos), line));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
      }
      if (fields.size() < 2) throw line_error(line, "expected a label and at least one feature");
      const auto dim = static_cast<Eigen::Index>(fields.size() - 1);
      if (width >= 0 && dim != width) {
        throw line_error(line, "row has " + std::to_string(dim) + " features, expected " +
                                   std::to_string(width));
      }
      width = dim;
      Vector x(dim);
      for (Eigen::Index i = 0; i < dim; ++i) x[i] = fields[static_cast<std::size_t>(i) + 1];
      data.push_back({std::move(x), map_label(fields[0])});
    }
  } else {
    std::vector<std::vector<std::pair<Eigen::Index, double>>> rows;
    std::vector<double> labels;
    Eigen::Index dim = 0;
    while (std::getline(in, raw_line)) {
      ++line;
      auto text = trim(raw_line);
      if (const auto hash = text.find('#'); hash != std::string_view::npos) {
        text = trim(text.substr(0, hash));
      }
      if (text.empty()) continue;
      std::vector<std::pair<Eigen::Index, double>> entries;
      std::size_t pos = 0;
      bool first = true;
      while (pos < text.size()) {
        const auto space = text.find_first_of(" \t", pos);
        const auto token = text.substr(pos, space - pos);
        pos = space == std::string_view::npos ? text.size() : space + 1;
        if (token.empty()) continue;
        if (first) {
          labels.push_back(map_label(parse_number(token, line)));
          first = false;
          continue;
        }
        const auto colon = token.find(':');
        if (colon == std::string_view::npos) {
          throw line_error(line, "expected index:value, got '" + std::string(token) + "'");
        }
        const double index = parse_number(token.substr(0, colon), line);
        if (index < 1.0 || index != std::floor(index)) {
          throw line_error(line, "feature index must be a positive integer");
        }
        const auto i = static_cast<Eigen::Index>(index);
        entries.emplace_back(i - 1, parse_number(token.substr(colon + 1), line));
        dim = std::max(dim, i);
      }
      rows.push_back(std::move(entries));
    }
    if (dim == 0 && !rows.empty()) dim = 1;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Vector x = Vector::Zero(dim);
      for (const auto& [i, v] : rows[r]) x[i] = v;
      data.push_back({std::move(x), labels[r]});
    }
  }

  if (data.empty()) throw DataError("dataset is empty");
  return data;
}

std::vector<LabeledExample> load_dataset(const std::filesystem::path& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path.string());
  try {
    return parse_dataset(in, format);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_dataset(std::span<const LabeledExample> data, std::ostream& out, DataFormat format) {
  for (const auto& e : data) {
    out << (e.y > 0.0 ? "+1" : "-1");
    for (Eigen::Index i = 0; i < e.x.size(); ++i) {
      if (format == DataFormat::csv) {
        out << ',' << format_number(e.x[i]);
      } else if (e.x[i] != 0.0) {
        out << ' ' << (i + 1) << ':' << format_number(e.x[i]);
      }
    }
    out << '\n';
  }
}

Standardizer Standardizer::fit(std::span<const LabeledExample> data) {
  if (data.empty()) throw DomainError("cannot fit a standardizer on no data");
  const auto dim = data.front().x.size();
  Standardizer s{Vector::Zero(dim), Vector::Ones(dim)};
  for (const auto& e : data) s.mean += e.x;
  s.mean /= static_cast<double>(data.size());
  Vector var = Vector::Zero(dim);
  for (const auto& e : data) var += (e.x - s.mean).cwiseAbs2();
  var /= static_cast<double>(data.size());
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (var[i] > 0.0) s.scale[i] = std::sqrt(var[i]);
  }
  return s;
}

void Standardizer::apply(std::vector<LabeledExample>& data) const {
  for (auto& e : data) e.x = (e.x - mean).cwiseQuotient(scale);
}

}  // namespace iwal
