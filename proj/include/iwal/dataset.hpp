#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "iwal/types.hpp"

namespace iwal {

enum class DataFormat { csv, svmlight };

std::string_view to_string(DataFormat format);
DataFormat parse_data_format(std::string_view name);

/// Parses labeled examples. CSV rows are `label,f1,f2,...`; svmlight rows are
/// `label idx:value ...` with 1-based indices, densified to the largest index
/// seen. Labels > 0 map to +1, all others to -1.
///
/// Throws DataError naming the line for malformed rows or (CSV) inconsistent
/// row widths, and for an input with no examples.
std::vector<LabeledExample> parse_dataset(std::istream& in, DataFormat format);

std::vector<LabeledExample> load_dataset(const std::filesystem::path& path, DataFormat format);

// Writes with round-trip precision; svmlight output omits zero features.
void write_dataset(std::span<const LabeledExample> data, std::ostream& out, DataFormat format);

// Per-feature z-scoring fitted on a training prefix. Constant features keep
// scale 1.
struct Standardizer {
  Vector mean;
  Vector scale;

  static Standardizer fit(std::span<const LabeledExample> data);
  void apply(std::vector<LabeledExample>& data) const;
};

}  // namespace iwal
