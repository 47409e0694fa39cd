#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kisram/module_io.hpp"
#include "kisram/points.hpp"

namespace kisram {

enum class OutputFormat { Text, Machine };

/// Ordered key/value result of one command.
///
/// Text rendering: a header naming the module, then `key: value` lines.
/// Machine rendering: the module echo in module-file syntax followed by a
/// `[result]` section of `key = value` lines.
struct Report {
  std::string command;
  std::string subject;
  std::optional<KisinModule> module;
  std::vector<std::pair<std::string, std::string>> fields;
  /// False when a check failed (exit status 1).
  bool ok = true;
  /// Text rendering joins the fields on one line with "; ".
  bool single_line = false;

  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }
  /// Value of the first field with this key, or nullptr.
  const std::string* get(const std::string& key) const;
};

std::string render(const Report& report, OutputFormat format);

/// `1/24: 9, 3/8: 3`, or `none`.
std::string format_jumps(const std::vector<Jump>& jumps);
/// Nonzero-point lower indices with multiplicities: `1/24 x6, 3/8 x2`, or `none`.
std::string format_valuations(const PointSet& points);
/// `i_1=3/8, i'_1=1/6, order 3, agree`, or `not applicable (...)`.
std::string format_consistency(const ConsistencyReport& c);
/// Matrix with v_R exponents.
std::string format_matrix(const SeriesMatrix& m);

Report validate_report(const ModuleFile& mf);
Report degree_report(const ModuleFile& mf);
Report hodge_report(const ModuleFile& mf);
Report canonical_report(const ModuleFile& mf, const EnumerationOptions& options = {});
Report points_report(const ModuleFile& mf, const EnumerationOptions& options = {});
/// With `i`, also reports |G_i|.
Report ramify_report(const ModuleFile& mf, const std::optional<Rational>& i, const EnumerationOptions& options = {});
Report wittideal_report(const WittVector& x, const IdealParameters& params);
Report verify_report(const ModuleFile& mf, const std::vector<WittVector>& coords);

}  // namespace kisram
