#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kisram/module_io.hpp"
#include "kisram/report.hpp"

namespace kisram {

struct SelfcheckEntry {
  std::string name;
  bool ok = true;
  /// First failing check, empty when ok.
  std::string failure;
  /// Checks that ran, in order.
  std::vector<std::string> checks;
};

struct SelfcheckResult {
  /// Sorted by name.
  std::vector<SelfcheckEntry> entries;

  bool ok() const;
};

/// Invariants and [expected] values of one corpus module. Never throws; errors become failures.
SelfcheckEntry check_module(const ModuleFile& mf);

/// Universal Witt polynomials against the ghost map for p in {2, 3, 5}, n <= 3.
SelfcheckEntry check_witt_tables();

/// Every *.kmod file under `corpus` plus the Witt table check, evaluated in parallel.
SelfcheckResult run_selfcheck(const std::filesystem::path& corpus);

std::string render_selfcheck(const SelfcheckResult& result, OutputFormat format);

}  // namespace kisram
