#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "kisram/kisin.hpp"

namespace kisram {

/// Contents of a module file.
///
///     # comment
///     [module]
///     p = 3
///     e = 4
///     h = 2
///     d = 1
///     prepared = true
///     matrix = [[u, 1], [u^4, 0]]
///
///     [expected]
///     jumps = 1/24: 9, 3/8: 3
///
/// Keys of [module]: p, f (default 1), e, n (default 1), h, d, precision_vr (default 20),
/// prepared (default false), matrix (row-major, brackets optional, Kisin u-exponents).
/// Other sections are kept verbatim as string maps.
struct ModuleFile {
  std::string name;
  KisinModule module;
  std::map<std::string, std::map<std::string, std::string>> sections;

  /// Value from a non-module section, or nullptr.
  const std::string* find(const std::string& section, const std::string& key) const;
};

/// Throws ParseError (syntax, with line/column) or SemanticError / Unsupported.
ModuleFile parse_module_text(std::string_view text, std::string name = "");
ModuleFile read_module_file(const std::filesystem::path& path);

/// The [module] section for m; parse_module_text of the result reproduces m.
std::string write_module(const KisinModule& m);

/// Matrix entry in file notation (Kisin u-exponents).
std::string format_entry(const KisinModule& m, std::size_t i, std::size_t j);
/// `[[a, b], [c, d]]` in file notation.
std::string format_module_matrix(const KisinModule& m);

}  // namespace kisram
