#include "kisram/module_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "kisram/errors.hpp"
#include "kisram/literal.hpp"

namespace kisram {

namespace {

struct Value {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint32_t parse_uint(const Value& v, const std::string& key) {
  const std::string_view t = trim(v.text);
  if (t.empty() || t.size() > 9) throw ParseError("invalid value for " + key, v.line, v.column);
  std::uint32_t out = 0;
  for (const char c : t) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("expected a nonnegative integer for " + key, v.line, v.column);
    }
    out = out * 10 + static_cast<std::uint32_t>(c - '0');
  }
  return out;
}

bool parse_bool(const Value& v, const std::string& key) {
  const std::string_view t = trim(v.text);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw ParseError("expected true or false for " + key, v.line, v.column);
}

struct Entry {
  std::string_view text;
  std::size_t column;
};

// Splits a matrix value on commas and brackets outside parentheses.
std::vector<Entry> split_entries(const Value& v) {
  std::vector<Entry> out;
  const std::string_view s = v.text;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view piece = s.substr(start, end - start);
    std::size_t lead = 0;
    while (lead < piece.size() && std::isspace(static_cast<unsigned char>(piece[lead]))) ++lead;
    piece = trim(piece);
    if (!piece.empty()) out.push_back({piece, v.column + start + lead});
    start = end + 1;
  };
  for (std::size_t k = 0; k < s.size(); ++k) {
    const char c = s[k];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == ',' || c == '[' || c == ']')) flush(k);
  }
  flush(s.size());
  return out;
}

}  // namespace

const std::string* ModuleFile::find(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  if (s == sections.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

ModuleFile parse_module_text(std::string_view text, std::string name) {
  ModuleFile out;
  out.name = std::move(name);
  std::map<std::string, Value> module_keys;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string_view t = trim(line);
    if (t.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    const std::size_t indent = static_cast<std::size_t>(t.data() - line.data());
    if (t.front() == '[' && t.back() == ']' && t.find('=') == std::string_view::npos) {
      section = std::string(trim(t.substr(1, t.size() - 2)));
      if (section.empty()) throw ParseError("empty section name", line_no, indent + 1);
      out.sections[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no, indent + 1);
    const std::string key(trim(t.substr(0, eq)));
    if (key.empty()) throw ParseError("missing key before '='", line_no, indent + 1);
    if (section.empty()) throw ParseError("key '" + key + "' outside a section", line_no, indent + 1);
    std::string_view raw = t.substr(eq + 1);
    std::size_t col = indent + eq + 2;
    while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front()))) {
      raw.remove_prefix(1);
      ++col;
    }
    if (section == "module") {
      if (module_keys.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, indent + 1);
      module_keys[key] = {std::string(raw), line_no, col};
    } else {
      out.sections[section][key] = std::string(raw);
    }
    if (eol == text.size()) break;
  }
  if (module_keys.empty()) throw ParseError("missing [module] section", 1, 1);

  static const char* known[] = {"p", "f", "e", "n", "h", "d", "precision_vr", "prepared", "matrix"};
  for (const auto& [key, v] : module_keys) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ParseError("unknown module key '" + key + "'", v.line, 1);
    }
  }
  auto require = [&](const std::string& key) -> const Value& {
    auto it = module_keys.find(key);
    if (it == module_keys.end()) throw ParseError("missing module key '" + key + "'", line_no, 1);
    return it->second;
  };
  auto optional = [&](const std::string& key) -> std::optional<Value> {
    auto it = module_keys.find(key);
    if (it == module_keys.end()) return std::nullopt;
    return it->second;
  };

  const std::uint32_t p = parse_uint(require("p"), "p");
  const std::uint32_t e = parse_uint(require("e"), "e");
  const std::uint32_t d = parse_uint(require("d"), "d");
  const std::uint32_t f = optional("f") ? parse_uint(*optional("f"), "f") : 1;
  const std::uint32_t n = optional("n") ? parse_uint(*optional("n"), "n") : 1;
  const bool prepared = optional("prepared") ? parse_bool(*optional("prepared"), "prepared") : false;
  Rational precision(20);
  if (auto v = optional("precision_vr")) {
    try {
      precision = Rational::parse(trim(v->text));
    } catch (const ParseError&) {
      throw ParseError("invalid rational for precision_vr", v->line, v->column);
    }
  }
  if (!is_prime(p)) throw SemanticError("p must be prime (got " + std::to_string(p) + ")");
  if (e == 0) throw SemanticError("e must be positive");
  if (f == 0) throw SemanticError("f must be positive");
  if (n == 0) throw SemanticError("n must be positive");
  if (n > 4) throw Unsupported("level n = " + std::to_string(n) + " exceeds the Witt length cap of 4");
  if (n >= 2 && f != 1) throw Unsupported("level n >= 2 requires f = 1");

  const Value& mv = require("matrix");
  const std::vector<Entry> entries = split_entries(mv);
  std::size_t h = 0;
  while (h * h < entries.size()) ++h;
  if (h * h != entries.size()) {
    throw ParseError("matrix has " + std::to_string(entries.size()) + " entries, not a square count", mv.line,
                     mv.column);
  }
  if (auto hv = optional("h")) {
    const std::uint32_t declared = parse_uint(*hv, "h");
    if (declared != h) {
      throw SemanticError("h = " + std::to_string(declared) + " but the matrix has " + std::to_string(h * h) +
                          " entries");
    }
  }
  if (d > h) throw SemanticError("d = " + std::to_string(d) + " exceeds h = " + std::to_string(h));

  if (n == 1) {
    const FieldPtr F = finite_field(p, f);
    SeriesMatrix a(h, h);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      a(k / h, k % h) = parse_series(entries[k].text, F, Rational(1, static_cast<long>(e)),
                                     {mv.line, entries[k].column});
    }
    out.module = KisinModule::level1(p, f, e, d, std::move(a), prepared, precision);
  } else {
    mpz_class modulus = 1;
    for (std::uint32_t k = 0; k < n; ++k) modulus *= p;
    Matrix<ZPoly> a(h, h);
    for (std::size_t k = 0; k < entries.size(); ++k) {
      a(k / h, k % h) = parse_zpoly(entries[k].text, modulus, {mv.line, entries[k].column});
    }
    out.module = KisinModule::leveln(p, e, n, d, std::move(a), prepared, precision);
  }
  return out;
}

ModuleFile read_module_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0, 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_module_text(buf.str(), path.stem().string());
}

std::string format_entry(const KisinModule& m, std::size_t i, std::size_t j) {
  if (m.n >= 2) return format_zpoly(m.integral(i, j));
  return format_series_scaled(m.matrix(i, j), Rational(static_cast<long>(m.e)));
}

std::string format_module_matrix(const KisinModule& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.h; ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.h; ++j) {
      if (j) out += ", ";
      out += format_entry(m, i, j);
    }
    out += "]";
  }
  return out + "]";
}

std::string write_module(const KisinModule& m) {
  std::ostringstream out;
  out << "[module]\n";
  out << "p = " << m.p << "\n";
  out << "f = " << m.f << "\n";
  out << "e = " << m.e << "\n";
  out << "n = " << m.n << "\n";
  out << "h = " << m.h << "\n";
  out << "d = " << m.d << "\n";
  out << "precision_vr = " << m.precision_vr.str() << "\n";
  out << "prepared = " << (m.prepared ? "true" : "false") << "\n";
  out << "matrix = " << format_module_matrix(m) << "\n";
  return out.str();
}

}  // namespace kisram
