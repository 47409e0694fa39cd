// kisram: command-line front end.
//
//   kisram <command> [path] [--i num/den] [--precision num/den] [--format text|machine] [--out path]
//
// Exit codes: 0 success, 1 check failure, 2 usage/parse error, 3 precision or extension exhaustion.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kisram/errors.hpp"
#include "kisram/literal.hpp"
#include "kisram/module_io.hpp"
#include "kisram/report.hpp"
#include "kisram/selfcheck.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kExhausted = 3;

struct Options {
  std::string command;
  std::string input;
  std::string i;
  std::string precision;
  std::string format = "text";
  std::string out;
  std::string point;
  std::string corpus;
  unsigned n = 1;
  unsigned p = 0;
  unsigned f = 1;
  unsigned extension_cap = 12;
};

kisram::Rational parse_rational_option(const std::string& text, const std::string& name) {
  try {
    return kisram::Rational::parse(text);
  } catch (const kisram::ParseError&) {
    throw CLI::ValidationError(name, "expected num/den, got '" + text + "'");
  }
}

std::string default_corpus() {
  if (const char* env = std::getenv("KISRAM_CORPUS")) return env;
  return KISRAM_CORPUS_DIR;
}

kisram::ModuleFile load(const Options& o) {
  if (o.input.empty()) throw CLI::RequiredError("path");
  kisram::ModuleFile mf = kisram::read_module_file(o.input);
  if (!o.precision.empty()) {
    const kisram::Rational prec = parse_rational_option(o.precision, "--precision");
    if (!(kisram::Rational(0) < prec)) throw kisram::SemanticError("precision_vr must be positive");
    mf.module.precision_vr = prec;
  }
  return mf;
}

// Splits "[a, b]; [c, d]" into coordinate literals.
std::vector<std::string> split_point(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : text) {
    if (c == ';') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int run(const Options& o, std::ostream& out) {
  const kisram::OutputFormat format =
      o.format == "machine" ? kisram::OutputFormat::Machine : kisram::OutputFormat::Text;
  kisram::EnumerationOptions enum_options;
  enum_options.extension_cap = o.extension_cap;

  if (o.command == "selfcheck") {
    const kisram::SelfcheckResult result = kisram::run_selfcheck(o.corpus.empty() ? default_corpus() : o.corpus);
    out << kisram::render_selfcheck(result, format);
    return result.ok() ? kOk : kCheckFailed;
  }

  kisram::Report report;
  if (o.command == "wittideal") {
    if (o.p == 0) throw CLI::RequiredError("--p");
    if (o.i.empty()) throw CLI::RequiredError("--i");
    if (o.input.empty()) throw CLI::RequiredError("witt vector literal");
    if (!kisram::is_prime(o.p)) throw kisram::SemanticError("p must be prime (got " + std::to_string(o.p) + ")");
    const auto table = kisram::witt_table(o.p, o.n);
    const auto field = kisram::finite_field(o.p, o.f);
    const kisram::WittVector x = kisram::parse_witt(o.input, table, field);
    const kisram::IdealParameters params(parse_rational_option(o.i, "--i"), o.n);
    report = kisram::wittideal_report(x, params);
  } else {
    const kisram::ModuleFile mf = load(o);
    std::optional<kisram::Rational> i;
    if (!o.i.empty()) {
      i = parse_rational_option(o.i, "--i");
      if (!(kisram::Rational(0) < *i) || kisram::Rational(1) < *i) {
        throw kisram::SemanticError("--i must lie in (0, 1]");
      }
    }
    if (o.command == "validate") {
      report = kisram::validate_report(mf);
    } else if (o.command == "degree") {
      report = kisram::degree_report(mf);
    } else if (o.command == "hodge") {
      report = kisram::hodge_report(mf);
    } else if (o.command == "canonical") {
      report = kisram::canonical_report(mf, enum_options);
    } else if (o.command == "points") {
      report = kisram::points_report(mf, enum_options);
    } else if (o.command == "ramify") {
      report = kisram::ramify_report(mf, i, enum_options);
    } else if (o.command == "verify") {
      if (o.point.empty()) throw CLI::RequiredError("--point");
      const auto table = mf.module.table();
      std::vector<kisram::WittVector> coords;
      for (const auto& lit : split_point(o.point)) {
        coords.push_back(kisram::parse_witt(lit, table, kisram::finite_field(mf.module.p, std::max(mf.module.f, o.f))));
      }
      report = kisram::verify_report(mf, coords);
    }
  }
  out << kisram::render(report, format);
  return report.ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower ramification filtrations and canonical subgroups from Kisin modules"};
  app.require_subcommand(1);
  Options o;

  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec commands[] = {
      {"validate", "Check E-height <= 1 and the prepared block form"},
      {"degree", "Degree v_R(det A) and the dual degree"},
      {"hodge", "Hodge height w of the prepared basis"},
      {"canonical", "Canonical data (B, D) and the consistency of the canonical subgroup"},
      {"points", "Enumerate Hom(M, W_n(R)) with lower indices"},
      {"ramify", "Lower ramification filtration"},
      {"wittideal", "Membership of a Witt vector in I_{n,i} and its lower index"},
      {"verify", "Check that a supplied point is a Frobenius-compatible homomorphism"},
      {"selfcheck", "Run the invariant suite over the module corpus"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    const std::string name = c.name;
    sub->callback([&o, name] { o.command = name; });
    if (name == "wittideal") {
      sub->add_option("vector", o.input, "Witt vector literal, e.g. '[u^1/2, u^3/4]'")->required();
      sub->add_option("--n", o.n, "Witt length")->check(CLI::Range(1u, 4u));
      sub->add_option("--p", o.p, "Characteristic")->required();
      sub->add_option("--f", o.f, "Residue field degree")->check(CLI::PositiveNumber);
      sub->add_option("--i", o.i, "Ideal parameter num/den in (0, 1]")->required();
    } else if (name == "selfcheck") {
      sub->add_option("--corpus", o.corpus, "Corpus directory (default: bundled corpus)");
    } else {
      sub->add_option("path", o.input, "Module file")->required();
      sub->add_option("--i", o.i, "Query parameter num/den in (0, 1]");
      sub->add_option("--precision", o.precision, "Working precision num/den (v_R units)");
      sub->add_option("--extension-cap", o.extension_cap, "Largest residue-field degree for roots")
          ->check(CLI::Range(1u, 64u));
      if (name == "verify") {
        sub->add_option("--point", o.point, "Coordinates as Witt literals separated by ';'");
        sub->add_option("--f", o.f, "Residue field degree of the point coefficients")->check(CLI::PositiveNumber);
      }
    }
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--out", o.out, "Write the report to this file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      std::cerr << "error: cannot write " << o.out << "\n";
      return kUsage;
    }
  }
  std::ostream& out = o.out.empty() ? std::cout : file;
  try {
    return run(o, out);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const kisram::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const kisram::SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const kisram::Unsupported& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const kisram::PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return kExhausted;
  } catch (const kisram::ExtensionCapExceeded& e) {
    std::cerr << "extension cap exceeded: " << e.what() << "\n";
    return kExhausted;
  } catch (const kisram::Error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  }
}
