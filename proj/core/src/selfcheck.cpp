#include "kisram/selfcheck.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <sstream>

#include "kisram/errors.hpp"

namespace kisram {

namespace {

struct CheckFailed {
  std::string what;
};

class Recorder {
 public:
  explicit Recorder(SelfcheckEntry& entry) : entry_(entry) {}

  void require(const std::string& name, bool ok, const std::string& detail = "") {
    entry_.checks.push_back(name);
    if (!ok) throw CheckFailed{detail.empty() ? name : name + ": " + detail};
  }

 private:
  SelfcheckEntry& entry_;
};

std::uint64_t power(std::uint64_t b, std::uint64_t k) {
  std::uint64_t r = 1;
  while (k--) r *= b;
  return r;
}

void run_module_checks(const ModuleFile& mf, Recorder& rec) {
  const KisinModule& m = mf.module;
  const ValidationReport v = validate(m);
  rec.require("validate", true);

  const PointSet ps = enumerate_points(m);
  rec.require("point count p^(nh)", ps.size() == power(m.p, static_cast<std::uint64_t>(m.n) * m.h),
              std::to_string(ps.size()) + " points");
  for (const auto& pt : ps.points) {
    const HomCheck hc = verify_hom_detail(m, pt.coords);
    if (!hc.ok) rec.require("verify_hom", false, hc.failure);
  }
  rec.require("verify_hom", true);
  rec.require("closure under addition", verify_closure(ps));
  const RamificationReport rr = filtration(m, ps);
  rec.require("degree bound", rr.bound_ok);
  for (std::size_t k = 1; k < rr.jumps.size(); ++k) {
    if (!(rr.jumps[k].order < rr.jumps[k - 1].order)) rec.require("jump orders decrease", false);
  }
  rec.require("jump orders decrease", true);

  std::optional<CanonicalData> cd;
  if (m.n == 1) {
    const Rational dual_deg = degree(dual(m));
    rec.require("deg + deg(dual) = h", v.degree + dual_deg == Rational(static_cast<long>(m.h)));
    const KisinModule dd = dual(dual(m));
    rec.require("dual(dual) jumps", format_jumps(filtration(dd).jumps) == format_jumps(rr.jumps));
    if (m.d > 0 && m.d < m.h) {
      const KisinModule mp = m.prepared ? m : prepare(m);
      const Rational w = hodge_height(mp);
      const Rational P(static_cast<long>(m.p));
      if (w < P / (P + Rational(1))) {
        cd = canonical_level1(mp);
        rec.require("v(det D) = w", determinant(cd->D).valuation() == ExtRational(w));
        const SeriesMatrix again = b_recursion(*cd, cd->B, m.p, ExtRational(cd->working_precision));
        rec.require("B recursion residual", agrees_with(again, cd->B, ExtRational(cd->working_precision)) &&
                                                !(precision(cd->B) < ExtRational(cd->working_precision)));
      }
    }
  }
  if (rr.canonical && rr.canonical->applicable) {
    rec.require("canonical consistency", rr.canonical->agree(), format_consistency(*rr.canonical));
  }

  auto expect = [&](const std::string& key, const std::string& actual) {
    const std::string* want = mf.find("expected", key);
    if (!want) return;
    rec.require("expected " + key, *want == actual, "want '" + *want + "', got '" + actual + "'");
  };
  static const char* known[] = {"degree", "dual_degree", "hodge", "points", "valuations", "jumps", "canonical"};
  if (auto it = mf.sections.find("expected"); it != mf.sections.end()) {
    for (const auto& [key, value] : it->second) {
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
        rec.require("expected " + key, false, "unknown expected key");
      }
    }
  }
  expect("degree", degree(m).str());
  if (m.n == 1 && mf.find("expected", "dual_degree")) expect("dual_degree", degree(dual(m)).str());
  if (mf.find("expected", "hodge")) expect("hodge", hodge_height(m.prepared ? m : prepare(m)).str());
  expect("points", std::to_string(ps.size()));
  expect("valuations", format_valuations(ps));
  expect("jumps", format_jumps(rr.jumps));
  if (rr.canonical) expect("canonical", format_consistency(*rr.canonical));
}

}  // namespace

bool SelfcheckResult::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const SelfcheckEntry& e) { return e.ok; });
}

SelfcheckEntry check_module(const ModuleFile& mf) {
  SelfcheckEntry entry;
  entry.name = mf.name;
  Recorder rec(entry);
  try {
    run_module_checks(mf, rec);
  } catch (const CheckFailed& f) {
    entry.ok = false;
    entry.failure = f.what;
  } catch (const std::exception& ex) {
    entry.ok = false;
    entry.failure = (entry.checks.empty() ? std::string("setup") : "after " + entry.checks.back()) + ": " + ex.what();
  }
  return entry;
}

SelfcheckEntry check_witt_tables() {
  SelfcheckEntry entry;
  entry.name = "witt-tables";
  Recorder rec(entry);
  try {
    for (std::uint32_t p : {2u, 3u, 5u})
      for (std::uint32_t n = 1; n <= 3; ++n) {
        rec.require("ghost identities p=" + std::to_string(p) + " n=" + std::to_string(n),
                    witt_table(p, n)->verify_ghost());
      }
  } catch (const CheckFailed& f) {
    entry.ok = false;
    entry.failure = f.what;
  } catch (const std::exception& ex) {
    entry.ok = false;
    entry.failure = ex.what();
  }
  return entry;
}

SelfcheckResult run_selfcheck(const std::filesystem::path& corpus) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& de : std::filesystem::directory_iterator(corpus, ec)) {
    if (de.path().extension() == ".kmod") files.push_back(de.path());
  }
  SelfcheckResult result;
  if (ec || files.empty()) {
    SelfcheckEntry missing;
    missing.name = "corpus";
    missing.ok = false;
    missing.failure = "no .kmod files under " + corpus.string();
    result.entries.push_back(missing);
    return result;
  }
  std::vector<std::future<SelfcheckEntry>> jobs;
  jobs.push_back(std::async(std::launch::async, check_witt_tables));
  for (const auto& path : files) {
    jobs.push_back(std::async(std::launch::async, [path] {
      try {
        return check_module(read_module_file(path));
      } catch (const std::exception& ex) {
        SelfcheckEntry e;
        e.name = path.stem().string();
        e.ok = false;
        e.failure = std::string("parse: ") + ex.what();
        return e;
      }
    }));
  }
  for (auto& j : jobs) result.entries.push_back(j.get());
  std::sort(result.entries.begin(), result.entries.end(),
            [](const SelfcheckEntry& a, const SelfcheckEntry& b) { return a.name < b.name; });
  return result;
}

std::string render_selfcheck(const SelfcheckResult& result, OutputFormat format) {
  std::ostringstream out;
  std::size_t passed = 0;
  if (format == OutputFormat::Machine) out << "[result]\ncommand = selfcheck\n";
  for (const auto& e : result.entries) {
    if (e.ok) ++passed;
    const std::string status = e.ok ? "ok (" + std::to_string(e.checks.size()) + " checks)" : "FAIL " + e.failure;
    if (format == OutputFormat::Machine) {
      out << e.name << " = " << status << "\n";
    } else {
      out << e.name << ": " << status << "\n";
    }
  }
  if (format == OutputFormat::Machine) {
    out << "passed = " << passed << "/" << result.entries.size() << "\n";
    out << "status = " << (result.ok() ? "ok" : "fail") << "\n";
  } else {
    out << "selfcheck: " << passed << "/" << result.entries.size() << " entries passed\n";
  }
  return out.str();
}

}  // namespace kisram
