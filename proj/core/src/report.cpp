#include "kisram/report.hpp"

#include <map>
#include <sstream>

#include "kisram/errors.hpp"
#include "kisram/literal.hpp"

namespace kisram {

namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string header(const KisinModule& m, const std::string& subject) {
  std::ostringstream out;
  out << "module: " << (subject.empty() ? "<input>" : subject) << " (p=" << m.p << ", f=" << m.f << ", e=" << m.e
      << ", n=" << m.n << ", h=" << m.h << ", d=" << m.d << ")";
  return out.str();
}

Report start(const std::string& command, const ModuleFile& mf) {
  Report r;
  r.command = command;
  r.subject = mf.name;
  r.module = mf.module;
  return r;
}

std::string label_key(const Point& pt) {
  std::string key = "point[";
  for (std::size_t k = 0; k < pt.label.size(); ++k) {
    if (k) key += ",";
    key += pt.label[k].get_str();
  }
  return key + "]";
}

KisinModule prepared_form(const KisinModule& m) {
  if (m.prepared) {
    if (!has_prepared_form(m)) throw NotPrepared("matrix is flagged prepared but lacks the block form");
    return m;
  }
  return prepare(m);
}

}  // namespace

const std::string* Report::get(const std::string& key) const {
  for (const auto& [k, v] : fields)
    if (k == key) return &v;
  return nullptr;
}

std::string render(const Report& report, OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::Machine) {
    if (report.module) out << write_module(*report.module) << "\n";
    out << "[result]\n";
    out << "command = " << report.command << "\n";
    if (!report.subject.empty()) out << "subject = " << report.subject << "\n";
    for (const auto& [k, v] : report.fields) out << k << " = " << v << "\n";
    out << "status = " << (report.ok ? "ok" : "fail") << "\n";
    return out.str();
  }
  if (report.module) out << header(*report.module, report.subject) << "\n";
  if (report.single_line) {
    for (std::size_t k = 0; k < report.fields.size(); ++k) {
      if (k) out << "; ";
      out << report.fields[k].first << ": " << report.fields[k].second;
    }
    out << "\n";
    return out.str();
  }
  for (const auto& [k, v] : report.fields) out << k << ": " << v << "\n";
  return out.str();
}

std::string format_jumps(const std::vector<Jump>& jumps) {
  if (jumps.empty()) return "none";
  std::string out;
  for (const auto& j : jumps) {
    if (!out.empty()) out += ", ";
    out += j.i.str() + ": " + std::to_string(j.order);
  }
  return out;
}

std::string format_valuations(const PointSet& points) {
  std::map<Rational, std::size_t> counts;
  for (const auto& pt : points.points) {
    if (pt.is_zero() || pt.lower_idx.is_infinite()) continue;
    ++counts[pt.lower_idx.value()];
  }
  if (counts.empty()) return "none";
  std::string out;
  for (const auto& [v, c] : counts) {
    if (!out.empty()) out += ", ";
    out += v.str() + " x" + std::to_string(c);
  }
  return out;
}

std::string format_consistency(const ConsistencyReport& c) {
  if (!c.applicable) return "not applicable (" + c.reason + ")";
  const std::string n = std::to_string(c.n);
  return "i_" + n + "=" + c.i_n.str() + ", i'_" + n + "=" + c.i_n_prime.str() + ", order " +
         std::to_string(c.threshold_order) + ", " + (c.agree() ? "agree" : "disagree");
}

std::string format_matrix(const SeriesMatrix& m) { return format(m); }

Report validate_report(const ModuleFile& mf) {
  Report r = start("validate", mf);
  const KisinModule& m = mf.module;
  try {
    const ValidationReport v = validate(m);
    r.add("valid", "true");
    r.add("degree", degree(m).str());
    r.add("complement", format_matrix(v.complement));
    r.add("prepared_form", yes_no(has_prepared_form(m)));
  } catch (const NotEHeightOne& ex) {
    r.add("valid", "false");
    r.add("reason", ex.what());
    r.ok = false;
  } catch (const SingularMatrix& ex) {
    r.add("valid", "false");
    r.add("reason", ex.what());
    r.ok = false;
  } catch (const NotPrepared& ex) {
    r.add("valid", "false");
    r.add("reason", ex.what());
    r.ok = false;
  }
  return r;
}

Report degree_report(const ModuleFile& mf) {
  Report r = start("degree", mf);
  const KisinModule& m = mf.module;
  const Rational deg = degree(m);
  r.add("degree", deg.str());
  r.add("degree_bound", (deg / Rational(static_cast<long>(m.p) - 1)).str());
  if (m.n == 1) {
    const Rational dual_deg = degree(dual(m));
    r.add("dual_degree", dual_deg.str());
    const bool sum_ok = deg + dual_deg == Rational(static_cast<long>(m.h));
    r.add("degree_sum_is_h", yes_no(sum_ok));
    r.ok = sum_ok;
  }
  return r;
}

Report hodge_report(const ModuleFile& mf) {
  Report r = start("hodge", mf);
  const KisinModule mp = prepared_form(mf.module);
  const Rational w = hodge_height(mp);
  const Rational P(static_cast<long>(mp.p));
  Rational pn(1);
  for (std::uint32_t k = 0; k < mp.n; ++k) pn *= P;
  r.add("w", w.str());
  r.add("contractive", yes_no(w < P / (P + Rational(1))));
  r.add("canonical_range", yes_no(w < (P - Rational(1)) / pn));
  return r;
}

Report canonical_report(const ModuleFile& mf, const EnumerationOptions& options) {
  Report r = start("canonical", mf);
  const KisinModule& m = mf.module;
  if (m.n == 1) {
    const KisinModule mp = prepared_form(m);
    const CanonicalData cd = canonical_level1(mp);
    r.add("w", cd.w.str());
    r.add("working_precision", cd.working_precision.str());
    r.add("iterations", std::to_string(cd.iterations));
    r.add("B", format_matrix(cd.B));
    r.add("D", format_matrix(cd.D));
    const PuiseuxSeries detD = determinant(cd.D);
    r.add("det_D_valuation", detD.valuation().str());
    r.add("sub_matrix", format_matrix(cd.sub_matrix));
    r.add("quotient_matrix", format_matrix(cd.quotient_matrix));
  }
  const ConsistencyReport c = canonical_consistency(m, enumerate_points(m, options));
  r.add("canonical", format_consistency(c));
  if (c.criterion_order) r.add("criterion_order", std::to_string(*c.criterion_order));
  if (!c.note.empty()) r.add("canonical_note", c.note);
  r.ok = !c.applicable || c.agree();
  return r;
}

Report points_report(const ModuleFile& mf, const EnumerationOptions& options) {
  Report r = start("points", mf);
  const KisinModule& m = mf.module;
  const PointSet ps = enumerate_points(m, options);
  bool all_hom = true;
  for (const auto& pt : ps.points) all_hom = all_hom && verify_hom(m, pt.coords);
  const bool closed = verify_closure(ps);
  r.add("count", std::to_string(ps.size()));
  r.add("method", ps.method);
  const FieldPtr F = ps.field() ? ps.field() : m.field();
  r.add("field", "F_" + std::to_string(F->order()));
  r.add("verify_hom", yes_no(all_hom));
  r.add("closed", yes_no(closed));
  r.add("valuations", format_valuations(ps));
  for (const auto& pt : ps.points) r.add(label_key(pt), "idx " + pt.lower_idx.str() + " " + pt.str());
  r.ok = all_hom && closed;
  return r;
}

Report ramify_report(const ModuleFile& mf, const std::optional<Rational>& i, const EnumerationOptions& options) {
  Report r = start("ramify", mf);
  const KisinModule& m = mf.module;
  const PointSet ps = enumerate_points(m, options);
  const RamificationReport rr = filtration(m, ps);
  r.add("order", std::to_string(rr.order));
  r.add("jumps", format_jumps(rr.jumps));
  r.add("valuations", format_valuations(ps));
  r.add("degree", rr.degree.str());
  r.add("degree_bound", rr.degree_bound.str());
  r.add("bound_ok", yes_no(rr.bound_ok));
  if (i) r.add("order_at_i", i->str() + ": " + std::to_string(subgroup_order(ps, *i)));
  r.ok = rr.bound_ok;
  if (rr.canonical) {
    r.add("canonical", format_consistency(*rr.canonical));
    if (!rr.canonical->note.empty()) r.add("canonical_note", rr.canonical->note);
    if (rr.canonical->applicable && !rr.canonical->agree()) r.ok = false;
  }
  return r;
}

Report wittideal_report(const WittVector& x, const IdealParameters& params) {
  Report r;
  r.command = "wittideal";
  r.single_line = true;
  r.add("member", yes_no(ideal_membership(x, params)));
  r.add("lower_index", lower_index(x).str());
  return r;
}

Report verify_report(const ModuleFile& mf, const std::vector<WittVector>& coords) {
  Report r = start("verify", mf);
  const HomCheck hc = verify_hom_detail(mf.module, coords);
  r.add("hom", yes_no(hc.ok));
  r.add("precision", hc.precision.str());
  if (!hc.ok) r.add("failure", hc.failure);
  r.ok = hc.ok;
  return r;
}

}  // namespace kisram
