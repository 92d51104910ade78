#include "mcbound/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace mcb {

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out;
}

std::string ray_slope(const FoliationVec& direction, unsigned digits) {
  if (direction.q().is_zero()) return "inf";
  const ExactScalar slope = direction.p() / direction.q();
  if (slope.is_rational()) {
    const Rational& r = slope.as_rational();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
  }
  return decimal_string(slope.enclosure(96).mid(), digits);
}

std::string record_line(const LimitRecord& rec, unsigned digits) {
  std::string out = "n=" + std::to_string(rec.index);
  out += " word=\"" + rec.word.str() + "\"";
  out += " t=" + rec.t.str();
  out += " N=" + rec.normalized.str();
  if (rec.gap) out += " gap=" + rec.gap->str(digits) + " prec=" + std::to_string(rec.gap->precision_bits);
  return out;
}

std::string outcome_line(const LimitReport& report, unsigned digits) {
  std::string out;
  auto witness_list = [&report] {
    std::string w;
    for (size_t i = 0; i < report.witness.size(); ++i) {
      if (i) w += ',';
      w += std::to_string(report.witness[i]);
    }
    return w;
  };
  switch (report.outcome) {
    case LimitReport::Outcome::ConstantSubsequence:
      out = "outcome=constant-subsequence word=\"" + report.constant->str() + "\"";
      out += " witness=" + witness_list();
      break;
    case LimitReport::Outcome::BoundaryLimit:
      out = "outcome=boundary-limit";
      out += " E=" + report.factor_e->str();
      out += " F=" + report.factor_f->str();
      out += " witness=" + witness_list();
      out += " t_last=" + report.witness_t.back().str();
      out += " final_gap=" + report.final_gap->str(digits);
      out += " prec=" + std::to_string(report.final_gap->precision_bits);
      break;
    case LimitReport::Outcome::NoConvergenceWithinBudget:
      out = "outcome=no-convergence";
      if (report.best_gap) out += " best_gap=" + report.best_gap->str(digits);
      break;
  }
  return out;
}

std::vector<std::string> limit_record_lines(const LimitReport& report, unsigned digits) {
  std::vector<std::string> lines;
  lines.reserve(report.records.size() + 1);
  for (const LimitRecord& rec : report.records) lines.push_back(record_line(rec, digits));
  lines.push_back(outcome_line(report, digits));
  return lines;
}

std::string svg_orbit_atlas(const OrbitScan& scan, const std::string& csv_path,
                            int label_den_limit) {
  std::ostringstream os;
  char buf[160];
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<!-- rays: " << csv_path << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"640\" "
        "viewBox=\"-1.3 -1.3 2.6 2.6\">\n";
  os << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#333\" stroke-width=\"0.008\"/>\n";
  for (const ScanRay& ray : scan.rays) {
    const double th = std::atan2(ray.direction.q().to_double(), ray.direction.p().to_double());
    for (int half = 0; half < 2; ++half) {
      const double a = th + half * M_PI;
      const double c = std::cos(a), s = std::sin(a);
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.6f\" y1=\"%.6f\" x2=\"%.6f\" y2=\"%.6f\" stroke=\"%s\" "
                    "stroke-width=\"0.006\"/>\n",
                    0.95 * c, -0.95 * s, 1.05 * c, -1.05 * s, ray.from_twist ? "#0044cc" : "#cc2200");
      os << buf;
    }
    std::string label;
    if (ray.direction.q().is_zero()) {
      label = "inf";
    } else {
      const ExactScalar slope = ray.direction.p() / ray.direction.q();
      if (slope.is_rational() && slope.as_rational().get_den() <= label_den_limit &&
          abs(slope.as_rational().get_num()) <= label_den_limit)
        label = ray_slope(ray.direction);
    }
    if (!label.empty()) {
      const double c = std::cos(th), s = std::sin(th);
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%.6f\" y=\"%.6f\" font-size=\"0.07\" text-anchor=\"middle\">%s</text>\n",
                    1.18 * c, -1.18 * s, label.c_str());
      os << buf;
    }
  }
  std::snprintf(buf, sizeof buf, "<!-- largest empty arc: %.8f rad over %zu rays -->\n",
                scan.largest_gap_radians, scan.rays.size());
  os << buf;
  os << "</svg>\n";
  return os.str();
}

}  // namespace mcb
