#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "mcbound/propsuite.hpp"
#include "mcbound/serialize.hpp"

namespace {

using namespace mcb;

struct GlobalOpts {
  std::string surface = "t11";
  unsigned precision = 128;
  size_t budget = 40;
  std::string gap = "2^-20";
  std::uint64_t seed = 20240901;
  std::string out;

  SurfaceKind kind() const { return parse_surface(surface); }
  Rational gap_value() const {
    Rational g = parse_rational(gap);
    if (sgn(g) <= 0) throw std::domain_error("--gap must be positive");
    return g;
  }
};

std::ostream& output_stream(const GlobalOpts& g, std::ofstream& file) {
  if (g.out.empty()) return std::cout;
  file.open(g.out, std::ios::binary);
  if (!file) throw std::domain_error("cannot open output file '" + g.out + "'");
  return file;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<MappingClassWord> words_from_list(const std::string& list) {
  std::vector<MappingClassWord> words;
  for (const std::string& part : split(list, ';')) words.push_back(MappingClassWord::parse(part));
  return words;
}

// "(A B)^n" -> powers of the base word up to the budget
std::vector<MappingClassWord> words_from_family(const std::string& family, size_t budget) {
  const auto open = family.find('('), close = family.rfind(")^n");
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::domain_error("family must look like '(A B)^n', got '" + family + "'");
  const MappingClassWord base = MappingClassWord::parse(family.substr(open + 1, close - open - 1));
  if (base.is_identity()) throw std::domain_error("family base word is the identity");
  std::vector<MappingClassWord> words;
  MappingClassWord acc;
  for (size_t i = 0; i < budget; ++i) {
    acc = compose(acc, base);
    words.push_back(acc);
  }
  return words;
}

std::vector<MappingClassWord> words_random(std::uint64_t seed, size_t count, size_t max_len) {
  std::mt19937_64 rng(seed);
  std::vector<MappingClassWord> words;
  const char gens[4][2] = {{'A', 1}, {'A', -1}, {'B', 1}, {'B', -1}};
  for (size_t i = 0; i < count; ++i) {
    const size_t len = std::min<size_t>(i + 1, max_len);
    MappingClassWord w;
    int last = -1;
    for (size_t j = 0; j < len; ++j) {
      int pick;
      do {
        pick = static_cast<int>(rng() % 4);
      } while (last >= 0 && (pick ^ 1) == last);  // no immediate cancellation
      w = compose(w, MappingClassWord::generator(gens[pick][0], gens[pick][1]));
      last = pick;
    }
    words.push_back(w);
  }
  return words;
}

int cmd_classify(const GlobalOpts& g, const std::string& word_text) {
  const MappingClassWord w = MappingClassWord::parse(word_text);
  const Classification c = classify(w, g.kind());
  std::ofstream file;
  std::ostream& os = output_stream(g, file);
  os << "word: " << (w.str().empty() ? "(identity)" : w.str()) << "\n";
  os << "matrix: " << w.matrix().str() << "\n";
  switch (c.kind) {
    case Classification::Kind::Periodic:
      os << "type: periodic\norder: " << c.order << "\n";
      break;
    case Classification::Kind::Reducible:
      os << "type: reducible\ncurve: " << c.curve->slope_str() << "\npower: " << c.power.get_str()
         << "\n";
      break;
    case Classification::Kind::PseudoAnosov:
      os << "type: pseudo-Anosov\nlambda: " << c.lambda.str() << "\n";
      os << "unstable: " << c.unstable->str() << "\nstable: " << c.stable->str() << "\n";
      break;
  }
  return 0;
}

int cmd_limit(const GlobalOpts& g, const std::vector<MappingClassWord>& words) {
  const LimitReport report =
      projective_limit(words, g.budget, g.gap_value(), g.kind(), g.precision);
  std::ofstream file;
  std::ostream& os = output_stream(g, file);
  for (const std::string& line : limit_record_lines(report)) os << line << "\n";
  return 0;
}

int cmd_metric(const GlobalOpts& g, const std::string& list) {
  const std::vector<MappingClassWord> words = words_from_list(list);
  if (words.size() < 2) throw std::domain_error("metric needs at least two words");
  std::vector<ProjClass> classes;
  for (const auto& w : words) classes.emplace_back(HomMap::group(g.kind(), ExactScalar(1), w));

  const size_t n = classes.size();
  std::vector<std::vector<Distance>> mat(n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) mat[i].push_back(distance(classes[i], classes[j], g.precision));

  // metric axioms on the emitted matrix; abort on any violation
  for (size_t i = 0; i < n; ++i) {
    if (!mat[i][i].is_zero()) throw std::domain_error("metric: nonzero diagonal at " + words[i].str());
    for (size_t j = 0; j < n; ++j) {
      if (mat[i][j].squared && mat[j][i].squared && !(*mat[i][j].squared == *mat[j][i].squared))
        throw std::domain_error("metric: asymmetry at (" + words[i].str() + "," + words[j].str() + ")");
      if (i != j && (words[i] == words[j]) != mat[i][j].is_zero())
        throw std::domain_error("metric: definiteness at (" + words[i].str() + "," + words[j].str() + ")");
      for (size_t k = 0; k < n; ++k)
        if (!triangle_holds(mat[i][k], mat[i][j], mat[j][k]))
          throw std::domain_error("metric: triangle violation at (" + words[i].str() + "," +
                                  words[j].str() + "," + words[k].str() + ")");
    }
  }

  std::ofstream file;
  std::ostream& os = output_stream(g, file);
  std::vector<std::string> header{""};
  for (const auto& w : words) header.push_back(w.str());
  os << csv_row(header) << "\n";
  for (size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{words[i].str()};
    for (size_t j = 0; j < n; ++j) {
      row.push_back(mat[i][j].squared ? "sqrt(" + mat[i][j].squared->str() + ")"
                                      : mat[i][j].str(40));
    }
    os << csv_row(row) << "\n";
  }
  return 0;
}

int cmd_orbit_atlas(const GlobalOpts& g, const std::string& point, int max_length,
                    const std::string& svg_path) {
  const TeichPoint x0 = TeichPoint::parse(point);
  const OrbitScan scan = orbit_closure_scan(x0, max_length, g.kind(), g.precision);

  std::ofstream file;
  std::ostream& os = output_stream(g, file);
  os << csv_row({"word", "ray", "gap"}) << "\n";
  for (const ScanRay& r : scan.rays)
    os << csv_row({r.word.str(), ray_slope(r.direction), r.gap.str(8)}) << "\n";

  if (!svg_path.empty()) {
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg) throw std::domain_error("cannot open svg file '" + svg_path + "'");
    svg << svg_orbit_atlas(scan, g.out.empty() ? "(stdout)" : g.out);
  }
  std::cerr << "rays: " << scan.rays.size() << " largest empty arc: " << scan.largest_gap_radians
            << " rad\n";
  return 0;
}

FoliationVec parse_direction(const std::string& text, size_t precision) {
  (void)precision;
  if (text == "golden") {
    // (1, (sqrt(5)-1)/2)
    return FoliationVec(ExactScalar(1),
                        ExactScalar(make_rational(-1, 2), make_rational(1, 2), BigInt(5)));
  }
  const auto slash = text.find('/');
  if (slash == std::string::npos)
    return FoliationVec(ExactScalar(parse_rational(text)), ExactScalar(1));
  return FoliationVec(ExactScalar(parse_rational(text.substr(0, slash))),
                      ExactScalar(parse_rational(text.substr(slash + 1))));
}

int cmd_synthesize(const GlobalOpts& g, const std::string& f_text, const std::string& g_text,
                   const std::string& tol_text) {
  const Rational tol = parse_rational(tol_text);
  const FoliationVec ft = parse_direction(f_text, g.precision);
  const FoliationVec gt = parse_direction(g_text, g.precision);
  const auto steps = synthesize_boundary_point(ft, gt, tol, g.kind(), 48, g.precision);

  std::ofstream file;
  std::ostream& os = output_stream(g, file);
  for (size_t i = 0; i < steps.size(); ++i) {
    const SynthesisStep& st = steps[i];
    os << "step=" << i + 1 << " c=" << st.c.slope_str() << " d=" << st.d.slope_str() << " h=\""
       << st.h.str() << "\" family=\"" << st.h.str() << " . T_c^m\" gap=" << st.gap.str(40) << "\n";
  }
  os << "target=i(" << ft.str() << ",.)" << gt.str() << " steps=" << steps.size()
     << " reached=" << (steps.back().gap.less_than(tol) || steps.back().gap.is_zero() ? "yes" : "no")
     << "\n";
  return 0;
}

int cmd_thick_limit(const GlobalOpts& g, const std::string& points_text, const std::string& family,
                    const std::string& point) {
  std::vector<TeichPoint> points;
  if (!points_text.empty()) {
    for (const std::string& part : split(points_text, ';')) points.push_back(TeichPoint::parse(part));
  } else {
    const TeichPoint base = TeichPoint::parse(point);
    for (const MappingClassWord& w : words_from_family(family, g.budget))
      points.push_back(moebius_act(w, base));
  }
  const ThickLimit result = thick_sequence_limit(points, g.gap_value(), g.kind(), g.precision);

  std::ofstream file;
  std::ostream& os = output_stream(g, file);
  if (result.outcome == ThickLimit::Outcome::InteriorAccumulation) {
    os << "outcome=interior-accumulation point=" << result.cluster.str() << "\n";
    return 0;
  }
  os << "outcome=boundary x0=" << result.cluster.str() << " functional=" << result.functional->str()
     << " residual=" << result.residual.str(12) << "\n";
  os << outcome_line(result.report, 40) << "\n";
  return 0;
}

int cmd_proptest(const GlobalOpts& g, size_t iterations, const std::string& suite) {
  const auto results = run_property_suites(g.seed, iterations, g.kind(), suite);
  std::ofstream file;
  std::ostream& os = output_stream(g, file);
  size_t failed = 0;
  for (const SuiteResult& r : results) {
    os << "suite=" << r.name << " checked=" << r.checked << " failed=" << r.failed;
    if (r.failed > 0) os << " counterexample=\"" << r.counterexample << "\"";
    os << "\n";
    failed += r.failed;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact boundary computations for the mapping class group of the complexity-one surfaces"};
  app.set_config("--config")->configurable(false);

  GlobalOpts g;
  app.add_option("--surface", g.surface, "surface model: t11 or s04")->capture_default_str();
  app.add_option("--precision", g.precision, "interval precision in bits (>= 64)")
      ->check(CLI::Range(64u, 4096u))
      ->capture_default_str();
  app.add_option("--budget", g.budget, "sequence budget (>= 2)")
      ->check(CLI::Range(size_t(2), size_t(100000)))
      ->capture_default_str();
  app.add_option("--gap", g.gap, "convergence gap, dyadic (e.g. 2^-20 or 1/1048576)")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized commands")->capture_default_str();
  app.add_option("--out", g.out, "write machine output to this file (default stdout)");

  std::string word_text, list_text, family_text, point_text = "0 + 1*i", points_text;
  std::string target_f, target_g, tol_text = "2^-10", svg_path, suite_filter;
  int max_length = 6;
  size_t iterations = 10000;
  bool use_random = false;

  CLI::App* c_classify = app.add_subcommand("classify", "Nielsen-Thurston type of a word");
  c_classify->add_option("word", word_text, "word in A, B with optional ^k exponents")->required();

  CLI::App* c_limit = app.add_subcommand("limit", "projective limit of a word sequence");
  c_limit->add_option("--family", family_text, "power family '(A B)^n'");
  c_limit->add_option("--list", list_text, "semicolon-separated word list");
  c_limit->add_flag("--random", use_random, "seeded random words with increasing length");
  c_limit->add_option("--max-length", max_length, "length cap for --random");

  CLI::App* c_metric = app.add_subcommand("metric", "pairwise d-hat matrix as CSV");
  c_metric->add_option("--list", list_text, "semicolon-separated word list")->required();

  CLI::App* c_atlas = app.add_subcommand("orbit-atlas", "boundary rays of an orbit closure");
  c_atlas->add_option("--point", point_text, "base point 'x + y*i'")->capture_default_str();
  c_atlas->add_option("--max-length", max_length, "word length bound")->capture_default_str();
  c_atlas->add_option("--svg", svg_path, "also draw the circle atlas to this SVG file");

  CLI::App* c_synth = app.add_subcommand("synthesize", "approximate a rank-one boundary point");
  c_synth->add_option("--target-f", target_f, "slope p/q or 'golden'")->required();
  c_synth->add_option("--target-g", target_g, "slope p/q or 'golden'")->required();
  c_synth->add_option("--tol", tol_text, "stop when d-hat < tol")->capture_default_str();

  CLI::App* c_thick = app.add_subcommand("thick-limit", "constructive thick-part limit");
  c_thick->add_option("--points", points_text, "semicolon-separated points 'x + y*i'");
  c_thick->add_option("--family", family_text, "orbit family '(A B)^n' applied to --point");
  c_thick->add_option("--point", point_text, "base point for --family")->capture_default_str();

  CLI::App* c_prop = app.add_subcommand("proptest", "run the seeded invariant suites");
  c_prop->add_option("--iterations", iterations, "iterations per suite")->capture_default_str();
  c_prop->add_option("--suite", suite_filter, "only suites whose name contains this");

  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(c_classify)) return cmd_classify(g, word_text);
    if (app.got_subcommand(c_limit)) {
      std::vector<MappingClassWord> words;
      if (!family_text.empty())
        words = words_from_family(family_text, g.budget);
      else if (!list_text.empty())
        words = words_from_list(list_text);
      else if (use_random)
        words = words_random(g.seed, g.budget, static_cast<size_t>(max_length));
      else
        throw std::domain_error("limit: provide --family, --list or --random");
      return cmd_limit(g, words);
    }
    if (app.got_subcommand(c_metric)) return cmd_metric(g, list_text);
    if (app.got_subcommand(c_atlas)) return cmd_orbit_atlas(g, point_text, max_length, svg_path);
    if (app.got_subcommand(c_synth)) return cmd_synthesize(g, target_f, target_g, tol_text);
    if (app.got_subcommand(c_thick)) return cmd_thick_limit(g, points_text, family_text, point_text);
    if (app.got_subcommand(c_prop)) return cmd_proptest(g, iterations, suite_filter);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
