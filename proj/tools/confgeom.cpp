#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "confgeom/acceptance.hpp"
#include "confgeom/domain_json.hpp"
#include "confgeom/errors.hpp"
#include "confgeom/ptolemy.hpp"
#include "confgeom/qh.hpp"
#include "confgeom/render.hpp"
#include "confgeom/uniformity.hpp"

using namespace confgeom;
using nlohmann::json;

namespace {

constexpr int kSpecError = 2;
constexpr int kEstimatorError = 3;
constexpr int kNoExact = 4;
constexpr int kVerifyFailed = 1;

struct Options {
  std::string domain;
  int grid = 0;
  int samples = 8;
  std::uint64_t seed = 0;
  std::string method = "auto";
  std::string out;
  std::string format = "json";
  std::string only;
  double tol_scale = 1.0;
  bool no_meta = false;
  int threads = 0;
  bool no_refine = false;
  std::string from, to;
  int stencil = 16;
  int passes = 3;
  std::string quadruple_file, geodesic_file;
  bool witness = false;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw SpecError("cannot write '" + o.out + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Complex parse_point(const std::string& text) {
  std::string t = text;
  if (!t.empty() && t.front() == '[') {
    json j;
    try {
      j = json::parse(t);
    } catch (const json::exception&) {
      throw SpecError("point '" + text + "' is not valid JSON");
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      throw SpecError("point '" + text + "' must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
  }
  const auto comma = t.find(',');
  if (comma == std::string::npos) throw SpecError("point '" + text + "' must be written x,y");
  try {
    std::size_t used1 = 0, used2 = 0;
    const std::string xs = t.substr(0, comma), ys = t.substr(comma + 1);
    const double x = std::stod(xs, &used1), y = std::stod(ys, &used2);
    if (used1 != xs.size() || used2 != ys.size()) throw std::invalid_argument("trailing");
    return {x, y};
  } catch (const std::exception&) {
    throw SpecError("point '" + text + "' must be written x,y");
  }
}

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

Domain require_domain(const Options& o) {
  if (o.domain.empty()) throw SpecError("--domain is required");
  return load_domain_spec(o.domain);
}

int cmd_ptolemy(const Options& o) {
  const Domain d = require_domain(o);
  PtolemyConfig cfg;
  if (o.grid > 0) cfg.grid_n = o.grid;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.refine = !o.no_refine;
  const auto e = estimate_ptolemy_constant(d, cfg);
  if (o.format == "csv") {
    std::ostringstream s;
    s << "lower,closed_form,lo,hi,s0,s1,s2,s3\n" << csv_number(e.lower) << ',';
    if (e.closed && e.closed->value) s << csv_number(*e.closed->value);
    s << ',';
    if (e.closed && e.closed->bounds) s << csv_number(e.closed->bounds->first) << ',' << csv_number(e.closed->bounds->second);
    else s << ',';
    for (double p : e.witness.params) s << ',' << csv_number(p);
    s << '\n';
    emit(o, s.str());
  } else {
    json j = to_json(e, !o.no_meta);
    j["domain"] = domain_to_json(d);
    emit(o, dump(j));
  }
  return 0;
}

GridSolverConfig qh_config(const Options& o, int default_resolution) {
  GridSolverConfig c;
  c.resolution = o.grid > 0 ? o.grid : default_resolution;
  c.stencil = o.stencil;
  c.passes = o.passes;
  return c;
}

std::string sample_csv_row(const std::string& prefix, const MetricSample& s) {
  return prefix + csv_number(s.x.real()) + ',' + csv_number(s.x.imag()) + ',' + csv_number(s.y.real()) + ',' +
         csv_number(s.y.imag()) + ',' + csv_number(s.j) + ',' + csv_number(s.k) + ',' +
         (s.ratio ? csv_number(*s.ratio) : "") + ',' + std::string(to_string(s.method)) + '\n';
}

int cmd_uniformity(const Options& o) {
  const Domain d = require_domain(o);
  UniformityConfig cfg;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.qh = qh_config(o, 256);
  const auto e = estimate_uniformity(d, cfg);
  if (o.format == "csv") {
    std::string s = "family,parameter,x_re,x_im,y_re,y_im,j,k,ratio,k_method\n";
    for (const auto& l : e.ladders)
      for (const auto& st : l.steps) s += sample_csv_row(l.family + ',' + csv_number(st.parameter) + ',', st.sample);
    s += sample_csv_row("best,,", e.witness);
    emit(o, s);
  } else {
    json j = to_json(e, !o.no_meta);
    j["domain"] = domain_to_json(d);
    emit(o, dump(j));
  }
  return 0;
}

int cmd_qhdist(const Options& o) {
  const Domain d = require_domain(o);
  if (o.from.empty() || o.to.empty()) throw SpecError("--from and --to are required");
  const Complex x = parse_point(o.from), y = parse_point(o.to);
  MethodChoice choice = MethodChoice::Auto;
  if (o.method == "exact") choice = MethodChoice::Exact;
  else if (o.method == "grid") choice = MethodChoice::Grid;
  const GridSolverConfig cfg = qh_config(o, 256);
  MetricSample s = metric_sample(d, x, y, choice, cfg);
  std::vector<Complex> path;
  if (s.method == KMethod::Grid) path = k_grid_path(d, x, y, cfg).points;
  if (o.format == "csv") {
    emit(o, "x_re,x_im,y_re,y_im,j,k,ratio,k_method\n" + sample_csv_row("", s));
  } else {
    json j = to_json(s);
    j["schema"] = 1;
    j["domain"] = domain_to_json(d);
    j["path"] = nullptr;
    if (!path.empty()) {
      j["path"] = json::array();
      for (Complex z : path) j["path"].push_back(point_to_json(z));
    }
    emit(o, dump(j));
  }
  return 0;
}

int cmd_verify(const Options& o) {
  AcceptanceOptions opt;
  opt.only = o.only;
  opt.tol_scale = o.tol_scale;
  // Rows stream to stdout unless structured output takes its place.
  const bool stream = o.format == "text" || !o.out.empty();
  const auto rows = run_acceptance(opt, [&](const AcceptanceRow& r) {
    if (stream) std::cout << format_row(r) << std::endl;
  });
  if (o.format == "csv") emit(o, acceptance_csv(rows));
  else if (o.format == "json") emit(o, dump(to_json(rows, !o.no_meta)));
  bool all = true;
  for (const auto& r : rows) all &= r.pass;
  return all ? 0 : kVerifyFailed;
}

int cmd_conjecture(const Options& o) {
  std::vector<std::pair<std::string, Domain>> domains;
  if (!o.domain.empty()) {
    domains.emplace_back("domain", require_domain(o));
  } else {
    const double pi = std::numbers::pi;
    domains = {{"disk", Domain::disk()},
               {"sector_pi_2", Domain::sector(pi / 2)},
               {"equilateral_triangle", Domain::triangle(0.0, 1.0, {0.5, std::sqrt(3.0) / 2})},
               {"square", Domain::parallelogram(1, 1, pi / 2)},
               {"rhombus_pi_3", Domain::parallelogram(1, 1, pi / 3)},
               {"rectangle_2x1", Domain::parallelogram(2, 1, pi / 2)},
               {"ellipse_2_1", Domain::ellipse(2, 1)}};
  }
  UniformityConfig ucfg;
  ucfg.samples = o.samples;
  ucfg.seed = o.seed;
  ucfg.threads = o.threads;
  ucfg.qh = qh_config(o, 256);
  PtolemyConfig pcfg;
  pcfg.seed = o.seed;
  pcfg.threads = o.threads;
  if (o.grid > 0) pcfg.grid_n = o.grid;
  json rows = json::array();
  std::string csv = "domain,a_lower,a_source,one_plus_p_lower,margin\n";
  for (const auto& [name, d] : domains) {
    const auto r = conjecture_report(d, ucfg, pcfg);
    json row = to_json(r);
    row.erase("schema");
    row["name"] = name;
    row["domain"] = domain_to_json(d);
    rows.push_back(row);
    csv += name + ',' + csv_number(r.a_lower) + ',' + r.a_source + ',' + csv_number(r.one_plus_p_lower) + ',' +
           csv_number(r.margin) + '\n';
  }
  if (o.format == "csv") emit(o, csv);
  else emit(o, dump(json{{"schema", 1}, {"rows", rows}}));
  return 0;
}

std::vector<Complex> load_polyline(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<Complex> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw SpecError(std::string("malformed JSON in '") + path + "': " + e.what());
    }
    if (!j.contains("path") || !j["path"].is_array()) throw SpecError("'" + path + "' has no 'path' array");
    for (const auto& p : j["path"]) out.push_back(parse_point(p.dump()));
    return out;
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind("x,y", 0) == 0) continue;
    out.push_back(parse_point(line));
  }
  return out;
}

std::array<ExtComplex, 4> load_quadruple(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed JSON in '") + path + "': " + e.what());
  }
  if (!j.contains("witness") || !j["witness"].contains("points") || j["witness"]["points"].size() != 4)
    throw SpecError("'" + path + "' has no witness quadruple");
  std::array<ExtComplex, 4> q;
  for (int i = 0; i < 4; ++i) {
    const auto& p = j["witness"]["points"][i];
    q[i] = p.is_string() ? ExtComplex::infinity() : ExtComplex(parse_point(p.dump()));
  }
  return q;
}

int cmd_plot(const Options& o) {
  const Domain d = require_domain(o);
  PlotOverlay overlay;
  if (!o.quadruple_file.empty()) overlay.quadruple = load_quadruple(o.quadruple_file);
  if (o.witness) {
    PtolemyConfig cfg;
    if (o.grid > 0) cfg.grid_n = o.grid;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    overlay.quadruple = estimate_ptolemy_constant(d, cfg).witness.points;
  }
  if (!o.geodesic_file.empty()) overlay.geodesic = load_polyline(o.geodesic_file);
  emit(o, render_svg(d, overlay));
  return 0;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ptolemy constants, quasihyperbolic distances and uniformity constants of plane domains"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool domain_required) {
    auto* opt = sub->add_option("--domain", o.domain, "Domain spec: inline JSON or a file path");
    if (domain_required) opt->required();
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_flag("--no-meta", o.no_meta, "Omit timing fields");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  };
  auto format = [&](CLI::App* sub, std::vector<std::string> allowed) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
  };
  auto qh_flags = [&](CLI::App* sub) {
    sub->add_option("--stencil", o.stencil, "Grid neighbour stencil (8 or 16)");
    sub->add_option("--passes", o.passes, "Path straightening passes")->check(CLI::NonNegativeNumber);
  };

  auto* ptolemy = app.add_subcommand("ptolemy", "Estimate the Ptolemy constant of a domain");
  common(ptolemy, true);
  format(ptolemy, {"json", "csv"});
  ptolemy->add_option("--grid", o.grid, "Boundary samples (default 128)")->check(CLI::PositiveNumber);
  ptolemy->add_flag("--no-refine", o.no_refine, "Skip simplex refinement");

  auto* uniformity = app.add_subcommand("uniformity", "Estimate the uniformity constant of a domain");
  common(uniformity, true);
  format(uniformity, {"json", "csv"});
  uniformity->add_option("--grid", o.grid, "Grid solver resolution (default 256)")->check(CLI::PositiveNumber);
  uniformity->add_option("--samples", o.samples, "Random pairs")->check(CLI::NonNegativeNumber);
  qh_flags(uniformity);

  auto* qhdist = app.add_subcommand("qhdist", "Distance ratio and quasihyperbolic distance between two points");
  common(qhdist, true);
  format(qhdist, {"json", "csv"});
  qhdist->add_option("--from", o.from, "First point x,y")->required();
  qhdist->add_option("--to", o.to, "Second point x,y")->required();
  qhdist->add_option("--method", o.method, "auto, exact or grid")->check(CLI::IsMember({"auto", "exact", "grid"}));
  qhdist->add_option("--grid", o.grid, "Grid solver resolution (default 256)")->check(CLI::PositiveNumber);
  qh_flags(qhdist);

  auto* verify = app.add_subcommand("verify", "Run the acceptance table");
  verify->add_option("--only", o.only, "Comma-separated groups (ptolemy, qh, uniformity, properties) or row ids");
  verify->add_option("--tol-scale", o.tol_scale, "Multiply all tolerances")->check(CLI::PositiveNumber);
  verify->add_option("--out", o.out, "Output file for json/csv");
  verify->add_flag("--no-meta", o.no_meta, "Omit timing fields");
  verify->add_option("--format", o.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));

  auto* conjecture = app.add_subcommand("conjecture", "Compare uniformity and Ptolemy estimates");
  common(conjecture, false);
  format(conjecture, {"json", "csv"});
  conjecture->add_option("--grid", o.grid, "Ptolemy boundary samples (default 128)")->check(CLI::PositiveNumber);
  conjecture->add_option("--samples", o.samples, "Random pairs")->check(CLI::NonNegativeNumber);

  auto* plot = app.add_subcommand("plot", "Draw a domain as SVG");
  common(plot, true);
  plot->add_option("--grid", o.grid, "Boundary samples for --witness")->check(CLI::PositiveNumber);
  plot->add_option("--quadruple", o.quadruple_file, "Ptolemy JSON whose witness is drawn");
  plot->add_flag("--witness", o.witness, "Compute and draw the extremal quadruple");
  plot->add_option("--geodesic", o.geodesic_file, "qhdist JSON or x,y CSV polyline to draw");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSpecError;
  }
  if (verify->parsed() && verify->count("--format") == 0) o.format = "text";

  try {
    if (ptolemy->parsed()) return cmd_ptolemy(o);
    if (uniformity->parsed()) return cmd_uniformity(o);
    if (qhdist->parsed()) return cmd_qhdist(o);
    if (verify->parsed()) return cmd_verify(o);
    if (conjecture->parsed()) return cmd_conjecture(o);
    if (plot->parsed()) return cmd_plot(o);
  } catch (const NoExactFormula& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return kNoExact;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << one_line(e.what()) << '\n';
    return kSpecError;
  } catch (const InvalidDomain& e) {
    std::cerr << "spec error: " << one_line(e.what()) << '\n';
    return kSpecError;
  } catch (const OutsideDomain& e) {
    std::cerr << "spec error: " << one_line(e.what()) << '\n';
    return kSpecError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << one_line(e.what()) << '\n';
    return kEstimatorError;
  }
  return kSpecError;
}
