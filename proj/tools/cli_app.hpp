#pragma once

// The `delzant` command line. `run` is a pure function of its arguments and
// input stream so tests can drive it without spawning processes.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "delzant/delzant.hpp"

namespace delzant::cli {

using io::Json;

enum ExitCode { kOk = 0, kInvalid = 1, kUndecidable = 2, kInternal = 3 };

namespace detail {

struct Globals {
  std::string format = "json";
  int precision = SymbolTable::kDefaultPrecisionCap;
  unsigned threads = 1;
};

inline Json read_document(const std::string& path, std::istream& in) {
  try {
    if (path.empty() || path == "-") return Json::parse(in);
    std::ifstream file(path);
    if (!file) throw InvalidInput("cannot open " + path);
    return Json::parse(file);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON in ") + (path.empty() || path == "-" ? "<stdin>" : path) + ": " +
                       e.what());
  }
}

inline Scalar flag_rational(const std::string& text) { return Scalar(parse_rational(text)); }

inline std::vector<Scalar> flag_rationals(const std::vector<std::string>& texts) {
  std::vector<Scalar> out;
  for (const auto& t : texts) out.push_back(flag_rational(t));
  return out;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

inline std::string point_text(const Point& p, const SymbolTable& t) {
  return "(" + p.x.to_string(t) + ", " + p.y.to_string(t) + ")";
}

inline std::string polygon_table(const DelzantPolygon& p) {
  std::ostringstream os;
  const SymbolTable& t = p.symbols();
  os << "edges " << p.size() << "\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    os << i << "  vertex " << point_text(p.vertex(i), t) << "  length " << p.length(i).to_string(t)
       << "  self-intersection " << p.self_intersection(i) << "\n";
  return os.str();
}

inline std::string decomposition_table(const Decomposition& d) {
  std::ostringstream os;
  const SymbolTable& t = *d.table;
  if (const auto* tr = std::get_if<TriangleRoot>(&d.root))
    os << "root triangle " << tr->lambda.to_string(t) << "\n";
  else {
    const auto& h = std::get<HirzebruchRoot>(d.root);
    os << "root hirzebruch a=" << h.a.to_string(t) << " b=" << h.b.to_string(t) << " k=" << h.k << "\n";
  }
  for (const auto& s : d.steps) os << "chop " << point_text(s.vertex, t) << " by " << s.delta.to_string(t) << "\n";
  os << "type " << symplectomorphism_type(d.root).label(t) << "\n";
  return os.str();
}

inline void emit(std::ostream& out, const Globals& g, const Json& doc, const std::string& table) {
  if (g.format == "table")
    out << table;
  else
    out << doc.dump(2) << "\n";
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Exact toolkit for Delzant polygons and toric symplectic four-manifolds", "delzant"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output rendering")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--precision", g.precision, "Bisection rounds allowed per comparison")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  std::string file, file2;
  auto* validate = app.add_subcommand("validate", "Check a polygon and print its edge data");
  validate->add_option("file", file, "Polygon JSON (stdin if omitted)");

  auto* canon = app.add_subcommand("canon", "Canonical form of a polygon");
  canon->add_option("file", file, "Polygon JSON (stdin if omitted)");

  auto* congruent_cmd = app.add_subcommand("congruent", "Decide AGL(2,Z) congruence of two polygons");
  congruent_cmd->add_option("first", file, "Polygon JSON")->required();
  congruent_cmd->add_option("second", file2, "Polygon JSON")->required();

  std::size_t vertex = 0;
  std::string size;
  auto* chop_cmd = app.add_subcommand("chop", "Chop a corner");
  chop_cmd->add_option("file", file, "Polygon JSON (stdin if omitted)");
  chop_cmd->add_option("--vertex", vertex, "Vertex index")->required();
  chop_cmd->add_option("--size", size, "Chop size (rational)")->required();

  std::string edge;
  auto* blowdown_cmd = app.add_subcommand("blowdown", "Blow down an edge of self-intersection -1");
  blowdown_cmd->add_option("file", file, "Polygon JSON (stdin if omitted)");
  blowdown_cmd->add_option("--edge", edge, "Edge index, or \"new\" for the edge made by the last chop")->required();

  bool odd_k = false;
  auto* decompose_cmd = app.add_subcommand("decompose", "Blow down to a triangle or trapezoid");
  decompose_cmd->add_option("file", file, "Polygon JSON (stdin if omitted)");
  decompose_cmd->add_flag("--odd-k", odd_k, "Prefer a trapezoid root with odd k");

  auto* invariants_cmd = app.add_subcommand("invariants", "Perimeter, area and edge count");
  invariants_cmd->add_option("file", file, "Polygon JSON (stdin if omitted)");

  auto* form_cmd = app.add_subcommand("form", "Intersection form on the edge lattice");
  form_cmd->add_option("file", file, "Polygon JSON (stdin if omitted)");

  std::string lambda, window;
  std::vector<std::string> deltas;
  long long alpha = -1;
  std::optional<long long> c1;
  std::optional<std::size_t> del_pezzo;
  auto* exceptional_cmd = app.add_subcommand("exceptional", "Enumerate classes dL - sum m_i E_i");
  exceptional_cmd->add_option("file", file, "Form JSON with \"lambda\", \"deltas\" and optional \"symbols\"");
  exceptional_cmd->add_option("--lambda", lambda, "Size of the line class (rational)");
  exceptional_cmd->add_option("--deltas", deltas, "Blow-up sizes (rationals)")->expected(0, -1);
  exceptional_cmd->add_option("--alpha", alpha, "Self-intersection of the classes");
  exceptional_cmd->add_option("--window", window, "Upper bound on the period (rational)");
  exceptional_cmd->add_option("--c1", c1, "Required first Chern number");
  exceptional_cmd->add_option("--del-pezzo", del_pezzo, "Count exceptional classes in k blow-ups");

  std::vector<std::string> s2s2, cp2, raw, candidate;
  std::string parity, max_omega;
  bool parity_filter = true, fast = false;
  auto* classify_cmd = app.add_subcommand("classify", "List the toric actions on a manifold");
  classify_cmd->add_option("file", file, "Manifold JSON");
  classify_cmd->add_option("--s2s2", s2s2, "Sphere sizes a b")->expected(2);
  classify_cmd->add_option("--cp2", cp2, "lambda followed by blow-up sizes")->expected(1, -1);
  classify_cmd->add_option("--raw", raw, "Perimeter, area and b2")->expected(3);
  classify_cmd->add_option("--parity", parity, "Parity of the form for --raw")->check(CLI::IsMember({"even", "odd"}));
  classify_cmd->add_option("--parity-filter", parity_filter, "Keep only polygons of the expected parity");
  classify_cmd->add_option("--max-omega", max_omega, "Window for candidate chop sizes (rational)");
  classify_cmd->add_option("--candidate-sizes", candidate, "Replace the candidate chop sizes")->expected(1, -1);
  classify_cmd->add_flag("--fast", fast, "Rational fast path for candidate sizes");

  CensusOptions census_opt;
  std::string bound = "2", step = "1";
  auto* census_cmd = app.add_subcommand("census", "All polygons reachable on a rational grid");
  census_cmd->add_option("--max-edges", census_opt.max_edges, "Largest edge count")->check(CLI::Range(3, 64));
  census_cmd->add_option("--bound", bound, "Largest grid value (rational)");
  census_cmd->add_option("--step", step, "Grid step (rational)");
  census_cmd->add_option("--max-polygons", census_opt.max_polygons, "Resource cap");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalid;
  }

  auto load_polygon = [&](const std::string& path) { return io::polygon_from_json(read_document(path, in), g.precision); };

  try {
    if (validate->parsed()) {
      DelzantPolygon p = load_polygon(file);
      Json doc;
      doc["valid"] = true;
      doc["edges"] = p.size();
      doc["vertices"] = io::vertices_json(p);
      doc["lengths"] = Json::array();
      for (const auto& l : p.lengths()) doc["lengths"].push_back(io::to_json(l, p.symbols()));
      doc["self_intersections"] = p.self_intersections();
      emit(out, g, doc, polygon_table(p));
    } else if (canon->parsed()) {
      DelzantPolygon c = canonical_form(load_polygon(file)).polygon;
      emit(out, g, io::to_json(c), polygon_table(c));
    } else if (congruent_cmd->parsed()) {
      DelzantPolygon p = load_polygon(file), q = load_polygon(file2);
      require_same_table(p, q);
      CanonicalForm cp = canonical_form(p), cq = canonical_form(q);
      bool same = cp.polygon == cq.polygon;
      Json doc;
      doc["congruent"] = same;
      std::string table = same ? "congruent\n" : "not congruent\n";
      if (same) {
        UnimodularAffineMap h = cq.witness.inverse().compose(cp.witness);
        doc["witness"] = io::to_json(h, p.symbols());
        const IntMat2& m = h.matrix();
        table += "matrix [[" + std::to_string(m.a) + ", " + std::to_string(m.b) + "], [" + std::to_string(m.c) + ", " +
                 std::to_string(m.d) + "]]  translation " + point_text(h.translation(), p.symbols()) + "\n";
      }
      emit(out, g, doc, table);
    } else if (chop_cmd->parsed()) {
      DelzantPolygon p = load_polygon(file);
      if (vertex >= p.size()) throw InvalidInput("vertex index out of range");
      DelzantPolygon c = chop(p, vertex, flag_rational(size));
      Json doc = io::to_json(c);
      doc["new_edge"] = vertex;
      emit(out, g, doc, polygon_table(c) + "new edge " + std::to_string(vertex) + "\n");
    } else if (blowdown_cmd->parsed()) {
      Json src = read_document(file, in);
      DelzantPolygon p = io::polygon_from_json(src, g.precision);
      std::size_t e = 0;
      if (edge == "new") {
        if (!src.contains("new_edge") || !src.at("new_edge").is_number_unsigned())
          throw InvalidInput("--edge new needs a polygon produced by chop");
        e = src.at("new_edge").get<std::size_t>();
      } else {
        try {
          std::size_t used = 0;
          e = std::stoull(edge, &used);
          if (used != edge.size()) throw std::invalid_argument(edge);
        } catch (const std::logic_error&) {
          throw InvalidInput("--edge must be an index or \"new\"");
        }
      }
      if (e >= p.size()) throw InvalidInput("edge index out of range");
      BlowDownResult r = blow_down(p, e);
      Json doc = io::to_json(r.polygon);
      doc["delta"] = io::to_json(r.delta, p.symbols());
      doc["restored_vertex"] = r.vertex;
      emit(out, g, doc, polygon_table(r.polygon) + "delta " + r.delta.to_string(p.symbols()) + "\n");
    } else if (decompose_cmd->parsed()) {
      Decomposition d = decompose(load_polygon(file), odd_k);
      emit(out, g, io::to_json(d), decomposition_table(d));
    } else if (invariants_cmd->parsed()) {
      DelzantPolygon p = load_polygon(file);
      PerimeterArea pa = perimeter_area(p);
      Json doc;
      doc["perimeter"] = io::to_json(pa.perimeter, p.symbols());
      doc["area"] = io::to_json(pa.area, p.symbols());
      doc["edges"] = p.size();
      emit(out, g, doc,
           "perimeter " + pa.perimeter.to_string(p.symbols()) + "\narea " + pa.area.to_string(p.symbols()) +
               "\nedges " + std::to_string(p.size()) + "\n");
    } else if (form_cmd->parsed()) {
      IntersectionForm f = intersection_form(load_polygon(file));
      std::ostringstream os;
      os << "rank " << f.rank << "\nparity " << to_string(f.parity) << "\nsignature (" << f.b_plus << ", "
         << f.b_minus << ")\ndeterminant " << f.determinant << "\n";
      for (const auto& row : f.gram) {
        std::vector<std::string> cells;
        for (auto x : row) cells.push_back(std::to_string(x));
        os << join(cells, " ") << "\n";
      }
      emit(out, g, io::to_json(f), os.str());
    } else if (exceptional_cmd->parsed()) {
      if (del_pezzo) {
        std::size_t n = del_pezzo_exceptional_count(*del_pezzo, g.threads);
        Json doc{{"k", *del_pezzo}, {"count", n}};
        emit(out, g, doc, "k " + std::to_string(*del_pezzo) + "\ncount " + std::to_string(n) + "\n");
        return kOk;
      }
      BlowupForm f;
      if (!file.empty()) {
        Json doc = read_document(file, in);
        f.table = io::symbols_from_document(doc, g.precision);
        f.lambda = io::scalar_from_json(io::detail::member(doc, "lambda", "form"), *f.table);
        if (doc.contains("deltas"))
          for (const auto& x : doc.at("deltas")) f.deltas.push_back(io::scalar_from_json(x, *f.table));
      } else {
        if (lambda.empty()) throw InvalidInput("exceptional needs --lambda or a form file");
        f.table = std::make_shared<const SymbolTable>(std::vector<SymbolSpec>{}, false, g.precision);
        f.lambda = flag_rational(lambda);
        f.deltas = flag_rationals(deltas);
      }
      if (window.empty()) throw InvalidInput("exceptional needs --window");
      auto classes = enumerate_classes(f, alpha, flag_rational(window), c1, g.threads);
      std::ostringstream os;
      for (const auto& e : classes) {
        ClassValues v = evaluate(f, e);
        std::vector<std::string> ms;
        for (auto m : e.m) ms.push_back(std::to_string(m));
        os << "d " << e.d << "  m (" << join(ms, ", ") << ")  period " << v.period.to_string(f.symbols()) << "  c1 "
           << v.c1 << "\n";
      }
      emit(out, g, io::to_json(f, classes), os.str());
    } else if (classify_cmd->parsed()) {
      int given = !file.empty() + !s2s2.empty() + !cp2.empty() + !raw.empty();
      if (given != 1) throw InvalidInput("classify needs exactly one of a file, --s2s2, --cp2, --raw");
      ManifoldSpec spec;
      if (!file.empty()) {
        spec = io::manifold_from_json(read_document(file, in), g.precision);
      } else {
        spec.table = std::make_shared<const SymbolTable>(std::vector<SymbolSpec>{}, false, g.precision);
        if (!s2s2.empty()) {
          spec.data = S2xS2{flag_rational(s2s2[0]), flag_rational(s2s2[1])};
        } else if (!cp2.empty()) {
          auto xs = flag_rationals(cp2);
          spec.data = CP2Blowups{xs[0], std::vector<Scalar>(xs.begin() + 1, xs.end())};
        } else {
          RawInvariants r;
          r.perimeter = flag_rational(raw[0]);
          r.area = flag_rational(raw[1]);
          try {
            r.b2 = std::stoul(raw[2]);
          } catch (const std::logic_error&) {
            throw InvalidInput("b2 must be a non-negative integer");
          }
          if (!parity.empty()) r.parity = parity == "even" ? Parity::Even : Parity::Odd;
          spec.data = std::move(r);
        }
      }
      if (!parity.empty() && raw.empty() && !std::holds_alternative<RawInvariants>(spec.data))
        throw InvalidInput("--parity only applies to raw invariants");
      ClassifyOptions opt;
      opt.parity_filter = parity_filter;
      opt.rational_fast_path = fast;
      opt.threads = g.threads;
      opt.candidate_sizes_override = flag_rationals(candidate);
      if (!max_omega.empty()) opt.max_omega = flag_rational(max_omega);
      ClassificationResult r = classify(spec, opt);
      std::ostringstream os;
      os << "exactness " << to_string(r.exactness) << "\nclasses " << r.classes.size() << "\n";
      for (std::size_t i = 0; i < r.classes.size(); ++i) {
        const auto& c = r.classes[i];
        std::vector<std::string> vs;
        for (const auto& v : c.polygon.vertices()) vs.push_back(point_text(v, spec.symbols()));
        os << i << "  " << c.type.label(spec.symbols()) << "  " << join(vs, " ") << "\n";
      }
      emit(out, g, io::to_json(r, spec.symbols()), os.str());
    } else if (census_cmd->parsed()) {
      census_opt.bound = parse_rational(bound);
      census_opt.step = parse_rational(step);
      census_opt.threads = g.threads;
      // one polygon per line so large censuses stream
      for (const auto& p : census(census_opt)) {
        if (g.format == "table") {
          std::vector<std::string> vs;
          for (const auto& v : p.vertices()) vs.push_back(point_text(v, p.symbols()));
          out << p.size() << "  " << join(vs, " ") << "\n";
        } else {
          out << io::vertices_json(p).dump() << "\n";
        }
      }
    }
  } catch (const Undecidable& e) {
    err << "delzant: " << e.what() << "; retry with a larger --precision\n";
    return kUndecidable;
  } catch (const InvalidInput& e) {
    err << "delzant: " << e.what() << "\n";
    return kInvalid;
  } catch (const ResourceCapExceeded& e) {
    err << "delzant: " << e.what() << "\n";
    return kInvalid;
  } catch (const Json::exception& e) {
    err << "delzant: malformed input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "delzant: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace delzant::cli
