#include "rwb/cli.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "rwb/baire.hpp"
#include "rwb/constructions.hpp"
#include "rwb/dsl.hpp"
#include "rwb/verify.hpp"

namespace rwb {

namespace {

// A usage problem: reported as a one-line diagnostic with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Values each flag consumes. --seed is accepted everywhere for interface
// stability; every construction here is already deterministic.
const std::map<std::string, size_t> kFlagArity = {
    {"--window", 2}, {"--grid", 1},   {"--depth", 1},  {"--stages", 1}, {"--out", 1},
    {"--seed", 1},   {"--map", 1},    {"--from", 1},   {"--to", 1},     {"--a", 1},
    {"--b", 1},      {"--blocks", 1}, {"--cells", 1},  {"--u", 1},      {"--set", 1},
    {"--x", 1},      {"--y", 1},      {"--drop", 1},   {"--prefix", 1}, {"--match", 1},
    {"--replace", 1}, {"--structure", 1},
};

struct Args {
  std::vector<std::string> pos;
  std::map<std::string, std::vector<std::string>> flags;

  bool has(const std::string& f) const { return flags.count(f) != 0; }
  const std::string& one(const std::string& f) const { return flags.at(f)[0]; }
};

Args collect(const std::vector<std::string>& argv, size_t start) {
  Args a;
  for (size_t i = start; i < argv.size(); ++i) {
    const std::string& t = argv[i];
    if (t.rfind("--", 0) != 0) {
      a.pos.push_back(t);
      continue;
    }
    auto it = kFlagArity.find(t);
    if (it == kFlagArity.end()) throw UsageError("unknown flag " + t);
    if (a.flags.count(t)) throw UsageError("duplicate flag " + t);
    std::vector<std::string> vals;
    for (size_t k = 0; k < it->second; ++k) {
      if (++i >= argv.size()) throw UsageError(t + " is missing a value");
      vals.push_back(argv[i]);
    }
    a.flags[t] = std::move(vals);
  }
  return a;
}

size_t parse_count(const Args& a, const std::string& flag) {
  const std::string& s = a.one(flag);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw UsageError(flag + " needs a nonnegative integer, got '" + s + "'");
  return std::stoull(s);
}

size_t require_count(const Args& a, const std::string& flag) {
  if (!a.has(flag)) throw UsageError(flag + " is required");
  return parse_count(a, flag);
}

size_t count_or(const Args& a, const std::string& flag, size_t dflt) {
  return a.has(flag) ? parse_count(a, flag) : dflt;
}

IntervalAtom require_window(const Args& a) {
  if (!a.has("--window")) throw UsageError("--window lo hi is required");
  auto lo = ext_parse(a.flags.at("--window")[0]);
  auto hi = ext_parse(a.flags.at("--window")[1]);
  if (!lo || !hi) throw UsageError("malformed --window endpoint");
  try {
    return IntervalAtom(*lo, *hi, lo->finite(), hi->finite());
  } catch (const BadIntervalError& e) {
    throw UsageError(std::string("bad --window: ") + e.what());
  }
}

SetExpr expr_arg(const std::string& text) { return dsl_parse(text); }

SubsetPattern pattern_flag(const Args& a, const std::string& flag) {
  if (!a.has(flag)) throw UsageError(flag + " is required");
  auto p = pattern_parse(a.one(flag));
  if (!p) throw UsageError("malformed pattern in " + flag);
  return *p;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to --out when given (reporting the path), else to the stream.
void emit(const Args& a, std::ostream& out, const std::string& text) {
  if (!a.has("--out")) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
    return;
  }
  const std::string& path = a.one("--out");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
  out << "WROTE " << path << "\n";
}

std::string eval_to_string(const EvalResult& r) {
  if (r.exact) return scalar_to_string(r.value);
  return "[" + scalar_to_string(r.lo) + ", " + scalar_to_string(r.hi) + "]";
}

// RESULT line shared by every verification-style command; returns the
// process exit code.
int report(std::ostream& out, const VerificationReport& rep) {
  out << "RESULT " << (rep.pass() ? "pass" : "fail") << " samples=" << rep.samples
      << " fail=" << rep.failures.size() << " inconclusive=" << rep.inconclusive << "\n";
  for (const FailureWitness& w : rep.failures)
    out << "WITNESS x=" << scalar_to_string(w.x) << " fx=" << eval_to_string(w.fx) << "\n";
  return rep.pass() ? 0 : 1;
}

int cmd_classify(const Args& a, std::ostream& out) {
  if (a.pos.size() != 1) throw UsageError("classify takes one expression");
  out << "CLASS " << set_class_name(classify(expr_arg(a.pos[0]))) << "\n";
  return 0;
}

int cmd_check_i(const Args& a, std::ostream& out) {
  if (a.pos.size() != 1) throw UsageError("check-i takes one expression");
  IFlags f = check_I(expr_arg(a.pos[0]));
  out << "I0 " << (f.i0 ? "yes" : "no") << " I1 " << (f.i1 ? "yes" : "no") << "\n";
  return 0;
}

int cmd_decompose(const Args& a, std::ostream& out) {
  if (a.pos.size() != 1) throw UsageError("decompose takes one expression");
  SetExpr s = expr_arg(a.pos[0]);
  IntervalAtom window = require_window(a);
  std::vector<FiniteUnion> pieces = decompose_fsigma(s, window, count_or(a, "--depth", 8));
  out << "PIECES " << pieces.size() << "\n";
  for (const FiniteUnion& p : pieces) out << fu_to_string(p) << "\n";
  return 0;
}

PiecewiseMap parse_map_file(const Args& a) {
  if (!a.has("--map")) throw UsageError("--map is required");
  auto f = map_parse(read_file(a.one("--map")));
  if (!f) throw UsageError("unreadable map file " + a.one("--map"));
  return *f;
}

int cmd_verify(const Args& a, std::ostream& out) {
  PiecewiseMap f = parse_map_file(a);
  IntervalAtom window = require_window(a);
  size_t depth = count_or(a, "--depth", 64);
  if (a.has("--structure")) {
    // Pushes the block structure of the coded family through the map; a
    // window with no resolvable block exhausts the certificate depth.
    auto p = pattern_parse(a.one("--structure"));
    if (!p) throw UsageError("malformed pattern in --structure");
    LStructureView v = image_structure_check(f, *p, window, depth);
    out << "BLOCKS " << v.blocks.size() << "\n";
    for (const LBlock& b : v.blocks) {
      const char* pat = b.compact_pattern == LBlock::Pattern::Empty       ? "empty"
                        : b.compact_pattern == LBlock::Pattern::Singleton ? "singleton"
                                                                          : "interval";
      out << "BLOCK " << rat_to_string(b.anchor0) << " " << rat_to_string(b.anchor1) << " " << pat
          << "\n";
    }
    return 0;
  }
  if (!a.has("--from") || !a.has("--to")) throw UsageError("--from and --to are required");
  SetExpr A = expr_arg(a.one("--from")), B = expr_arg(a.one("--to"));
  size_t grid = require_count(a, "--grid");
  return report(out, verify_reduction(f, A, B, window, grid, depth));
}

int cmd_reduce(const Args& a, std::ostream& out) {
  if (a.pos.empty()) throw UsageError("reduce needs a construction name");
  const std::string& kind = a.pos[0];
  if (kind == "subsetfin" || kind == "belowq") {
    if (a.pos.size() != 1) throw UsageError("reduce " + kind + " takes no positional arguments");
    SubsetPattern pa = pattern_flag(a, "--a"), pb = pattern_flag(a, "--b");
    IntervalAtom window = IntervalAtom::whole_line();
    PiecewiseMap f = kind == "subsetfin"
                         ? subsetfin_reduction(pa, pb, count_or(a, "--blocks", 12), &window)
                         : belowQ_reduction(pa, pb, count_or(a, "--blocks", 10), &window);
    emit(a, out, map_to_string(f));
    // The companion window on which grid verification is meaningful; kept
    // off the map text so the emitted file stays reparseable.
    if (a.has("--out"))
      out << "WINDOW " << ext_to_string(window.lo) << " " << ext_to_string(window.hi) << "\n";
    return 0;
  }
  if (kind == "open") {
    if (a.pos.size() != 1) throw UsageError("reduce open takes no positional arguments");
    if (!a.has("--u") || !a.has("--set") || !a.has("--x") || !a.has("--y"))
      throw UsageError("reduce open needs --u, --set, --x and --y");
    auto x = scalar_parse(a.one("--x"));
    auto y = ext_parse(a.one("--y"));
    if (!x || !y) throw UsageError("malformed --x or --y value");
    PiecewiseMap f = open_to_set_reduction(expr_arg(a.one("--u")), expr_arg(a.one("--set")), *x, *y);
    emit(a, out, map_to_string(f));
    return 0;
  }
  if (kind == "to-q") {
    if (a.pos.size() != 2) throw UsageError("reduce to-q takes one expression");
    StageState st = reduce_to_Q(expr_arg(a.pos[1]), require_count(a, "--stages"));
    emit(a, out, stage_state_to_string(st));
    return 0;
  }
  if (kind == "minimal") {
    if (a.pos.size() != 2) throw UsageError("reduce minimal takes one target expression");
    StageState st = reduce_minimal_compact(expr_arg(a.pos[1]), require_count(a, "--stages"));
    emit(a, out, stage_state_to_string(st));
    return 0;
  }
  if (kind == "glue") {
    if (a.pos.size() != 2) throw UsageError("reduce glue takes one target expression");
    GlueResult g =
        glue_minimal(expr_arg(a.pos[1]), require_count(a, "--cells"), count_or(a, "--stages", 6));
    std::ostringstream ss;
    ss << "CELLS " << g.cells.size() << "\n";
    for (size_t k = 0; k < g.cells.size(); ++k) {
      ss << "CELL " << k << " x=" << scalar_to_string(g.x_anchors[k]) << ".."
         << scalar_to_string(g.x_anchors[k + 1]) << " y=" << scalar_to_string(g.y_anchors[k])
         << ".." << scalar_to_string(g.y_anchors[k + 1]) << "\n";
      ss << stage_state_to_string(g.cells[k]);
    }
    emit(a, out, ss.str());
    return 0;
  }
  throw UsageError("unknown construction '" + kind + "'");
}

int cmd_join(const Args& a, std::ostream& out) {
  if (a.pos.empty()) throw UsageError("join needs at least one expression");
  IntervalAtom window = require_window(a);
  size_t grid = require_count(a, "--grid");
  size_t depth = count_or(a, "--depth", 64);
  std::vector<SetExpr> sets;
  for (const std::string& s : a.pos) sets.push_back(expr_arg(s));
  JoinResult jr = upper_bound_join(sets);
  out << "JOIN " << dsl_print(jr.join) << "\n";
  int code = 0;
  for (size_t n = 0; n < sets.size(); ++n) {
    int c = report(out, verify_reduction(jr.maps[n], sets[n], jr.join, window, grid, depth));
    if (c != 0) code = c;
  }
  return code;
}

std::vector<unsigned long long> parse_coord_list(const std::string& s) {
  std::string body = s;
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']')
    body = body.substr(1, body.size() - 2);
  std::vector<unsigned long long> out;
  if (body.empty()) return out;
  std::istringstream is(body);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError("malformed coordinate list '" + s + "'");
    out.push_back(std::stoull(item));
  }
  return out;
}

int cmd_baire(const Args& a, std::ostream& out) {
  if (a.pos.empty()) throw UsageError("baire needs a subcommand");
  const std::string& sub = a.pos[0];
  size_t depth = count_or(a, "--depth", 40);
  if (sub == "to-real") {
    if (a.pos.size() != 2) throw UsageError("baire to-real takes one point");
    auto p = baire_point_parse(a.pos[1]);
    if (!p) throw UsageError("malformed point '" + a.pos[1] + "'");
    out << "VALUE " << eval_to_string(baire_to_real(*p, depth)) << "\n";
    return 0;
  }
  if (sub == "from-real") {
    if (a.pos.size() != 2) throw UsageError("baire from-real takes one rational");
    auto r = rat_parse(a.pos[1]);
    if (!r) throw UsageError("malformed rational '" + a.pos[1] + "'");
    out << "POINT " << baire_point_to_string(real_to_baire(*r, depth)) << "\n";
    return 0;
  }
  if (sub == "transport") {
    if (a.pos.size() != 2) throw UsageError("baire transport takes one map kind");
    const std::string& k = a.pos[1];
    BaireMap g;
    if (k == "id") {
      g = BaireMap::identity();
    } else if (k == "drop") {
      if (!a.has("--drop")) throw UsageError("transport drop needs --drop k");
      g = BaireMap::drop_prefix(parse_count(a, "--drop"));
    } else if (k == "prepend") {
      if (!a.has("--prefix")) throw UsageError("transport prepend needs --prefix list");
      g = BaireMap::prepend(parse_coord_list(a.one("--prefix")));
    } else if (k == "subst") {
      if (!a.has("--match") || !a.has("--replace"))
        throw UsageError("transport subst needs --match and --replace");
      g = BaireMap::prefix_subst(parse_coord_list(a.one("--match")),
                                 parse_coord_list(a.one("--replace")));
    } else {
      throw UsageError("unknown transport map '" + k + "'");
    }
    if (!a.has("--from") || !a.has("--to")) throw UsageError("--from and --to are required");
    TransportedMap h = transport(g, expr_arg(a.one("--from")), expr_arg(a.one("--to")), depth);
    IntervalAtom window = require_window(a);
    size_t grid = require_count(a, "--grid");
    return report(out, transport_verify(h, window, grid));
  }
  throw UsageError("unknown baire subcommand '" + sub + "'");
}

int cmd_export_map(const Args& a, std::ostream& out) {
  // Parses a map file and re-serializes it in canonical form.
  PiecewiseMap f = parse_map_file(a);
  emit(a, out, map_to_string(f));
  return 0;
}

int dispatch(const std::vector<std::string>& argv, std::ostream& out) {
  if (argv.empty()) throw UsageError("no command given");
  const std::string& verb = argv[0];
  Args a = collect(argv, 1);
  if (verb == "classify") return cmd_classify(a, out);
  if (verb == "check-i") return cmd_check_i(a, out);
  if (verb == "decompose") return cmd_decompose(a, out);
  if (verb == "reduce") return cmd_reduce(a, out);
  if (verb == "verify") return cmd_verify(a, out);
  if (verb == "join") return cmd_join(a, out);
  if (verb == "baire") return cmd_baire(a, out);
  if (verb == "export-map") return cmd_export_map(a, out);
  throw UsageError("unknown command '" + verb + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // Reports are buffered so a failed command never emits a partial report,
  // only its one-line diagnostic.
  std::ostringstream buffered;
  try {
    int code = dispatch(args, buffered);
    out << buffered.str();
    return code;
  } catch (const DepthExceededError& e) {
    err << "error: depth exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rwb
