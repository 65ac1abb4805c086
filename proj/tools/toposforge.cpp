// Command-line front end: evaluate forcing queries over finite spaces and
// ring spectra, translate formulas, sheafify, inspect spectra, and run the
// verification suites.

#include <CLI11.hpp>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "toposforge/verify.hpp"

using namespace toposforge;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResolveError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool file_exists(const std::string& path) { return static_cast<bool>(std::ifstream(path)); }

FinRing load_ring(const std::string& spec) {
  if (file_exists(spec)) {
    std::istringstream in(slurp(spec));
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string head;
      if (!(ls >> head) || head[0] == '#') continue;
      return FinRing::from_spec(line);
    }
    throw ResolveError("ring file '" + spec + "' contains no ring line");
  }
  return FinRing::from_spec(spec);
}

Mask parse_open(const FiniteSpace& X, const std::string& text) {
  if (text == "X" || text == "full") return X.full();
  if (text == "{}" || text == "empty") return 0;
  Mask m = 0;
  std::istringstream ss(text);
  std::string p;
  while (ss >> p) m |= bit(X.point_index(p));
  X.index_of(m);  // must be an open
  return m;
}

/// Space environments for eval/truth: the SpaceEnv registry plus `U` as an
/// alias for the largest proper open.
struct EvalSpace {
  SpaceEnv se;
  explicit EvalSpace(const FiniteSpace& X) : se(X) {
    if (se.space.open_count() >= 2)
      se.env.propConstants["U"] = se.space.open_at(se.space.open_count() - 2);
  }
};

// permissive symbol discovery for the syntax-only translate command
SymbolTable permissive_symbols(const std::string& text, bool omegaFallback) {
  SymbolTable st;
  std::set<std::string> keywords = {"forall", "exists", "true", "false", "in",   "box",
                                    "bigvee", "bigand", "inv",  "nilp",  "Omega", "P",
                                    "Sheaf"};
  std::vector<std::string> tokens;
  std::vector<char> follows;  // character following the token
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                 text[i] == '_' || text[i] == '\''))
        ++i;
      tokens.push_back(text.substr(b, i - b));
      std::size_t k = i;
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      follows.push_back(k < text.size() ? text[k] : ' ');
    } else {
      ++i;
    }
  }
  // sorts: identifiers right after ':'
  std::string defaultSort = "F";
  {
    bool afterColon = false;
    std::size_t ti = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t b = i;
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                   text[i] == '_' || text[i] == '\''))
          ++i;
        std::string tok = text.substr(b, i - b);
        if (afterColon && !keywords.count(tok)) {
          st.sheafSorts.insert(tok);
          defaultSort = tok;
        }
        afterColon = false;
        --i;
        ++ti;
      } else if (c == ':') {
        afterColon = true;
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        afterColon = false;
      }
    }
    (void)ti;
  }
  if (st.sheafSorts.empty()) st.sheafSorts.insert(defaultSort);
  SortPtr ds = Sort::sheaf(*st.sheafSorts.begin());
  st.ringSorts = st.sheafSorts;
  st.defaultRingSort = *st.sheafSorts.begin();
  for (const auto& s : st.sheafSorts) {
    SortPtr sp = Sort::sheaf(s);
    st.functions["add"].push_back({{sp, sp}, sp});
    st.functions["mul"].push_back({{sp, sp}, sp});
  }

  std::set<std::string> bound;  // quantified variables bind themselves
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if ((tokens[i] == "forall" || tokens[i] == "exists") && i + 1 < tokens.size())
      bound.insert(tokens[i + 1]);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (keywords.count(t) || st.sheafSorts.count(t) || bound.count(t)) continue;
    if (i > 0 && tokens[i - 1] == "box") {
      st.nuclei.insert(t);
      continue;
    }
    if (i > 0 && tokens[i - 1] == "in") {
      st.constants[t] = Sort::power(ds);
      continue;
    }
    if (follows[i] == '(') {
      for (int arity = 1; arity <= 3; ++arity) {
        SymbolTable::FnSig sig;
        for (int a = 0; a < arity; ++a) sig.args.push_back(ds);
        sig.result = ds;
        st.functions[t].push_back(std::move(sig));
      }
      continue;
    }
    if (follows[i] == '[') continue;  // schema brackets
    st.freeVars[t] = omegaFallback ? Sort::omega() : ds;
  }
  return st;
}

void print_sheaf_table(const Sheaf& F) {
  const FiniteSpace& X = F.space();
  for (int u = 0; u < X.open_count(); ++u) {
    std::cout << "sections " << u << " " << X.format_mask(X.open_at(u)) << ":";
    for (int s = 0; s < F.card(u); ++s) std::cout << " " << F.section_name(u, s);
    std::cout << "\n";
  }
  for (int u = 0; u < X.open_count(); ++u)
    for (int v = 0; v < X.open_count(); ++v) {
      if (u == v || (X.open_at(v) & ~X.open_at(u))) continue;
      std::cout << "restrict " << u << "->" << v << ":";
      for (int s = 0; s < F.card(u); ++s)
        std::cout << " " << F.section_name(u, s) << "->" << F.section_name(v, F.restrict_idx(u, v, s));
      std::cout << "\n";
    }
}

Nucleus make_nucleus(const FiniteSpace& X, const std::string& spec) {
  if (spec == "negneg") return nucleus_negneg(X);
  if (spec == "identity" || spec == "ident") return nucleus_identity(X.opens_frame());
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "open") return nucleus_open(X, X.open_at(std::stoi(arg)));
    if (kind == "closed") return nucleus_closed(X, X.open_at(std::stoi(arg)));
    if (kind == "point") return nucleus_point(X, X.point_index(arg));
  }
  throw ResolveError("unknown nucleus '" + spec +
                     "' (use negneg, identity, open:IDX, closed:IDX, point:NAME)");
}

int run(int argc, char** argv) {
  CLI::App app{"toposforge: a Kripke-Joyal forcing workbench for sheaves on finite spaces"};
  app.require_subcommand(1);

  std::string spacePath, ringSpec, sheafPath, formulaText, openText, nucleusName, suiteName,
      modulePath;
  bool elideGray = false;
  std::uint64_t seed = 20260809;
  if (const char* envSeed = std::getenv("TOPOSFORGE_SEED")) seed = std::stoull(envSeed);
  int maxPoints = 6, maxDepth = 3, count = 10;

  auto* evalCmd = app.add_subcommand("eval", "evaluate a forcing query");
  evalCmd->add_option("--space", spacePath, "space file");
  evalCmd->add_option("--ring", ringSpec, "ring spec or file");
  evalCmd->add_option("--formula", formulaText, "formula text")->required();
  evalCmd->add_option("--open", openText, "open to force on (point names; default: the whole space)");

  auto* truthCmd = app.add_subcommand("truth", "print the truth value of a formula");
  truthCmd->add_option("--space", spacePath, "space file");
  truthCmd->add_option("--ring", ringSpec, "ring spec or file");
  truthCmd->add_option("--formula", formulaText, "formula text")->required();

  auto* trCmd = app.add_subcommand("translate", "apply the box translation");
  trCmd->add_option("--nucleus", nucleusName, "nucleus name (negneg prints double negation)")
      ->required();
  trCmd->add_flag("--elide-gray", elideGray, "omit the gray boxes");
  trCmd->add_option("formula", formulaText, "formula text")->required();

  auto* shCmd = app.add_subcommand("sheafify", "box-sheafify a sheaf");
  shCmd->add_option("--space", spacePath, "space file")->required();
  shCmd->add_option("--sheaf", sheafPath, "sheaf file")->required();
  shCmd->add_option("--nucleus", nucleusName, "nucleus spec")->required();

  auto* spCmd = app.add_subcommand("spec", "inspect the spectrum of a finite ring");
  spCmd->add_option("--ring", ringSpec, "ring spec or file")->required();
  spCmd->add_option("--module", modulePath, "module file for the tilde sheaf");

  auto* vfCmd = app.add_subcommand("verify", "run a verification suite");
  vfCmd->add_option("suite", suiteName, "suite name")->required();
  vfCmd->add_option("--seed", seed, "random seed");
  vfCmd->add_option("--max-points", maxPoints, "maximum points of generated spaces");
  vfCmd->add_option("--max-depth", maxDepth, "maximum formula depth");
  vfCmd->add_option("--count", count, "instances per check");
  vfCmd->add_option("--ring", ringSpec, "restrict ring suites to one ring");
  vfCmd->add_option("--space", spacePath, "restrict space suites to one space file");

  CLI11_PARSE(app, argc, argv);

  if (evalCmd->parsed() || truthCmd->parsed()) {
    if (spacePath.empty() == ringSpec.empty())
      throw ResolveError("give exactly one of --space or --ring");
    std::unique_ptr<EvalSpace> es;
    std::unique_ptr<FinRing> ring;
    std::unique_ptr<SpectrumContext> ctx;
    const BaseEnv* env;
    const FiniteSpace* X;
    if (!spacePath.empty()) {
      es = std::make_unique<EvalSpace>(FiniteSpace::from_file_text(slurp(spacePath)));
      env = &es->se.env;
      X = &es->se.space;
    } else {
      ring = std::make_unique<FinRing>(load_ring(ringSpec));
      ctx = std::make_unique<SpectrumContext>(*ring);
      env = &ctx->env();
      X = &ctx->space();
    }
    FormulaPtr f = parse_formula(formulaText, env->symbols());
    Forcer fz(*env);
    Mask U = openText.empty() ? X->full() : parse_open(*X, openText);
    Mask tv = fz.truth_value(f);
    if (truthCmd->parsed()) {
      std::cout << "truth-value = " << X->format_mask(tv) << "\n";
      return 0;
    }
    bool forced = fz.force(U, f);
    std::cout << (forced ? "FORCED" : "NOT-FORCED") << " on " << X->format_mask(U)
              << "; truth-value = " << X->format_mask(tv) << "\n";
    return 0;
  }

  if (trCmd->parsed()) {
    if (formulaText.empty()) throw ResolveError("translate needs a formula");
    SymbolTable st;
    FormulaPtr f;
    try {
      st = permissive_symbols(formulaText, false);
      st.nuclei.insert(nucleusName);
      f = parse_formula(formulaText, st);
    } catch (const SortError&) {
      st = permissive_symbols(formulaText, true);
      st.nuclei.insert(nucleusName);
      f = parse_formula(formulaText, st);
    }
    TranslationResult r = nucleusName == "negneg" ? negneg_translate(*f, elideGray)
                                                  : box_translate(*f, nucleusName, elideGray);
    std::cout << print_formula(*r.formula) << "\n";
    return 0;
  }

  if (shCmd->parsed()) {
    FiniteSpace X = FiniteSpace::from_file_text(slurp(spacePath));
    SheafFile sf = parse_sheaf_file(slurp(sheafPath), X);
    Nucleus j = make_nucleus(X, nucleusName);
    PlusResult r = sheafify(sf.sheaf, j);
    std::cout << "sheaf " << sf.sheaf.name() << "++ under " << j.label << "\n";
    print_sheaf_table(r.sheaf);
    return 0;
  }

  if (spCmd->parsed()) {
    FinRing A = load_ring(ringSpec);
    SpectrumContext ctx(A);
    const SpecFrame& SF = ctx.frame();
    std::cout << "ring " << A.spec() << "\n";
    std::cout << "frame elements (" << SF.radicals.size() << "):";
    for (int i = 0; i < static_cast<int>(SF.radicals.size()); ++i)
      std::cout << " " << SF.frame.label(i);
    std::cout << "\npoints: " << ctx.points().filters.size() << "\n";
    std::cout << "structure sheaf:\n";
    print_sheaf_table(ctx.structure_sheaf());
    if (!modulePath.empty()) {
      FinModule M = FinModule::from_file(slurp(modulePath), A);
      const Sheaf& MT = ctx.tilde(M, "MT");
      std::cout << "tilde module:\n";
      print_sheaf_table(MT);
    }
    return 0;
  }

  if (vfCmd->parsed()) {
    VerifyOptions opt;
    opt.seed = seed;
    opt.maxPoints = maxPoints;
    opt.maxDepth = maxDepth;
    opt.instanceCount = count;
    opt.ringSpec = ringSpec;
    if (!spacePath.empty()) opt.spaces.push_back(FiniteSpace::from_file_text(slurp(spacePath)));
    Report rep = verify_suite(suiteName, opt);
    std::cout << rep.to_text();
    std::cout << (rep.all_pass() ? "ALL PASS" : "FAILURES: " + std::to_string(rep.fail_count()))
              << "\n";
    return rep.all_pass() ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const SortError& e) {
    std::cerr << "sort error: " << e.what() << "\n";
    return 2;
  } catch (const ResolveError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
