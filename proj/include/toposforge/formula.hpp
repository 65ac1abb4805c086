#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toposforge/common.hpp"

namespace toposforge {

struct Sort;
using SortPtr = std::shared_ptr<const Sort>;

/// Sorts of the multi-sorted language: named sheaves, the truth-value
/// object Omega = P(1), and power sorts P(S).
struct Sort {
  enum class Kind { Sheaf, Omega, Power };
  Kind kind;
  std::string name;  // sheaf sorts only
  SortPtr inner;     // power sorts only

  static SortPtr sheaf(std::string n);
  static SortPtr omega();
  static SortPtr power(SortPtr s);
  bool equals(const Sort& o) const;
  std::string str() const;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Exponent of a power term: a literal or a schema variable bound by an
/// enclosing bigvee/bigand schema.
struct Exponent {
  bool symbolic = false;
  int value = 0;
  std::string var;
};

struct Term {
  enum class Kind { Var, Const, Num, App, Pow };
  Kind kind;
  std::string name;            // Var/Const/App
  int num = 0;                 // Num
  std::vector<TermPtr> args;   // App
  TermPtr base;                // Pow
  Exponent exp;                // Pow
  SortPtr sort;                // resolved sort

  bool equals(const Term& o) const;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Upper bound of a schema node; either a fixed integer or a named bound
/// to be supplied by the evaluation context.
struct SchemaBound {
  bool symbolic = false;
  int value = 0;
  std::string name;
};

struct Formula {
  enum class Kind {
    Eq,
    Member,
    Top,
    Bot,
    And,
    Or,
    BigAnd,
    BigOr,
    BigAndSchema,
    BigOrSchema,
    Implies,
    Forall,
    Exists,
    Modal,
    Prop
  };
  Kind kind;
  TermPtr t1, t2;                  // Eq (both), Member (element, container), Prop (t1)
  FormulaPtr a, b;                 // And/Or/Implies (a,b); Forall/Exists/Modal/schemas (a)
  std::vector<FormulaPtr> kids;    // BigAnd/BigOr explicit lists
  std::string var;                 // quantifier variable / schema variable
  SortPtr sort;                    // quantifier sort
  std::string nucleus;             // Modal
  int lo = 0;                      // schemas
  SchemaBound hi;                  // schemas

  bool equals(const Formula& o) const;
};

FormulaPtr f_eq(TermPtr x, TermPtr y);
FormulaPtr f_member(TermPtr x, TermPtr container);
FormulaPtr f_top();
FormulaPtr f_bot();
FormulaPtr f_and(FormulaPtr x, FormulaPtr y);
FormulaPtr f_or(FormulaPtr x, FormulaPtr y);
FormulaPtr f_bigand(std::vector<FormulaPtr> xs);
FormulaPtr f_bigor(std::vector<FormulaPtr> xs);
FormulaPtr f_bigor_schema(std::string var, int lo, SchemaBound hi, FormulaPtr body);
FormulaPtr f_bigand_schema(std::string var, int lo, SchemaBound hi, FormulaPtr body);
FormulaPtr f_implies(FormulaPtr x, FormulaPtr y);
FormulaPtr f_not(FormulaPtr x);  // Implies(x, Bot)
FormulaPtr f_forall(std::string v, SortPtr s, FormulaPtr body);
FormulaPtr f_exists(std::string v, SortPtr s, FormulaPtr body);
FormulaPtr f_modal(std::string nucleus, FormulaPtr body);
FormulaPtr f_prop(TermPtr omegaTerm);

TermPtr t_var(std::string name, SortPtr s);
TermPtr t_const(std::string name, SortPtr s);
TermPtr t_num(int v, SortPtr s);
TermPtr t_app(std::string fn, std::vector<TermPtr> args, SortPtr result);
TermPtr t_pow(TermPtr base, Exponent e);

/// Symbols visible to the parser/elaborator. Ring sorts additionally enable
/// `^`, `+`, `*`, numerals and the inv/nilp predicate sugar.
struct SymbolTable {
  struct FnSig {
    std::vector<SortPtr> args;
    SortPtr result;
  };
  std::set<std::string> sheafSorts;
  std::map<std::string, SortPtr> constants;
  std::map<std::string, std::vector<FnSig>> functions;  // overloaded by argument sorts
  std::set<std::string> nuclei;
  std::set<std::string> ringSorts;
  std::optional<std::string> defaultRingSort;
  std::optional<int> schemaBoundDefault;
  std::map<std::string, SortPtr> freeVars;
};

FormulaPtr parse_formula(const std::string& text, const SymbolTable& symtab);
std::string print_formula(const Formula& f);
std::string print_term(const Term& t);

std::set<std::pair<std::string, std::string>> free_vars(const Formula& f);  // (name, sort string)
FormulaPtr substitute(const Formula& f, const std::string& v, TermPtr t);

bool is_geometric(const Formula& f);
bool is_geometric_implication(const Formula& f);

struct TranslationResult {
  FormulaPtr formula;
  bool elidedGrayBoxes;
};

TranslationResult box_translate(const Formula& f, const std::string& nucleusName, bool elideGray);
TranslationResult negneg_translate(const Formula& f, bool elideGray = true);

}  // namespace toposforge
