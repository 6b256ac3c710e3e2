#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "veriplan/task_graph.hpp"
#include "veriplan/task_shape.hpp"

namespace veriplan {

// Gate applied to slot captures. strict rejects objects and receptacles
// outside the lists; lenient admits any well-formed identifier.
struct Lexicon {
  std::vector<std::string> objects;
  std::vector<std::string> receptacles;
  bool strict = false;
};

// One registered sentence pattern. Tokens are literals or slots; bracketed
// runs are optional, which is how full and appliance-free phrasings share an
// entry ("heated [in {art} microwave]" matches both "heated in a microwave"
// and "heated").
struct Template {
  struct Token {
    enum class Kind { Lit, Obj, Recep, Art, Rel };
    Kind kind = Kind::Lit;
    std::string text;  // literal word, or "," for the goal-form separator

    bool operator==(const Token&) const = default;
  };
  struct Piece {
    std::vector<Token> tokens;
    bool optional = false;

    bool operator==(const Piece&) const = default;
  };

  std::vector<Piece> pieces;
  TaskShape shape;

  std::string pattern_text() const;
  std::string groups_text() const;
};

struct TemplateMatch {
  TaskSpec spec;            // relation/receptacle filled when place is present
  const Template* entry = nullptr;
};

class TemplateRegistry {
 public:
  // Entries for every form of every given shape.
  static TemplateRegistry from_shapes(const std::vector<TaskShape>& shapes);

  // The default task catalogue plus its single-substitution and
  // adjacent-group-swap neighborhood, so descriptions of perturbed tasks
  // still parse.
  static const TemplateRegistry& builtin();

  static TemplateRegistry load(std::istream& in);
  static TemplateRegistry load_file(const std::string& path);

  // One "pattern<TAB>action:group ..." line per template.
  std::string to_tsv() const;

  // Throws NoTemplateMatch when no registered pattern covers the text and
  // UnknownObject on strict lexicon misses.
  TemplateMatch match(std::string_view text, const Lexicon& lexicon) const;

  TaskGraph parse(std::string_view text, const Lexicon& lexicon,
                  QueryScheme scheme = QueryScheme::StateRelation) const;

  std::size_t size() const { return entries_.size(); }
  const std::vector<Template>& entries() const { return entries_; }

 private:
  void add_shape(const TaskShape& shape);
  void add_entry(Template entry);

  std::vector<Template> entries_;
};

// Parses against the built-in registry.
TaskGraph parse_description(std::string_view text, const Lexicon& lexicon,
                            QueryScheme scheme = QueryScheme::StateRelation);

// Shapes reachable from the pool by swapping adjacent groups or substituting
// one action; includes the pool itself. Deterministic order.
std::vector<TaskShape> mutation_closure(const std::vector<TaskShape>& pool);

}  // namespace veriplan
