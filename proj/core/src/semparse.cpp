#include "veriplan/semparse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "veriplan/error.hpp"

namespace veriplan {

namespace {

using Token = Template::Token;
using Piece = Template::Piece;

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Lowercases and splits into identifier and "," tokens. A comma directly
// followed by an ordering word is decorative ("sliced, and placed" reads the
// same as "sliced and placed"), so it is dropped.
std::vector<std::string> scan_text(std::string_view text) {
  std::vector<std::string> tokens;
  std::string word;
  const auto flush = [&] {
    if (!word.empty()) {
      tokens.push_back(word);
      word.clear();
    }
  };
  for (char raw : text) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (is_word_char(c)) {
      word += c;
    } else if (c == ',') {
      flush();
      tokens.emplace_back(",");
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == '.') {
      flush();
    } else {
      flush();
      tokens.push_back(std::string(1, c));  // unknown punctuation never matches
    }
  }
  flush();

  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "," && i + 1 < tokens.size() &&
        (tokens[i + 1] == "then" || tokens[i + 1] == "and" || tokens[i + 1] == "after" ||
         tokens[i + 1] == "before")) {
      continue;
    }
    out.push_back(tokens[i]);
  }
  return out;
}

struct Captures {
  std::string object;
  std::string receptacle;
  std::string relation;
};

bool token_matches(const Token& token, const std::string& word, Captures& captures) {
  switch (token.kind) {
    case Token::Kind::Lit:
      return word == token.text;
    case Token::Kind::Art:
      return word == "a" || word == "an" || word == "the";
    case Token::Kind::Obj:
      if (word == ",") return false;
      captures.object = word;
      return true;
    case Token::Kind::Recep:
      if (word == ",") return false;
      captures.receptacle = word;
      return true;
    case Token::Kind::Rel:
      if (relation_index(word) < 0) return false;
      captures.relation = word;
      return true;
  }
  return false;
}

bool match_pieces(const std::vector<Piece>& pieces, std::size_t piece_idx,
                  const std::vector<std::string>& words, std::size_t word_idx, Captures& captures) {
  if (piece_idx == pieces.size()) return word_idx == words.size();
  const Piece& piece = pieces[piece_idx];

  const auto try_tokens = [&]() -> bool {
    Captures saved = captures;
    std::size_t w = word_idx;
    for (const Token& token : piece.tokens) {
      if (w >= words.size() || !token_matches(token, words[w], captures)) {
        captures = saved;
        return false;
      }
      ++w;
    }
    if (match_pieces(pieces, piece_idx + 1, words, w, captures)) return true;
    captures = saved;
    return false;
  };

  if (try_tokens()) return true;
  if (piece.optional) return match_pieces(pieces, piece_idx + 1, words, word_idx, captures);
  return false;
}

Piece lit_piece(std::initializer_list<std::string> words) {
  Piece p;
  for (const std::string& w : words) p.tokens.push_back({Token::Kind::Lit, w});
  return p;
}

// Mirrors render_description: the mandatory verb (with the receptacle slots
// for place) plus an optional appliance tail.
void append_action_pieces(std::vector<Piece>& pieces, int action, bool gerund) {
  const ActionPhrase& phrase = action_phrase(action);
  const std::string verb{gerund ? phrase.gerund : phrase.past};
  if (kActions[static_cast<std::size_t>(action)] == "place") {
    Piece p;
    p.tokens.push_back({Token::Kind::Lit, verb});
    p.tokens.push_back({Token::Kind::Rel, ""});
    p.tokens.push_back({Token::Kind::Art, ""});
    p.tokens.push_back({Token::Kind::Recep, ""});
    pieces.push_back(std::move(p));
    return;
  }
  pieces.push_back(lit_piece({verb}));
  if (!phrase.appliance.empty()) {
    Piece tail;
    tail.optional = true;
    tail.tokens.push_back({Token::Kind::Lit, "in"});
    tail.tokens.push_back({Token::Kind::Art, ""});
    tail.tokens.push_back({Token::Kind::Lit, std::string(phrase.appliance)});
    pieces.push_back(std::move(tail));
  }
}

void append_group_pieces(std::vector<Piece>& pieces, const std::vector<int>& group, bool gerund) {
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (i) pieces.push_back(lit_piece({"and"}));
    append_action_pieces(pieces, group[i], gerund);
  }
}

Template build_template(const TaskShape& shape, DescriptionForm form) {
  Template t;
  t.shape = shape;
  const auto& groups = shape.groups;
  switch (form) {
    case DescriptionForm::then_chain: {
      t.pieces.push_back({{{Token::Kind::Obj, ""}}, false});
      t.pieces.push_back(lit_piece({"is"}));
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g) t.pieces.push_back(lit_piece({"then"}));
        append_group_pieces(t.pieces, groups[g], false);
      }
      break;
    }
    case DescriptionForm::after_pair: {
      t.pieces.push_back({{{Token::Kind::Obj, ""}}, false});
      t.pieces.push_back(lit_piece({"is"}));
      append_group_pieces(t.pieces, groups[1], false);
      t.pieces.push_back(lit_piece({"after"}));
      append_group_pieces(t.pieces, groups[0], true);
      break;
    }
    case DescriptionForm::before_pair: {
      t.pieces.push_back({{{Token::Kind::Obj, ""}}, false});
      t.pieces.push_back(lit_piece({"is"}));
      append_group_pieces(t.pieces, groups[0], false);
      t.pieces.push_back(lit_piece({"before"}));
      append_group_pieces(t.pieces, groups[1], true);
      break;
    }
    case DescriptionForm::goal: {
      for (std::size_t i = 0; i < groups[0].size(); ++i) {
        if (i) t.pieces.push_back(lit_piece({","}));
        t.pieces.push_back(lit_piece({std::string(action_phrase(groups[0][i]).adjective)}));
      }
      t.pieces.push_back({{{Token::Kind::Obj, ""}}, false});
      break;
    }
  }
  return t;
}

std::string token_text(const Token& token) {
  switch (token.kind) {
    case Token::Kind::Lit: return token.text;
    case Token::Kind::Obj: return "{obj}";
    case Token::Kind::Recep: return "{recep}";
    case Token::Kind::Art: return "{art}";
    case Token::Kind::Rel: return "{rel}";
  }
  return {};
}

Token token_from_text(const std::string& word) {
  if (word == "{obj}") return {Token::Kind::Obj, ""};
  if (word == "{recep}") return {Token::Kind::Recep, ""};
  if (word == "{art}") return {Token::Kind::Art, ""};
  if (word == "{rel}") return {Token::Kind::Rel, ""};
  return {Token::Kind::Lit, word};
}

}  // namespace

std::string Template::pattern_text() const {
  std::string out;
  for (const Piece& piece : pieces) {
    for (std::size_t i = 0; i < piece.tokens.size(); ++i) {
      const std::string word = token_text(piece.tokens[i]);
      if (!out.empty() && word != ",") out += ' ';
      if (piece.optional && i == 0) out += '[';
      out += word;
    }
    if (piece.optional) out += ']';
  }
  return out;
}

std::string Template::groups_text() const {
  std::string out;
  for (std::size_t g = 0; g < shape.groups.size(); ++g) {
    for (int action : shape.groups[g]) {
      if (!out.empty()) out += ' ';
      out += std::string(kActions[static_cast<std::size_t>(action)]) + ':' + std::to_string(g);
    }
  }
  return out;
}

TemplateRegistry TemplateRegistry::from_shapes(const std::vector<TaskShape>& shapes) {
  TemplateRegistry registry;
  for (const TaskShape& shape : shapes) registry.add_shape(shape);
  return registry;
}

void TemplateRegistry::add_shape(const TaskShape& shape) {
  for (DescriptionForm form : description_forms(shape)) {
    add_entry(build_template(shape, form));
  }
}

void TemplateRegistry::add_entry(Template entry) {
  for (const Template& existing : entries_) {
    if (existing.pieces == entry.pieces) {
      if (existing.shape == entry.shape) return;  // duplicate registration
      raise(Errc::invalid_argument,
            "pattern '" + entry.pattern_text() + "' is registered for two different shapes");
    }
  }
  entries_.push_back(std::move(entry));
}

const TemplateRegistry& TemplateRegistry::builtin() {
  static const TemplateRegistry registry = from_shapes(mutation_closure(default_task_pool()));
  return registry;
}

TemplateRegistry TemplateRegistry::load(std::istream& in) {
  TemplateRegistry registry;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      raise(Errc::syntax_error, "template line " + std::to_string(line_no) + " has no TAB");
    }
    const std::string pattern = line.substr(0, tab);
    const std::string groups = line.substr(tab + 1);

    Template entry;

    // Rebuild the shape from "action:group" pairs.
    std::map<int, std::vector<int>> by_group;
    std::istringstream gs(groups);
    std::string pair;
    while (gs >> pair) {
      const std::size_t colon = pair.find(':');
      if (colon == std::string::npos) {
        raise(Errc::syntax_error, "bad action:group pair '" + pair + "' on line " +
                                      std::to_string(line_no));
      }
      const int action = action_index(pair.substr(0, colon));
      if (action < 0) {
        raise(Errc::invalid_vocabulary, "unknown action '" + pair.substr(0, colon) + "' on line " +
                                            std::to_string(line_no));
      }
      const std::string index_text = pair.substr(colon + 1);
      int group_index = -1;
      const auto [ptr, ec] =
          std::from_chars(index_text.data(), index_text.data() + index_text.size(), group_index);
      if (ec != std::errc{} || ptr != index_text.data() + index_text.size() || group_index < 0) {
        raise(Errc::syntax_error,
              "bad group index '" + index_text + "' on line " + std::to_string(line_no));
      }
      by_group[group_index].push_back(action);
    }
    int expected = 0;
    for (auto& [index, group] : by_group) {
      if (index != expected++) {
        raise(Errc::syntax_error, "group ids must be contiguous from 0 on line " +
                                      std::to_string(line_no));
      }
      std::sort(group.begin(), group.end());
      entry.shape.groups.push_back(group);
    }
    if (entry.shape.groups.empty()) {
      raise(Errc::syntax_error, "no action groups on line " + std::to_string(line_no));
    }

    // Scan the pattern text; '[' ... ']' wraps an optional piece.
    Piece current;
    bool in_optional = false;
    const auto flush = [&] {
      if (!current.tokens.empty()) {
        current.optional = false;
        entry.pieces.push_back(current);
        current = Piece{};
      }
    };
    std::string word;
    const auto take_word = [&] {
      if (word.empty()) return;
      if (in_optional) {
        current.tokens.push_back(token_from_text(word));
      } else {
        entry.pieces.push_back({{token_from_text(word)}, false});
      }
      word.clear();
    };
    for (char c : pattern) {
      if (c == '[') {
        take_word();
        flush();
        in_optional = true;
      } else if (c == ']') {
        take_word();
        if (!in_optional || current.tokens.empty()) {
          raise(Errc::syntax_error, "unbalanced brackets on line " + std::to_string(line_no));
        }
        current.optional = true;
        entry.pieces.push_back(current);
        current = Piece{};
        in_optional = false;
      } else if (c == ' ') {
        take_word();
      } else if (c == ',') {
        take_word();
        if (in_optional) {
          current.tokens.push_back({Token::Kind::Lit, ","});
        } else {
          entry.pieces.push_back({{Token{Token::Kind::Lit, ","}}, false});
        }
      } else {
        word += c;
      }
    }
    take_word();
    if (in_optional) {
      raise(Errc::syntax_error, "unbalanced brackets on line " + std::to_string(line_no));
    }
    if (entry.pieces.empty()) {
      raise(Errc::syntax_error, "empty pattern on line " + std::to_string(line_no));
    }
    registry.add_entry(std::move(entry));
  }
  return registry;
}

TemplateRegistry TemplateRegistry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::invalid_argument, "cannot read template file '" + path + "'");
  return load(in);
}

std::string TemplateRegistry::to_tsv() const {
  std::string out;
  for (const Template& entry : entries_) {
    out += entry.pattern_text();
    out += '\t';
    out += entry.groups_text();
    out += '\n';
  }
  return out;
}

TemplateMatch TemplateRegistry::match(std::string_view text, const Lexicon& lexicon) const {
  const std::vector<std::string> words = scan_text(text);
  if (words.empty()) raise(Errc::no_template_match, "empty description");

  for (const Template& entry : entries_) {
    Captures captures;
    if (!match_pieces(entry.pieces, 0, words, 0, captures)) continue;

    if (lexicon.strict) {
      if (std::find(lexicon.objects.begin(), lexicon.objects.end(), captures.object) ==
          lexicon.objects.end()) {
        raise(Errc::unknown_object, "object '" + captures.object + "' is not in the lexicon");
      }
      if (!captures.receptacle.empty() &&
          std::find(lexicon.receptacles.begin(), lexicon.receptacles.end(), captures.receptacle) ==
              lexicon.receptacles.end()) {
        raise(Errc::unknown_object,
              "receptacle '" + captures.receptacle + "' is not in the lexicon");
      }
    }

    TemplateMatch result;
    result.entry = &entry;
    result.spec.shape = entry.shape;
    result.spec.object = captures.object;
    result.spec.receptacle = captures.receptacle;
    result.spec.relation = captures.relation;
    return result;
  }
  raise(Errc::no_template_match, "no template matches '" + std::string(text) + "'");
}

TaskGraph TemplateRegistry::parse(std::string_view text, const Lexicon& lexicon,
                                  QueryScheme scheme) const {
  return spec_graph(match(text, lexicon).spec, scheme);
}

TaskGraph parse_description(std::string_view text, const Lexicon& lexicon, QueryScheme scheme) {
  return TemplateRegistry::builtin().parse(text, lexicon, scheme);
}

std::vector<TaskShape> mutation_closure(const std::vector<TaskShape>& pool) {
  std::vector<TaskShape> out;
  std::set<std::string> names;
  const auto add = [&](const TaskShape& shape) {
    if (names.insert(shape.name()).second) out.push_back(shape);
  };

  for (const TaskShape& shape : pool) add(shape);
  const std::size_t pool_end = out.size();

  const auto valid = [](const TaskShape& shape) {
    int pick_group = -1, place_group = -1;
    for (std::size_t g = 0; g < shape.groups.size(); ++g) {
      for (int a : shape.groups[g]) {
        if (kActions[static_cast<std::size_t>(a)] == "pick") pick_group = static_cast<int>(g);
        if (kActions[static_cast<std::size_t>(a)] == "place") place_group = static_cast<int>(g);
      }
    }
    return pick_group < 0 || place_group < 0 || pick_group < place_group;
  };

  for (std::size_t s = 0; s < pool_end; ++s) {
    const TaskShape shape = out[s];

    // Adjacent group swaps: how "reordered" negatives perturb a description.
    for (std::size_t g = 0; g + 1 < shape.groups.size(); ++g) {
      TaskShape swapped = shape;
      std::swap(swapped.groups[g], swapped.groups[g + 1]);
      if (valid(swapped)) add(swapped);
    }

    // Single-action substitutions, as used by "substituted" negatives.
    for (std::size_t g = 0; g < shape.groups.size(); ++g) {
      for (std::size_t i = 0; i < shape.groups[g].size(); ++i) {
        for (int replacement = 0; replacement < static_cast<int>(kActions.size()); ++replacement) {
          if (shape.contains(replacement)) continue;
          TaskShape mutated = shape;
          mutated.groups[g][i] = replacement;
          std::sort(mutated.groups[g].begin(), mutated.groups[g].end());
          if (valid(mutated)) add(mutated);
        }
      }
    }
  }
  return out;
}

}  // namespace veriplan
