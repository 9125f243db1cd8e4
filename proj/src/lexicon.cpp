#include "hategraph/lexicon.hpp"

#include <stdexcept>

#include "hategraph/io.hpp"
#include "hategraph/text.hpp"

namespace hategraph {

Lexicon make_lexicon(const std::vector<std::pair<std::string, std::string>>& term_community) {
  Lexicon lex;
  for (const auto& [term, community] : term_community) {
    if (community.empty()) throw std::invalid_argument("lexicon community must be nonempty");
    Lexicon::Entry e;
    e.raw = term;
    e.tokens = preprocess_keep_hashtags(term);
    e.community = community;
    if (e.tokens.empty()) throw std::invalid_argument("lexicon term empty after preprocessing: " + term);
    for (const Lexicon::Entry& prev : lex.entries)
      if (prev.raw == e.raw) throw std::invalid_argument("duplicate lexicon term: " + term);
    lex.entries.push_back(std::move(e));
  }
  return lex;
}

Lexicon load_lexicon_csv(const std::string& path) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const std::string& line : read_lines(path)) {
    if (line.empty() || line[0] == '#') continue;
    if (line == "term,community") continue;  // optional header
    auto fields = split(line, ',');
    if (fields.size() != 2)
      throw std::runtime_error(path + ": expected 'term,community' rows");
    pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return make_lexicon(pairs);
}

void save_lexicon_csv(const Lexicon& lex, const std::string& path) {
  std::string out = "term,community\n";
  for (const auto& e : lex.entries)
    out += csv_escape(e.raw) + "," + csv_escape(e.community) + "\n";
  write_file(path, out);
}

namespace {

// whole-token equality; a bare plural of the phrase's final word also counts
bool token_matches(const std::string& token, const std::string& term, bool last) {
  if (token == term) return true;
  return last && token.size() == term.size() + 1 && token.back() == 's' &&
         token.compare(0, term.size(), term) == 0;
}

}  // namespace

bool contains_phrase(const std::vector<std::string>& tokens,
                     const std::vector<std::string>& phrase) {
  if (phrase.empty() || tokens.size() < phrase.size()) return false;
  for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < phrase.size(); ++j) {
      if (!token_matches(tokens[i + j], phrase[j], j + 1 == phrase.size())) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool matches_any_term(const std::vector<std::string>& tokens, const Lexicon& lex) {
  for (const auto& e : lex.entries)
    if (contains_phrase(tokens, e.tokens)) return true;
  return false;
}

}  // namespace hategraph
