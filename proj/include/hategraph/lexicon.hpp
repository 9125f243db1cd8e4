#pragma once

#include <string>
#include <vector>

namespace hategraph {

// High-precision term -> target community table. Terms are stored as
// preprocessed token sequences; multi-word phrases match consecutively.
struct Lexicon {
  struct Entry {
    std::string raw;
    std::vector<std::string> tokens;
    std::string community;
  };
  std::vector<Entry> entries;

  bool empty() const { return entries.empty(); }
};

Lexicon load_lexicon_csv(const std::string& path);  // term,community per line
void save_lexicon_csv(const Lexicon& lex, const std::string& path);
Lexicon make_lexicon(const std::vector<std::pair<std::string, std::string>>& term_community);

// Whole-token (or whole-phrase) containment.
bool contains_phrase(const std::vector<std::string>& tokens,
                     const std::vector<std::string>& phrase);
bool matches_any_term(const std::vector<std::string>& tokens, const Lexicon& lex);

}  // namespace hategraph
