#include <doctest.h>

#include <filesystem>

#include "hategraph/io.hpp"
#include "hategraph/lexicon.hpp"
#include "hategraph/text.hpp"
#include "hategraph/word_embed.hpp"
#include "test_util.hpp"

using namespace hategraph;

TEST_CASE("preprocess strips urls, mentions, hashtags, emoticons") {
  auto toks = preprocess("Check https://x.y @bob #maga :) now");
  CHECK(toks == std::vector<std::string>{"check", "now"});
}

TEST_CASE("preprocess of empty text is empty") {
  CHECK(preprocess("").empty());
}

TEST_CASE("preprocess lowercases") {
  CHECK(preprocess("HeLLo WoRLD") == std::vector<std::string>{"hello", "world"});
}

TEST_CASE("preprocess drops emoji and control characters") {
  auto toks = preprocess("so cool \U0001F600 ❤️ done");
  CHECK(toks == std::vector<std::string>{"so", "cool", "done"});
}

TEST_CASE("preprocess keeps inner hyphens and apostrophes") {
  auto toks = preprocess("they don't like porch-monkey talk.");
  CHECK(toks == std::vector<std::string>{"they", "don't", "like", "porch-monkey", "talk"});
}

TEST_CASE("analytics profile keeps hashtags as tokens") {
  auto toks = preprocess_keep_hashtags("rally #MAGA now");
  CHECK(toks == std::vector<std::string>{"rally", "maga", "now"});
  CHECK(extract_hashtags("rally #MAGA now #maga!") ==
        std::vector<std::string>{"maga", "maga"});
}

TEST_CASE("preprocess is idempotent") {
  const char* samples[] = {
      "Check https://x.y @bob #maga :) now",
      "WWW.site.com (@wrapped) ':)' <3 1,000 well-known...",
      "HTTP://UPPER.example mixed CASE #Tag",
      "plain words only here",
  };
  for (const char* s : samples) {
    auto once = preprocess(s);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(preprocess(joined) == once);
  }
}

TEST_CASE("corpus ingestion sorts posts by timestamp and users by id") {
  namespace fs = std::filesystem;
  std::string dir = fs::temp_directory_path() / "hg_text_test";
  fs::create_directories(dir);
  std::string path = dir + "/posts.jsonl";
  write_file(path,
             R"({"user": "zed", "ts": 50, "text": "late post"})"
             "\n"
             R"({"user": "amy", "ts": 30, "text": "second #tag"})"
             "\n"
             R"({"user": "amy", "ts": 10, "text": "first"})"
             "\n");
  UserCorpus c = load_posts_jsonl(path);
  CHECK(c.users == std::vector<std::string>{"amy", "zed"});
  CHECK(c.posts[0][0].ts == 10);
  CHECK(c.posts[0][1].ts == 30);
  CHECK(c.posts[0][1].hashtags == std::vector<std::string>{"tag"});
  CHECK(c.user_index("zed") == 1);
  CHECK(c.user_index("nope") == -1);

  save_posts_jsonl(c, dir + "/copy.jsonl");
  UserCorpus c2 = load_posts_jsonl(dir + "/copy.jsonl");
  CHECK(c2.users == c.users);
  CHECK(c2.posts[0][0].text == c.posts[0][0].text);
}

TEST_CASE("corpus ingestion rejects malformed rows") {
  namespace fs = std::filesystem;
  std::string dir = fs::temp_directory_path() / "hg_text_test";
  fs::create_directories(dir);
  std::string path = dir + "/bad.jsonl";
  write_file(path, R"({"user": "amy", "text": "missing ts"})" "\n");
  CHECK_THROWS(load_posts_jsonl(path));
  write_file(path, "not json\n");
  CHECK_THROWS(load_posts_jsonl(path));
}

TEST_CASE("build_documents concatenates posts in time order") {
  UserCorpus c;
  c.users = {"amy"};
  c.posts = {{{10, "a b", {}}, {20, "c", {}}}};
  auto docs = build_documents(c);
  CHECK(docs[0].tokens == std::vector<std::string>{"a", "b", "c"});
  CHECK_FALSE(docs[0].empty_after_filter);
}

TEST_CASE("all-url posts produce an empty flagged document") {
  UserCorpus c;
  c.users = {"amy"};
  c.posts = {{{10, "https://a.b https://c.d", {}}}};
  auto docs = build_documents(c);
  CHECK(docs[0].tokens.empty());
  CHECK(docs[0].empty_after_filter);
}

TEST_CASE("mean_pool averages in-vocabulary vectors") {
  namespace fs = std::filesystem;
  std::string dir = fs::temp_directory_path() / "hg_text_test";
  fs::create_directories(dir);
  std::string path = dir + "/vecs.txt";
  write_file(path, "a 1 0\nb 0 1\nc 0.5 0.5\n");
  WordEmbeddings we = load_word_embeddings(path);
  CHECK(we.dim == 2);

  auto v = mean_pool({"a", "b"}, we);
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == doctest::Approx(0.5));

  auto oov = mean_pool({"zzz"}, we);
  CHECK(oov[0] == 0.0);
  CHECK(oov[1] == 0.0);

  // permutation invariance
  auto fwd = mean_pool({"a", "b", "c"}, we);
  auto rev = mean_pool({"c", "b", "a"}, we);
  CHECK(fwd[0] == doctest::Approx(rev[0]));
  CHECK(fwd[1] == doctest::Approx(rev[1]));
}

TEST_CASE("word embedding loader rejects inconsistent dimensions") {
  namespace fs = std::filesystem;
  std::string dir = fs::temp_directory_path() / "hg_text_test";
  fs::create_directories(dir);
  std::string path = dir + "/bad_vecs.txt";
  write_file(path, "a 1 0\nb 0 1 2\n");
  CHECK_THROWS(load_word_embeddings(path));
}

TEST_CASE("lexicon matches whole tokens, bare plurals, and phrases") {
  Lexicon lex = make_lexicon({{"blorg", "GroupA"}, {"dark nexus", "GroupB"}});
  CHECK(matches_any_term(preprocess("those blorgs again"), lex) == true);
  CHECK(matches_any_term(preprocess("that blorg again"), lex) == true);
  CHECK(matches_any_term(preprocess("blorgish tendencies"), lex) == false);
  CHECK(matches_any_term(preprocess("the dark nexus rises"), lex) == true);
  CHECK(matches_any_term(preprocess("dark skies nexus"), lex) == false);
  CHECK(matches_any_term(preprocess("BLORG!"), lex) == true);  // case, punct
}

TEST_CASE("lexicon csv round trip") {
  namespace fs = std::filesystem;
  std::string dir = fs::temp_directory_path() / "hg_text_test";
  fs::create_directories(dir);
  Lexicon lex = make_lexicon({{"blorg", "GroupA"}, {"zinter", "GroupB"}});
  save_lexicon_csv(lex, dir + "/lex.csv");
  Lexicon back = load_lexicon_csv(dir + "/lex.csv");
  CHECK(back.entries.size() == 2);
  CHECK(back.entries[0].raw == "blorg");
  CHECK(back.entries[0].community == "GroupA");
}
