#include "hategraph/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "hategraph/io.hpp"

namespace hategraph {

int UserCorpus::user_index(std::string_view id) const {
  auto it = std::lower_bound(users.begin(), users.end(), id);
  if (it == users.end() || *it != id) return -1;
  return static_cast<int>(it - users.begin());
}

std::vector<std::int64_t> UserCorpus::post_counts() const {
  std::vector<std::int64_t> out(users.size());
  for (std::size_t i = 0; i < posts.size(); ++i)
    out[i] = static_cast<std::int64_t>(posts[i].size());
  return out;
}

namespace {

// Western-style ASCII emoticons, matched against whole raw tokens.
const std::unordered_set<std::string>& emoticon_table() {
  static const std::unordered_set<std::string> table = {
      ":)",  ":-)", ":(",  ":-(", ":D",  ":-D", ";)",  ";-)", ":P",  ":-P",
      ":p",  ":-p", ":/",  ":-/", ":\\", ":-\\", ":|",  ":-|", ":o",  ":O",
      ":-o", ":-O", "=)",  "=(",  ":'(", ":'-(", "xD",  "XD",  "xd",  "<3",
      "</3", ":3",  "^^",  "^_^", "o_O", "O_o", "o_o", "-_-", "T_T", ";_;",
      ":*",  ":-*", "D:",  ":s",  ":S",  ":$",  "8)",  "8-)", "B)",  "B-)"};
  return table;
}

bool is_emoji_codepoint(char32_t cp) {
  return (cp >= 0x1F000 && cp <= 0x1FAFF) ||  // emoji & pictographs
         (cp >= 0x2600 && cp <= 0x27BF) ||    // misc symbols, dingbats
         (cp >= 0x2B00 && cp <= 0x2BFF) ||    // arrows & stars
         cp == 0xFE0F || cp == 0x200D ||      // variation selector, ZWJ
         cp == 0x20E3;                        // keycap
}

// Minimal UTF-8 walk; invalid sequences are dropped byte by byte.
void strip_emoji_and_controls(const std::string& in, std::string& out) {
  out.clear();
  std::size_t i = 0;
  while (i < in.size()) {
    unsigned char b = static_cast<unsigned char>(in[i]);
    std::size_t len = 1;
    char32_t cp = b;
    if (b >= 0xF0) len = 4;
    else if (b >= 0xE0) len = 3;
    else if (b >= 0xC0) len = 2;
    if (len > 1) {
      if (i + len > in.size()) {
        ++i;
        continue;
      }
      cp = b & (0xFF >> (len + 1));
      bool ok = true;
      for (std::size_t j = 1; j < len; ++j) {
        unsigned char c = static_cast<unsigned char>(in[i + j]);
        if ((c & 0xC0) != 0x80) {
          ok = false;
          break;
        }
        cp = (cp << 6) | (c & 0x3F);
      }
      if (!ok) {
        ++i;
        continue;
      }
    }
    if ((cp < 0x20 && cp != '\t' && cp != '\n') || cp == 0x7F || is_emoji_codepoint(cp)) {
      i += len;
      continue;
    }
    out.append(in, i, len);
    i += len;
  }
}

bool is_url(std::string_view t) {
  return t.starts_with("http://") || t.starts_with("https://") || t.starts_with("www.");
}

constexpr std::string_view kTrimPunct = "!\"$%&'()*+,-./:;<=>?[]\\^_`{|}~";

std::string clean_token(std::string_view raw) {
  std::size_t b = 0, e = raw.size();
  while (b < e && kTrimPunct.find(raw[b]) != std::string_view::npos) ++b;
  while (e > b && kTrimPunct.find(raw[e - 1]) != std::string_view::npos) --e;
  std::string t(raw.substr(b, e - b));
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return t;
}

std::vector<std::string> tokenize(std::string_view text, bool keep_hashtags,
                                  std::vector<std::string>* hashtags_out) {
  std::vector<std::string> out;
  std::string scrubbed;
  strip_emoji_and_controls(std::string(text), scrubbed);
  std::size_t i = 0;
  const std::string& s = scrubbed;
  auto handle_hashtag = [&](std::string_view body) {
    std::string tag = clean_token(body);
    if (tag.empty()) return;
    if (hashtags_out) hashtags_out->push_back(tag);
    if (keep_hashtags) out.push_back(std::move(tag));
  };
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) {
      std::string_view raw(s.data() + i, j - i);
      i = j;
      if (emoticon_table().count(std::string(raw))) continue;
      if (raw[0] == '#') {
        handle_hashtag(raw.substr(1));
        continue;
      }
      std::string t = clean_token(raw);
      if (t.empty()) continue;
      if (emoticon_table().count(t)) continue;  // emoticon exposed by trimming
      if (is_url(t) || t[0] == '@') continue;
      if (t[0] == '#') {
        handle_hashtag(std::string_view(t).substr(1));
        continue;
      }
      out.push_back(std::move(t));
    } else {
      i = j;
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> preprocess(std::string_view text) {
  return tokenize(text, false, nullptr);
}

std::vector<std::string> preprocess_keep_hashtags(std::string_view text) {
  return tokenize(text, true, nullptr);
}

std::vector<std::string> extract_hashtags(std::string_view text) {
  std::vector<std::string> tags;
  tokenize(text, false, &tags);
  return tags;
}

UserCorpus load_posts_jsonl(const std::string& path) {
  std::vector<std::string> lines = read_lines(path);
  std::map<std::string, std::vector<Post>> by_user;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[ln]);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(ln + 1) +
                               ": bad JSON: " + e.what());
    }
    if (!j.contains("user") || !j["user"].is_string() || !j.contains("ts") ||
        !j["ts"].is_number_integer() || !j.contains("text") || !j["text"].is_string())
      throw std::runtime_error(path + ":" + std::to_string(ln + 1) +
                               ": expected {user: str, ts: int, text: str}");
    Post p;
    p.ts = j["ts"].get<std::int64_t>();
    p.text = j["text"].get<std::string>();
    p.hashtags = extract_hashtags(p.text);
    by_user[j["user"].get<std::string>()].push_back(std::move(p));
  }
  UserCorpus corpus;
  for (auto& [user, posts] : by_user) {
    std::stable_sort(posts.begin(), posts.end(),
                     [](const Post& a, const Post& b) { return a.ts < b.ts; });
    corpus.users.push_back(user);
    corpus.posts.push_back(std::move(posts));
  }
  return corpus;
}

void save_posts_jsonl(const UserCorpus& corpus, const std::string& path) {
  std::string out;
  for (std::size_t u = 0; u < corpus.users.size(); ++u) {
    for (const Post& p : corpus.posts[u]) {
      nlohmann::json j;
      j["user"] = corpus.users[u];
      j["ts"] = p.ts;
      j["text"] = p.text;
      out += j.dump() + "\n";
    }
  }
  write_file(path, out);
}

std::vector<UserDocument> build_documents(const UserCorpus& corpus) {
  std::vector<UserDocument> docs;
  docs.reserve(corpus.users.size());
  for (std::size_t u = 0; u < corpus.users.size(); ++u) {
    UserDocument d;
    d.user = corpus.users[u];
    for (const Post& p : corpus.posts[u]) {
      std::vector<std::string> toks = preprocess(p.text);
      d.tokens.insert(d.tokens.end(), std::make_move_iterator(toks.begin()),
                      std::make_move_iterator(toks.end()));
    }
    d.empty_after_filter = d.tokens.empty();
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace hategraph
