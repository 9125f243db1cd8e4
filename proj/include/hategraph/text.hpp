#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hategraph {

struct Post {
  std::int64_t ts = 0;  // UTC seconds
  std::string text;
  std::vector<std::string> hashtags;  // lowercased, '#' stripped
};

// Per-user post lists, users sorted by id, posts sorted by timestamp.
struct UserCorpus {
  std::vector<std::string> users;
  std::vector<std::vector<Post>> posts;

  int user_index(std::string_view id) const;  // -1 when absent
  std::int64_t num_users() const { return static_cast<std::int64_t>(users.size()); }
  std::vector<std::int64_t> post_counts() const;
};

// JSONL ingestion: one {"user": str, "ts": int, "text": str} object per line.
UserCorpus load_posts_jsonl(const std::string& path);
void save_posts_jsonl(const UserCorpus& corpus, const std::string& path);

// Token filters applied to whitespace-split text: URLs, @-mentions, emoticons
// and emoji, and control characters are removed; tokens are lowercased and
// stripped of surrounding punctuation.
// The classifier profile also drops #hashtags; the analytics profile keeps
// them as plain tokens ('#' stripped).
std::vector<std::string> preprocess(std::string_view text);
std::vector<std::string> preprocess_keep_hashtags(std::string_view text);

std::vector<std::string> extract_hashtags(std::string_view text);

struct UserDocument {
  std::string user;
  std::vector<std::string> tokens;  // concatenated over posts in time order
  bool empty_after_filter = false;
};

std::vector<UserDocument> build_documents(const UserCorpus& corpus);

}  // namespace hategraph
