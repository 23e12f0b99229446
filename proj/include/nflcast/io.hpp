#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nflcast/types.hpp"

namespace nflcast::io {

// games file: tab-separated, one game per line, header row with the fixed
// field names (home_interceptions_thrown etc.).
std::vector<GameRecord> load_games(const std::string& path);
void save_games(const std::string& path, const std::vector<GameRecord>& games);

// tweets file: one JSON object per line, {"tweet_id","timestamp","text"}.
// The sink is called once per parsed record (tokens not yet filled).
// Returns the number of records read. In strict mode a malformed line raises
// DataError with its line number; otherwise it is counted and skipped.
size_t for_each_tweet(const std::string& path,
                      const std::function<void(TweetRecord&&)>& sink,
                      bool strict = false, size_t* malformed = nullptr);

void save_tweets(const std::string& path, const std::vector<TweetRecord>& tweets);

// lexicon file: JSON object {team: [hashtags...]}. Validates '#' prefixes and
// pairwise disjointness.
HashtagLexicon load_lexicon(const std::string& path);
void save_lexicon(const std::string& path, const HashtagLexicon& lexicon);

// Released-dataset import: tab-separated game_id, team, window, tweet_id with
// a header row. One tweet id per line.
struct IdListEntry {
  std::string game_id;
  std::string team;
  Window window;
  std::string tweet_id;
};
std::vector<IdListEntry> load_idlists(const std::string& path);
void save_idlists(const std::string& path, const std::vector<IdListEntry>& entries);

std::vector<std::string> split(const std::string& line, char sep);

// FNV-1a, used for config fingerprints in report headers.
std::uint64_t fnv1a(const std::string& s);

}  // namespace nflcast::io
