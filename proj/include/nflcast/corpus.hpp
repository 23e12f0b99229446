#pragma once

#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nflcast/io.hpp"
#include "nflcast/types.hpp"

namespace nflcast::corpus {

// Returns the team iff the hashtags in the tweet's lowercased tokens match
// exactly one team; tweets matching zero or several teams are dropped.
std::optional<std::string> assign_team(const TweetRecord& tweet,
                                       const HashtagLexicon& lexicon);

// Window tags for a tweet at time t given the assigned team's surrounding
// kickoffs. All interval boundaries are inclusive.
//   weekly:   (no prev or t >= prev+12h) and next exists and t <= next-1h
//   pregame:  next exists and next-24h <= t <= next-1h
//   postgame: prev exists and prev+4h <= t <= prev+28h
std::set<Window> tag_windows(Epoch t, std::optional<Epoch> prev_kickoff,
                             std::optional<Epoch> next_kickoff);

// Records which games and tweet aggregates a backtest fold touched, so the
// no-future-information property can be checked after the fact.
struct AccessLog {
  enum class Phase { Prep, Test };
  enum class Kind { History, Label };
  struct GameRead {
    int fold_k;
    Phase phase;
    Kind kind;
    int season;
    int week;
    std::string game_id;
  };
  struct TweetRead {
    int fold_k;
    Phase phase;
    std::string game_id;
    Epoch max_tweet_ts;  // latest tweet timestamp aggregated; min() if none
    Epoch kickoff;       // kickoff of the game the aggregate belongs to
  };

  void record_game(int fold_k, Phase phase, Kind kind, const GameRecord& g);
  void record_tweets(int fold_k, Phase phase, const std::string& game_id,
                     Epoch max_ts, Epoch kickoff);

  std::mutex mu;
  std::vector<GameRead> game_reads;
  std::vector<TweetRead> tweet_reads;
};

struct AccessContext {
  AccessLog* log = nullptr;
  int fold_k = 0;
  AccessLog::Phase phase = AccessLog::Phase::Prep;
};

struct WeeklyAggregate {
  int tweet_count = 0;
  Epoch max_ts = std::numeric_limits<Epoch>::min();
  std::map<std::string, int> token_counts;  // token occurrences, original case
};

struct PostgameTweet {
  std::string tweet_id;
  int game_idx = -1;
  Side side = Side::Home;
  Epoch timestamp = 0;
  std::vector<std::string> token_set;  // sorted unique, original case
};

struct WindowCounts {
  long weekly = 0;
  long pregame = 0;
  long postgame = 0;
};

struct IngestStats {
  size_t total = 0;
  size_t malformed = 0;
  size_t cjk_dropped = 0;
  size_t zero_team = 0;
  size_t multi_team = 0;
  size_t assigned = 0;
  size_t no_window = 0;
  size_t duplicate_ids = 0;
  size_t missing_text = 0;  // idlist entries without a matching text record
  std::map<int, WindowCounts> per_season;
};

struct CorpusOptions {
  bool cjk_filter = false;
  bool strict = false;
  bool keep_postgame = true;
};

class CorpusIndex;

// Single-writer builder; the built index is immutable and safe for
// concurrent reads.
class CorpusBuilder {
 public:
  CorpusBuilder(std::vector<GameRecord> games, HashtagLexicon lexicon,
                CorpusOptions options = {});

  // Hashtag-assignment path: tokenizes, assigns, tags and aggregates.
  void add(TweetRecord&& tweet);

  // Released-dataset path: assignment and window come from the id list;
  // `text` may be null when only the id is known (counts still accrue).
  void add_idlist_entry(const io::IdListEntry& entry, const TweetRecord* text);

  void note_malformed(size_t n) {
    stats_.total += n;
    stats_.malformed += n;
  }

  CorpusIndex build() &&;

 private:
  friend class CorpusIndex;
  void validate_games() const;
  void accumulate(const std::string& team, const TweetRecord& tweet,
                  const std::set<Window>& tags, int next_idx, int prev_idx);

  std::vector<GameRecord> games_;
  HashtagLexicon lexicon_;
  CorpusOptions options_;
  std::unordered_map<std::string, int> id_to_idx_;
  std::unordered_map<std::string, std::string> tag_to_team_;
  // full-timeline schedule per team: (kickoff, game index), sorted
  std::map<std::string, std::vector<std::pair<Epoch, int>>> sched_;
  std::vector<WeeklyAggregate> weekly_[2];  // [side][game]
  std::vector<int> pregame_count_[2];
  std::vector<int> postgame_count_[2];
  std::vector<PostgameTweet> postgame_tweets_;
  std::unordered_set<std::string> seen_ids_;  // strict mode only
  IngestStats stats_;
};

class CorpusIndex {
 public:
  const std::vector<GameRecord>& games() const { return games_; }
  const GameRecord& game(int idx) const { return games_[idx]; }
  int game_index(const std::string& game_id) const;  // -1 when unknown
  const std::vector<int>& seasons() const { return seasons_; }

  // Game indices for (season, week), week-ascending team order.
  std::vector<int> week_games(int season, int week) const;

  // The team's games in a season with week < before_week, week ascending.
  // Logs a History read per returned game.
  std::vector<const GameRecord*> prior_games(const std::string& team, int season,
                                             int before_week,
                                             const AccessContext& ctx = {}) const;

  // Team's season games (week ascending) as game indices.
  const std::vector<int>& team_season_games(const std::string& team, int season) const;

  Side side_of(const GameRecord& g, const std::string& team) const;

  // Count of weekly tweets assigned to `team` whose next game is `game_id`.
  int weekly_volume(const std::string& team, const std::string& game_id,
                    const AccessContext& ctx = {}) const;
  int weekly_volume_at(int game_idx, Side side, const AccessContext& ctx = {}) const;

  const WeeklyAggregate& weekly_aggregate(int game_idx, Side side,
                                          const AccessContext& ctx = {}) const;

  const std::vector<PostgameTweet>& postgame_tweets() const { return postgame_tweets_; }

  // Tweet-presence counts of unigrams over postgame tweets of (season, week).
  const std::map<std::string, int>& postgame_week_support(int season, int week) const;

  const IngestStats& stats() const { return stats_; }

  // Serialized aggregate index for audit (JSON).
  void dump(const std::string& path) const;

 private:
  friend class CorpusBuilder;
  void log_tweet_read(const AccessContext& ctx, int game_idx, Side side) const;

  std::vector<GameRecord> games_;
  std::unordered_map<std::string, int> id_to_idx_;
  std::vector<int> seasons_;
  std::map<std::pair<int, int>, std::vector<int>> by_week_;
  std::map<std::pair<std::string, int>, std::vector<int>> team_season_;
  std::vector<WeeklyAggregate> weekly_[2];
  std::vector<int> pregame_count_[2];
  std::vector<int> postgame_count_[2];
  std::vector<PostgameTweet> postgame_tweets_;
  std::map<std::pair<int, int>, std::map<std::string, int>> pg_support_;
  IngestStats stats_;
};

// Convenience ingestion front-ends used by the CLI and tests.
CorpusIndex build_from_files(const std::string& games_path,
                             const std::string& tweets_path,
                             const std::string& lexicon_path,
                             CorpusOptions options = {});
CorpusIndex build_from_idlist_files(const std::string& games_path,
                                    const std::string& idlist_path,
                                    const std::string& tweets_path,  // may be ""
                                    CorpusOptions options = {});

}  // namespace nflcast::corpus
