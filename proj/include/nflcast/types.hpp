#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nflcast {

// Raised when input files or indices are malformed.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a caller passes an out-of-range parameter.
class ParamError : public std::invalid_argument {
 public:
  explicit ParamError(const std::string& msg) : std::invalid_argument(msg) {}
};

using Epoch = std::int64_t;  // UTC epoch seconds

constexpr Epoch kHour = 3600;
constexpr Epoch kDay = 24 * kHour;

struct TeamBoxStats {
  int interceptions_thrown = 0;
  int fumbles_lost = 0;
  int times_sacked = 0;
};

// One regular-season game with market lines and per-team box stats.
struct GameRecord {
  std::string game_id;
  int season = 0;
  int week = 0;  // 1..17
  std::string home_team;
  std::string away_team;
  Epoch kickoff = 0;
  int home_score = 0;
  int away_score = 0;
  double spread = 0.0;   // home handicap; added to the home score
  double ou_line = 0.0;  // total-points line
  TeamBoxStats home_stats;
  TeamBoxStats away_stats;

  int margin() const { return home_score - away_score; }
  int total_points() const { return home_score + away_score; }
  bool has_team(const std::string& team) const {
    return home_team == team || away_team == team;
  }
};

struct TweetRecord {
  std::string tweet_id;
  Epoch timestamp = 0;
  std::string text;
  std::vector<std::string> tokens;        // original case, punctuation-stripped
  std::vector<std::string> tokens_lower;  // lowercased, used for hashtag matching
};

// team identifier -> set of lowercase hashtags, pairwise disjoint across teams
using HashtagLexicon = std::map<std::string, std::set<std::string>>;

enum class Window { Weekly, Pregame, Postgame };

const char* window_name(Window w);

enum class Task { Winner, Wts, OverUnder };

const char* task_name(Task t);

enum class Side { Home, Away };

inline const char* side_name(Side s) { return s == Side::Home ? "home" : "away"; }

// Named sparse feature map for one game instance.
using FeatureVector = std::map<std::string, double>;

}  // namespace nflcast
