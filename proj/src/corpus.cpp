#include "nflcast/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "nflcast/text.hpp"

namespace nflcast::corpus {

std::optional<std::string> assign_team(const TweetRecord& tweet,
                                       const HashtagLexicon& lexicon) {
  const std::string* found = nullptr;
  for (const auto& [team, tags] : lexicon) {
    for (const auto& tok : tweet.tokens_lower) {
      if (tok.size() > 1 && tok[0] == '#' && tags.count(tok)) {
        if (found && *found != team) return std::nullopt;  // two teams
        found = &team;
        break;
      }
    }
  }
  if (!found) return std::nullopt;
  return *found;
}

std::set<Window> tag_windows(Epoch t, std::optional<Epoch> prev_kickoff,
                             std::optional<Epoch> next_kickoff) {
  std::set<Window> tags;
  const bool after_prev = !prev_kickoff || t >= *prev_kickoff + 12 * kHour;
  if (next_kickoff) {
    if (after_prev && t <= *next_kickoff - kHour) tags.insert(Window::Weekly);
    if (t >= *next_kickoff - 24 * kHour && t <= *next_kickoff - kHour)
      tags.insert(Window::Pregame);
  }
  if (prev_kickoff && t >= *prev_kickoff + 4 * kHour && t <= *prev_kickoff + 28 * kHour)
    tags.insert(Window::Postgame);
  return tags;
}

void AccessLog::record_game(int fold_k, Phase phase, Kind kind, const GameRecord& g) {
  std::lock_guard<std::mutex> lock(mu);
  game_reads.push_back({fold_k, phase, kind, g.season, g.week, g.game_id});
}

void AccessLog::record_tweets(int fold_k, Phase phase, const std::string& game_id,
                              Epoch max_ts, Epoch kickoff) {
  std::lock_guard<std::mutex> lock(mu);
  tweet_reads.push_back({fold_k, phase, game_id, max_ts, kickoff});
}

CorpusBuilder::CorpusBuilder(std::vector<GameRecord> games, HashtagLexicon lexicon,
                             CorpusOptions options)
    : games_(std::move(games)), lexicon_(std::move(lexicon)), options_(options) {
  validate_games();
  for (int i = 0; i < static_cast<int>(games_.size()); ++i) {
    const auto& g = games_[i];
    id_to_idx_.emplace(g.game_id, i);
    sched_[g.home_team].emplace_back(g.kickoff, i);
    sched_[g.away_team].emplace_back(g.kickoff, i);
  }
  for (auto& [team, sched] : sched_) std::sort(sched.begin(), sched.end());
  for (const auto& [team, tags] : lexicon_) {
    for (const auto& tag : tags) tag_to_team_.emplace(tag, team);
  }
  for (int s = 0; s < 2; ++s) {
    weekly_[s].resize(games_.size());
    pregame_count_[s].assign(games_.size(), 0);
    postgame_count_[s].assign(games_.size(), 0);
  }
}

void CorpusBuilder::validate_games() const {
  std::set<std::string> ids;
  std::set<std::tuple<std::string, int, int>> team_weeks;
  for (const auto& g : games_) {
    if (!ids.insert(g.game_id).second)
      throw DataError("duplicate game_id: " + g.game_id);
    if (g.week < 1 || g.week > 17)
      throw DataError("game " + g.game_id + ": week out of range");
    if (g.home_team == g.away_team)
      throw DataError("game " + g.game_id + ": home == away");
    if (g.home_score < 0 || g.away_score < 0)
      throw DataError("game " + g.game_id + ": negative score");
    for (const auto& team : {g.home_team, g.away_team}) {
      if (!team_weeks.insert({team, g.season, g.week}).second)
        throw DataError("team " + team + " plays twice in season " +
                        std::to_string(g.season) + " week " + std::to_string(g.week));
    }
  }
}

void CorpusBuilder::accumulate(const std::string& team, const TweetRecord& tweet,
                               const std::set<Window>& tags, int next_idx,
                               int prev_idx) {
  if (tags.empty()) {
    ++stats_.no_window;
    return;
  }
  for (Window w : tags) {
    int gi = (w == Window::Postgame) ? prev_idx : next_idx;
    if (gi < 0) continue;
    const GameRecord& g = games_[gi];
    const int side = (g.home_team == team) ? 0 : 1;
    auto& counts = stats_.per_season[g.season];
    switch (w) {
      case Window::Weekly: {
        ++counts.weekly;
        auto& agg = weekly_[side][gi];
        ++agg.tweet_count;
        agg.max_ts = std::max(agg.max_ts, tweet.timestamp);
        for (const auto& tok : tweet.tokens) ++agg.token_counts[tok];
        break;
      }
      case Window::Pregame:
        ++counts.pregame;
        ++pregame_count_[side][gi];
        break;
      case Window::Postgame: {
        ++counts.postgame;
        ++postgame_count_[side][gi];
        if (options_.keep_postgame && !tweet.tokens.empty()) {
          PostgameTweet pt;
          pt.tweet_id = tweet.tweet_id;
          pt.game_idx = gi;
          pt.side = side == 0 ? Side::Home : Side::Away;
          pt.timestamp = tweet.timestamp;
          pt.token_set.assign(tweet.tokens.begin(), tweet.tokens.end());
          std::sort(pt.token_set.begin(), pt.token_set.end());
          pt.token_set.erase(std::unique(pt.token_set.begin(), pt.token_set.end()),
                             pt.token_set.end());
          postgame_tweets_.push_back(std::move(pt));
        }
        break;
      }
    }
  }
}

void CorpusBuilder::add(TweetRecord&& tweet) {
  ++stats_.total;
  if (options_.strict) {
    if (!seen_ids_.insert(tweet.tweet_id).second) {
      ++stats_.duplicate_ids;
      throw DataError("duplicate tweet_id: " + tweet.tweet_id);
    }
  }
  if (options_.cjk_filter && !keep_non_cjk(tweet.text)) {
    ++stats_.cjk_dropped;
    return;
  }
  if (tweet.tokens.empty()) tokenize_tweet(tweet);

  // count how many distinct teams match to split the drop statistics
  std::set<std::string> matched;
  for (const auto& tok : tweet.tokens_lower) {
    if (tok.size() > 1 && tok[0] == '#') {
      auto it = tag_to_team_.find(tok);
      if (it != tag_to_team_.end()) matched.insert(it->second);
    }
  }
  if (matched.empty()) {
    ++stats_.zero_team;
    return;
  }
  if (matched.size() > 1) {
    ++stats_.multi_team;
    return;
  }
  const std::string& team = *matched.begin();
  ++stats_.assigned;

  auto sit = sched_.find(team);
  if (sit == sched_.end() || sit->second.empty()) {
    ++stats_.no_window;
    return;
  }
  const auto& sched = sit->second;
  // first kickoff strictly after t
  auto up = std::upper_bound(sched.begin(), sched.end(),
                             std::make_pair(tweet.timestamp,
                                            std::numeric_limits<int>::max()));
  std::optional<Epoch> prev, next;
  int prev_idx = -1, next_idx = -1;
  if (up != sched.begin()) {
    prev = std::prev(up)->first;
    prev_idx = std::prev(up)->second;
  }
  if (up != sched.end()) {
    next = up->first;
    next_idx = up->second;
  }
  accumulate(team, tweet, tag_windows(tweet.timestamp, prev, next), next_idx, prev_idx);
}

void CorpusBuilder::add_idlist_entry(const io::IdListEntry& entry,
                                     const TweetRecord* text) {
  ++stats_.total;
  auto it = id_to_idx_.find(entry.game_id);
  if (it == id_to_idx_.end()) {
    if (options_.strict) throw DataError("idlist references unknown game: " + entry.game_id);
    ++stats_.malformed;
    return;
  }
  const GameRecord& g = games_[it->second];
  if (!g.has_team(entry.team)) {
    if (options_.strict)
      throw DataError("idlist: team " + entry.team + " not in game " + entry.game_id);
    ++stats_.malformed;
    return;
  }
  ++stats_.assigned;
  TweetRecord tweet;
  if (text) {
    tweet = *text;
    if (tweet.tokens.empty()) tokenize_tweet(tweet);
  } else {
    tweet.tweet_id = entry.tweet_id;
    // latest legal weekly instant; only the count matters for id-only entries
    tweet.timestamp = g.kickoff - kHour;
    ++stats_.missing_text;
  }
  std::set<Window> tags{entry.window};
  const int gi = it->second;
  accumulate(entry.team, tweet, tags,
             entry.window == Window::Postgame ? -1 : gi,
             entry.window == Window::Postgame ? gi : -1);
}

CorpusIndex CorpusBuilder::build() && {
  CorpusIndex idx;
  idx.games_ = std::move(games_);
  idx.id_to_idx_ = std::move(id_to_idx_);
  for (int s = 0; s < 2; ++s) {
    idx.weekly_[s] = std::move(weekly_[s]);
    idx.pregame_count_[s] = std::move(pregame_count_[s]);
    idx.postgame_count_[s] = std::move(postgame_count_[s]);
  }
  idx.postgame_tweets_ = std::move(postgame_tweets_);
  idx.stats_ = std::move(stats_);

  std::set<int> seasons;
  for (int i = 0; i < static_cast<int>(idx.games_.size()); ++i) {
    const auto& g = idx.games_[i];
    seasons.insert(g.season);
    idx.by_week_[{g.season, g.week}].push_back(i);
    idx.team_season_[{g.home_team, g.season}].push_back(i);
    idx.team_season_[{g.away_team, g.season}].push_back(i);
  }
  idx.seasons_.assign(seasons.begin(), seasons.end());
  for (auto& [key, list] : idx.team_season_) {
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return idx.games_[a].week < idx.games_[b].week;
    });
  }
  for (const auto& pt : idx.postgame_tweets_) {
    const auto& g = idx.games_[pt.game_idx];
    auto& sup = idx.pg_support_[{g.season, g.week}];
    for (const auto& tok : pt.token_set) ++sup[tok];
  }
  return idx;
}

int CorpusIndex::game_index(const std::string& game_id) const {
  auto it = id_to_idx_.find(game_id);
  return it == id_to_idx_.end() ? -1 : it->second;
}

std::vector<int> CorpusIndex::week_games(int season, int week) const {
  auto it = by_week_.find({season, week});
  if (it == by_week_.end()) return {};
  return it->second;
}

std::vector<const GameRecord*> CorpusIndex::prior_games(const std::string& team,
                                                        int season, int before_week,
                                                        const AccessContext& ctx) const {
  std::vector<const GameRecord*> out;
  auto it = team_season_.find({team, season});
  if (it == team_season_.end()) return out;
  for (int gi : it->second) {
    const auto& g = games_[gi];
    if (g.week >= before_week) break;
    if (ctx.log)
      ctx.log->record_game(ctx.fold_k, ctx.phase, AccessLog::Kind::History, g);
    out.push_back(&g);
  }
  return out;
}

const std::vector<int>& CorpusIndex::team_season_games(const std::string& team,
                                                       int season) const {
  static const std::vector<int> kEmpty;
  auto it = team_season_.find({team, season});
  return it == team_season_.end() ? kEmpty : it->second;
}

Side CorpusIndex::side_of(const GameRecord& g, const std::string& team) const {
  if (g.home_team == team) return Side::Home;
  if (g.away_team == team) return Side::Away;
  throw DataError("team " + team + " not in game " + g.game_id);
}

void CorpusIndex::log_tweet_read(const AccessContext& ctx, int game_idx,
                                 Side side) const {
  if (!ctx.log) return;
  const auto& agg = weekly_[side == Side::Home ? 0 : 1][game_idx];
  ctx.log->record_tweets(ctx.fold_k, ctx.phase, games_[game_idx].game_id, agg.max_ts,
                         games_[game_idx].kickoff);
}

int CorpusIndex::weekly_volume(const std::string& team, const std::string& game_id,
                               const AccessContext& ctx) const {
  const int gi = game_index(game_id);
  if (gi < 0) throw DataError("weekly_volume: unknown game_id " + game_id);
  return weekly_volume_at(gi, side_of(games_[gi], team), ctx);
}

int CorpusIndex::weekly_volume_at(int game_idx, Side side,
                                  const AccessContext& ctx) const {
  log_tweet_read(ctx, game_idx, side);
  return weekly_[side == Side::Home ? 0 : 1][game_idx].tweet_count;
}

const WeeklyAggregate& CorpusIndex::weekly_aggregate(int game_idx, Side side,
                                                     const AccessContext& ctx) const {
  log_tweet_read(ctx, game_idx, side);
  return weekly_[side == Side::Home ? 0 : 1][game_idx];
}

const std::map<std::string, int>& CorpusIndex::postgame_week_support(int season,
                                                                     int week) const {
  static const std::map<std::string, int> kEmpty;
  auto it = pg_support_.find({season, week});
  return it == pg_support_.end() ? kEmpty : it->second;
}

void CorpusIndex::dump(const std::string& path) const {
  nlohmann::json j;
  j["n_games"] = games_.size();
  nlohmann::json per_game = nlohmann::json::array();
  for (int i = 0; i < static_cast<int>(games_.size()); ++i) {
    const auto& g = games_[i];
    nlohmann::json e;
    e["game_id"] = g.game_id;
    e["weekly_home"] = weekly_[0][i].tweet_count;
    e["weekly_away"] = weekly_[1][i].tweet_count;
    e["pregame_home"] = pregame_count_[0][i];
    e["pregame_away"] = pregame_count_[1][i];
    e["postgame_home"] = postgame_count_[0][i];
    e["postgame_away"] = postgame_count_[1][i];
    per_game.push_back(std::move(e));
  }
  j["games"] = std::move(per_game);
  nlohmann::json seasons = nlohmann::json::object();
  for (const auto& [season, wc] : stats_.per_season) {
    seasons[std::to_string(season)] = {
        {"weekly", wc.weekly}, {"pregame", wc.pregame}, {"postgame", wc.postgame}};
  }
  j["window_counts"] = std::move(seasons);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

CorpusIndex build_from_files(const std::string& games_path,
                             const std::string& tweets_path,
                             const std::string& lexicon_path, CorpusOptions options) {
  CorpusBuilder builder(io::load_games(games_path), io::load_lexicon(lexicon_path),
                        options);
  size_t malformed = 0;
  io::for_each_tweet(
      tweets_path, [&](TweetRecord&& t) { builder.add(std::move(t)); },
      options.strict, &malformed);
  builder.note_malformed(malformed);
  return std::move(builder).build();
}

CorpusIndex build_from_idlist_files(const std::string& games_path,
                                    const std::string& idlist_path,
                                    const std::string& tweets_path,
                                    CorpusOptions options) {
  CorpusBuilder builder(io::load_games(games_path), HashtagLexicon{}, options);
  std::unordered_map<std::string, TweetRecord> texts;
  if (!tweets_path.empty()) {
    io::for_each_tweet(
        tweets_path,
        [&](TweetRecord&& t) { texts.emplace(t.tweet_id, std::move(t)); },
        options.strict);
  }
  for (const auto& e : io::load_idlists(idlist_path)) {
    auto it = texts.find(e.tweet_id);
    builder.add_idlist_entry(e, it == texts.end() ? nullptr : &it->second);
  }
  return std::move(builder).build();
}

}  // namespace nflcast::corpus
