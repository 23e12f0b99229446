#include "nflcast/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace nflcast::io {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return in;
}

double parse_double(const std::string& s, const std::string& what, size_t line_no) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s, const std::string& what, size_t line_no) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
  return v;
}

const std::vector<std::string> kGameColumns = {
    "game_id", "season", "week", "home_team", "away_team", "kickoff",
    "home_score", "away_score", "spread", "ou_line",
    "home_interceptions_thrown", "home_fumbles_lost", "home_times_sacked",
    "away_interceptions_thrown", "away_fumbles_lost", "away_times_sacked"};

}  // namespace

std::vector<GameRecord> load_games(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("games file is empty: " + path);
  const auto header = split(line, '\t');
  std::map<std::string, size_t> col;
  for (size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : kGameColumns) {
    if (!col.count(name)) throw DataError("games file missing column '" + name + "'");
  }

  std::vector<GameRecord> games;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() < header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(f.size()));
    }
    GameRecord g;
    g.game_id = f[col["game_id"]];
    g.season = static_cast<int>(parse_int(f[col["season"]], "season", line_no));
    g.week = static_cast<int>(parse_int(f[col["week"]], "week", line_no));
    g.home_team = f[col["home_team"]];
    g.away_team = f[col["away_team"]];
    g.kickoff = parse_int(f[col["kickoff"]], "kickoff", line_no);
    g.home_score = static_cast<int>(parse_int(f[col["home_score"]], "home_score", line_no));
    g.away_score = static_cast<int>(parse_int(f[col["away_score"]], "away_score", line_no));
    g.spread = parse_double(f[col["spread"]], "spread", line_no);
    g.ou_line = parse_double(f[col["ou_line"]], "ou_line", line_no);
    g.home_stats.interceptions_thrown =
        static_cast<int>(parse_int(f[col["home_interceptions_thrown"]], "stat", line_no));
    g.home_stats.fumbles_lost =
        static_cast<int>(parse_int(f[col["home_fumbles_lost"]], "stat", line_no));
    g.home_stats.times_sacked =
        static_cast<int>(parse_int(f[col["home_times_sacked"]], "stat", line_no));
    g.away_stats.interceptions_thrown =
        static_cast<int>(parse_int(f[col["away_interceptions_thrown"]], "stat", line_no));
    g.away_stats.fumbles_lost =
        static_cast<int>(parse_int(f[col["away_fumbles_lost"]], "stat", line_no));
    g.away_stats.times_sacked =
        static_cast<int>(parse_int(f[col["away_times_sacked"]], "stat", line_no));

    if (g.week < 1 || g.week > 17)
      throw DataError("line " + std::to_string(line_no) + ": week out of range");
    if (g.home_team == g.away_team)
      throw DataError("line " + std::to_string(line_no) + ": home == away");
    if (g.home_score < 0 || g.away_score < 0)
      throw DataError("line " + std::to_string(line_no) + ": negative score");
    games.push_back(std::move(g));
  }
  return games;
}

void save_games(const std::string& path, const std::vector<GameRecord>& games) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (size_t i = 0; i < kGameColumns.size(); ++i) {
    out << (i ? "\t" : "") << kGameColumns[i];
  }
  out << "\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  for (const auto& g : games) {
    out << g.game_id << '\t' << g.season << '\t' << g.week << '\t' << g.home_team
        << '\t' << g.away_team << '\t' << g.kickoff << '\t' << g.home_score << '\t'
        << g.away_score << '\t' << fmt(g.spread) << '\t' << fmt(g.ou_line) << '\t'
        << g.home_stats.interceptions_thrown << '\t' << g.home_stats.fumbles_lost
        << '\t' << g.home_stats.times_sacked << '\t'
        << g.away_stats.interceptions_thrown << '\t' << g.away_stats.fumbles_lost
        << '\t' << g.away_stats.times_sacked << '\n';
  }
}

size_t for_each_tweet(const std::string& path,
                      const std::function<void(TweetRecord&&)>& sink, bool strict,
                      size_t* malformed) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  size_t line_no = 0, count = 0, bad = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    bool ok = j.is_object() && j.contains("tweet_id") && j.contains("timestamp") &&
              j.contains("text") && j["timestamp"].is_number_integer();
    if (!ok) {
      if (strict)
        throw DataError("tweets line " + std::to_string(line_no) + ": malformed record");
      ++bad;
      continue;
    }
    TweetRecord t;
    t.tweet_id = j["tweet_id"].get<std::string>();
    t.timestamp = j["timestamp"].get<std::int64_t>();
    t.text = j["text"].get<std::string>();
    sink(std::move(t));
    ++count;
  }
  if (malformed) *malformed = bad;
  return count;
}

void save_tweets(const std::string& path, const std::vector<TweetRecord>& tweets) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (const auto& t : tweets) {
    json j{{"tweet_id", t.tweet_id}, {"timestamp", t.timestamp}, {"text", t.text}};
    out << j.dump() << "\n";
  }
}

HashtagLexicon load_lexicon(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("lexicon parse error: " + std::string(e.what()));
  }
  if (!j.is_object()) throw DataError("lexicon must be a JSON object");
  HashtagLexicon lex;
  std::map<std::string, std::string> owner;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_array()) throw DataError("lexicon team '" + it.key() + "' must map to an array");
    auto& tags = lex[it.key()];
    for (const auto& v : it.value()) {
      std::string tag = v.get<std::string>();
      for (char& c : tag)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (tag.empty() || tag[0] != '#')
        throw DataError("lexicon hashtag '" + tag + "' must begin with '#'");
      auto [o, inserted] = owner.emplace(tag, it.key());
      if (!inserted && o->second != it.key())
        throw DataError("hashtag '" + tag + "' assigned to both '" + o->second +
                        "' and '" + it.key() + "'");
      tags.insert(tag);
    }
  }
  return lex;
}

void save_lexicon(const std::string& path, const HashtagLexicon& lexicon) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  json j = json::object();
  for (const auto& [team, tags] : lexicon) j[team] = tags;
  out << j.dump(2) << "\n";
}

std::vector<IdListEntry> load_idlists(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("idlist file is empty: " + path);
  std::vector<IdListEntry> out;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    if (f.size() < 4)
      throw DataError("idlist line " + std::to_string(line_no) + ": expected 4 fields");
    IdListEntry e;
    e.game_id = f[0];
    e.team = f[1];
    if (f[2] == "weekly")
      e.window = Window::Weekly;
    else if (f[2] == "pregame")
      e.window = Window::Pregame;
    else if (f[2] == "postgame")
      e.window = Window::Postgame;
    else
      throw DataError("idlist line " + std::to_string(line_no) + ": unknown window '" + f[2] + "'");
    e.tweet_id = f[3];
    out.push_back(std::move(e));
  }
  return out;
}

void save_idlists(const std::string& path, const std::vector<IdListEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "game_id\tteam\twindow\ttweet_id\n";
  for (const auto& e : entries) {
    out << e.game_id << '\t' << e.team << '\t' << window_name(e.window) << '\t'
        << e.tweet_id << '\n';
  }
}

}  // namespace nflcast::io
