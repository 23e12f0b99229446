#include "nflcast/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace nflcast::features {

const std::array<std::string, kNumStatFeatures>& stat_feature_ids() {
  static const std::array<std::string, kNumStatFeatures> kIds = {
      "F1.spread",
      "F2.ou_line",
      "F3.home.avg_cover_margin",
      "F3.away.avg_cover_margin",
      "F4.home.avg_ou_margin",
      "F4.away.avg_ou_margin",
      "F5.home.avg_points_scored",
      "F5.away.avg_points_scored",
      "F6.home.avg_points_allowed",
      "F6.away.avg_points_allowed",
      "F7.home.avg_total_points",
      "F7.away.avg_total_points",
      "F8.home.avg_spread_plus_scored",
      "F8.away.avg_spread_plus_scored",
      "F9.home.wts_home_pct",
      "F9.away.wts_away_pct",
      "F10.home.avg_interceptions_thrown",
      "F10.home.avg_fumbles_lost",
      "F10.home.avg_times_sacked",
      "F10.away.avg_interceptions_thrown",
      "F10.away.avg_fumbles_lost",
      "F10.away.avg_times_sacked",
  };
  return kIds;
}

std::pair<int, int> stat_set_range(int set_index) {
  switch (set_index) {
    case 1: return {0, 0};
    case 2: return {1, 1};
    case 3: return {2, 3};
    case 4: return {4, 5};
    case 5: return {6, 7};
    case 6: return {8, 9};
    case 7: return {10, 11};
    case 8: return {12, 13};
    case 9: return {14, 15};
    case 10: return {16, 21};
  }
  throw ParamError("stat set index must be 1..10");
}

double cover_margin(const GameRecord& g, const std::string& team) {
  const double home_margin = g.home_score + g.spread - g.away_score;
  if (team == g.home_team) return home_margin;
  if (team == g.away_team) return -home_margin;
  throw DataError("cover_margin: team " + team + " not in game " + g.game_id);
}

namespace {

struct TeamAverages {
  double avg_cover = 0, avg_ou = 0, avg_scored = 0, avg_allowed = 0;
  double avg_total = 0, avg_spread_scored = 0;
  double avg_int = 0, avg_fum = 0, avg_sack = 0;
  double wts_pct_as_side = 0;  // home games for the home team, away for away
};

TeamAverages team_averages(const std::string& team, bool as_home,
                           std::span<const GameRecord* const> history) {
  TeamAverages out;
  int n = 0;
  int side_decided = 0, side_wins = 0;
  double cover = 0, ou = 0, scored = 0, allowed = 0, total = 0, spread_scored = 0;
  double ints = 0, fums = 0, sacks = 0;
  for (const GameRecord* g : history) {
    if (!g->has_team(team)) continue;
    const bool home = g->home_team == team;
    const double cm = cover_margin(*g, team);
    const int pts_for = home ? g->home_score : g->away_score;
    const int pts_against = home ? g->away_score : g->home_score;
    const double team_spread = home ? g->spread : -g->spread;
    const TeamBoxStats& box = home ? g->home_stats : g->away_stats;
    ++n;
    cover += cm;
    ou += g->total_points() - g->ou_line;
    scored += pts_for;
    allowed += pts_against;
    total += g->total_points();
    spread_scored += team_spread + pts_for;
    ints += box.interceptions_thrown;
    fums += box.fumbles_lost;
    sacks += box.times_sacked;
    if (home == as_home) {
      if (cm > 0) {
        ++side_decided;
        ++side_wins;
      } else if (cm < 0) {
        ++side_decided;
      }
      // pushes are neither wins nor losses WTS
    }
  }
  if (n > 0) {
    out.avg_cover = cover / n;
    out.avg_ou = ou / n;
    out.avg_scored = scored / n;
    out.avg_allowed = allowed / n;
    out.avg_total = total / n;
    out.avg_spread_scored = spread_scored / n;
    out.avg_int = ints / n;
    out.avg_fum = fums / n;
    out.avg_sack = sacks / n;
  }
  if (side_decided > 0) out.wts_pct_as_side = static_cast<double>(side_wins) / side_decided;
  return out;
}

}  // namespace

StatBlock stat_block_from_history(const GameRecord& game,
                                  std::span<const GameRecord* const> history) {
  for (const GameRecord* g : history) {
    if (g->game_id == game.game_id)
      throw ParamError("stat features: history contains the game itself");
    if (g->season == game.season && g->week >= game.week)
      throw ParamError("stat features: history contains week >= game week");
  }
  const TeamAverages h = team_averages(game.home_team, true, history);
  const TeamAverages a = team_averages(game.away_team, false, history);
  StatBlock b{};
  b[0] = game.spread;
  b[1] = game.ou_line;
  b[2] = h.avg_cover;
  b[3] = a.avg_cover;
  b[4] = h.avg_ou;
  b[5] = a.avg_ou;
  b[6] = h.avg_scored;
  b[7] = a.avg_scored;
  b[8] = h.avg_allowed;
  b[9] = a.avg_allowed;
  b[10] = h.avg_total;
  b[11] = a.avg_total;
  b[12] = h.avg_spread_scored;
  b[13] = a.avg_spread_scored;
  b[14] = h.wts_pct_as_side;
  b[15] = a.wts_pct_as_side;
  b[16] = h.avg_int;
  b[17] = h.avg_fum;
  b[18] = h.avg_sack;
  b[19] = a.avg_int;
  b[20] = a.avg_fum;
  b[21] = a.avg_sack;
  return b;
}

FeatureVector game_stat_features(const GameRecord& game,
                                 std::span<const GameRecord* const> history) {
  const StatBlock b = stat_block_from_history(game, history);
  FeatureVector out;
  const auto& ids = stat_feature_ids();
  for (int i = 0; i < kNumStatFeatures; ++i) out[ids[i]] = b[i];
  return out;
}

FeatureVector unigram_features(const corpus::CorpusIndex& corpus, int game_idx,
                               const corpus::AccessContext& ctx) {
  const auto& home = corpus.weekly_aggregate(game_idx, Side::Home, ctx);
  const auto& away = corpus.weekly_aggregate(game_idx, Side::Away, ctx);
  const int total = home.tweet_count + away.tweet_count;
  FeatureVector out;
  if (total == 0) return out;
  const double threshold = 0.001 * total;
  for (Side side : {Side::Home, Side::Away}) {
    const auto& agg = side == Side::Home ? home : away;
    const std::string prefix = std::string("uni.") + side_name(side) + ".";
    for (const auto& [tok, count] : agg.token_counts) {
      if (count >= threshold) out[prefix + tok] = std::log1p(count);
    }
  }
  return out;
}

int rate_feature_value(const corpus::CorpusIndex& corpus, int game_idx, Side side,
                       RateKind kind, const RateParams& params,
                       const corpus::AccessContext& ctx) {
  const GameRecord& game = corpus.game(game_idx);
  const std::string& team = side == Side::Home ? game.home_team : game.away_team;
  const auto& season_games = corpus.team_season_games(team, game.season);
  std::vector<int> prior;
  for (int gi : season_games) {
    if (corpus.game(gi).week >= game.week) break;
    prior.push_back(gi);
  }
  if (prior.empty()) return 0;  // no previous game this season

  const double v_curr = corpus.weekly_volume_at(
      game_idx, corpus.side_of(game, team), ctx);
  double v_old;
  if (params.v_old == VOld::Prev) {
    const int gi = prior.back();
    v_old = corpus.weekly_volume_at(gi, corpus.side_of(corpus.game(gi), team), ctx);
  } else {
    double sum = 0;
    for (int gi : prior)
      sum += corpus.weekly_volume_at(gi, corpus.side_of(corpus.game(gi), team), ctx);
    v_old = sum / static_cast<double>(prior.size());
  }
  return kind == RateKind::Static ? rate_s(v_old, v_curr, params.delta)
                                  : rate_p(v_old, v_curr, params.theta);
}

std::string Atom::name() const {
  char buf[64];
  switch (type) {
    case Type::Stat:
      snprintf(buf, sizeof(buf), "F%d", stat_index);
      return buf;
    case Type::Unigrams:
      return "unigrams";
    case Type::Cca:
      snprintf(buf, sizeof(buf), "cca(%d)", cca_k);
      return buf;
    case Type::RateS:
      snprintf(buf, sizeof(buf), "rateS(%s,%d)",
               v_old == VOld::Prev ? "prev" : "prevavg", delta);
      return buf;
    case Type::RateP:
      snprintf(buf, sizeof(buf), "rateP(%s,%g)",
               v_old == VOld::Prev ? "prev" : "prevavg", theta);
      return buf;
  }
  return "?";
}

bool Atom::operator<(const Atom& other) const {
  if (type != other.type) return type < other.type;
  switch (type) {
    case Type::Stat: return stat_index < other.stat_index;
    case Type::Unigrams: return false;
    case Type::Cca: return cca_k < other.cca_k;
    case Type::RateS:
      return std::tie(v_old, delta) < std::tie(other.v_old, other.delta);
    case Type::RateP:
      return std::tie(v_old, theta) < std::tie(other.v_old, other.theta);
  }
  return false;
}

bool Atom::operator==(const Atom& other) const {
  return !(*this < other) && !(other < *this);
}

FeatureSetSpec FeatureSetSpec::single(Atom atom) {
  FeatureSetSpec s;
  s.atoms.push_back(atom);
  s.validate();
  return s;
}

FeatureSetSpec FeatureSetSpec::united(const FeatureSetSpec& other) const {
  FeatureSetSpec s;
  s.atoms = atoms;
  s.atoms.insert(s.atoms.end(), other.atoms.begin(), other.atoms.end());
  std::sort(s.atoms.begin(), s.atoms.end());
  s.atoms.erase(std::unique(s.atoms.begin(), s.atoms.end()), s.atoms.end());
  s.validate();
  return s;
}

std::string FeatureSetSpec::name() const {
  std::string out;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += "+";
    out += atoms[i].name();
  }
  return out;
}

bool FeatureSetSpec::has(Atom::Type t) const {
  return find(t).has_value();
}

std::optional<Atom> FeatureSetSpec::find(Atom::Type t) const {
  for (const auto& a : atoms)
    if (a.type == t) return a;
  return std::nullopt;
}

void FeatureSetSpec::validate() const {
  if (atoms.empty()) throw ParamError("feature set must be nonempty");
  int n_uni = 0, n_cca = 0, n_rs = 0, n_rp = 0;
  for (const auto& a : atoms) {
    switch (a.type) {
      case Atom::Type::Stat:
        if (a.stat_index < 1 || a.stat_index > 10)
          throw ParamError("feature set: F index must be 1..10");
        break;
      case Atom::Type::Unigrams:
        ++n_uni;
        break;
      case Atom::Type::Cca:
        if (a.cca_k != 1 && a.cca_k != 2 && a.cca_k != 4 && a.cca_k != 8)
          throw ParamError("feature set: cca components must be one of {1,2,4,8}");
        ++n_cca;
        break;
      case Atom::Type::RateS:
        if (a.delta < 1) throw ParamError("feature set: rateS delta must be >= 1");
        ++n_rs;
        break;
      case Atom::Type::RateP:
        if (!(a.theta > 0.0 && a.theta <= 1.0))
          throw ParamError("feature set: rateP theta must be in (0,1]");
        ++n_rp;
        break;
    }
  }
  // feature identifiers do not carry parameters, so one atom per family
  if (n_uni > 1 || n_cca > 1 || n_rs > 1 || n_rp > 1)
    throw ParamError("feature set: at most one unigrams/cca/rateS/rateP atom");
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

VOld parse_vold(const std::string& s) {
  if (s == "prev") return VOld::Prev;
  if (s == "prevavg") return VOld::PrevAvg;
  throw ParamError("feature spec: v_old must be 'prev' or 'prevavg', got '" + s + "'");
}

Atom parse_atom(const std::string& raw) {
  const std::string tok = trim(raw);
  Atom a;
  if (tok.size() >= 2 && tok[0] == 'F') {
    a.type = Atom::Type::Stat;
    try {
      a.stat_index = std::stoi(tok.substr(1));
    } catch (...) {
      throw ParamError("feature spec: bad token '" + tok + "'");
    }
    return a;
  }
  if (tok == "unigrams") {
    a.type = Atom::Type::Unigrams;
    return a;
  }
  auto paren = tok.find('(');
  if (paren != std::string::npos && tok.back() == ')') {
    const std::string head = tok.substr(0, paren);
    const std::string args = tok.substr(paren + 1, tok.size() - paren - 2);
    const auto parts = io::split(args, ',');
    try {
      if (head == "cca" && parts.size() == 1) {
        a.type = Atom::Type::Cca;
        a.cca_k = std::stoi(trim(parts[0]));
        return a;
      }
      if (head == "rateS" && parts.size() == 2) {
        a.type = Atom::Type::RateS;
        a.v_old = parse_vold(trim(parts[0]));
        a.delta = std::stoi(trim(parts[1]));
        return a;
      }
      if (head == "rateP" && parts.size() == 2) {
        a.type = Atom::Type::RateP;
        a.v_old = parse_vold(trim(parts[0]));
        a.theta = std::stod(trim(parts[1]));
        return a;
      }
    } catch (const ParamError&) {
      throw;
    } catch (...) {
      throw ParamError("feature spec: bad arguments in '" + tok + "'");
    }
  }
  throw ParamError("feature spec: unknown token '" + tok + "'");
}

}  // namespace

FeatureSetSpec FeatureSetSpec::parse(const std::string& text) {
  FeatureSetSpec s;
  for (const auto& part : io::split(text, '+')) s.atoms.push_back(parse_atom(part));
  std::sort(s.atoms.begin(), s.atoms.end());
  s.atoms.erase(std::unique(s.atoms.begin(), s.atoms.end()), s.atoms.end());
  s.validate();
  return s;
}

std::vector<FeatureSetSpec> enumerate_stat_sets() {
  std::vector<FeatureSetSpec> out;
  for (int i = 1; i <= 10; ++i) {
    Atom a;
    a.type = Atom::Type::Stat;
    a.stat_index = i;
    out.push_back(FeatureSetSpec::single(a));
  }
  for (int i = 1; i <= 10; ++i) {
    for (int j = i + 1; j <= 10; ++j) {
      out.push_back(out[i - 1].united(out[j - 1]));
    }
  }
  return out;
}

std::vector<FeatureSetSpec> enumerate_feature_sets() {
  std::vector<FeatureSetSpec> out = enumerate_stat_sets();
  out.push_back(FeatureSetSpec::parse("unigrams"));
  for (int k : {1, 2, 4, 8}) {
    out.push_back(FeatureSetSpec::parse("cca(" + std::to_string(k) + ")"));
  }
  out.push_back(FeatureSetSpec::parse("rateS(prev,500)"));
  out.push_back(FeatureSetSpec::parse("F5+F9+rateP(prev,0.2)"));
  out.push_back(FeatureSetSpec::parse("F3+F10+rateP(prev,0.1)"));
  out.push_back(FeatureSetSpec::parse("F3+F4+rateS(prev,200)"));
  out.push_back(FeatureSetSpec::parse("F1+F2+F3+F4+F5+F6+F7+F8+F9+F10"));
  return out;
}

std::string rate_cache_key(RateKind kind, const RateParams& params) {
  char buf[64];
  snprintf(buf, sizeof(buf), "%c|%c|%d|%.17g", kind == RateKind::Static ? 'S' : 'P',
           params.v_old == VOld::Prev ? 'p' : 'a', params.delta, params.theta);
  return buf;
}

Featurizer::Featurizer(const corpus::CorpusIndex& corpus, bool enable_cache)
    : corpus_(corpus), cache_enabled_(enable_cache) {}

StatBlock Featurizer::compute_stat_block(int game_idx,
                                         const corpus::AccessContext& ctx) const {
  const GameRecord& game = corpus_.game(game_idx);
  auto home_hist = corpus_.prior_games(game.home_team, game.season, game.week, ctx);
  auto away_hist = corpus_.prior_games(game.away_team, game.season, game.week, ctx);
  home_hist.insert(home_hist.end(), away_hist.begin(), away_hist.end());
  return stat_block_from_history(game, home_hist);
}

void Featurizer::precompute(bool need_unigrams, std::span<const FeatureSetSpec> sets) {
  if (!cache_enabled_) return;
  const int n = static_cast<int>(corpus_.games().size());
  if (!stats_cached_) {
    stat_cache_.resize(n);
    for (int i = 0; i < n; ++i) stat_cache_[i] = compute_stat_block(i, {});
    stats_cached_ = true;
  }
  if (need_unigrams && !unigrams_cached_) {
    unigram_cache_.resize(n);
    for (int i = 0; i < n; ++i) unigram_cache_[i] = unigram_features(corpus_, i);
    unigrams_cached_ = true;
  }
  for (const auto& spec : sets) {
    for (const auto& atom : spec.atoms) {
      if (atom.type != Atom::Type::RateS && atom.type != Atom::Type::RateP) continue;
      RateParams p{atom.v_old, atom.delta, atom.theta};
      const RateKind kind =
          atom.type == Atom::Type::RateS ? RateKind::Static : RateKind::Proportional;
      const std::string key = rate_cache_key(kind, p);
      if (rate_cache_.count(key)) continue;
      auto& vals = rate_cache_[key];
      vals.resize(n);
      for (int i = 0; i < n; ++i) {
        vals[i] = {static_cast<double>(rate_feature_value(corpus_, i, Side::Home, kind, p)),
                   static_cast<double>(rate_feature_value(corpus_, i, Side::Away, kind, p))};
      }
    }
  }
}

StatBlock Featurizer::stat_block(int game_idx, const corpus::AccessContext& ctx) const {
  if (cache_enabled_ && stats_cached_) return stat_cache_[game_idx];
  return compute_stat_block(game_idx, ctx);
}

FeatureVector Featurizer::unigrams(int game_idx, const corpus::AccessContext& ctx) const {
  if (cache_enabled_ && unigrams_cached_) return unigram_cache_[game_idx];
  return unigram_features(corpus_, game_idx, ctx);
}

std::array<double, 2> Featurizer::rate_pair(int game_idx, RateKind kind,
                                            const RateParams& params,
                                            const corpus::AccessContext& ctx) const {
  if (cache_enabled_) {
    auto it = rate_cache_.find(rate_cache_key(kind, params));
    if (it != rate_cache_.end()) return it->second[game_idx];
  }
  return {static_cast<double>(rate_feature_value(corpus_, game_idx, Side::Home, kind, params, ctx)),
          static_cast<double>(rate_feature_value(corpus_, game_idx, Side::Away, kind, params, ctx))};
}

FeatureVector Featurizer::base_features(int game_idx, const FeatureSetSpec& spec,
                                        const corpus::AccessContext& ctx) const {
  FeatureVector out;
  bool have_stats = false;
  StatBlock block{};
  const auto& ids = stat_feature_ids();
  for (const auto& atom : spec.atoms) {
    switch (atom.type) {
      case Atom::Type::Stat: {
        if (!have_stats) {
          block = stat_block(game_idx, ctx);
          have_stats = true;
        }
        const auto [lo, hi] = stat_set_range(atom.stat_index);
        for (int i = lo; i <= hi; ++i) out[ids[i]] = block[i];
        break;
      }
      case Atom::Type::Unigrams: {
        FeatureVector uni = unigrams(game_idx, ctx);
        out.merge(uni);
        break;
      }
      case Atom::Type::RateS: {
        auto v = rate_pair(game_idx, RateKind::Static,
                           {atom.v_old, atom.delta, atom.theta}, ctx);
        out["rateS.home"] = v[0];
        out["rateS.away"] = v[1];
        break;
      }
      case Atom::Type::RateP: {
        auto v = rate_pair(game_idx, RateKind::Proportional,
                           {atom.v_old, atom.delta, atom.theta}, ctx);
        out["rateP.home"] = v[0];
        out["rateP.away"] = v[1];
        break;
      }
      case Atom::Type::Cca:
        break;  // fold-scoped; projected by the harness
    }
  }
  return out;
}

}  // namespace nflcast::features
