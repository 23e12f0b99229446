#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nflcast/corpus.hpp"
#include "nflcast/rate.hpp"
#include "nflcast/types.hpp"

namespace nflcast::features {

constexpr int kNumStatFeatures = 22;

// Fixed identifier order for the statistical features F1..F10.
const std::array<std::string, kNumStatFeatures>& stat_feature_ids();

// Index range [first, last] into stat_feature_ids() for a set F1..F10.
std::pair<int, int> stat_set_range(int set_index);

using StatBlock = std::array<double, kNumStatFeatures>;

// Cover margin from `team`'s perspective: positive when the team beat the
// spread in that game.
double cover_margin(const GameRecord& g, const std::string& team);

// F1..F10 from an explicit history of same-season games with week < game.week.
// Throws if the history contains the game itself or a same-or-later week.
StatBlock stat_block_from_history(const GameRecord& game,
                                  std::span<const GameRecord* const> history);
FeatureVector game_stat_features(const GameRecord& game,
                                 std::span<const GameRecord* const> history);

// Twitter unigram features for one game: "uni.<side>.<token>" = ln(1+count),
// emitted when the token's occurrence count reaches 0.1% of the game's
// combined weekly tweet count.
FeatureVector unigram_features(const corpus::CorpusIndex& corpus, int game_idx,
                               const corpus::AccessContext& ctx = {});

enum class VOld { Prev, PrevAvg };
enum class RateKind { Static, Proportional };

struct RateParams {
  VOld v_old = VOld::Prev;
  int delta = 500;     // static bucket width
  double theta = 0.2;  // proportional bucket width
};

// Weekly-volume change category for `side`'s team; 0 when the team has no
// previous game this season.
int rate_feature_value(const corpus::CorpusIndex& corpus, int game_idx, Side side,
                       RateKind kind, const RateParams& params,
                       const corpus::AccessContext& ctx = {});

struct Atom {
  enum class Type { Stat, Unigrams, Cca, RateS, RateP };
  Type type = Type::Stat;
  int stat_index = 0;  // 1..10 for Stat
  int cca_k = 1;       // Cca, in {1,2,4,8}
  VOld v_old = VOld::Prev;
  int delta = 500;     // RateS
  double theta = 0.2;  // RateP

  std::string name() const;
  bool operator<(const Atom& other) const;
  bool operator==(const Atom& other) const;
};

// A named union of atomic feature sets, e.g. "F3+F10+rateP(prev,0.1)".
struct FeatureSetSpec {
  std::vector<Atom> atoms;  // canonical order, deduplicated

  static FeatureSetSpec parse(const std::string& text);
  static FeatureSetSpec single(Atom atom);
  FeatureSetSpec united(const FeatureSetSpec& other) const;

  std::string name() const;
  bool has(Atom::Type t) const;
  std::optional<Atom> find(Atom::Type t) const;
  void validate() const;
};

// The 10 singletons F1..F10 followed by the 45 pairwise unions.
std::vector<FeatureSetSpec> enumerate_stat_sets();

// Stat sets plus the configured extra sets: unigrams, cca(k) for
// k in {1,2,4,8}, the default rate feature, and the three union sets used in
// the headline experiments.
std::vector<FeatureSetSpec> enumerate_feature_sets();

// Per-game feature assembly with optional precomputed caches. The caches are
// read-only after precompute(), so lookups are thread-safe. When an access
// log is attached, construct with caching disabled so every read is recorded.
class Featurizer {
 public:
  explicit Featurizer(const corpus::CorpusIndex& corpus, bool enable_cache = true);

  void precompute(bool need_unigrams, std::span<const FeatureSetSpec> sets);

  StatBlock stat_block(int game_idx, const corpus::AccessContext& ctx = {}) const;
  FeatureVector unigrams(int game_idx, const corpus::AccessContext& ctx = {}) const;
  std::array<double, 2> rate_pair(int game_idx, RateKind kind, const RateParams& params,
                                  const corpus::AccessContext& ctx = {}) const;

  // All non-CCA features of `spec` for one game.
  FeatureVector base_features(int game_idx, const FeatureSetSpec& spec,
                              const corpus::AccessContext& ctx = {}) const;

  const corpus::CorpusIndex& corpus() const { return corpus_; }

 private:
  StatBlock compute_stat_block(int game_idx, const corpus::AccessContext& ctx) const;

  const corpus::CorpusIndex& corpus_;
  bool cache_enabled_;
  std::vector<StatBlock> stat_cache_;
  std::vector<FeatureVector> unigram_cache_;
  bool stats_cached_ = false;
  bool unigrams_cached_ = false;
  std::map<std::string, std::vector<std::array<double, 2>>> rate_cache_;
};

std::string rate_cache_key(RateKind kind, const RateParams& params);

}  // namespace nflcast::features
