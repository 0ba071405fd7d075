#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace adbench {

struct AttackCategory {
  std::string name;
  std::string enisa_rank;  // "4, 6" for the merged spam/phishing category
};

/// Maps ⟨dataset, attack⟩ pairs onto ENISA threat categories. Names are
/// matched case-insensitively, ignoring spaces, hyphens, underscores and
/// parenthesised qualifiers' punctuation.
class AttackTaxonomy {
 public:
  AttackTaxonomy() = default;

  /// The eleven-dataset, 51-pair mapping used for intrusion campaigns.
  static AttackTaxonomy standard();
  /// Extends (or overrides) the mapping from a CSV of dataset,attack,category rows.
  void merge_csv(const std::string& path);

  void add_category(std::string name, std::string enisa_rank);
  void add_alias(const std::string& alias, const std::string& dataset);
  void map(const std::string& dataset, const std::string& attack, const std::string& category);

  const std::vector<AttackCategory>& categories() const { return categories_; }
  std::size_t pair_count() const { return mapping_.size(); }
  std::vector<std::pair<std::string, std::string>> pairs() const;
  /// Pairs known for one dataset, in display form.
  std::vector<std::string> attacks_of(const std::string& dataset) const;
  std::vector<std::string> datasets() const;

  /// Throws LookupError listing known attacks when the pair is unmapped.
  const std::string& lookup(const std::string& dataset, const std::string& attack) const;
  bool contains(const std::string& dataset, const std::string& attack) const;
  /// Finer grouping used for per-attack views (e.g. Worms vs Other Malware).
  std::string subgroup(const std::string& dataset, const std::string& attack) const;

  static std::string normalize(const std::string& name);

 private:
  std::string canonical_dataset(const std::string& dataset) const;

  std::vector<AttackCategory> categories_;
  std::map<std::string, std::string> aliases_;  // normalized alias -> normalized dataset
  std::map<std::string, std::string> display_;  // normalized dataset -> display name
  std::map<std::pair<std::string, std::string>, std::string> mapping_;
  std::map<std::pair<std::string, std::string>, std::string> attack_display_;
};

std::string taxonomy_lookup(const AttackTaxonomy& taxonomy, const std::string& dataset, const std::string& attack);

}  // namespace adbench
