#include "adbench/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "adbench/core.hpp"
#include "adbench/csv.hpp"

namespace adbench {

namespace {

constexpr const char* kMalware = "Malware";
constexpr const char* kWebAttack = "Web Attack";
constexpr const char* kWebApp = "Web Application";
constexpr const char* kSpam = "Spam/Phishing";
constexpr const char* kDos = "(D)DoS";
constexpr const char* kBotNet = "BotNet";
constexpr const char* kBreach = "Data Breaches";

bool has_substring(const std::string& haystack, std::string_view needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

std::string AttackTaxonomy::normalize(const std::string& name) {
  std::string out;
  for (unsigned char c : name) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

AttackTaxonomy AttackTaxonomy::standard() {
  AttackTaxonomy t;
  t.add_category(kMalware, "1");
  t.add_category(kWebAttack, "2");
  t.add_category(kWebApp, "3");
  t.add_category(kSpam, "4, 6");
  t.add_category(kDos, "5");
  t.add_category(kBotNet, "7");
  t.add_category(kBreach, "8");

  const std::vector<std::tuple<const char*, const char*, std::vector<const char*>>> table = {
      {"NSL-KDD", kMalware, {"u2r"}},
      {"NSL-KDD", kWebApp, {"r2l"}},
      {"NSL-KDD", kDos, {"DoS"}},
      {"NSL-KDD", kBreach, {"Probe"}},
      {"CTU-13", kBotNet, {"BotNet"}},
      {"ISCX12", kWebAttack, {"BruteForce"}},
      {"ISCX12", kDos, {"DoS", "DDoS"}},
      {"ISCX12", kBreach, {"Infiltration"}},
      {"UNSW-NB15", kMalware, {"Worms"}},
      {"UNSW-NB15", kWebAttack, {"Fuzzers"}},
      {"UNSW-NB15", kWebApp, {"Backdoor", "Exploits", "Shellcode"}},
      {"UNSW-NB15", kDos, {"DoS"}},
      {"UNSW-NB15", kBreach, {"Analysis", "Reconnaissance"}},
      {"UGR16", kSpam, {"Blacklist", "Spam"}},
      {"UGR16", kDos, {"DoS"}},
      {"UGR16", kBotNet, {"BotNet"}},
      {"UGR16", kBreach, {"Scan"}},
      {"NGIDS-DS", kMalware, {"Malware", "Worms"}},
      {"NGIDS-DS", kWebApp, {"Backdoor", "Exploits", "Shellcode"}},
      {"NGIDS-DS", kDos, {"DoS"}},
      {"NGIDS-DS", kBreach, {"Reconnaissance"}},
      {"Netflow-IDS", kSpam, {"Mailbomb"}},
      {"Netflow-IDS", kDos, {"Neptune", "Portsweep"}},
      {"AndMal17", kMalware, {"Ransomware", "Scareware"}},
      {"AndMal17", kSpam, {"SMS", "Adware"}},
      {"CIDDS-001", kWebAttack, {"BruteForce"}},
      {"CIDDS-001", kDos, {"DoS"}},
      {"CIDDS-001", kBreach, {"PortScan", "PingScan"}},
      {"CICIDS17", kWebAttack, {"BruteForce"}},
      {"CICIDS17", kDos, {"DoS", "DoS-Slowloris", "DoS-Goldeneye"}},
      {"CICIDS17", kBreach, {"PortScan"}},
      {"CICIDS18", kWebAttack, {"BruteForce-FTP", "BruteForce-SSH"}},
      {"CICIDS18", kDos, {"DoS", "DDoS"}},
      {"CICIDS18", kBotNet, {"Bot"}},
      {"CICIDS18", kBreach, {"Infiltration"}},
  };
  for (const auto& [dataset, category, attacks] : table) {
    for (const char* a : attacks) t.map(dataset, a, category);
  }

  const std::vector<std::pair<const char*, const char*>> aliases = {
      {"NF", "Netflow-IDS"}, {"AM", "AndMal17"},  {"C7", "CICIDS17"},   {"C8", "CICIDS18"},
      {"CI", "CIDDS-001"},   {"CT", "CTU-13"},    {"IX", "ISCX12"},     {"NG", "NGIDS-DS"},
      {"NK", "NSL-KDD"},     {"UG", "UGR16"},     {"UN", "UNSW-NB15"},  {"UNSW", "UNSW-NB15"},
      {"NGDIS", "NGIDS-DS"}, {"NGIDS", "NGIDS-DS"}, {"CIDDS", "CIDDS-001"}, {"AndMal", "AndMal17"},
      {"CICIDS2017", "CICIDS17"}, {"CICIDS2018", "CICIDS18"}, {"ISCX2012", "ISCX12"},
      {"UGR2016", "UGR16"}, {"Netflow", "Netflow-IDS"},
  };
  for (const auto& [alias, dataset] : aliases) t.add_alias(alias, dataset);
  return t;
}

void AttackTaxonomy::add_category(std::string name, std::string enisa_rank) {
  for (const auto& c : categories_) {
    if (c.name == name) return;
  }
  categories_.push_back({std::move(name), std::move(enisa_rank)});
}

void AttackTaxonomy::add_alias(const std::string& alias, const std::string& dataset) {
  aliases_[normalize(alias)] = normalize(dataset);
}

void AttackTaxonomy::map(const std::string& dataset, const std::string& attack, const std::string& category) {
  add_category(category, "");
  const std::string d = canonical_dataset(dataset);
  display_.try_emplace(d, dataset);
  const auto key = std::make_pair(d, normalize(attack));
  mapping_[key] = category;
  attack_display_[key] = attack;
}

std::string AttackTaxonomy::canonical_dataset(const std::string& dataset) const {
  const std::string n = normalize(dataset);
  auto it = aliases_.find(n);
  return it == aliases_.end() ? n : it->second;
}

std::vector<std::pair<std::string, std::string>> AttackTaxonomy::pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, _] : mapping_) out.emplace_back(display_.at(key.first), attack_display_.at(key));
  return out;
}

std::vector<std::string> AttackTaxonomy::attacks_of(const std::string& dataset) const {
  const std::string d = canonical_dataset(dataset);
  std::vector<std::string> out;
  for (const auto& [key, _] : mapping_) {
    if (key.first == d) out.push_back(attack_display_.at(key));
  }
  return out;
}

std::vector<std::string> AttackTaxonomy::datasets() const {
  std::vector<std::string> out;
  for (const auto& [_, name] : display_) out.push_back(name);
  return out;
}

bool AttackTaxonomy::contains(const std::string& dataset, const std::string& attack) const {
  return mapping_.count({canonical_dataset(dataset), normalize(attack)}) > 0;
}

const std::string& AttackTaxonomy::lookup(const std::string& dataset, const std::string& attack) const {
  auto it = mapping_.find({canonical_dataset(dataset), normalize(attack)});
  if (it != mapping_.end()) return it->second;
  std::string known;
  for (const auto& a : attacks_of(dataset)) known += (known.empty() ? "" : ", ") + a;
  throw LookupError("no attack category for <" + dataset + ", " + attack + ">; known attacks for this dataset: " +
                    (known.empty() ? std::string("none") : known));
}

std::string AttackTaxonomy::subgroup(const std::string& dataset, const std::string& attack) const {
  const std::string& category = lookup(dataset, attack);
  const std::string a = normalize(attack);
  if (category == kMalware) return has_substring(a, "worm") ? "Worms" : "Other Malware";
  if (category == kWebAttack) {
    if (has_substring(a, "brute")) return "BruteForce";
    if (has_substring(a, "fuzz")) return "Fuzzers";
    return "Other WebAtt";
  }
  if (category == kWebApp) return has_substring(a, "backdoor") ? "Backdoor" : "Other WebApp";
  if (category == kDos) return a.rfind("ddos", 0) == 0 ? "DDoS" : "DoS";
  return category;
}

void AttackTaxonomy::merge_csv(const std::string& path) {
  const auto rows = csv::read_file(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i == 0 && r.size() >= 3 && to_lower(trim(r[0])) == "dataset") continue;
    if (r.size() != 3) throw ParseError(path + ": row " + std::to_string(i + 1) + " must be dataset,attack,category");
    map(trim(r[0]), trim(r[1]), trim(r[2]));
  }
}

std::string taxonomy_lookup(const AttackTaxonomy& taxonomy, const std::string& dataset, const std::string& attack) {
  return taxonomy.lookup(dataset, attack);
}

}  // namespace adbench
