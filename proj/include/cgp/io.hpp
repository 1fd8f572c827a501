#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cgp/core.hpp"
#include "cgp/mixture_mcmc.hpp"
#include "cgp/numerics.hpp"
#include "cgp/species_mcmc.hpp"

namespace cgp {

// Malformed input files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Write to a sibling temporary file, then rename over the target.
void atomic_write(const std::string& path, const std::string& content);

std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::string read_file(const std::string& path);

// Species data: header plus one label per row, or "label,count" rows.
struct SpeciesCounts {
  std::vector<std::string> labels;
  std::vector<int> counts;
  FrequencyVector frequencies() const { return FrequencyVector(counts); }
};

SpeciesCounts parse_species_csv(const std::string& text);
SpeciesCounts read_species_csv(const std::string& path);
std::string species_sequence_csv(const LabeledSequence& seq);
std::string species_counts_csv(const SpeciesCounts& counts);
// Expands counts into a per-observation label sequence (observation order by label).
std::vector<int> expand_counts(const SpeciesCounts& counts);

struct NumericTable {
  std::vector<std::string> columns;
  Matrix data;
  std::optional<std::vector<std::uint8_t>> truth;  // from a "truth" column
};

NumericTable parse_numeric_csv(const std::string& text);
NumericTable read_numeric_csv(const std::string& path);
std::string numeric_csv(const Matrix& data, const std::vector<std::uint8_t>* truth = nullptr);

std::string partitions_csv(const std::vector<std::vector<int>>& rows);
std::vector<std::vector<int>> parse_partitions_csv(const std::string& text);

// "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_config(const std::string& text);

nlohmann::json config_to_json(const SpeciesFitConfig& cfg);
SpeciesFitConfig config_from_json(const nlohmann::json& j);
nlohmann::json trace_to_json(const SpeciesTrace& t);
SpeciesTrace trace_from_json(const nlohmann::json& j);
nlohmann::json trace_to_json(const MixtureTrace& t);

}  // namespace cgp
