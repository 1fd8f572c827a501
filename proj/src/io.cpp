#include "cgp/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace cgp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& cell, std::size_t row) {
  const std::string t = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw DataError("non-numeric cell '" + t + "' on data row " + std::to_string(row));
  return v;
}

long parse_int(const std::string& cell, std::size_t row) {
  const std::string t = trim(cell);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw DataError("malformed integer '" + t + "' on data row " + std::to_string(row));
  return v;
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <class T>
std::vector<T> json_array(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("trace is missing '") + key + "'");
  return j.at(key).get<std::vector<T>>();
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  auto end_row = [&] {
    row.push_back(cell);
    cell.clear();
    const bool blank = row.size() == 1 && trim(row[0]).empty() && !any;
    if (!blank) rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(cell);
      cell.clear();
      any = true;
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (quoted) throw DataError("unterminated quoted field");
  if (!cell.empty() || !row.empty() || any) end_row();
  return rows;
}

SpeciesCounts parse_species_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.size() < 2) throw DataError("species data needs a header and at least one row");
  const bool aggregated = rows[0].size() >= 2 && trim(rows[0][1]) == "count";
  SpeciesCounts out;
  std::unordered_map<std::string, std::size_t> slot;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) throw DataError("row " + std::to_string(r) + " has the wrong number of fields");
    const std::string label = trim(row[0]);
    if (label.empty()) throw DataError("empty label on data row " + std::to_string(r));
    long c = 1;
    if (aggregated) {
      c = parse_int(row[1], r);
      if (c < 1) throw DataError("count must be positive on data row " + std::to_string(r));
    }
    auto [it, fresh] = slot.try_emplace(label, out.labels.size());
    if (fresh) {
      out.labels.push_back(label);
      out.counts.push_back(0);
    }
    out.counts[it->second] += static_cast<int>(c);
  }
  return out;
}

SpeciesCounts read_species_csv(const std::string& path) { return parse_species_csv(read_file(path)); }

std::string species_sequence_csv(const LabeledSequence& seq) {
  std::string out = "species,contaminant\n";
  for (std::size_t i = 0; i < seq.size(); ++i)
    out += std::to_string(seq.labels[i]) + "," + std::to_string(static_cast<int>(seq.contaminant[i])) + "\n";
  return out;
}

std::string species_counts_csv(const SpeciesCounts& counts) {
  std::string out = "label,count\n";
  for (std::size_t i = 0; i < counts.labels.size(); ++i)
    out += quote_if_needed(counts.labels[i]) + "," + std::to_string(counts.counts[i]) + "\n";
  return out;
}

std::vector<int> expand_counts(const SpeciesCounts& counts) {
  std::vector<int> out;
  for (std::size_t i = 0; i < counts.counts.size(); ++i) out.insert(out.end(), counts.counts[i], static_cast<int>(i));
  return out;
}

NumericTable parse_numeric_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.size() < 2) throw DataError("numeric data needs a header and at least one row");
  NumericTable t;
  std::optional<std::size_t> truth_col;
  for (std::size_t c = 0; c < rows[0].size(); ++c) {
    const auto name = trim(rows[0][c]);
    if (name == "truth")
      truth_col = c;
    else
      t.columns.push_back(name);
  }
  if (t.columns.empty()) throw DataError("numeric data has no value columns");
  const auto n = static_cast<Eigen::Index>(rows.size() - 1);
  t.data.resize(n, static_cast<Eigen::Index>(t.columns.size()));
  if (truth_col) t.truth.emplace();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != rows[0].size()) throw DataError("row " + std::to_string(r) + " has inconsistent dimension");
    Eigen::Index j = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (truth_col && c == *truth_col) {
        const long f = parse_int(row[c], r);
        if (f != 0 && f != 1) throw DataError("truth flags must be 0 or 1");
        t.truth->push_back(static_cast<std::uint8_t>(f));
      } else {
        t.data(static_cast<Eigen::Index>(r - 1), j++) = parse_double(row[c], r);
      }
    }
  }
  return t;
}

NumericTable read_numeric_csv(const std::string& path) { return parse_numeric_csv(read_file(path)); }

std::string numeric_csv(const Matrix& data, const std::vector<std::uint8_t>* truth) {
  std::string out;
  for (Eigen::Index j = 0; j < data.cols(); ++j) out += (j ? ",x" : "x") + std::to_string(j + 1);
  if (truth) out += ",truth";
  out += "\n";
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) out += (j ? "," : "") + fmt(data(i, j));
    if (truth) out += "," + std::to_string(static_cast<int>((*truth)[static_cast<std::size_t>(i)]));
    out += "\n";
  }
  return out;
}

std::string partitions_csv(const std::vector<std::vector<int>>& rows) {
  std::string out;
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  for (std::size_t j = 0; j < n; ++j) out += (j ? ",obs" : "obs") + std::to_string(j + 1);
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + std::to_string(row[j]);
    out += "\n";
  }
  return out;
}

std::vector<std::vector<int>> parse_partitions_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  std::vector<std::vector<int>> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw DataError("partition row " + std::to_string(r) + " has wrong length");
    std::vector<int> row;
    for (const auto& c : rows[r]) row.push_back(static_cast<int>(parse_int(c, r)));
    out.push_back(std::move(row));
  }
  return out;
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw DataError("config line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second) throw DataError("config key '" + key + "' given twice");
  }
  return out;
}

nlohmann::json config_to_json(const SpeciesFitConfig& c) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"iterations", c.iterations},
          {"burn_in", c.burn_in},
          {"thin", c.thin},
          {"prior_theta", {{"shape", c.prior_theta.shape}, {"rate", c.prior_theta.rate}}},
          {"prior_sigma", {{"a", c.prior_sigma.a}, {"b", c.prior_sigma.b}}},
          {"prior_beta", {{"a", c.prior_beta.a}, {"b", c.prior_beta.b}}},
          {"proposal_sd_psi", c.proposal_sd_psi},
          {"proposal_sd_lambda", c.proposal_sd_lambda},
          {"adapt", c.adapt},
          {"pure_py", c.pure_py},
          {"seed", c.seed},
          {"fix_sigma", opt(c.fix_sigma)},
          {"fix_theta", opt(c.fix_theta)},
          {"fix_beta", opt(c.fix_beta)}};
}

SpeciesFitConfig config_from_json(const nlohmann::json& j) {
  try {
    SpeciesFitConfig c;
    c.iterations = j.at("iterations").get<int>();
    c.burn_in = j.at("burn_in").get<int>();
    c.thin = j.at("thin").get<int>();
    c.prior_theta = {j.at("prior_theta").at("shape").get<double>(), j.at("prior_theta").at("rate").get<double>()};
    c.prior_sigma = {j.at("prior_sigma").at("a").get<double>(), j.at("prior_sigma").at("b").get<double>()};
    c.prior_beta = {j.at("prior_beta").at("a").get<double>(), j.at("prior_beta").at("b").get<double>()};
    c.proposal_sd_psi = j.at("proposal_sd_psi").get<double>();
    c.proposal_sd_lambda = j.at("proposal_sd_lambda").get<double>();
    c.adapt = j.at("adapt").get<bool>();
    c.pure_py = j.at("pure_py").get<bool>();
    c.seed = j.at("seed").get<std::uint64_t>();
    auto opt = [&](const char* key) -> std::optional<double> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return j.at(key).get<double>();
    };
    c.fix_sigma = opt("fix_sigma");
    c.fix_theta = opt("fix_theta");
    c.fix_beta = opt("fix_beta");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt config in trace: ") + e.what());
  }
}

nlohmann::json trace_to_json(const SpeciesTrace& t) {
  return {{"sigma", t.sigma},         {"theta", t.theta},         {"beta", t.beta}, {"mbar", t.mbar},
          {"acc_sigma", t.acc_sigma}, {"acc_theta", t.acc_theta}, {"seed", t.seed}, {"config", config_to_json(t.config)}};
}

SpeciesTrace trace_from_json(const nlohmann::json& j) {
  try {
    SpeciesTrace t;
    t.sigma = json_array<double>(j, "sigma");
    t.theta = json_array<double>(j, "theta");
    t.beta = json_array<double>(j, "beta");
    t.mbar = json_array<int>(j, "mbar");
    t.acc_sigma = j.at("acc_sigma").get<double>();
    t.acc_theta = j.at("acc_theta").get<double>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.config = config_from_json(j.at("config"));
    const auto n = t.sigma.size();
    if (t.theta.size() != n || t.beta.size() != n || t.mbar.size() != n)
      throw DataError("trace arrays have different lengths");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corrupt trace: ") + e.what());
  }
}

nlohmann::json trace_to_json(const MixtureTrace& t) {
  return {{"sigma", t.sigma},         {"theta", t.theta},         {"beta", t.beta}, {"k", t.k},
          {"acc_sigma", t.acc_sigma}, {"acc_theta", t.acc_theta}, {"seed", t.seed}, {"config", config_to_json(t.config)}};
}

}  // namespace cgp
