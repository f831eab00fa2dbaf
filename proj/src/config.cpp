#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <string>

#include "spca/error.hpp"
#include "spca/harness.hpp"

namespace spca {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

Error config_error(int line, const std::string& msg) {
  return Error(ErrorKind::invalid_config, "config line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_number(const std::string& text, int line, const std::string& key) {
  T value{};
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw config_error(line, "cannot parse '" + text + "' for key '" + key + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item =
        trim(std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

bool parse_bool(const std::string& text, int line, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw config_error(line, "expected a boolean for key '" + key + "'");
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::istream& in) {
  ExperimentSpec spec;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw config_error(line, "expected key=value");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (value.empty()) throw config_error(line, "empty value for key '" + key + "'");
    if (!seen.insert(key).second) throw config_error(line, "duplicate key '" + key + "'");

    auto index_list = [&] {
      std::vector<Index> out;
      for (const std::string& item : split_list(value)) out.push_back(parse_number<Index>(item, line, key));
      if (out.empty()) throw config_error(line, "empty list for key '" + key + "'");
      return out;
    };

    if (key == "n") {
      spec.n = parse_number<Index>(value, line, key);
    } else if (key == "p") {
      spec.p = parse_number<Index>(value, line, key);
    } else if (key == "r_values") {
      spec.r_values = index_list();
    } else if (key == "s_values") {
      spec.s_values = index_list();
    } else if (key == "lambda_top") {
      spec.lambda_top = parse_number<double>(value, line, key);
    } else if (key == "lambda_bottom") {
      spec.lambda_bottom = parse_number<double>(value, line, key);
    } else if (key == "q") {
      spec.q = parse_number<double>(value, line, key);
    } else if (key == "sigma") {
      spec.sigma = parse_number<double>(value, line, key);
    } else if (key == "estimators") {
      spec.estimators.clear();
      for (const std::string& item : split_list(value)) spec.estimators.push_back(parse_estimator(item));
    } else if (key == "reps") {
      spec.reps = parse_number<Index>(value, line, key);
    } else if (key == "master_seed") {
      spec.master_seed = parse_number<Seed>(value, line, key);
    } else if (key == "row_variance_profile") {
      if (value == "i4") {
        spec.row_variance_profile = RowProfile::i4;
      } else if (value == "flat") {
        spec.row_variance_profile = RowProfile::flat;
      } else {
        throw config_error(line, "unknown row_variance_profile '" + value + "'");
      }
    } else if (key == "alpha") {
      spec.alpha = parse_number<double>(value, line, key);
    } else if (key == "beta") {
      spec.beta = parse_number<double>(value, line, key);
    } else if (key == "delta") {
      spec.delta = parse_number<double>(value, line, key);
    } else if (key == "estimate_rank") {
      spec.estimate_rank = parse_bool(value, line, key);
    } else if (key == "max_supports") {
      spec.max_supports = parse_number<double>(value, line, key);
    } else if (key == "threads") {
      spec.threads = parse_number<unsigned>(value, line, key);
    } else {
      throw config_error(line, "unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file " + path);
  return parse_experiment_spec(in);
}

}  // namespace spca
