#include "risopt/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace risopt {
namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: cannot parse '" + value + "' as a number for key " + key);
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: cannot parse '" + value + "' as an integer for key " + key);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ValidationError("config: cannot parse '" + value + "' as a bool for key " + key);
}

std::pair<int, int> parse_grid_pair(const std::string& item) {
  const auto x = item.find('x');
  if (x == std::string::npos) {
    throw ValidationError("config: n_grid entries must look like '8x8', got '" + item + "'");
  }
  return {static_cast<int>(parse_int("n_grid", trim(item.substr(0, x)))),
          static_cast<int>(parse_int("n_grid", trim(item.substr(x + 1))))};
}

}  // namespace

void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  SystemConfig& sys = cfg.system;
  SweepSpec& sweep = cfg.sweep;

  const auto real = [&] { return parse_real(key, value); };
  const auto integer = [&] { return static_cast<int>(parse_int(key, value)); };

  if (key == "M_y") sys.m_y = integer();
  else if (key == "M_z") sys.m_z = integer();
  else if (key == "N_y") sys.n_y = integer();
  else if (key == "N_z") sys.n_z = integer();
  else if (key == "K") sys.k = integer();
  else if (key == "d_b") sys.d_b = real();
  else if (key == "d_r") sys.d_r = real();
  else if (key == "P_ref_db") sys.p_ref_db = real();
  else if (key == "gamma_d") sys.gamma_d = real();
  else if (key == "gamma_ru") sys.gamma_ru = real();
  else if (key == "noise_dbm") sys.noise_dbm = real();
  else if (key == "d_br") sys.d_br = real();
  else if (key == "cell_radius") sys.cell_radius = real();
  else if (key == "exclusion_radius") sys.exclusion_radius = real();
  else if (key == "kappa_d") sys.kappa_d = real();
  else if (key == "kappa_ru") sys.kappa_ru = real();
  else if (key == "kappa_br") sys.kappa_br = real();
  else if (key == "C_d") sys.c_d = integer();
  else if (key == "S_d") sys.s_d = integer();
  else if (key == "C_ru") sys.c_ru = integer();
  else if (key == "S_ru") sys.s_ru = integer();
  else if (key == "C_br") sys.c_br = integer();
  else if (key == "S_br") sys.s_br = integer();
  else if (key == "mu_c_d") sys.spread_d.mu_az_central = real();
  else if (key == "sigma2_c_d") sys.spread_d.var_az_central = real();
  else if (key == "sigma2_s_d") sys.spread_d.var_az_subray = real();
  else if (key == "sigmahat2_c_d") sys.spread_d.var_el_central = real();
  else if (key == "sigmahat2_s_d") sys.spread_d.var_el_subray = real();
  else if (key == "mu_c_ru") sys.spread_ru.mu_az_central = real();
  else if (key == "sigma2_c_ru") sys.spread_ru.var_az_central = real();
  else if (key == "sigma2_s_ru") sys.spread_ru.var_az_subray = real();
  else if (key == "sigmahat2_c_ru") sys.spread_ru.var_el_central = real();
  else if (key == "sigmahat2_s_ru") sys.spread_ru.var_el_subray = real();
  else if (key == "mu_c_br") sys.spread_br.mu_az_central = real();
  else if (key == "sigma2_c_br") sys.spread_br.var_az_central = real();
  else if (key == "sigma2_s_br") sys.spread_br.var_az_subray = real();
  else if (key == "sigmahat2_c_br") sys.spread_br.var_el_central = real();
  else if (key == "sigmahat2_s_br") sys.spread_br.var_el_subray = real();
  else if (key == "b") {
    sys.bits = integer();
    sweep.bits = sys.bits;
  } else if (key == "L") {
    sys.repeats = integer();
    sweep.repeats = sys.repeats;
  } else if (key == "seed") {
    const long long v = parse_int(key, value);
    sys.seed = static_cast<std::uint64_t>(v);
    sweep.seed = sys.seed;
  } else if (key == "muiq_tie_accept") {
    sys.muiq_tie_accept = parse_bool(key, value);
  } else if (key == "n_grid") {
    sweep.n_grid.clear();
    for (const std::string& item : split_list(value)) sweep.n_grid.push_back(parse_grid_pair(item));
  } else if (key == "k_list") {
    sweep.k_list.clear();
    for (const std::string& item : split_list(value)) {
      sweep.k_list.push_back(static_cast<int>(parse_int(key, item)));
    }
  } else if (key == "kappa_br_list") {
    sweep.kappa_br_list.clear();
    for (const std::string& item : split_list(value)) {
      sweep.kappa_br_list.push_back(parse_real(key, item));
    }
  } else if (key == "methods") {
    sweep.methods.clear();
    for (const std::string& item : split_list(value)) {
      const auto m = parse_method(item);
      if (!m) throw ValidationError("config: unknown method '" + item + "'");
      sweep.methods.push_back(*m);
    }
  } else if (key == "trials") {
    sweep.trials = integer();
  } else if (key == "restarts") {
    sweep.baseline_restarts = integer();
  } else if (key == "threads") {
    sweep.threads = integer();
  } else {
    throw ValidationError("config: unknown key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config: line " + std::to_string(line_no) +
                            " is not of the form 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError("config: line " + std::to_string(line_no) +
                            " has an empty key or value");
    }
    try {
      apply_config_key(cfg, key, value);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(e.what()) + " (line " + std::to_string(line_no) + ")");
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace risopt
