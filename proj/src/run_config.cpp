#include "bv/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bv {

namespace {

using nlohmann::ordered_json;

ordered_json grid_to_json(const GridSpec& grid) {
  ordered_json j;
  j["x"] = grid.x_values;
  ordered_json q = ordered_json::array();
  for (const QRule& r : grid.q_rules)
    if (r.kind == QRule::Kind::Literal)
      q.push_back(r.literal);
    else
      q.push_back(r.token());
  j["Q"] = q;
  ordered_json q1 = ordered_json::array();
  for (const Q1Rule& r : grid.q1_rules)
    if (r.kind == Q1Rule::Kind::Literal)
      q1.push_back(r.literal);
    else
      q1.push_back(r.token());
  j["Q1"] = q1;
  if (grid.remark_B)
    j["remark_B"] = *grid.remark_B;
  else
    j["remark_B"] = nullptr;
  return j;
}

GridSpec grid_from_json(const ordered_json& j) {
  GridSpec grid;
  grid.x_values.clear();
  for (const auto& v : j.at("x")) grid.x_values.push_back(v.get<double>());
  grid.q_rules.clear();
  for (const auto& v : j.at("Q")) {
    if (v.is_number())
      grid.q_rules.push_back(QRule::number(v.get<double>()));
    else
      grid.q_rules.push_back(QRule::parse(v.get<std::string>()));
  }
  grid.q1_rules.clear();
  for (const auto& v : j.at("Q1")) {
    if (v.is_number())
      grid.q1_rules.push_back(Q1Rule::number(v.get<double>()));
    else
      grid.q1_rules.push_back(Q1Rule::parse(v.get<std::string>()));
  }
  if (j.contains("remark_B") && !j.at("remark_B").is_null())
    grid.remark_B = j.at("remark_B").get<double>();
  else
    grid.remark_B.reset();
  return grid;
}

std::string format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Both: return "both";
  }
  return "both";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "both") return OutputFormat::Both;
  throw std::invalid_argument("unknown format: " + s);
}

}  // namespace

std::uint64_t RunConfig::table_limit() const {
  const double needed = single_point ? single_point->x : grid.max_x();
  if (x_max != 0) {
    if (static_cast<double>(x_max) < needed)
      throw std::invalid_argument("config: x_max smaller than the largest grid x");
    return x_max;
  }
  return static_cast<std::uint64_t>(std::ceil(needed));
}

std::string RunConfig::resolved_out_dir() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv("BVCHECK_OUT")) return env;
  return "reports";
}

SieveOptions RunConfig::sieve_options() const {
  SieveOptions options;
  options.memory_budget_bytes = mem_budget_bytes;
  options.threads = jobs;
  return options;
}

std::string RunConfig::to_json() const {
  ordered_json j;
  j["x_max"] = x_max;
  j["grid"] = grid_to_json(grid);
  if (single_point) {
    ordered_json p;
    p["x"] = single_point->x;
    p["Q"] = single_point->Q;
    p["Q1"] = single_point->Q1;
    j["point"] = p;
  } else {
    j["point"] = nullptr;
  }
  if (c3_override)
    j["c3"] = *c3_override;
  else
    j["c3"] = nullptr;
  j["e0_prime_limit"] = e0_prime_limit;
  j["out_dir"] = out_dir;
  j["format"] = format_name(format);
  j["jobs"] = jobs;
  j["mem_budget_bytes"] = mem_budget_bytes;
  j["timings"] = timings;
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig config;
  if (j.contains("x_max")) config.x_max = j.at("x_max").get<std::uint64_t>();
  if (j.contains("grid")) config.grid = grid_from_json(j.at("grid"));
  if (j.contains("point") && !j.at("point").is_null()) {
    const auto& p = j.at("point");
    config.single_point =
        GridPoint{p.at("x").get<double>(), p.at("Q").get<double>(), p.at("Q1").get<double>(),
                  false, 0.0};
  }
  if (j.contains("c3") && !j.at("c3").is_null()) config.c3_override = j.at("c3").get<double>();
  if (j.contains("e0_prime_limit"))
    config.e0_prime_limit = j.at("e0_prime_limit").get<std::uint64_t>();
  if (j.contains("out_dir")) config.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("format")) config.format = parse_format(j.at("format").get<std::string>());
  if (j.contains("jobs")) config.jobs = j.at("jobs").get<int>();
  if (j.contains("mem_budget_bytes"))
    config.mem_budget_bytes = j.at("mem_budget_bytes").get<std::uint64_t>();
  if (j.contains("timings")) config.timings = j.at("timings").get<bool>();
  return config;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace bv
