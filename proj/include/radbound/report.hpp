#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "radbound/rng.hpp"

namespace radbound {

// One machine-readable result. JSON is the reproducible record (bitwise
// stable under re-runs); the CSV row appends wall-clock runtime for
// plotting and is not expected to reproduce bitwise.
struct ReportRecord {
  std::string quantity;
  double mean = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorId;
  bool pass = true;
  double slack = 0.0;
  nlohmann::json extra;  // optional breakdown / certificate payload

  nlohmann::json to_json() const {
    nlohmann::json j{{"quantity", quantity}, {"mean", mean},     {"stderr", stderr_},
                     {"samples", samples},   {"seed", seed},     {"generator", generator},
                     {"pass", pass},         {"slack", slack}};
    if (!extra.is_null()) j["extra"] = extra;
    return j;
  }

  std::string csv_row(double runtime_ms) const {
    std::ostringstream os;
    os.precision(17);
    os << quantity << ',' << mean << ',' << stderr_ << ',' << (pass ? "pass" : "fail") << ','
       << seed << ',' << samples << ',' << runtime_ms;
    return os.str();
  }
};

inline constexpr const char* kCsvHeader = "quantity,value,stderr,pass,seed,samples,runtime_ms";

struct RatioEnvelope {
  std::string pair_name;
  std::string corpus;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  long count = 0;
  long skipped = 0;  // zero-denominator instances

  void add(double numerator, double denominator) {
    if (denominator == 0.0) {
      ++skipped;
      return;
    }
    const double r = numerator / denominator;
    min_ratio = std::min(min_ratio, r);
    max_ratio = std::max(max_ratio, r);
    ++count;
  }

  nlohmann::json to_json() const {
    return {{"pair", pair_name},   {"corpus", corpus},   {"min", min_ratio},
            {"max", max_ratio},    {"count", count},     {"skipped", skipped}};
  }

  static RatioEnvelope from_json(const nlohmann::json& j) {
    RatioEnvelope e;
    e.pair_name = j.at("pair").get<std::string>();
    e.corpus = j.at("corpus").get<std::string>();
    e.min_ratio = j.at("min").get<double>();
    e.max_ratio = j.at("max").get<double>();
    e.count = j.at("count").get<long>();
    e.skipped = j.at("skipped").get<long>();
    return e;
  }
};

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace radbound
