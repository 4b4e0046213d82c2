#include "adaptci/history_log.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace adaptci {

using nlohmann::json;

namespace {
constexpr const char* kFormat = "adaptci-history";
constexpr int kVersion = 1;
}  // namespace

LogParseError::LogParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void write_log(const BanditHistory& history, std::ostream& out) {
  json header = {{"format", kFormat},
                 {"version", kVersion},
                 {"num_arms", history.num_arms()},
                 {"horizon", history.horizon()}};
  out << header.dump() << '\n';
  for (int t = 1; t <= history.horizon(); ++t) {
    const auto e = history.propensities(t);
    json line = {{"t", t},
                 {"e", std::vector<double>(e.begin(), e.end())},
                 {"w", history.arm(t)},
                 {"y", history.reward(t)}};
    out << line.dump() << '\n';
  }
}

std::string write_log(const BanditHistory& history) {
  std::ostringstream os;
  write_log(history, os);
  return os.str();
}

BanditHistory read_log(std::istream& in) {
  std::string text;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, text)) {
      ++line_no;
      if (text.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto parse = [&]() -> json {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw LogParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
  };

  if (!next_line()) throw LogParseError(0, "empty log: missing header");
  const json header = parse();
  int num_arms = 0;
  int horizon = 0;
  try {
    if (header.at("format").get<std::string>() != kFormat) {
      throw LogParseError(line_no, "unknown log format");
    }
    if (header.at("version").get<int>() != kVersion) {
      throw LogParseError(line_no, "unsupported log version");
    }
    num_arms = header.at("num_arms").get<int>();
    horizon = header.at("horizon").get<int>();
  } catch (const json::exception& e) {
    throw LogParseError(line_no, std::string("bad header: ") + e.what());
  }
  if (num_arms < 1) throw LogParseError(line_no, "num_arms must be >= 1");
  if (horizon < 0) throw LogParseError(line_no, "horizon must be >= 0");

  BanditHistory history(num_arms);
  history.reserve(horizon);
  std::vector<double> e;
  while (next_line()) {
    const json row = parse();
    int t = 0;
    int w = 0;
    double y = 0.0;
    try {
      t = row.at("t").get<int>();
      e = row.at("e").get<std::vector<double>>();
      w = row.at("w").get<int>();
      y = row.at("y").get<double>();
    } catch (const json::exception& ex) {
      throw LogParseError(line_no, std::string("malformed step: ") + ex.what());
    }
    if (t != history.horizon() + 1) {
      throw LogParseError(line_no, "expected t = " +
                                       std::to_string(history.horizon() + 1) +
                                       ", got " + std::to_string(t));
    }
    if (static_cast<int>(e.size()) != num_arms) {
      throw LogParseError(line_no, "propensity vector has wrong length");
    }
    if (w < 0 || w >= num_arms) {
      throw LogParseError(line_no, "arm index " + std::to_string(w) + " out of range");
    }
    double sum = 0.0;
    for (double p : e) {
      if (!std::isfinite(p) || p < 0.0) throw LogParseError(line_no, "invalid propensity");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "propensities are not normalized (sum " << sum << ")";
      throw LogParseError(line_no, msg.str());
    }
    try {
      history.append(e, w, y);
    } catch (const std::invalid_argument& ex) {
      throw LogParseError(line_no, ex.what());
    }
  }
  if (history.horizon() != horizon) {
    throw LogParseError(line_no, "header horizon " + std::to_string(horizon) +
                                     " but log has " +
                                     std::to_string(history.horizon()) + " steps");
  }
  return history;
}

BanditHistory read_log_string(const std::string& text) {
  std::istringstream in(text);
  return read_log(in);
}

BanditHistory read_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open log file '" + path + "'");
  return read_log(in);
}

void write_log_file(const BanditHistory& history, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write log file '" + path + "'");
  write_log(history, out);
}

}  // namespace adaptci
