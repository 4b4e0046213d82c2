#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "adaptci/history.hpp"

namespace adaptci {

/// A malformed or invalid line in a JSONL history log.
class LogParseError : public std::runtime_error {
 public:
  LogParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// JSON-lines history log. Line 1 is a header
///   {"format":"adaptci-history","version":1,"num_arms":K,"horizon":T}
/// followed by one object per step
///   {"t":1,"e":[e_1(1),...,e_1(K)],"w":0,"y":0.25}
/// with 0-based arm indices and shortest round-trip decimal doubles.
void write_log(const BanditHistory& history, std::ostream& out);
std::string write_log(const BanditHistory& history);

BanditHistory read_log(std::istream& in);
BanditHistory read_log_string(const std::string& text);
BanditHistory read_log_file(const std::string& path);
void write_log_file(const BanditHistory& history, const std::string& path);

}  // namespace adaptci
