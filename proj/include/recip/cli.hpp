#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace recip::cli {

enum Exit { Ok = 0, InvariantFailure = 1, InvalidConfig = 2, ResourceLimitHit = 3 };

struct RunConfig {
  std::string command;
  std::string preset = "modular";
  int p = 0, q = 0, r = 0;
  std::string I, J; // I defaults per preset, J to I
  double Tmax = 0, step = 1;
  std::vector<double> Tlist;    // equidist
  int n = 0;                    // tree-count
  long precisionBits = 256;
  int workers = 1;
  std::string format;           // csv, jsonl or svg; checked against the command
  std::string output;           // empty: stdout
  bool primitivity = false;
  std::string conductances;
  std::string partition = "cusp:2+reflect-halves";
  bool labels = false;
  int colorSeed = 0;
  int width = 800;
  double strokeWidth = 1.0;
  double maxT = 20;             // larger thresholds are refused as a resource limit
  int maxTreeN = 32;
  bool injectFault = false;     // selftest: tamper with one class list

  void validate() const; // throws Error(InvalidConfiguration)
  // the settings that determine the output; workers and output path are left out
  std::vector<std::pair<std::string, std::string>> provenance() const;
  std::string provenanceLine() const;
};

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace recip::cli
