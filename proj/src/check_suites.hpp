#pragma once

#include <string>
#include <vector>

#include "rbbr/scenario.hpp"

namespace rbbr::checks {

enum class Status { Pass, Fail, Skip, Note };

struct Line {
  std::string suite;
  std::string property;
  Status status = Status::Pass;
  double worst = 0.0;
  double limit = 0.0;
  std::string detail;  // failing probe (JSON) or a short remark
};

const char* to_string(Status s);

std::vector<Line> regularizer_suite(const Scenario& sc);
std::vector<Line> dynamics_suite(const Scenario& sc);
std::vector<Line> potential_suite(const Scenario& sc);
std::vector<Line> nsd_suite(const Scenario& sc);

}  // namespace rbbr::checks
