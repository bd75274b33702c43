#pragma once

#include <string>
#include <vector>

#include "hsp/pencil.hpp"

namespace hsp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;   // measured values, for the report
  double seconds = 0;
};

/// The canonical third-order fixture pencil:
///   Q3 = z^3 - (5+2i) z^2 + (4+2i) z, Q2 = z^2 + i z + 2,
///   Q1 = (z - 2 + i)/5, Q0 = 1.
Pencil fixture_pencil();

/// Runs the full acceptance battery (criteria 1..12) and returns one result
/// per criterion. Never throws for a failing criterion; unexpected exceptions
/// are captured as failures with the message in `detail`.
std::vector<CriterionResult> run_acceptance(const Pencil& P);

}  // namespace hsp
