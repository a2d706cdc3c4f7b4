#pragma once

#include <string>
#include <vector>

#include "spinlab/sequence.hpp"

namespace spinlab {

/// Acquisition request at the end of a pulse program.
struct Acquisition {
  std::vector<int> spins;
  double duration_s = 0.0;
  double dt_s = 0.0;
};

/// Parsed pulse program. Statements, one per line ('#' starts a comment):
///
///   system <path>                  optional header, resolved by the CLI
///   frame resonant                 zero offsets
///   frame uncouple <spin>          uncoupling offsets for a label spin
///   pulse <spins> <axis><angle>    e.g. "pulse B,C y90", "pulse A x-180";
///                                  '&' joins simultaneous groups:
///                                  "pulse A y90 & B x180"
///   delay <expr>                   seconds; expr may use + - * / ( ) and
///                                  couplings J[i,j], e.g. 1/(2*J[B,C])
///   acquire <spins> <dur> <dt>     record an FID
struct PulseProgram {
  std::string system_ref;
  PulseSequence sequence;
  std::vector<Acquisition> acquisitions;
};

/// Parses a program against a spin system. Diagnostics carry
/// origin:line:column.
PulseProgram parse_program(const std::string& text, const SpinSystem& sys,
                           const std::string& origin = "program");

/// Canonical text form; parse(print(p)) prints back to the same text.
std::string print_program(const PulseProgram& program, const SpinSystem& sys);

/// Evaluates a delay expression (exposed for tests).
double eval_delay_expr(const std::string& expr, const SpinSystem& sys);

}  // namespace spinlab
