#pragma once

#include <stdexcept>
#include <string>

namespace funtf {

// Every failure mode the library reports. Callers that care about the exact
// condition switch on code(); the what() string carries the details.
enum class Err {
  // numerics
  NotSelfAdjoint,
  NotUnitary,
  OrientationMismatch,
  NotOrthonormal,
  // eigensteps
  InvalidTable,
  DimensionMismatch,
  EmptyInterior,
  // frames
  NotFUNTF,
  NoComplement,
  TooLarge,
  NotAPermutation,
  FrameIsOD,
  NotOD,
  // lifting
  VanishingDenominator,
  NegativeRadicand,
  NoncancellingPowers,
  DegenerateSpectra,
  NotInterior,
  EigenstepsMismatch,
  OrientationObstruction,
  // motions
  NotTightOnSpan,
  RotationLeaksSubspace,
  NotTwoONBs,
  MissingChaperone,
  SameSubframe,
  NotTight,
  NotSimplex,
  DegenerateAlignment,
  BadSubframe,
  // cli / orchestration
  FieldUnsupported,
  EndpointOD,
  InteriorEmpty,
  FileFormat,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void raise(Err code, const std::string& msg) { throw Error(code, msg); }

const char* err_name(Err code);

}  // namespace funtf
