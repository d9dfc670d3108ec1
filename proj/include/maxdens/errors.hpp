#pragma once

#include <stdexcept>
#include <string>

namespace maxdens {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (q outside (0,1), n = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Sample length is not a multiple of the requested block size.
class NonDivisibleBlock : public Error {
 public:
  using Error::Error;
};

/// Too few block maxima for a kernel estimator over blocks.
class InsufficientBlocks : public Error {
 public:
  using Error::Error;
};

/// GEV maximum likelihood failed from every start (or the input cannot be fitted).
class FitDiverged : public Error {
 public:
  using Error::Error;
};

/// Fisher information of the GEV is singular (shape <= -1/2).
class FisherSingular : public Error {
 public:
  using Error::Error;
};

/// A bandwidth selector could not produce any bandwidth at all.
class BandwidthError : public Error {
 public:
  using Error::Error;
};

/// Every replicate of a Monte-Carlo cell failed.
class AllReplicatesFailed : public Error {
 public:
  using Error::Error;
};

/// Parse failure for a family string, config file or CSV input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace maxdens
