// interp/errors.h

// Copyright 2026 The interp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef INTERP_ERRORS_H_
#define INTERP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace interp {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define INTERP_DEFINE_ERROR(Name)        \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

INTERP_DEFINE_ERROR(ShapeError);
INTERP_DEFINE_ERROR(IndexError);
INTERP_DEFINE_ERROR(ContractError);
INTERP_DEFINE_ERROR(TapeConsumedError);
INTERP_DEFINE_ERROR(HookConflictError);
INTERP_DEFINE_ERROR(EmptyInputError);
INTERP_DEFINE_ERROR(SchemaError);
INTERP_DEFINE_ERROR(ChecksumError);
INTERP_DEFINE_ERROR(VersionError);
INTERP_DEFINE_ERROR(TrainingDivergedError);
INTERP_DEFINE_ERROR(UnsupportedModelError);
INTERP_DEFINE_ERROR(UnknownModelError);
INTERP_DEFINE_ERROR(ConfigError);
INTERP_DEFINE_ERROR(PayloadTooLargeError);
INTERP_DEFINE_ERROR(InputTooLongError);

#undef INTERP_DEFINE_ERROR

}  // namespace interp

#endif  // INTERP_ERRORS_H_
