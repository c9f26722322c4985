// Copyright 2026 The qtmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qtm {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
    virtual const char *kind() const noexcept { return "Error"; }
};

#define QTM_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string &what) : Error(#Name ": " + what) {} \
        const char *kind() const noexcept override { return #Name; }        \
    };

class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string &what)
        : Error("SyntaxError at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line(line),
          column(column) {}
    const char *kind() const noexcept override { return "SyntaxError"; }
    int line;
    int column;
};

QTM_DEFINE_ERROR(TotalityError)
QTM_DEFINE_ERROR(RoleError)
QTM_DEFINE_ERROR(ModeError)
QTM_DEFINE_ERROR(AlphabetError)
QTM_DEFINE_ERROR(TimingViolation)
QTM_DEFINE_ERROR(MaxStepsExceeded)
QTM_DEFINE_ERROR(SupportLimitError)
QTM_DEFINE_ERROR(RolePrereqError)
QTM_DEFINE_ERROR(SyncError)
QTM_DEFINE_ERROR(BudgetError)
QTM_DEFINE_ERROR(CompositionError)
QTM_DEFINE_ERROR(NotUnidirectionalError)
QTM_DEFINE_ERROR(RowDefectError)
QTM_DEFINE_ERROR(CompletionArithmeticError)
QTM_DEFINE_ERROR(QueryDesyncError)
QTM_DEFINE_ERROR(BudgetExceeded)
QTM_DEFINE_ERROR(OracleTimingError)
QTM_DEFINE_ERROR(OutputFormError)
QTM_DEFINE_ERROR(AncillaWidthError)
QTM_DEFINE_ERROR(NotPermutationError)
QTM_DEFINE_ERROR(WidthError)
QTM_DEFINE_ERROR(EncodingError)
QTM_DEFINE_ERROR(CertaintyViolation)
QTM_DEFINE_ERROR(BiasTooLow)
QTM_DEFINE_ERROR(DimensionError)
QTM_DEFINE_ERROR(UsageError)
QTM_DEFINE_ERROR(UnknownSuite)

#undef QTM_DEFINE_ERROR

}  // namespace qtm
