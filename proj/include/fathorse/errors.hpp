/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The fathorse Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace fathorse {

/// Argument outside the domain where an operation is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Evaluation on the discontinuity line x = 0 (the set Gamma on the section).
class SingularityError : public DomainError {
public:
  explicit SingularityError(const std::string& what)
      : DomainError(what + ": undefined at the singular line x = 0") {}
};

/// Parameters that do not define a valid construction.
class InvalidParameter : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The gap sequence removes at least as much as the ambient interval.
class FeasibilityError : public InvalidParameter {
public:
  using InvalidParameter::InvalidParameter;
};

/// Requested level or grid would exceed the hard memory/time caps.
class SizeGuardError : public std::length_error {
public:
  using std::length_error::length_error;
};

}  // namespace fathorse
