// SPDX-License-Identifier: Apache-2.0
//
// wpcn: optimal online transmission policies for energy-constrained
// wireless-powered communication networks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace wpcn {

/// Argument outside the mathematical domain of a function (e.g. negative power).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Quadrature, root finding or iteration failed to reach its tolerance.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parameters describe a physically or mathematically invalid model.
class ModelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// File system failure, always carrying the offending path.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Internal invariant broken (solver bracket, infeasible successor, ...).
class LogicError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace wpcn
