/*
 * errors.hpp
 *
 * Copyright 2026 the sdmm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdmm {

/// Inversion or division by the zero element.
struct DivisionByZero : std::domain_error {
    explicit DivisionByZero(const std::string& what) : std::domain_error(what) {}
};

/// No primitive N-th root of unity exists in the field (N does not divide q-1).
struct NoRootOfUnity : std::domain_error {
    explicit NoRootOfUnity(const std::string& what) : std::domain_error(what) {}
};

/// Evaluation points violate a constructor precondition (duplicates, zeros, ...).
struct InvalidPoints : std::invalid_argument {
    explicit InvalidPoints(const std::string& what) : std::invalid_argument(what) {}
};

/// Scheme parameters violate a constructor precondition.
struct InvalidParams : std::invalid_argument {
    explicit InvalidParams(const std::string& what) : std::invalid_argument(what) {}
};

/// Matrix or block dimensions are incompatible.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// An exhaustive computation would exceed its enumeration budget.
struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// No decoding coefficients exist for the requested generator matrices.
struct NotDecodable : std::runtime_error {
    explicit NotDecodable(const std::string& what) : std::runtime_error(what) {}
};

/// The chosen worker subset does not contain an information set.
struct InsufficientResponses : std::runtime_error {
    explicit InsufficientResponses(const std::string& what) : std::runtime_error(what) {}
};

/// Too few surviving positions to compute syndromes or interpolate.
struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

/// A randomized construction exhausted its search budget.
struct ConstructionFailed : std::runtime_error {
    explicit ConstructionFailed(const std::string& what) : std::runtime_error(what) {}
};

/// A square matrix has no inverse.
struct SingularMatrix : std::runtime_error {
    explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

/// Mixing elements of distinct fields is a programming error, not a data error.
struct FieldMismatch : std::logic_error {
    explicit FieldMismatch(const std::string& what) : std::logic_error(what) {}
};

/// The error-location pipeline could not clean the responses.
/// Carries enough context to tell which stage gave up.
struct PipelineFailure : std::runtime_error {
    std::size_t screened = 0;      // entry-vectors with nonzero syndrome
    std::size_t locator_rank = 0;  // rank of the last joint locator system tried

    PipelineFailure(const std::string& what, std::size_t screened_count, std::size_t rank)
        : std::runtime_error(what), screened(screened_count), locator_rank(rank) {}
};

}  // namespace sdmm
