/*
 * io.hpp
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

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sdmm/matrix.hpp"

namespace sdmm {

/// Matrix wire format: line 1 is "t s q" (rows, cols, field order), then t
/// lines of s base-10 canonical values separated by single spaces.  Worker
/// responses are serialized the same way.
inline void write_matrix(std::ostream& os, const Matrix& m) {
    os << m.rows() << ' ' << m.cols() << ' ' << m.field().order() << '\n';
    os << m;
}

inline void write_matrix_file(const std::string& path, const Matrix& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_matrix(os, m);
}

inline Matrix read_matrix(std::istream& is) {
    std::size_t t = 0, s = 0;
    std::uint64_t q = 0;
    if (!(is >> t >> s >> q)) throw InvalidParams("matrix header must be 't s q'");
    if (t == 0 || s == 0) throw ShapeError("matrix dimensions must be positive");
    const Field f = q == 4 ? Field::gf4() : Field::prime(q);
    Matrix m(f, t, s);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            std::uint64_t v = 0;
            if (!(is >> v)) throw InvalidParams("matrix body ended early");
            if (v >= q) throw InvalidParams("entry " + std::to_string(v) + " is not canonical mod " +
                                            std::to_string(q));
            m.at(i, j) = v;
        }
    }
    return m;
}

inline Matrix read_matrix_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return read_matrix(is);
}

}  // namespace sdmm
